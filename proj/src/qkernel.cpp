// Copyright 2026 The qfbench Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfb/qkernel.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qfb/error.hpp"

namespace qfb::qkernel {

void FeatureMapSpec::validate(std::size_t d) const {
    if (d == 0) throw std::invalid_argument("feature map: empty feature vector");
    if (layers < 0) throw std::invalid_argument("feature map: layers must be >= 0");
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits)
        throw std::invalid_argument("feature map: qubit count out of range");
    if (variant == MapVariant::angle) {
        if (static_cast<std::size_t>(n_qubits) != d)
            throw std::invalid_argument("angle map: n_qubits must equal feature dimension");
        if (beta != 1) throw std::invalid_argument("angle map: beta must be 1");
    } else {
        if ((std::size_t{1} << n_qubits) < d)
            throw std::invalid_argument("amplitude map: 2^n_qubits must be >= feature dimension");
        if (beta < 1 || beta > 3) throw std::invalid_argument("amplitude map: beta must be 1, 2 or 3");
    }
}

FeatureMap::FeatureMap(const FeatureMapSpec& spec, std::size_t d) : spec_(spec), d_(d) {
    spec.validate(d);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int l = 0; l < spec.layers; ++l) {
        qsim::CircuitSpec block;
        block.n = spec.n_qubits;
        for (int q = 0; q < spec.n_qubits; ++q) {
            block.ops.push_back({qsim::GateKind::RY, q, -1, -1, angle(rng)});
            block.ops.push_back({qsim::GateKind::RZ, q, -1, -1, angle(rng)});
        }
        qsim::append_cz_ring(block);
        blocks_.push_back(std::move(block));
    }
}

qsim::StateVector FeatureMap::state(std::span<const double> x) const {
    if (x.size() != d_) throw std::invalid_argument("feature map: dimension mismatch");
    if (spec_.variant == MapVariant::angle) {
        if (blocks_.empty()) return qsim::angle_encode(x);
        qsim::StateVector s(spec_.n_qubits);
        for (const auto& block : blocks_) {
            for (int q = 0; q < spec_.n_qubits; ++q)
                qsim::apply_gate(s, {qsim::GateKind::RY, q}, std::numbers::pi * x[q]);
            qsim::run_inplace(block, s);
        }
        return s;
    }
    std::vector<double> padded(std::size_t{1} << spec_.n_qubits, 0.0);
    std::copy(x.begin(), x.end(), padded.begin());
    qsim::StateVector s = qsim::amplitude_encode(padded);
    for (const auto& block : blocks_) qsim::run_inplace(block, s);
    return s;
}

qsim::StateVector feature_map_state(const FeatureMapSpec& spec, std::span<const double> x) {
    return FeatureMap(spec, x.size()).state(x);
}

namespace {

double fidelity_power(const qsim::StateVector& a, const qsim::StateVector& b, int beta) {
    const double f = std::norm(qsim::overlap(a, b));
    return beta == 1 ? f : std::pow(f, beta);
}

std::vector<qsim::StateVector> states_for(const FeatureMap& map, const Matrix& X) {
    std::vector<qsim::StateVector> out;
    out.reserve(X.rows());
    for (Eigen::Index r = 0; r < X.rows(); ++r)
        out.push_back(map.state(std::span<const double>(X.row(r).data(), X.cols())));
    return out;
}

} // namespace

double kernel_entry(const FeatureMapSpec& spec, std::span<const double> xi,
                    std::span<const double> xj) {
    if (xi.size() != xj.size()) throw std::invalid_argument("kernel_entry: dimension mismatch");
    const FeatureMap map(spec, xi.size());
    return fidelity_power(map.state(xi), map.state(xj), spec.beta);
}

KernelMatrix kernel_matrix(const FeatureMapSpec& spec, const Matrix& X) {
    if (X.rows() == 0) throw std::invalid_argument("kernel_matrix: empty sample set");
    const FeatureMap map(spec, X.cols());
    const auto states = states_for(map, X);
    const Eigen::Index n = X.rows();
    KernelMatrix K;
    K.entries.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K.row_ids.push_back(static_cast<std::size_t>(i));
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = fidelity_power(states[i], states[j], spec.beta);
            K.entries(i, j) = v;
            K.entries(j, i) = v;
        }
    }
    return K;
}

Matrix kernel_cross(const FeatureMapSpec& spec, const Matrix& X_train, const Matrix& X_test) {
    if (X_train.rows() == 0 || X_test.rows() == 0)
        throw std::invalid_argument("kernel_cross: empty sample set");
    if (X_train.cols() != X_test.cols())
        throw std::invalid_argument("kernel_cross: dimension mismatch");
    const FeatureMap map(spec, X_train.cols());
    const auto train = states_for(map, X_train);
    const auto test = states_for(map, X_test);
    Matrix K(X_test.rows(), X_train.rows());
    for (Eigen::Index i = 0; i < K.rows(); ++i)
        for (Eigen::Index j = 0; j < K.cols(); ++j)
            K(i, j) = fidelity_power(test[i], train[j], spec.beta);
    return K;
}

Matrix elementwise_power(const Matrix& fidelity, int beta) {
    if (beta < 1) throw std::invalid_argument("elementwise_power: beta must be >= 1");
    return fidelity.array().pow(static_cast<double>(beta)).matrix();
}

double min_eigenvalue(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed");
    return solver.eigenvalues().minCoeff();
}

void write_kernel_csv(const std::filesystem::path& path, const Matrix& K) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(17);
    for (Eigen::Index i = 0; i < K.rows(); ++i) {
        for (Eigen::Index j = 0; j < K.cols(); ++j) out << (j ? "," : "") << K(i, j);
        out << '\n';
    }
}

Matrix read_kernel_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read kernel file " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError("non-numeric kernel entry in " + path.string());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw DataError("ragged kernel matrix in " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("empty kernel file " + path.string());
    Matrix K(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) K(i, j) = rows[i][j];
    return K;
}

} // namespace qfb::qkernel
