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

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "circuits.hpp"
#include "qfb/neural.hpp"
#include "qfb/qsim.hpp"

namespace qfb::neural {

namespace detail {

void append_ansatz(qsim::CircuitSpec& spec, int layers, int first_param) {
    int p = first_param;
    for (int l = 0; l < layers; ++l) p = qsim::append_rotation_layer(spec, p, true);
}

Jacobian expectation_jacobian(const qsim::CircuitSpec& spec, const qsim::StateVector& input,
                              int n_params) {
    Jacobian jac;
    jac.n_params = n_params;
    jac.E = qsim::expectation_z_all(qsim::run_circuit(spec, input));
    jac.J.assign(static_cast<std::size_t>(spec.n) * n_params, 0.0);
    for (int j = 0; j < n_params; ++j) {
        const auto col = qsim::parameter_shift_jacobian(spec, input, j);
        for (int k = 0; k < spec.n; ++k) jac.J[static_cast<std::size_t>(k) * n_params + j] = col[k];
    }
    return jac;
}

qsim::CircuitSpec encoded_circuit(int q, int layers, std::span<const double> u,
                                  std::span<const double> angles) {
    qsim::CircuitSpec spec;
    spec.n = q;
    spec.params.reserve(q + angles.size());
    for (int j = 0; j < q; ++j) {
        spec.ops.push_back({qsim::GateKind::RY, j, -1, j});
        spec.params.push_back(std::numbers::pi * u[j]);
    }
    spec.params.insert(spec.params.end(), angles.begin(), angles.end());
    append_ansatz(spec, layers, q);
    return spec;
}

BlockGrad vqc_block_grad(int q, int layers, std::span<const double> params,
                         std::span<const double> v) {
    const auto a = params.subspan(0, q), b = params.subspan(q, q);
    const auto angles = params.subspan(2 * q);
    std::vector<double> u(q);
    for (int j = 0; j < q; ++j) u[j] = a[j] * v[j] + b[j];
    const auto spec = encoded_circuit(q, layers, u, angles);
    const int n_th = static_cast<int>(angles.size());
    const auto jac = expectation_jacobian(spec, qsim::StateVector(q), q + n_th);
    BlockGrad g;
    g.E = jac.E;
    g.dE_du.resize(static_cast<std::size_t>(q) * q);
    g.dE_dth.resize(static_cast<std::size_t>(q) * n_th);
    for (int k = 0; k < q; ++k) {
        for (int j = 0; j < q; ++j) g.dE_du[k * q + j] = std::numbers::pi * jac.at(k, j);
        for (int j = 0; j < n_th; ++j) g.dE_dth[static_cast<std::size_t>(k) * n_th + j] = jac.at(k, q + j);
    }
    return g;
}

} // namespace detail

std::size_t vqc_block_params(int q, int layers) {
    return static_cast<std::size_t>(2 * q + 3 * q * layers);
}

std::vector<double> vqc_block(int q, int layers, std::span<const double> params,
                              std::span<const double> input) {
    if (params.size() != vqc_block_params(q, layers) || static_cast<int>(input.size()) != q)
        throw std::invalid_argument("vqc_block: dimension mismatch");
    std::vector<double> u(q);
    for (int j = 0; j < q; ++j) u[j] = params[j] * input[j] + params[q + j];
    const auto spec = detail::encoded_circuit(q, layers, u, params.subspan(2 * q));
    return qsim::expectation_z_all(qsim::run_circuit(spec, qsim::StateVector(q)));
}

// ---------------------------------------------------------------------------

std::string to_string(QnnArch a) {
    switch (a) {
    case QnnArch::SQ: return "SQ";
    case QnnArch::MQ: return "MQ";
    case QnnArch::HybridSQ: return "HybridSQ";
    case QnnArch::HybridMQ: return "HybridMQ";
    }
    return {};
}

std::string to_string(Encoding e) { return e == Encoding::angle ? "angle" : "amplitude"; }

QnnArch parse_qnn_arch(const std::string& s) {
    for (QnnArch a : {QnnArch::SQ, QnnArch::MQ, QnnArch::HybridSQ, QnnArch::HybridMQ})
        if (to_string(a) == s) return a;
    throw std::invalid_argument("unknown QNN architecture: " + s);
}

Encoding parse_encoding(const std::string& s) {
    if (s == "angle") return Encoding::angle;
    if (s == "amplitude") return Encoding::amplitude;
    throw std::invalid_argument("unknown encoding: " + s);
}

int QnnSpec::encoded_dim() const {
    return encoding == Encoding::angle ? n_qubits : (1 << n_qubits);
}

bool QnnSpec::feasible() const {
    if (layers < 1 || input_dim < 1 || n_qubits < 1 || n_qubits > qsim::kMaxQubits) return false;
    if (encoding == Encoding::angle) return n_qubits == input_dim;
    return hybrid() || (1 << n_qubits) >= input_dim;
}

void QnnSpec::validate() const {
    if (!feasible()) throw std::invalid_argument("QNN spec is infeasible: " + key());
}

std::size_t QnnSpec::param_count() const {
    std::size_t n = static_cast<std::size_t>(3 * n_qubits * layers);
    if (hybrid()) n += static_cast<std::size_t>(encoded_dim()) * input_dim;
    if (multi_readout()) n += static_cast<std::size_t>(n_qubits + 1);
    return n;
}

std::string QnnSpec::key() const {
    return to_string(arch) + "/" + to_string(encoding) + "/L" + std::to_string(layers) + "/q" +
           std::to_string(n_qubits);
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Offsets {
    std::size_t hybrid = 0, angles = 0, readout = 0;
};

Offsets offsets(const QnnSpec& s) {
    Offsets o;
    o.angles = s.hybrid() ? static_cast<std::size_t>(s.encoded_dim()) * s.input_dim : 0;
    o.readout = o.angles + static_cast<std::size_t>(3 * s.n_qubits * s.layers);
    return o;
}

std::vector<double> encoder_input(const QnnSpec& s, std::span<const double> w,
                                  std::span<const double> x) {
    if (!s.hybrid()) return {x.begin(), x.end()};
    const int D = s.encoded_dim();
    std::vector<double> z(D, 0.0);
    for (int k = 0; k < D; ++k)
        for (int i = 0; i < s.input_dim; ++i) z[k] += w[static_cast<std::size_t>(k) * s.input_dim + i] * x[i];
    return z;
}

/// Padded, normalised amplitudes; the zero vector loads |0...0>.
qsim::StateVector load_amplitudes(int q, std::span<const double> z, double& norm) {
    std::vector<qsim::cplx> amps(std::size_t{1} << q, 0.0);
    double n2 = 0.0;
    for (double v : z) n2 += v * v;
    norm = std::sqrt(n2);
    if (!(norm > 0.0)) {
        amps[0] = 1.0;
    } else {
        for (std::size_t i = 0; i < z.size(); ++i) amps[i] = z[i] / norm;
    }
    return qsim::StateVector::from_amplitudes(std::move(amps));
}

qsim::CircuitSpec ansatz_circuit(const QnnSpec& s, std::span<const double> angles) {
    qsim::CircuitSpec spec;
    spec.n = s.n_qubits;
    spec.params.assign(angles.begin(), angles.end());
    detail::append_ansatz(spec, s.layers, 0);
    return spec;
}

double readout(const QnnSpec& s, std::span<const double> w, const std::vector<double>& E) {
    if (!s.multi_readout()) return 0.5 * (E[0] + 1.0);
    const auto r = w.subspan(offsets(s).readout);
    double z = r[s.n_qubits];
    for (int k = 0; k < s.n_qubits; ++k) z += r[k] * E[k];
    return sigmoid(z);
}

void check(const QnnSpec& s, std::size_t n_w, std::size_t d) {
    s.validate();
    if (n_w != s.param_count()) throw std::invalid_argument("QNN: parameter vector length mismatch");
    if (static_cast<int>(d) != s.input_dim) throw std::invalid_argument("QNN: input dimension mismatch");
}

std::span<const double> row_span(const Sample& x) {
    if (x.rows() != 1) throw std::invalid_argument("feed-forward model expects a single-row sample");
    return {x.data(), static_cast<std::size_t>(x.cols())};
}

} // namespace

double qnn_forward(const QnnSpec& s, std::span<const double> w, std::span<const double> x) {
    check(s, w.size(), x.size());
    const auto z = encoder_input(s, w, x);
    const auto angles = w.subspan(offsets(s).angles, static_cast<std::size_t>(3 * s.n_qubits * s.layers));
    const auto circuit = ansatz_circuit(s, angles);
    qsim::StateVector in(s.n_qubits);
    if (s.encoding == Encoding::angle) {
        in = qsim::angle_encode(z);
    } else {
        double norm = 0.0;
        in = load_amplitudes(s.n_qubits, z, norm);
    }
    return readout(s, w, qsim::expectation_z_all(qsim::run_circuit(circuit, in)));
}

Qnn::Qnn(QnnSpec spec) : spec_(spec) { spec_.validate(); }

std::vector<double> Qnn::init_params(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<double> w(param_count(), 0.0);
    const auto off = offsets(spec_);
    if (spec_.hybrid()) {
        const double lim = std::sqrt(6.0 / (spec_.input_dim + spec_.encoded_dim()));
        std::uniform_real_distribution<double> u(-lim, lim);
        for (std::size_t k = 0; k < off.angles; ++k) w[k] = u(rng);
    }
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    for (std::size_t k = off.angles; k < off.readout; ++k) w[k] = ang(rng);
    if (spec_.multi_readout()) {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (std::size_t k = off.readout; k < w.size(); ++k) w[k] = u(rng);
    }
    return w;
}

double Qnn::forward(std::span<const double> w, const Sample& x) const {
    return qnn_forward(spec_, w, row_span(x));
}

double Qnn::forward_grad(std::span<const double> w, const Sample& x, std::span<double> grad) const {
    const auto xs = row_span(x);
    const QnnSpec& s = spec_;
    check(s, w.size(), xs.size());
    if (grad.size() != w.size()) throw std::invalid_argument("QNN: gradient buffer size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const auto off = offsets(s);
    const int q = s.n_qubits;
    const int n_th = 3 * q * s.layers;
    const auto angles = w.subspan(off.angles, n_th);
    const auto z = encoder_input(s, w, xs);

    // Expectations, their Jacobian over the ansatz angles, and d p / d z.
    std::vector<double> E, dz(z.size(), 0.0), dE_dth;
    std::vector<double> gE(q, 0.0);
    double p = 0.0;
    auto readout_grad = [&](const std::vector<double>& Ev) {
        p = readout(s, w, Ev);
        if (!s.multi_readout()) {
            gE[0] = 0.5;
            return;
        }
        const auto r = w.subspan(off.readout);
        const double dp = p * (1.0 - p);
        for (int k = 0; k < q; ++k) {
            gE[k] = dp * r[k];
            grad[off.readout + k] = dp * Ev[k];
        }
        grad[off.readout + q] = dp;
    };

    if (s.encoding == Encoding::angle) {
        if (s.hybrid()) {
            const auto spec = detail::encoded_circuit(q, s.layers, z, angles);
            const auto jac = detail::expectation_jacobian(spec, qsim::StateVector(q), q + n_th);
            readout_grad(jac.E);
            for (int k = 0; k < q; ++k) {
                for (int j = 0; j < q; ++j) dz[j] += gE[k] * std::numbers::pi * jac.at(k, j);
                for (int j = 0; j < n_th; ++j) grad[off.angles + j] += gE[k] * jac.at(k, q + j);
            }
        } else {
            const auto spec = ansatz_circuit(s, angles);
            const auto jac = detail::expectation_jacobian(spec, qsim::angle_encode(z), n_th);
            readout_grad(jac.E);
            for (int k = 0; k < q; ++k)
                for (int j = 0; j < n_th; ++j) grad[off.angles + j] += gE[k] * jac.at(k, j);
        }
    } else {
        double norm = 0.0;
        const auto in = load_amplitudes(q, z, norm);
        const auto spec = ansatz_circuit(s, angles);
        const auto jac = detail::expectation_jacobian(spec, in, n_th);
        readout_grad(jac.E);
        for (int k = 0; k < q; ++k)
            for (int j = 0; j < n_th; ++j) grad[off.angles + j] += gE[k] * jac.at(k, j);
        if (s.hybrid() && norm > 0.0) {
            // Adjoint pass: d<a|U^T O U|a>/da = 2 Re(U^dag O U a), O = sum_k gE_k Z_k.
            auto phi = qsim::run_circuit(spec, in);
            auto amps = phi.amplitudes();
            for (std::size_t i = 0; i < amps.size(); ++i) {
                double o = 0.0;
                for (int k = 0; k < q; ++k) o += ((i >> k) & 1U) ? -gE[k] : gE[k];
                amps[i] *= o;
            }
            qsim::run_inverse_inplace(spec, phi);
            std::vector<double> ga(z.size());
            double dot = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                ga[i] = 2.0 * phi[i].real();
                dot += ga[i] * z[i] / norm;
            }
            for (std::size_t i = 0; i < z.size(); ++i) dz[i] = (ga[i] - dot * z[i] / norm) / norm;
        }
    }

    if (s.hybrid()) {
        for (std::size_t k = 0; k < z.size(); ++k)
            for (int i = 0; i < s.input_dim; ++i)
                grad[k * static_cast<std::size_t>(s.input_dim) + i] = dz[k] * xs[i];
    }
    return p;
}

} // namespace qfb::neural
