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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "qfb/qkernel.hpp"

using namespace qfb;
using namespace qfb::qkernel;
using std::numbers::pi;

namespace {

FeatureMapSpec angle_spec(int n, int layers, std::uint64_t seed = 3) {
    FeatureMapSpec s;
    s.variant = MapVariant::angle;
    s.n_qubits = n;
    s.layers = layers;
    s.seed = seed;
    return s;
}

Eigen::Matrix2d ry(double t) {
    Eigen::Matrix2d m;
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}

Matrix random_rows(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix X(n, d);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = u(rng);
    return X;
}

} // namespace

TEST_CASE("bare angle map against a dense 4x4 oracle") {
    const std::vector<double> x{0.3, 0.8}, y{0.6, 0.1};
    // Qubit 0 is the low bit: U[(a1 a0), (b1 b0)] = RY1[a1, b1] RY0[a0, b0].
    auto embed = [](const std::vector<double>& v) {
        const Eigen::Matrix2d r0 = ry(pi * v[0]), r1 = ry(pi * v[1]);
        Eigen::Matrix4d U;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) U(a, b) = r1(a >> 1, b >> 1) * r0(a & 1, b & 1);
        return Eigen::Vector4d(U * Eigen::Vector4d::UnitX());
    };
    const double oracle = std::pow(embed(x).dot(embed(y)), 2);
    CHECK(kernel_entry(angle_spec(2, 0), x, y) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("fidelity kernel basics") {
    const std::vector<double> x{0.2, 0.9, 0.4};
    for (int layers : {0, 1, 2}) {
        CHECK(kernel_entry(angle_spec(3, layers), x, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // RY(pi * 1)|0> = |1>, orthogonal to |0>.
    CHECK(kernel_entry(angle_spec(1, 0), std::vector<double>{0.0}, std::vector<double>{1.0}) ==
          doctest::Approx(0.0).epsilon(1e-15));

    FeatureMapSpec amp;
    amp.variant = MapVariant::amplitude;
    amp.n_qubits = 2;
    amp.layers = 0;
    const auto s = feature_map_state(amp, std::vector<double>{1, 0, 0, 0});
    CHECK(s[0] == qsim::cplx(1, 0));
    amp.beta = 3;
    CHECK(kernel_entry(amp, std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 2, 3, 4}) ==
          doctest::Approx(1.0));
}

TEST_CASE("feature maps are deterministic in the seed") {
    const std::vector<double> x{0.1, 0.5, 0.7, 0.2};
    const auto a = feature_map_state(angle_spec(4, 2, 11), x);
    const auto b = feature_map_state(angle_spec(4, 2, 11), x);
    const auto c = feature_map_state(angle_spec(4, 2, 12), x);
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a[i] == b[i]);
    double diff = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) diff += std::abs(a[i] - c[i]);
    CHECK(diff > 1e-6);
}

TEST_CASE("gram matrix properties") {
    Matrix one(1, 2);
    one << 0.4, 0.6;
    CHECK(kernel_matrix(angle_spec(2, 1), one).entries(0, 0) == doctest::Approx(1.0));

    auto X = random_rows(50, 4, 1);
    X.row(7) = X.row(3);
    const auto K = kernel_matrix(angle_spec(4, 2), X).entries;
    CHECK(K(3, 7) == doctest::Approx(1.0));
    for (int i = 0; i < 50; ++i) {
        CHECK(K(i, i) == doctest::Approx(1.0).epsilon(1e-12));
        for (int j = 0; j < 50; ++j) CHECK(K(i, j) == K(j, i));
    }
    CHECK(min_eigenvalue(K) >= -1e-8);

    const auto Xt = random_rows(5, 4, 2);
    const auto C = kernel_cross(angle_spec(4, 2), X, Xt);
    CHECK(C.rows() == 5);
    CHECK(C.cols() == 50);
    CHECK(C(2, 9) == doctest::Approx(kernel_entry(angle_spec(4, 2), std::vector<double>(Xt.row(2).begin(), Xt.row(2).end()),
                                                  std::vector<double>(X.row(9).begin(), X.row(9).end()))));
}

TEST_CASE("amplitude kernel exponent") {
    FeatureMapSpec amp;
    amp.variant = MapVariant::amplitude;
    amp.n_qubits = 3;
    amp.layers = 1;
    amp.seed = 4;
    const auto X = random_rows(12, 8, 5);
    const auto K1 = kernel_matrix(amp, X).entries;
    amp.beta = 2;
    const auto K2 = kernel_matrix(amp, X).entries;
    const auto P = elementwise_power(K1, 2);
    CHECK((K2 - P).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("kernel csv round-trip") {
    const auto K = kernel_matrix(angle_spec(2, 1), random_rows(6, 2, 9)).entries;
    const auto p = std::filesystem::temp_directory_path() / "qfb_kernel.csv";
    write_kernel_csv(p, K);
    CHECK((read_kernel_csv(p) - K).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("infeasible maps are rejected") {
    CHECK_THROWS_AS(angle_spec(2, 1).validate(3), std::invalid_argument);
    FeatureMapSpec amp;
    amp.variant = MapVariant::amplitude;
    amp.n_qubits = 2;
    CHECK_THROWS_AS(amp.validate(5), std::invalid_argument);
}
