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
#include <random>

#include "qfb/error.hpp"
#include "qfb/svr.hpp"

using namespace qfb;
using namespace qfb::svr;

namespace {

SvrSpec linear_spec(double C, double eps) {
    SvrSpec s;
    s.kernel = KernelKind::linear;
    s.C = C;
    s.epsilon = eps;
    return s;
}

} // namespace

TEST_CASE("classical kernels") {
    SvrSpec rbf;
    rbf.kernel = KernelKind::rbf;
    const std::vector<double> x{1.0, 2.0}, y{1.0, 1.0 / 2.0};
    CHECK(classical_kernel(rbf, 0.7, x, x) == 1.0);
    SvrSpec poly;
    poly.kernel = KernelKind::poly;
    poly.degree = 2;
    poly.coef0 = 0.0;
    CHECK(classical_kernel(poly, 1.0, x, y) == doctest::Approx(4.0));
    CHECK(classical_kernel(linear_spec(1, 0.1), 1.0, std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);

    Matrix X(3, 2);
    X << 1, 2, 3, 4, 5, 6;
    SvrSpec s;
    s.gamma_mode = GammaMode::automatic;
    CHECK(resolve_gamma(s, X) == 0.5);
}

TEST_CASE("recovers a line") {
    Matrix X(20, 1);
    std::vector<double> y(20);
    for (int i = 0; i < 20; ++i) {
        X(i, 0) = i / 19.0;
        y[i] = 2 * X(i, 0) + 1;
    }
    const auto m = svr_fit(linear_spec(100, 0.01), X, y);
    CHECK(m.converged);
    Matrix T(3, 1);
    T << 0.05, 0.5, 0.93;
    const auto p = svr_predict(m, T);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(p[i] - (2 * T(i, 0) + 1)) <= 0.011);
    const auto in = svr_predict(m, X);
    for (int i = 0; i < 20; ++i) CHECK(std::fabs(in[i] - y[i]) <= 0.011);
}

TEST_CASE("constant targets give a flat model") {
    Matrix X(10, 2);
    for (int i = 0; i < 10; ++i) X.row(i) << i, -i;
    const std::vector<double> y(10, 3.0);
    SvrSpec s;
    s.kernel = KernelKind::rbf;
    s.epsilon = 0.1;
    const auto m = svr_fit(s, X, y);
    CHECK(m.n_support() == 0);
    CHECK(m.bias == doctest::Approx(3.0).epsilon(0.1));
    for (double v : svr_predict(m, X)) CHECK(v == m.bias);
}

TEST_CASE("conflicting duplicate labels") {
    Matrix X(4, 1);
    X << 0.0, 0.0, 1.0, 2.0;
    const std::vector<double> y{0.0, 1.0, 0.5, 0.5};
    const auto m = svr_fit(linear_spec(10, 0.1), X, y);
    const auto p = svr_predict(m, X);
    CHECK(p[0] == p[1]);
    CHECK((std::fabs(p[0] - y[0]) > 0.1 || std::fabs(p[1] - y[1]) > 0.1));
}

TEST_CASE("precomputed path equals explicit path") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> z;
    for (auto kind : {KernelKind::linear, KernelKind::poly, KernelKind::rbf}) {
        Matrix A(30, 4), B(10, 4);
        for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = z(rng);
        for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = z(rng);
        std::vector<double> y(30);
        for (int i = 0; i < 30; ++i) y[i] = A(i, 0) - 0.5 * A(i, 2) * A(i, 3) + 0.1 * z(rng);
        SvrSpec s;
        s.kernel = kind;
        s.C = 2.0;
        s.epsilon = 0.05;
        s.degree = 3;
        s.coef0 = 1.0;
        const double g = resolve_gamma(s, A);
        const auto p1 = svr_predict(svr_fit(s, A, y), B);
        SvrSpec pre = s;
        pre.kernel = KernelKind::precomputed;
        const auto m2 = svr_fit_precomputed(pre, gram(s, g, A, A), y);
        const auto p2 = svr_predict_precomputed(m2, gram(s, g, B, A));
        for (int i = 0; i < 10; ++i) CHECK(std::fabs(p1[i] - p2[i]) <= 1e-8);

        const auto m3 = svr_fit_callable(pre, 30, [&](std::size_t i, std::size_t j) {
            return classical_kernel(s, g, std::vector<double>(A.row(i).begin(), A.row(i).end()),
                                    std::vector<double>(A.row(j).begin(), A.row(j).end()));
        }, y);
        const auto p3 = svr_predict_precomputed(m3, gram(s, g, B, A));
        for (int i = 0; i < 10; ++i) CHECK(std::fabs(p1[i] - p3[i]) <= 1e-8);
    }
}

TEST_CASE("indefinite precomputed kernels are clipped") {
    Matrix K(3, 3);
    K << 1, 0.9, -0.9, 0.9, 1, 0.9, -0.9, 0.9, 1;
    SvrSpec s;
    s.kernel = KernelKind::precomputed;
    const auto m = svr_fit_precomputed(s, K, std::vector<double>{0.0, 1.0, 0.0});
    CHECK(m.kernel_clipped);
}

TEST_CASE("random search") {
    const SearchSpace space;
    const auto a = sample_trials(Family::rbf, space, 30, 7);
    const auto b = sample_trials(Family::rbf, space, 30, 7);
    REQUIRE(a.size() == 30);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].svr.C == b[i].svr.C);
        CHECK(a[i].svr.epsilon == b[i].svr.epsilon);
        CHECK(a[i].svr.C >= 1e-2);
        CHECK(a[i].svr.C <= 1e2);
        CHECK(a[i].svr.epsilon >= 1e-3);
        CHECK(a[i].svr.epsilon <= 1.0);
    }
    const auto q = sample_trials(Family::quantum_angle, space, 20, 1);
    for (const auto& t : q) {
        REQUIRE(t.qmap);
        CHECK(t.p + t.q == t.qmap->n_qubits);
    }
    const auto amp = sample_trials(Family::quantum_amplitude, space, 20, 1);
    for (const auto& t : amp) CHECK(t.p + t.q == space.amplitude_dim);

    const auto one = hyper_search(Family::linear, space, 1, 3, [](const Trial& t) { return t.svr.C; });
    CHECK(one.trials.size() == 1);
    CHECK(one.best.svr.C == one.trials[0].svr.C);

    const auto best = hyper_search(Family::rbf, space, 25, 3, [](const Trial& t) {
        if (t.svr.C > 50) throw NumericalError("boom");
        return std::fabs(std::log(t.svr.C));
    });
    for (const auto& t : best.trials)
        if (!t.failed) CHECK(best.best.objective <= t.objective);
    CHECK_THROWS_AS(hyper_search(Family::rbf, space, 3, 3, [](const Trial&) -> double { throw NumericalError("x"); }),
                    NumericalError);
}
