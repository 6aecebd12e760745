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
#include <numbers>
#include <random>

#include "qfb/qsim.hpp"
#include "qfb/simd.hpp"

using namespace qfb::qsim;
using std::numbers::pi;

namespace {

CircuitSpec random_circuit(int n, int ops, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(-pi, pi);
    CircuitSpec c;
    c.n = n;
    for (int i = 0; i < ops; ++i) {
        const int k = static_cast<int>(rng() % (n > 1 ? 5 : 3));
        const int t = static_cast<int>(rng() % n);
        if (k < 3) {
            c.ops.push_back({static_cast<GateKind>(k), t, -1, static_cast<int>(c.params.size())});
            c.params.push_back(ang(rng));
        } else {
            const int ctl = (t + 1 + static_cast<int>(rng() % (n - 1))) % n;
            c.ops.push_back({k == 3 ? GateKind::CZ : GateKind::CNOT, t, ctl});
        }
    }
    return c;
}

double ez(const CircuitSpec& c, int q) { return expectation_z(run_circuit(c, StateVector(c.n)), q); }

} // namespace

TEST_CASE("gate identities") {
    CircuitSpec empty;
    empty.n = 2;
    const auto s = run_circuit(empty, StateVector::basis(2, 2));
    CHECK(s[2] == cplx(1, 0));

    CircuitSpec ry;
    ry.n = 1;
    ry.ops.push_back({GateKind::RY, 0, -1, -1, pi});
    const auto one = run_circuit(ry, StateVector(1));
    CHECK(std::abs(one[0]) < 1e-15);
    CHECK(std::abs(one[1]) == doctest::Approx(1.0));

    CircuitSpec cz;
    cz.n = 2;
    cz.ops.push_back({GateKind::CZ, 0, 1});
    CHECK(run_circuit(cz, StateVector::basis(2, 3))[3] == cplx(-1, 0));
    CHECK(run_circuit(cz, StateVector::basis(2, 1))[1] == cplx(1, 0));

    CircuitSpec cx;
    cx.n = 2;
    cx.ops.push_back({GateKind::CNOT, 1, 0});
    CHECK(run_circuit(cx, StateVector::basis(2, 1))[3] == cplx(1, 0));
}

TEST_CASE("encodings") {
    const auto z = angle_encode(std::vector<double>{0.0, 0.0});
    CHECK(z[0] == cplx(1, 0));
    const auto x1 = angle_encode(std::vector<double>{1.0});
    CHECK(std::abs(x1[1]) == doctest::Approx(1.0));
    CHECK(expectation_z(angle_encode(std::vector<double>{0.5}), 0) == doctest::Approx(0.0).epsilon(1e-15));

    const auto a = amplitude_encode(std::vector<double>{1, 0, 0, 0});
    CHECK(a.qubits() == 2);
    CHECK(a[0] == cplx(1, 0));
    const auto u = amplitude_encode(std::vector<double>{1, 1, 1, 1});
    for (std::size_t i = 0; i < 4; ++i) CHECK(u[i].real() == doctest::Approx(0.5));
    const auto p = amplitude_encode(std::vector<double>{3, 4});
    CHECK(p[0].real() == doctest::Approx(0.6));
    CHECK(p[1].real() == doctest::Approx(0.8));
    CHECK(amplitude_qubits(5) == 3);
    CHECK(amplitude_encode(std::vector<double>{1, 2, 3}).dim() == 4);
}

TEST_CASE("expectations and overlaps") {
    CHECK(expectation_z(StateVector(1), 0) == 1.0);
    CHECK(expectation_z(StateVector::basis(1, 1), 0) == -1.0);
    CircuitSpec c;
    c.n = 1;
    c.ops.push_back({GateKind::RY, 0, -1, 0});
    c.params = {1.0};
    CHECK(ez(c, 0) == doctest::Approx(std::cos(1.0)));
    const auto psi = run_circuit(c, StateVector(1));
    CHECK(std::abs(overlap(psi, psi)) == doctest::Approx(1.0));
    CHECK(std::abs(overlap(StateVector(1), StateVector::basis(1, 1))) == 0.0);
    CHECK(overlap(StateVector(1), psi).real() == doctest::Approx(std::cos(0.5)));

    const auto b = StateVector::basis(3, 0b101);
    const std::vector<int> q02{0, 2}, q01{0, 1};
    CHECK(expectation_z_product(b, q02) == 1.0);
    CHECK(expectation_z_product(b, q01) == -1.0);
}

TEST_CASE("parameter shift on an analytic circuit") {
    CircuitSpec c;
    c.n = 1;
    c.ops.push_back({GateKind::RY, 0, -1, 0});
    c.params = {0.0};
    const std::vector<int> q0{0};
    CHECK(parameter_shift_grad(c, StateVector(1), q0, 0) == doctest::Approx(0.0));
    c.params = {pi / 2};
    CHECK(parameter_shift_grad(c, StateVector(1), q0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("parameter shift matches finite differences on random circuits") {
    std::mt19937_64 rng(4);
    const std::vector<int> q{1};
    for (int trial = 0; trial < 40; ++trial) {
        auto c = random_circuit(3, 15, rng);
        if (c.params.empty()) continue;
        for (int p = 0; p < static_cast<int>(c.params.size()); ++p) {
            const double g = parameter_shift_grad(c, StateVector(3), q, p);
            auto plus = c, minus = c;
            plus.params[p] += 1e-5;
            minus.params[p] -= 1e-5;
            const double fd = (ez(plus, 1) - ez(minus, 1)) / 2e-5;
            CHECK(std::fabs(g - fd) <= 1e-6);
        }
    }
}

TEST_CASE("shared parameters sum their shift terms") {
    CircuitSpec c;
    c.n = 1;
    c.ops = {{GateKind::RY, 0, -1, 0}, {GateKind::RY, 0, -1, 0}};
    c.params = {0.3};
    const std::vector<int> q0{0};
    CHECK(parameter_shift_grad(c, StateVector(1), q0, 0) == doctest::Approx(-2.0 * std::sin(0.6)));
}

TEST_CASE("norm preservation and inverse identity") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + trial % 6;
        const auto c = random_circuit(n, 40, rng);
        std::vector<cplx> amps(std::size_t{1} << n);
        double norm = 0;
        for (auto& a : amps) {
            a = {static_cast<double>(rng() % 100) - 50.0, static_cast<double>(rng() % 100) - 50.0};
            norm += std::norm(a);
        }
        for (auto& a : amps) a /= std::sqrt(norm);
        const auto in = StateVector::from_amplitudes(amps);
        const auto out = run_circuit(c, in);
        CHECK(std::fabs(out.norm() - 1.0) < 1e-9);
        const auto back = run_circuit(inverse(c), out);
        for (std::size_t i = 0; i < in.dim(); ++i) CHECK(std::abs(back[i] - in[i]) < 1e-9);
    }
}

TEST_CASE("scalar and avx2 simulation agree") {
    if (!qfb::simd::isa_available(qfb::simd::Isa::avx2)) return;
    std::mt19937_64 rng(12);
    const auto c = random_circuit(6, 60, rng);
    qfb::simd::set_isa(qfb::simd::Isa::scalar);
    const auto a = run_circuit(c, StateVector(6));
    qfb::simd::set_isa(qfb::simd::Isa::avx2);
    const auto b = run_circuit(c, StateVector(6));
    for (std::size_t i = 0; i < a.dim(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-13);
}

TEST_CASE("validation") {
    CircuitSpec c;
    c.n = 2;
    c.ops.push_back({GateKind::RY, 3, -1, -1, 0.1});
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CircuitSpec d;
    d.n = 2;
    d.ops.push_back({GateKind::CZ, 0, 1, 0});
    d.params = {0.2};
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    CHECK_THROWS(StateVector::from_amplitudes({cplx(1, 0), cplx(1, 0)}));
}
