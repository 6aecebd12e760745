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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qfb/error.hpp"
#include "qfb/garch.hpp"

using namespace qfb;
using namespace qfb::garch;

TEST_CASE("forecast recursion") {
    CHECK(garch_forecast(make_params(1e-6, 0.1, 0.8), 0.01, 1e-4) == doctest::Approx(9.1e-5).epsilon(1e-14));
    const auto flat = make_params(2e-5, 0.0, 0.0);
    CHECK(garch_forecast(flat, 0.3, 7.0) == 2e-5);
    CHECK_THROWS_AS(make_params(1e-6, 0.2, 0.8), std::invalid_argument);
    CHECK_THROWS_AS(make_params(0.0, 0.1, 0.8), std::invalid_argument);
}

TEST_CASE("likelihood") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> r(500);
    for (auto& v : r) v = z(rng);

    // alpha = beta = 0: i.i.d. Gaussian with variance omega.
    const double w = 1.2e-4;
    double closed = 0.0;
    for (double v : r) closed += 0.5 * (std::log(2 * std::numbers::pi) + std::log(w) + v * v / w);
    CHECK(garch_nll(make_params(w, 0.0, 0.0), r) == doctest::Approx(closed).epsilon(1e-10));

    double s2 = 0;
    for (double v : r) s2 += v * v;
    s2 /= static_cast<double>(r.size());
    double prev = garch_nll(make_params(s2 * 100, 0, 0), r);
    for (double f : {30.0, 10.0, 3.0, 1.0}) {
        const double cur = garch_nll(make_params(s2 * f, 0, 0), r);
        CHECK(cur < prev);
        prev = cur;
    }
    CHECK_THROWS(garch_nll(make_params(1e-6, 0.1, 0.8), std::vector<double>(5, 0.01)));
}

TEST_CASE("true parameters beat perturbed ones") {
    const auto truth = make_params(1e-6, 0.1, 0.8);
    // +50% on omega and alpha; beta capped so the process stays stationary.
    const auto worse = make_params(1.5e-6, 0.15, 0.84);
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto r = garch_simulate(truth, 2000, seed);
        wins += garch_nll(truth, r) <= garch_nll(worse, r);
    }
    CHECK(wins >= 95);
}

TEST_CASE("filter ends with the one-step forecast") {
    const auto p = make_params(1e-6, 0.1, 0.8, 0.001);
    const auto r = garch_simulate(p, 50, 1);
    const auto s = garch_filter(p, r);
    REQUIRE(s.size() == r.size() + 1);
    CHECK(s.back() == doctest::Approx(garch_forecast(p, r.back(), s[s.size() - 2])));
}

TEST_CASE("fit on i.i.d. data finds little ARCH effect") {
    std::vector<double> alphas;
    for (std::uint64_t seed = 0; seed < 9; ++seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> z(0.0, 0.01);
        std::vector<double> r(3000);
        for (auto& v : r) v = z(rng);
        alphas.push_back(garch_fit(r).alpha);
    }
    std::nth_element(alphas.begin(), alphas.begin() + 4, alphas.end());
    CHECK(alphas[4] <= 0.05);
}

TEST_CASE("degenerate input") {
    CHECK_THROWS_AS(garch_fit(std::vector<double>(100, 0.0)), NumericalError);
}
