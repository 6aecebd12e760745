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

#include "qfb/backtest.hpp"
#include "qfb/metrics.hpp"

using namespace qfb;
using namespace qfb::backtest;

TEST_CASE("threshold signals") {
    CHECK(threshold_signals(std::vector<double>{0.95}, {0.9, 0.5}) == std::vector<int>{1});
    CHECK(threshold_signals(std::vector<double>{0.5}, {0.6, 0.4}) == std::vector<int>{0});
    CHECK(threshold_signals(std::vector<double>{0.6}, {0.6, 0.4}) == std::vector<int>{0});
    CHECK(threshold_signals(std::vector<double>{0.05}, {0.6, 0.1}) == std::vector<int>{-1});
    CHECK(ThresholdPair{0.6, 0.4}.valid());
    CHECK_FALSE(ThresholdPair{0.95, 0.4}.valid());
}

TEST_CASE("simulation arithmetic") {
    const auto e = simulate(std::vector<int>{1}, std::vector<double>{0.01}, 0.0005);
    REQUIRE(e.equity.size() == 2);
    CHECK(e.equity[0] == 1.0);
    CHECK(e.equity[1] == doctest::Approx(1.0095));
    const auto flat = simulate(std::vector<int>(5, 0), std::vector<double>{0.1, -0.2, 0.3, 0.0, 0.05});
    for (double v : flat.equity) CHECK(v == 1.0);

    const auto bh = buy_and_hold(std::vector<double>{0.01, -0.01}, 0.0);
    CHECK(bh.equity.back() == doctest::Approx(0.9999));
    CHECK_THROWS(buy_and_hold(std::vector<double>{}, 0.0));
    // Reversal pays twice the fee.
    const auto rev = simulate(std::vector<int>{1, -1}, std::vector<double>{0.0, 0.0}, 0.001);
    CHECK(rev.equity.back() == doctest::Approx((1 - 0.001) * (1 - 0.002)));
    CHECK(count_trades(std::vector<int>{1, 1, -1, 0, 0}) == 3);
}

TEST_CASE("identities on random sequences") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z(0.0, 0.02);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> r(80);
        std::vector<int> s(80);
        for (std::size_t t = 0; t < r.size(); ++t) {
            r[t] = z(rng);
            s[t] = static_cast<int>(rng() % 3) - 1;
        }
        for (double fee : {0.0, 0.0005}) {
            const auto a = simulate(std::vector<int>(80, 1), r, fee);
            const auto b = buy_and_hold(r, fee);
            CHECK(a.equity == b.equity);
        }
        const double lo = simulate(s, r, 0.0).equity.back();
        const double mid = simulate(s, r, 0.0005).equity.back();
        const double hi = simulate(s, r, 0.002).equity.back();
        CHECK(mid <= lo);
        CHECK(hi <= mid);
    }
}

TEST_CASE("threshold calibration") {
    CHECK(threshold_grid(0.05).size() == 81);

    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> r(120), p(120);
    for (std::size_t t = 0; t < r.size(); ++t) {
        r[t] = z(rng);
        p[t] = 0.5 + 20.0 * r[t];
    }
    const auto cal = calibrate_thresholds(p, r, 0.05, 0.0005);
    CHECK_FALSE(cal.no_trade);
    for (const auto& pair : threshold_grid(0.05)) {
        const auto eq = simulate(threshold_signals(p, pair), r, 0.0005).equity;
        const auto m = metrics::trading_metrics(eq);
        if (m.sharpe_defined) CHECK(m.sharpe <= cal.sharpe + 1e-12);
    }

    const auto flat = calibrate_thresholds(std::vector<double>(50, 0.5), std::vector<double>(50, 0.01));
    CHECK(flat.no_trade);
    CHECK(flat.pair.tau_long == 0.5);
    CHECK(flat.pair.tau_short == 0.5);
    CHECK(flat.trades == 0);
}
