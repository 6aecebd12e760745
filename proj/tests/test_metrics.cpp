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

#include "qfb/metrics.hpp"

using namespace qfb;
using namespace qfb::metrics;

TEST_CASE("classification metrics") {
    const auto r = classification_metrics(std::vector<double>{0.2, 0.8}, std::vector<double>{0, 1});
    CHECK(r.auc == 1.0);
    CHECK(r.accuracy == 1.0);
    CHECK(*roc_auc(std::vector<double>(6, 0.3), std::vector<double>{0, 1, 0, 1, 1, 0}) == 0.5);
    CHECK_FALSE(roc_auc(std::vector<double>{0.1, 0.9}, std::vector<double>{1, 1}).has_value());
    const auto single = classification_metrics(std::vector<double>{0.1, 0.9}, std::vector<double>{1, 1});
    CHECK_FALSE(single.auc_defined);
    const auto none = classification_metrics(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 0});
    CHECK_FALSE(none.precision_defined);
}

TEST_CASE("auc is invariant under monotone transforms") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z;
    std::vector<double> s(300), y(300), t(300);
    for (int i = 0; i < 300; ++i) {
        y[i] = static_cast<double>(rng() % 2);
        s[i] = z(rng) + y[i];
        t[i] = 1.0 / (1.0 + std::exp(-4 * s[i]));
    }
    CHECK(*roc_auc(s, y) == doctest::Approx(*roc_auc(t, y)).epsilon(1e-14));
}

TEST_CASE("trading metrics") {
    CHECK(sharpe_ratio(0.1103, 0.0876) == doctest::Approx(1.259).epsilon(1e-3));
    const auto flat = trading_metrics(std::vector<double>(20, 1.0));
    CHECK(flat.arc == 0.0);
    CHECK(flat.max_drawdown == 0.0);
    CHECK_FALSE(flat.sharpe_defined);
    std::vector<double> up(30);
    for (int i = 0; i < 30; ++i) up[i] = 1.0 + 0.01 * i;
    CHECK(trading_metrics(up).max_drawdown == 0.0);
    CHECK(max_drawdown(std::vector<double>{1.0, 2.0, 1.0, 1.5}) == doctest::Approx(-0.5));
}

TEST_CASE("qlike") {
    CHECK(qlike(std::vector<double>{1.0}, std::vector<double>{1.0}) == 1.0);
    const double e = std::exp(1.0);
    CHECK(qlike(std::vector<double>{e}, std::vector<double>{e}) == doctest::Approx(2.0));
    const double at = qlike(std::vector<double>{1.0}, std::vector<double>{1.0});
    const double half = qlike(std::vector<double>{1.0}, std::vector<double>{0.5});
    const double two = qlike(std::vector<double>{1.0}, std::vector<double>{2.0});
    CHECK(half == doctest::Approx(1.3069).epsilon(1e-4));
    CHECK(two == doctest::Approx(1.1931).epsilon(1e-4));
    CHECK(at < half);
    CHECK(at < two);
    CHECK_THROWS(qlike(std::vector<double>{1.0}, std::vector<double>{0.0}));
}

TEST_CASE("regression metrics") {
    const std::vector<double> y{1, 2, 4, 7, 11};
    const auto same = regression_metrics(y, y);
    CHECK(same.mse == 0.0);
    CHECK(same.r2 == 1.0);
    CHECK(same.dir_acc == 1.0);
    const double m = mean(y);
    CHECK(regression_metrics(y, std::vector<double>(5, m)).r2 == doctest::Approx(0.0));
    std::vector<double> refl(5);
    for (int i = 0; i < 5; ++i) refl[i] = -y[i] + 2 * m;
    CHECK(regression_metrics(y, refl).dir_acc == 0.0);
}

TEST_CASE("diebold-mariano") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    std::vector<double> a(200), b(200);
    for (int i = 0; i < 200; ++i) {
        a[i] = z(rng);
        b[i] = z(rng);
    }
    CHECK(dm_test(a, a, DmLoss::squared).degenerate);
    const auto ab = dm_test(a, b, DmLoss::squared), ba = dm_test(b, a, DmLoss::squared);
    CHECK(ab.stat == doctest::Approx(-ba.stat));
    CHECK(ab.p_value == doctest::Approx(ba.p_value));

    std::vector<double> la(200), lb(200);
    for (int i = 0; i < 200; ++i) {
        la[i] = std::fabs(z(rng));
        lb[i] = la[i] + 1.0 + 0.01 * z(rng);
    }
    const auto d = dm_test(la, lb, DmLoss::qlike_series);
    CHECK(d.stat > 10.0);
    CHECK(d.p_value < 1e-6);
    CHECK_NOTHROW(dm_test(a, b, DmLoss::squared, 5));
}

TEST_CASE("regime tests") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> a(250);
    for (auto& v : a) v = z(rng);
    const auto same = regime_tests(a, a);
    CHECK(same.welch_t.stat == 0.0);
    CHECK(same.brown_forsythe.stat == 0.0);
    CHECK(same.ks.stat == 0.0);
    auto b = a;
    for (auto& v : b) v += 0.05;
    CHECK(welch_t_test(a, b).p_value < 0.001);
    auto c = a;
    for (auto& v : c) v *= 3.0;
    CHECK(brown_forsythe_test(a, c).p_value < 0.001);
    CHECK(ks_test(a, c).p_value < 0.001);
}

TEST_CASE("regime statistics of a known path") {
    marketdata::ReturnSeries r;
    for (int i = 0; i < 20; ++i) {
        r.values.push_back(i % 2 ? 0.01 : -0.01);
        r.dates.push_back(Date::from_serial(19000 + i));
    }
    const auto s = regime_stats(r);
    CHECK(s.mu_ann == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.sigma_ann == doctest::Approx(stddev(r.values) * std::sqrt(252.0)));
    CHECK(s.max_drawdown == doctest::Approx(std::exp(-0.01) - 1.0));
}
