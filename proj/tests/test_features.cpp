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
#include <map>
#include <random>

#include "qfb/bench/synth.hpp"
#include "qfb/error.hpp"
#include "qfb/features.hpp"

using namespace qfb;
using namespace qfb::features;

namespace {

std::vector<double> ramp(std::size_t n, double start, double step) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
    return v;
}

marketdata::ReturnSeries returns_from(std::vector<double> v) {
    marketdata::ReturnSeries r;
    r.values = std::move(v);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.dates.push_back(Date::from_serial(18000 + static_cast<long>(i)));
    return r;
}

} // namespace

TEST_CASE("rsi edge cases") {
    CHECK(rsi(ramp(15, 100, 1)).back() == 100.0);
    CHECK(rsi(ramp(15, 100, -1)).back() == 0.0);
    std::vector<double> alt(15);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = 100.0 + (i % 2);
    CHECK(rsi(alt).back() == doctest::Approx(50.0));
    CHECK(rsi(std::vector<double>(15, 3.0)).back() == 50.0);
    const auto warm = rsi(ramp(15, 100, 1));
    CHECK(std::isnan(warm[13]));
    CHECK_THROWS_AS(rsi(ramp(10, 1, 1)), DataError);
}

TEST_CASE("stochastic %K") {
    CHECK(stochastic_k(ramp(14, 1, 1)).back() == 100.0);
    CHECK(stochastic_k(ramp(14, 20, -1)).back() == 0.0);
    auto mid = ramp(14, 1, 1);
    mid.back() = 7.0; // range [1, 13]
    CHECK(stochastic_k(mid).back() == doctest::Approx(50.0));
}

TEST_CASE("sma and ema") {
    const std::vector<double> x{1, 2, 3};
    const auto s = sma(x, 3);
    CHECK(std::isnan(s[0]));
    CHECK(s[2] == 2.0);
    CHECK(sma(std::vector<double>(5, 4.0), 2)[4] == 4.0);
    CHECK(sma(x, 1) == x);

    CHECK(ema(std::vector<double>(6, 2.5), 4) == std::vector<double>(6, 2.5));
    CHECK(ema(x, 1) == x);
    const auto e = ema(std::vector<double>{0, 1}, 3);
    CHECK(e[0] == 0.0);
    CHECK(e[1] == 0.5);
}

TEST_CASE("macd") {
    const auto flat = macd(std::vector<double>(60, 10.0));
    CHECK(flat.line[40] == 0.0);
    CHECK(flat.signal[40] == 0.0);

    // The lag of EMA_n on a ramp with slope s converges to s (n - 1) / 2, so the line
    // converges to s (26 - 12) / 2 = 7 s.
    const auto r = macd(ramp(400, 100, 0.5));
    CHECK(r.line.back() == doctest::Approx(3.5).epsilon(1e-6));
    CHECK(r.signal.back() == doctest::Approx(3.5).epsilon(1e-6));
    CHECK_THROWS_AS(macd(ramp(25, 1, 1)), DataError);
}

TEST_CASE("realized variance and labels") {
    CHECK(realized_variance(std::vector<double>(7, 0.02)).back() == doctest::Approx(0.0004));
    CHECK(realized_variance(std::vector<double>{1, 0, 0, 0, 0}).back() == doctest::Approx(0.2));
    CHECK(realized_variance(std::vector<double>(5, 0.0)).back() == 0.0);

    CHECK(label_direction(std::vector<double>{100, 101}) == std::vector<double>{1});
    CHECK(label_direction(std::vector<double>{100, 100}) == std::vector<double>{0});
    CHECK(label_direction(std::vector<double>{100, 99}) == std::vector<double>{0});
}

TEST_CASE("lag embedding dimensions") {
    std::map<std::string, marketdata::ReturnSeries> m;
    m["T"] = returns_from(ramp(40, 0.0, 0.001));
    for (int k = 0; k < 8; ++k) m["I" + std::to_string(k)] = returns_from(ramp(40, 0.01 * k, 0.002));
    CHECK(lag_matrix(m, "T").features.cols() == 64);

    std::map<std::string, marketdata::ReturnSeries> one{{"T", returns_from({0.1, 0.2, 0.3, 0.4})}};
    const auto ds = lag_matrix(one, "T", 1, 0);
    REQUIRE(ds.features.cols() == 1);
    CHECK(ds.features.X(0, 0) == 0.1);
    CHECK(ds.features.X(2, 0) == 0.3);
    CHECK_THROWS_AS(lag_matrix(std::map<std::string, marketdata::ReturnSeries>{{"T", returns_from({0.1, 0.2})}}, "T"),
                    DataError);
}

TEST_CASE("feature regimes") {
    CHECK(FeatureRegime::parse("low3").dimension() == 3);
    CHECK(FeatureRegime::parse("mid7").dimension() == 7);
    CHECK(FeatureRegime::parse("high64").dimension() == 64);
    CHECK(FeatureRegime::parse("vol(5,5)").dimension() == 10);
    CHECK_THROWS_AS(FeatureRegime::parse("huge"), ConfigError);

    bench::SynthSpec spec;
    spec.tickers = {"N225", "HSI", "AORD", "GDAXI", "FTSE", "DJI", "NYA", "GSPC"};
    spec.days = 300;
    const auto all = marketdata::align_calendars(bench::synthesize(spec));
    CHECK(build_mid7(all, "GSPC").features.cols() == 7);
    // 8 own lags plus 7 lags of each of the 7 other series.
    CHECK(build_high64(all, "GSPC").features.cols() == 8 + 7 * 7);
    const auto w = build_trading_windows(all.back(), 10);
    REQUIRE(w.size() > 0);
    CHECK(w.samples[0].rows() == 10);
    CHECK(w.samples[0].cols() == 4);
    CHECK(count_lookahead_violations(w) == 0);
    const auto low = build_low3(all.back());
    CHECK(count_lookahead_violations(low) == 0);
    CHECK(count_lookahead_violations(build_mid7(all, "GSPC")) == 0);
}

TEST_CASE("mid7 uses same-day foreign closes and lagged U.S. indices") {
    bench::SynthSpec spec;
    spec.tickers = {"N225", "HSI", "AORD", "GDAXI", "FTSE", "DJI", "NYA", "GSPC"};
    spec.days = 200;
    const auto all = marketdata::align_calendars(bench::synthesize(spec));
    const auto ds = build_mid7(all, "GSPC");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(ds.features.asof[i].date <= ds.label_time[i].date);
        CHECK(ds.features.asof[i] < ds.label_time[i]);
    }
}

TEST_CASE("volatility dataset") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0.0, 0.01);
    std::vector<double> r(200);
    for (auto& v : r) v = z(rng);
    const auto ds = build_volatility(returns_from(r), 5, 5);
    CHECK(ds.features.cols() == 10);
    const auto rv = realized_variance(r, 5);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::size_t t = ds.source_index[i];
        CHECK(ds.y[i] == rv[t]);
        CHECK(ds.features.X(i, 0) == r[t - 1]);
    }
    const std::size_t late = volatility_warmup(5, 5) + 20;
    const auto shared = build_volatility(returns_from(r), 2, 2, late);
    const auto shared2 = build_volatility(returns_from(r), 5, 5, late);
    CHECK(shared.source_index == shared2.source_index);
}

TEST_CASE("min-max scaling") {
    Matrix tr(2, 2), te(2, 2);
    tr << 0, 3, 10, 3;
    te << 5, 3, 20, 3;
    const auto p = minmax_fit(tr);
    const auto out = minmax_apply(p, te);
    CHECK(out(0, 0) == 0.5);
    CHECK(out(1, 0) == 2.0);
    CHECK(out(0, 1) == 0.0);
    CHECK(out(1, 1) == 0.0);
}

TEST_CASE("walk-forward splits") {
    const auto plan = make_walkforward_splits(1000, 5);
    REQUIRE(plan.folds.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        const auto& f = plan.folds[k];
        CHECK(f.train.begin == 0);
        CHECK(f.train.end == f.test.begin);
        if (k > 0) CHECK(plan.folds[k - 1].train.end < f.train.end);
    }
    CHECK(plan.folds.back().test.end == 1000);
    CHECK(make_walkforward_splits(100, 1).folds.size() == 1);

    std::vector<Date> dates;
    for (int i = 0; i < 300; ++i) dates.push_back(Date::from_serial(18000 + i));
    CHECK_THROWS_AS(make_walkforward_splits(dates, 2, dates[200], dates[100]), DataError);
}

TEST_CASE("regime phases") {
    const auto p = make_regime_phase_splits(100);
    CHECK(p.train.size() == 70);
    CHECK(p.early_stop.size() == 10);
    CHECK(p.model_select.size() == 10);
    CHECK(p.calibration.size() == 10);
    const auto q = make_regime_phase_splits(10);
    CHECK(q.train.size() == 7);
    CHECK(q.calibration.size() == 1);
    CHECK_THROWS_AS(make_regime_phase_splits(9), DataError);
}
