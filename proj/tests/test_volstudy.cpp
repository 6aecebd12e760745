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

#include "qfb/error.hpp"
#include "qfb/features.hpp"
#include "qfb/garch.hpp"
#include "qfb/volstudy.hpp"

using namespace qfb;
using namespace qfb::volstudy;

namespace {

marketdata::ReturnSeries simulated(std::size_t n, std::uint64_t seed) {
    marketdata::ReturnSeries r;
    r.values = garch::garch_simulate(garch::make_params(2e-6, 0.08, 0.9), n, seed);
    for (std::size_t i = 0; i < n; ++i) r.dates.push_back(Date::from_serial(16000 + static_cast<long>(i)));
    return r;
}

} // namespace

TEST_CASE("expanding plan arithmetic") {
    const auto b = plan_boundaries({720, 120, 4000}, 960);
    REQUIRE(b.size() == 2);
    CHECK(b[0].at == 720);
    CHECK(b[1].at == 840);
    CHECK(b[0].forecast.size() + b[1].forecast.size() == 240);
    CHECK(b[1].train.begin == 0);
    CHECK(b[1].train.end == 840);

    const auto capped = plan_boundaries({100, 50, 120}, 300);
    for (const auto& x : capped) {
        CHECK(x.train.size() <= 120);
        CHECK(x.train.end == x.at);
    }
    CHECK_THROWS_AS(plan_boundaries({720, 120, 4000}, 720), DataError);
}

TEST_CASE("family names") {
    for (auto f : {ForecastFamily::linear, ForecastFamily::poly, ForecastFamily::rbf, ForecastFamily::quantum_angle,
                   ForecastFamily::quantum_amplitude, ForecastFamily::garch, ForecastFamily::persistence})
        CHECK(parse_forecast_family(to_string(f)) == f);
    CHECK(is_quantum(ForecastFamily::quantum_angle));
    CHECK_FALSE(is_svr(ForecastFamily::garch));
}

TEST_CASE("persistence forecasts the current realised variance") {
    const auto r = simulated(300, 1);
    const auto ds = features::build_volatility(r, 5, 5);
    const auto p = persistence_forecast(ds, 5);
    const auto rv = features::realized_variance(r.values, 5);
    for (std::size_t i = 0; i < ds.size(); ++i) CHECK(p[i] == rv[ds.source_index[i] - 1]);
}

TEST_CASE("expanding forecast end to end") {
    const auto r = simulated(1000, 2);
    VolStudyConfig cfg;
    cfg.plan = {600, 150, 700};
    cfg.families = {ForecastFamily::linear, ForecastFamily::quantum_angle, ForecastFamily::garch,
                    ForecastFamily::persistence};
    cfg.budget = 2;
    cfg.space.qubits = {4};
    cfg.space.layers = {1};
    cfg.seed = 5;
    const auto res = run_expanding_forecast(r, cfg);
    CHECK(res.leakage_violations == 0);
    const std::size_t rows = dataset_rows(r, cfg);
    CHECK(res.n_rows == rows);
    CHECK(res.dates.size() == rows - 600);
    REQUIRE(res.models.size() == 4);
    for (const auto& m : res.models) {
        CHECK(m.pred.size() == res.dates.size());
        for (double v : m.pred) CHECK(v > 0.0);
        if (m.model != "persistence") CHECK(m.chosen.size() == res.boundaries.size());
    }
    const auto scores = score_models(res);
    REQUIRE(scores.size() == 4);
    for (const auto& s : scores) {
        if (s.model == "qsvr_angle") CHECK(std::isnan(s.dm_p));
        else CHECK(s.dm_p >= 0.0);
        CHECK(std::isfinite(s.qlike));
    }

    const auto again = run_expanding_forecast(r, cfg);
    for (std::size_t k = 0; k < res.models.size(); ++k) CHECK(again.models[k].pred == res.models[k].pred);
}

TEST_CASE("leakage audit flags a forecast row inside its own training window") {
    const auto r = simulated(400, 3);
    const auto ds = features::build_volatility(r, 3, 3);
    auto b = plan_boundaries({200, 50, 1000}, ds.size());
    CHECK(audit_leakage(ds, b) == 0);
    b[0].train.end = b[0].forecast.begin + 1;
    CHECK(audit_leakage(ds, b) > 0);
}
