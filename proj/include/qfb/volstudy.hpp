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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qfb/date.hpp"
#include "qfb/features.hpp"
#include "qfb/marketdata.hpp"
#include "qfb/metrics.hpp"
#include "qfb/svr.hpp"

namespace qfb::volstudy {

using features::IndexRange;

struct ExpandingPlan {
    std::size_t initial_train = 720;
    std::size_t retrain_every = 120;
    std::size_t max_window = 4000; ///< the window grows to this length, then slides

    void validate() const;
};

struct Boundary {
    std::size_t at = 0;    ///< first forecast row
    IndexRange train;      ///< in-sample rows
    IndexRange forecast;   ///< rows forecast with this fit
};

/// Retrain points at initial_train, initial_train + retrain_every, ... below n_rows.
std::vector<Boundary> plan_boundaries(const ExpandingPlan& plan, std::size_t n_rows);

enum class ForecastFamily { linear, poly, rbf, quantum_angle, quantum_amplitude, garch, persistence };

std::string to_string(ForecastFamily f);
ForecastFamily parse_forecast_family(const std::string& s);
bool is_svr(ForecastFamily f);
bool is_quantum(ForecastFamily f);

struct VolStudyConfig {
    ExpandingPlan plan;
    std::vector<ForecastFamily> families{ForecastFamily::linear, ForecastFamily::poly, ForecastFamily::rbf,
                                         ForecastFamily::quantum_angle, ForecastFamily::garch,
                                         ForecastFamily::persistence};
    svr::SearchSpace space;
    int budget = 50;
    std::uint64_t seed = 1;
    double validation_fraction = 0.2; ///< tail of each in-sample window used by the search
    int rv_window = 5;
};

struct ForecastSeries {
    std::string model;
    std::vector<double> pred;              ///< aligned with VolatilityResult::dates
    std::vector<std::string> chosen;       ///< selected configuration per boundary
    std::vector<double> validation_qlike;  ///< best search objective per boundary (NaN if none)
};

struct VolatilityResult {
    std::vector<Date> dates;      ///< forecast target dates
    std::vector<double> rv_true;
    std::vector<ForecastSeries> models;
    std::vector<Boundary> boundaries;
    std::size_t n_rows = 0;
    std::size_t leakage_violations = 0;
};

/// First row common to every dataset the configured families will build.
std::size_t common_first_day(const VolStudyConfig& cfg);

/// Rows available to the study for a return series.
std::size_t dataset_rows(const marketdata::ReturnSeries& returns, const VolStudyConfig& cfg);

VolatilityResult run_expanding_forecast(const marketdata::ReturnSeries& returns, const VolStudyConfig& cfg);

/// Forecast rows whose features or in-sample labels are not strictly earlier than the
/// target, over every boundary of the plan.
std::size_t audit_leakage(const features::LabeledDataset& ds, const std::vector<Boundary>& boundaries);

/// r_hat_{t+1} = RV_t.
std::vector<double> persistence_forecast(const features::LabeledDataset& ds, int p);

struct ModelScore {
    std::string model;
    double qlike = 0.0;
    double mse = 0.0;
    double r2 = 0.0;
    double dir_acc = 0.0;
    double dm_p = 0.0; ///< vs. the reference model; NaN for the reference itself
};

/// QLIKE, MSE, R^2, DirAcc and DM p-value (QLIKE loss) against `reference`
/// (the first quantum model when empty).
std::vector<ModelScore> score_models(const VolatilityResult& r, std::string reference = "");

} // namespace qfb::volstudy
