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

#include <optional>
#include <span>
#include <vector>

#include "qfb/marketdata.hpp"

namespace qfb::metrics {

inline constexpr double kPeriodsPerYear = 252.0;

struct ClassificationReport {
    double accuracy = 0.0;
    double precision = 0.0; ///< NaN when nothing was predicted positive
    double recall = 0.0;    ///< NaN when there are no positive labels
    double auc = 0.0;       ///< NaN when labels contain a single class
    bool precision_defined = true;
    bool recall_defined = true;
    bool auc_defined = true;
};

ClassificationReport classification_metrics(std::span<const double> probs,
                                            std::span<const double> labels,
                                            double threshold = 0.5);

/// Rank-statistic ROC AUC with average ranks for ties. nullopt for single-class labels.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const double> labels);

struct TradingReport {
    double arc = 0.0;
    double asd = 0.0;
    double sharpe = 0.0;  ///< NaN when asd == 0
    double sortino = 0.0; ///< NaN when downside deviation == 0
    double max_drawdown = 0.0;
    bool sharpe_defined = true;
    bool sortino_defined = true;
};

double sharpe_ratio(double arc, double asd, double risk_free = 0.0);

/// Annualised statistics of an equity path (first value is the starting equity).
TradingReport trading_metrics(std::span<const double> equity,
                              double periods_per_year = kPeriodsPerYear, double risk_free = 0.0);

/// min_t equity_t / max_{s<=t} equity_s - 1
double max_drawdown(std::span<const double> equity);

/// mean of log(pred) + truth/pred. Throws on non-positive forecasts.
double qlike(std::span<const double> rv_true, std::span<const double> rv_pred);
std::vector<double> qlike_terms(std::span<const double> rv_true, std::span<const double> rv_pred);

struct RegressionReport {
    double mse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
    double dir_acc = 0.0;
};

RegressionReport regression_metrics(std::span<const double> y_true, std::span<const double> y_pred);

enum class DmLoss {
    squared,      ///< inputs are forecast errors; loss = e^2
    qlike_series  ///< inputs are per-period loss values already
};

struct DmResult {
    double stat = 0.0;
    double p_value = 1.0;
    bool degenerate = false; ///< loss differential has zero variance
};

/// Diebold-Mariano test on d_t = L(b)_t - L(a)_t with a Newey-West long-run variance
/// (lag horizon - 1). Positive statistics mean series `a` has the smaller loss.
DmResult dm_test(std::span<const double> a, std::span<const double> b, DmLoss loss,
                 int horizon = 1);

struct TestResult {
    double stat = 0.0;
    double p_value = 1.0;
};

struct RegimeTests {
    TestResult welch_t;
    TestResult brown_forsythe;
    TestResult ks;
};

RegimeTests regime_tests(std::span<const double> a, std::span<const double> b);
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);
TestResult brown_forsythe_test(std::span<const double> a, std::span<const double> b);
TestResult ks_test(std::span<const double> a, std::span<const double> b);

struct RegimeStats {
    double mu_ann = 0.0;
    double sigma_ann = 0.0;
    double skew = 0.0;
    double kurtosis = 0.0; ///< Pearson (non-excess)
    double max_drawdown = 0.0;
    double sharpe = 0.0;
};

RegimeStats regime_stats(const marketdata::ReturnSeries& returns);

// Moments used across the module.
double mean(std::span<const double> x);
/// Sample standard deviation (n - 1 denominator).
double stddev(std::span<const double> x);

} // namespace qfb::metrics
