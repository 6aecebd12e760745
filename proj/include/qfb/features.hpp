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

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qfb/date.hpp"
#include "qfb/marketdata.hpp"

namespace qfb::features {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Series = std::vector<double>;

// ---------------------------------------------------------------------------
// Indicators. Outputs are aligned with the input; warm-up positions hold NaN.
// ---------------------------------------------------------------------------

/// Relative strength index from simple rolling means of gains and losses.
/// A window with neither gains nor losses yields 50.
Series rsi(std::span<const double> prices, int period = 14);

/// Raw stochastic %K from a single price series (range taken over the same series).
/// Flat windows yield 50.
Series stochastic_k(std::span<const double> prices, int period = 14);
/// %K with explicit high/low series.
Series stochastic_k(std::span<const double> high, std::span<const double> low,
                    std::span<const double> close, int period = 14);

Series sma(std::span<const double> values, int window);

/// Recursive EMA with smoothing 2/(span+1), seeded at the first finite value.
Series ema(std::span<const double> values, int span);

struct Macd {
    Series line;   ///< EMA12 - EMA26, valid from index 25
    Series signal; ///< EMA9(line), valid from index 33
};
Macd macd(std::span<const double> prices);

/// RV_t = mean of the last `window` squared returns.
Series realized_variance(std::span<const double> returns, int window = 5);

/// y_t = 1 if P_t > P_{t-1} else 0; length n - 1.
Series label_direction(std::span<const double> prices);

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

struct FeatureMatrix {
    std::vector<Date> dates; ///< label date of each row
    Matrix X;
    std::vector<std::string> names;
    std::vector<InfoTime> asof; ///< latest information instant used by each row

    std::size_t rows() const { return static_cast<std::size_t>(X.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(X.cols()); }
};

enum class TargetKind { direction, realized_variance };

struct LabeledDataset {
    FeatureMatrix features;
    std::vector<double> y;
    TargetKind target_kind = TargetKind::direction;
    std::vector<InfoTime> label_time;
    /// Index of each row's label day in the series the dataset was built from.
    std::vector<std::size_t> source_index;

    std::size_t size() const { return y.size(); }
};

/// Rolling windows for the recurrent models: each sample is T x F, rows oldest first.
struct WindowTensor {
    std::vector<Matrix> samples;
    std::vector<double> labels;
    std::vector<double> next_return; ///< simple return realised on the label day
    std::vector<Date> window_end;
    std::vector<Date> label_date;
    std::vector<InfoTime> asof;
    std::vector<InfoTime> label_time;
    std::vector<std::string> names;
    std::size_t T = 0;
    std::size_t F = 0;

    std::size_t size() const { return samples.size(); }
};

/// Lag embedding: target returns at lags 1..self_lags, then every other series
/// (in map order) at lags 1..cross_lags. Direction labels on the target.
LabeledDataset lag_matrix(const std::map<std::string, marketdata::ReturnSeries>& series,
                          const std::string& target, int self_lags = 8, int cross_lags = 7);

/// [RSI-14, %K14, SMA3(%K14)] dated the day before each label.
LabeledDataset build_low3(const marketdata::PriceSeries& target);

/// Same-day log returns of N225, HSI, AORD, GDAXI, FTSE plus DJI and NYA lagged one
/// day, labelled with the target's direction. Series must be calendar-aligned.
LabeledDataset build_mid7(const std::vector<marketdata::PriceSeries>& aligned,
                          const std::string& target);

/// 64-D lag embedding; every non-target series acts as a cross index.
LabeledDataset build_high64(const std::vector<marketdata::PriceSeries>& aligned,
                            const std::string& target, int self_lags = 8, int cross_lags = 7);

/// Windows of [log return, MACD line, MACD signal, RSI-14] of length T.
WindowTensor build_trading_windows(const marketdata::PriceSeries& target, std::size_t T = 10);

/// x_t = [r_t..r_{t-p+1}, RV_t..RV_{t-q+1}], y = RV_{t+1}. Rows start at the first day
/// with full history, or at `first_day` if later, so datasets with different (p, q)
/// can share the same row set.
LabeledDataset build_volatility(const marketdata::ReturnSeries& returns, int p, int q,
                                std::size_t first_day = 0, int rv_window = 5);

/// First return-index day for which vol(p, q) has full history.
std::size_t volatility_warmup(int p, int q, int rv_window = 5);

struct FeatureRegime {
    enum class Kind { low3, mid7, high64, trading10x4, vol } kind = Kind::low3;
    int p = 5;
    int q = 5;

    /// Accepts low3 | mid7 | high64 | trading10x4 | vol(p,q).
    static FeatureRegime parse(const std::string& name);
    std::string name() const;
    std::size_t dimension() const;
};

struct FeatureInputs {
    std::vector<marketdata::PriceSeries> series;
    std::string target;
};

std::variant<LabeledDataset, WindowTensor> build_feature_set(const FeatureRegime& regime,
                                                             const FeatureInputs& inputs);

// ---------------------------------------------------------------------------
// Scaling
// ---------------------------------------------------------------------------

struct ScalerParams {
    std::vector<double> min;
    std::vector<double> max;
};

ScalerParams minmax_fit(const Matrix& X_train);
/// (X - min)/(max - min) per column, unclipped; constant columns map to 0.
Matrix minmax_apply(const ScalerParams& params, const Matrix& X);
/// Fits over every row of windows[begin, end).
ScalerParams minmax_fit(const std::vector<Matrix>& windows, std::size_t begin, std::size_t end);

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

/// Half-open index range.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return end <= begin; }
};

struct Fold {
    IndexRange train;
    IndexRange test;
};

enum class SplitScheme { expanding_walkforward, regime_phases };

struct SplitPlan {
    std::vector<Fold> folds;
    SplitScheme scheme = SplitScheme::expanding_walkforward;
};

/// Expanding train windows followed by equal-length test windows; the last fold's
/// test ends at n_rows and the first train absorbs the remainder.
SplitPlan make_walkforward_splits(std::size_t n_rows, std::size_t n_folds = 5);

/// Date-anchored variant: the last fold trains through `final_train_end` and tests
/// through `final_test_end`; earlier folds step back by the final test length.
SplitPlan make_walkforward_splits(const std::vector<Date>& dates, std::size_t n_folds,
                                  const Date& final_train_end, const Date& final_test_end);

struct RegimePhases {
    IndexRange train;
    IndexRange early_stop;
    IndexRange model_select;
    IndexRange calibration;
};

/// 70/10/10/10 contiguous slices; the 10% slices use floor rounding and the
/// remainder goes to train.
RegimePhases make_regime_phase_splits(std::size_t rows);

// ---------------------------------------------------------------------------
// Audits and export
// ---------------------------------------------------------------------------

/// Rows whose features are not strictly earlier than their label.
std::size_t count_lookahead_violations(const LabeledDataset& ds);
std::size_t count_lookahead_violations(const WindowTensor& windows);

void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds);

} // namespace qfb::features
