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

#include <filesystem>
#include <span>
#include <vector>

#include "qfb/date.hpp"

namespace qfb::backtest {

inline constexpr double kDefaultFeeRate = 0.0005;

struct ThresholdPair {
    double tau_long = 0.5;
    double tau_short = 0.5;

    /// tau_short <= 0.5 <= tau_long, tau_long in [0.5, 0.9], tau_short in [0.1, 0.5].
    bool valid() const;
};

struct EquityCurve {
    std::vector<Date> dates;      ///< one per return (may be empty)
    std::vector<int> positions;   ///< held over each return
    std::vector<double> costs;    ///< fee fraction charged on each return day
    std::vector<double> equity;   ///< equity[0] = 1, equity[t+1] after return t
};

/// +1 if p > tau_long, -1 if p < tau_short, else 0.
std::vector<int> threshold_signals(std::span<const double> probs, const ThresholdPair& thresholds);

/// Equity_{t+1} = Equity_t (1 + s_t r_t - fee |s_t - s_{t-1}|), s_{-1} = 0.
EquityCurve simulate(std::span<const int> positions, std::span<const double> returns,
                     double fee_rate = kDefaultFeeRate, std::span<const Date> dates = {});

/// Long from the first day: one entry fee, then compounding.
EquityCurve buy_and_hold(std::span<const double> returns, double fee_rate = kDefaultFeeRate,
                         std::span<const Date> dates = {});

/// Number of days on which the position changed.
std::size_t count_trades(std::span<const int> positions);

struct Calibration {
    ThresholdPair pair;
    double sharpe = 0.0;   ///< NaN when no_trade
    std::size_t trades = 0;
    bool no_trade = false; ///< every pair was degenerate; trade flat
    bool short_slice = false;
};

/// Exhaustive grid: tau_long in {0.50, ..., 0.90}, tau_short in {0.10, ..., 0.50}.
/// Maximises Sharpe; ties -> fewest trades, then smaller tau_long.
Calibration calibrate_thresholds(std::span<const double> probs, std::span<const double> returns,
                                 double grid_step = 0.05, double fee_rate = kDefaultFeeRate);

/// Threshold grid used by calibrate_thresholds.
std::vector<ThresholdPair> threshold_grid(double grid_step = 0.05);

void write_equity_csv(const std::filesystem::path& path, const EquityCurve& curve);

} // namespace qfb::backtest
