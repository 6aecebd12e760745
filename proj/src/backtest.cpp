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

#include "qfb/backtest.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "qfb/error.hpp"
#include "qfb/metrics.hpp"

namespace qfb::backtest {

bool ThresholdPair::valid() const {
    constexpr double eps = 1e-12;
    return tau_short <= 0.5 + eps && tau_long >= 0.5 - eps && tau_long <= 0.9 + eps &&
           tau_short >= 0.1 - eps;
}

std::vector<int> threshold_signals(std::span<const double> probs, const ThresholdPair& t) {
    std::vector<int> s(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i)
        s[i] = probs[i] > t.tau_long ? 1 : (probs[i] < t.tau_short ? -1 : 0);
    return s;
}

EquityCurve simulate(std::span<const int> positions, std::span<const double> returns,
                     double fee_rate, std::span<const Date> dates) {
    if (positions.size() != returns.size())
        throw std::invalid_argument("simulate: positions/returns length mismatch");
    if (!dates.empty() && dates.size() != returns.size())
        throw std::invalid_argument("simulate: dates/returns length mismatch");
    EquityCurve c;
    c.dates.assign(dates.begin(), dates.end());
    c.positions.assign(positions.begin(), positions.end());
    c.equity.reserve(returns.size() + 1);
    c.equity.push_back(1.0);
    int prev = 0;
    for (std::size_t t = 0; t < returns.size(); ++t) {
        const int s = positions[t];
        if (s < -1 || s > 1) throw std::invalid_argument("simulate: position outside {-1,0,1}");
        const double cost = fee_rate * std::abs(s - prev);
        c.costs.push_back(cost);
        c.equity.push_back(c.equity.back() * (1.0 + s * returns[t] - cost));
        prev = s;
    }
    return c;
}

EquityCurve buy_and_hold(std::span<const double> returns, double fee_rate,
                         std::span<const Date> dates) {
    if (returns.empty()) throw std::invalid_argument("buy_and_hold: empty return series");
    const std::vector<int> longs(returns.size(), 1);
    return simulate(longs, returns, fee_rate, dates);
}

std::size_t count_trades(std::span<const int> positions) {
    std::size_t n = 0;
    int prev = 0;
    for (int s : positions) {
        if (s != prev) ++n;
        prev = s;
    }
    return n;
}

std::vector<ThresholdPair> threshold_grid(double step) {
    if (!(step > 0.0)) throw std::invalid_argument("threshold grid step must be positive");
    const int n = static_cast<int>(std::floor(0.4 / step + 1e-9)) + 1;
    std::vector<ThresholdPair> grid;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) grid.push_back({0.5 + i * step, 0.1 + j * step});
    return grid;
}

Calibration calibrate_thresholds(std::span<const double> probs, std::span<const double> returns,
                                 double grid_step, double fee_rate) {
    if (probs.size() != returns.size())
        throw std::invalid_argument("calibrate_thresholds: length mismatch");
    if (probs.empty()) throw DataError("calibrate_thresholds: empty slice");
    Calibration best;
    best.short_slice = probs.size() < 20;
    if (best.short_slice)
        spdlog::warn("threshold calibration slice has only {} observations", probs.size());
    bool found = false;
    for (const auto& pair : threshold_grid(grid_step)) {
        const auto signals = threshold_signals(probs, pair);
        const std::size_t trades = count_trades(signals);
        if (trades == 0) continue;
        const auto curve = simulate(signals, returns, fee_rate);
        const auto rep = metrics::trading_metrics(curve.equity);
        if (!rep.sharpe_defined) continue;
        const bool better =
            !found || rep.sharpe > best.sharpe ||
            (rep.sharpe == best.sharpe &&
             (trades < best.trades ||
              (trades == best.trades && pair.tau_long < best.pair.tau_long)));
        if (better) {
            best.pair = pair;
            best.sharpe = rep.sharpe;
            best.trades = trades;
            found = true;
        }
    }
    if (!found) {
        best.pair = {0.5, 0.5};
        best.sharpe = std::nan("");
        best.trades = 0;
        best.no_trade = true;
    }
    return best;
}

void write_equity_csv(const std::filesystem::path& path, const EquityCurve& c) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(10);
    out << "date,position,equity,cost\n";
    for (std::size_t t = 0; t < c.positions.size(); ++t)
        out << (c.dates.empty() ? std::to_string(t) : c.dates[t].iso()) << ',' << c.positions[t]
            << ',' << c.equity[t + 1] << ',' << c.costs[t] << '\n';
}

} // namespace qfb::backtest
