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

#include "qfb/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <stdexcept>

#include "qfb/error.hpp"

namespace qfb::features {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string strip_caret(const std::string& t) {
    return !t.empty() && t.front() == '^' ? t.substr(1) : t;
}

const marketdata::PriceSeries& find_series(const std::vector<marketdata::PriceSeries>& all,
                                           const std::string& ticker) {
    for (const auto& s : all)
        if (strip_caret(s.ticker) == strip_caret(ticker)) return s;
    throw DataError("missing ticker: " + ticker);
}

void require_aligned(const std::vector<marketdata::PriceSeries>& all) {
    for (const auto& s : all) {
        if (s.size() != all.front().size())
            throw DataError("series are not calendar-aligned: " + s.ticker);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s.bars[i].date != all.front().bars[i].date)
                throw DataError("series are not calendar-aligned: " + s.ticker);
    }
}

std::vector<double> log_returns(const marketdata::PriceSeries& s) {
    return marketdata::compute_returns(s, marketdata::ReturnKind::log).values;
}

} // namespace

// ---------------------------------------------------------------------------
// Indicators
// ---------------------------------------------------------------------------

Series rsi(std::span<const double> prices, int period) {
    if (period < 1) throw std::invalid_argument("rsi: period must be >= 1");
    const std::size_t n = prices.size();
    if (n < static_cast<std::size_t>(period) + 1)
        throw DataError("rsi: series shorter than period + 1");
    Series out(n, kNaN);
    for (std::size_t t = period; t < n; ++t) {
        double gain = 0.0, loss = 0.0;
        for (std::size_t k = t + 1 - period; k <= t; ++k) {
            const double d = prices[k] - prices[k - 1];
            if (d > 0) gain += d;
            else loss -= d;
        }
        gain /= period;
        loss /= period;
        if (loss == 0.0) out[t] = gain == 0.0 ? 50.0 : 100.0;
        else out[t] = 100.0 - 100.0 / (1.0 + gain / loss);
    }
    return out;
}

Series stochastic_k(std::span<const double> prices, int period) {
    return stochastic_k(prices, prices, prices, period);
}

Series stochastic_k(std::span<const double> high, std::span<const double> low,
                    std::span<const double> close, int period) {
    if (period < 1) throw std::invalid_argument("stochastic_k: period must be >= 1");
    const std::size_t n = close.size();
    if (high.size() != n || low.size() != n)
        throw std::invalid_argument("stochastic_k: length mismatch");
    if (n < static_cast<std::size_t>(period)) throw DataError("stochastic_k: series too short");
    Series out(n, kNaN);
    for (std::size_t t = period - 1; t < n; ++t) {
        double hi = high[t], lo = low[t];
        for (std::size_t k = t + 1 - period; k < t; ++k) {
            hi = std::max(hi, high[k]);
            lo = std::min(lo, low[k]);
        }
        out[t] = hi > lo ? 100.0 * (close[t] - lo) / (hi - lo) : 50.0;
    }
    return out;
}

Series sma(std::span<const double> values, int window) {
    if (window < 1) throw std::invalid_argument("sma: window must be >= 1");
    const std::size_t n = values.size();
    if (n < static_cast<std::size_t>(window)) throw DataError("sma: series shorter than window");
    Series out(n, kNaN);
    for (std::size_t t = window - 1; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = t + 1 - window; k <= t; ++k) acc += values[k];
        out[t] = acc / window;
    }
    return out;
}

Series ema(std::span<const double> values, int span) {
    if (span < 1) throw std::invalid_argument("ema: span must be >= 1");
    if (values.empty()) throw DataError("ema: empty series");
    const double a = 2.0 / (span + 1.0);
    Series out(values.size(), kNaN);
    bool seeded = false;
    double state = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (!std::isfinite(values[t])) {
            if (seeded) throw DataError("ema: non-finite value after seed");
            continue;
        }
        state = seeded ? a * values[t] + (1.0 - a) * state : values[t];
        seeded = true;
        out[t] = state;
    }
    return out;
}

Macd macd(std::span<const double> prices) {
    if (prices.size() < 26) throw DataError("macd: need at least 26 prices");
    const Series fast = ema(prices, 12);
    const Series slow = ema(prices, 26);
    Macd out;
    out.line.assign(prices.size(), kNaN);
    for (std::size_t t = 25; t < prices.size(); ++t) out.line[t] = fast[t] - slow[t];
    out.signal = ema(out.line, 9);
    for (std::size_t t = 0; t < std::min<std::size_t>(33, prices.size()); ++t)
        out.signal[t] = kNaN;
    return out;
}

Series realized_variance(std::span<const double> returns, int window) {
    if (window < 1) throw std::invalid_argument("realized_variance: window must be >= 1");
    const std::size_t n = returns.size();
    if (n < static_cast<std::size_t>(window))
        throw DataError("realized_variance: series shorter than window");
    Series out(n, kNaN);
    for (std::size_t t = window - 1; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = t + 1 - window; k <= t; ++k) acc += returns[k] * returns[k];
        out[t] = acc / window;
    }
    return out;
}

Series label_direction(std::span<const double> prices) {
    if (prices.size() < 2) throw DataError("label_direction: need at least 2 prices");
    Series y(prices.size() - 1);
    for (std::size_t t = 1; t < prices.size(); ++t) y[t - 1] = prices[t] > prices[t - 1] ? 1.0 : 0.0;
    return y;
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

LabeledDataset lag_matrix(const std::map<std::string, marketdata::ReturnSeries>& series,
                          const std::string& target, int self_lags, int cross_lags) {
    if (self_lags < 0 || cross_lags < 0) throw std::invalid_argument("lag_matrix: negative lag");
    auto tit = series.find(target);
    if (tit == series.end()) throw DataError("lag_matrix: missing target " + target);
    const auto& tr = tit->second;
    const std::size_t n = tr.size();
    for (const auto& [name, s] : series)
        if (s.dates != tr.dates) throw DataError("lag_matrix: misaligned calendar for " + name);

    const std::size_t max_lag = static_cast<std::size_t>(std::max(self_lags, cross_lags));
    if (n < max_lag + 1) throw DataError("lag_matrix: not enough observations");

    std::vector<const marketdata::ReturnSeries*> cross;
    std::vector<std::string> cross_names;
    for (const auto& [name, s] : series)
        if (name != target && cross_lags > 0) {
            cross.push_back(&s);
            cross_names.push_back(name);
        }

    const std::size_t cols = self_lags + cross.size() * cross_lags;
    const std::size_t rows = n - max_lag;
    LabeledDataset ds;
    ds.features.X.resize(rows, cols);
    for (int l = 1; l <= self_lags; ++l)
        ds.features.names.push_back(target + "_lag" + std::to_string(l));
    for (const auto& name : cross_names)
        for (int l = 1; l <= cross_lags; ++l)
            ds.features.names.push_back(name + "_lag" + std::to_string(l));

    const int close = session_close_utc(target);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + max_lag;
        std::size_t c = 0;
        for (int l = 1; l <= self_lags; ++l) ds.features.X(r, c++) = tr.values[t - l];
        for (const auto* s : cross)
            for (int l = 1; l <= cross_lags; ++l) ds.features.X(r, c++) = s->values[t - l];
        ds.features.dates.push_back(tr.dates[t]);
        InfoTime asof{tr.dates[t - 1], close};
        for (const auto& name : cross_names)
            asof = std::max(asof, InfoTime{tr.dates[t - 1], session_close_utc(name)});
        ds.features.asof.push_back(asof);
        ds.y.push_back(tr.values[t] > 0.0 ? 1.0 : 0.0);
        ds.label_time.push_back({tr.dates[t], close});
        ds.source_index.push_back(t);
    }
    return ds;
}

LabeledDataset build_low3(const marketdata::PriceSeries& target) {
    const auto prices = target.prices();
    const auto dates = target.dates();
    const auto r = rsi(prices, 14);
    const auto k = stochastic_k(prices, 14);
    const auto d = sma(k, 3);
    const int close = session_close_utc(target.ticker);

    LabeledDataset ds;
    ds.features.names = {"rsi14", "stoch_k14", "sma3_stoch_k14"};
    std::vector<std::array<double, 3>> rows;
    for (std::size_t t = 1; t < prices.size(); ++t) {
        const std::size_t f = t - 1;
        if (!std::isfinite(r[f]) || !std::isfinite(k[f]) || !std::isfinite(d[f])) continue;
        rows.push_back({r[f], k[f], d[f]});
        ds.features.dates.push_back(dates[t]);
        ds.features.asof.push_back({dates[f], close});
        ds.y.push_back(prices[t] > prices[t - 1] ? 1.0 : 0.0);
        ds.label_time.push_back({dates[t], close});
        ds.source_index.push_back(t);
    }
    if (rows.empty()) throw DataError("low3: insufficient history for " + target.ticker);
    ds.features.X.resize(rows.size(), 3);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int c = 0; c < 3; ++c) ds.features.X(i, c) = rows[i][c];
    return ds;
}

LabeledDataset build_mid7(const std::vector<marketdata::PriceSeries>& aligned,
                          const std::string& target) {
    require_aligned(aligned);
    static const char* kSameDay[] = {"N225", "HSI", "AORD", "GDAXI", "FTSE"};
    static const char* kLagged[] = {"DJI", "NYA"};

    const auto& tgt = find_series(aligned, target);
    const auto ret_t = marketdata::compute_returns(tgt, marketdata::ReturnKind::log);
    std::vector<std::vector<double>> cols;
    std::vector<int> closes;
    LabeledDataset ds;
    for (const char* name : kSameDay) {
        cols.push_back(log_returns(find_series(aligned, name)));
        closes.push_back(session_close_utc(name));
        ds.features.names.push_back(std::string(name) + "_ret");
    }
    for (const char* name : kLagged) {
        cols.push_back(log_returns(find_series(aligned, name)));
        closes.push_back(session_close_utc(name));
        ds.features.names.push_back(std::string(name) + "_ret_lag1");
    }

    const std::size_t n = ret_t.size();
    if (n < 2) throw DataError("mid7: insufficient history");
    const int label_close = session_close_utc(target);
    ds.features.X.resize(n - 1, 7);
    for (std::size_t t = 1; t < n; ++t) {
        const std::size_t r = t - 1;
        InfoTime asof{Date{0, 1, 1}, 0};
        for (int c = 0; c < 7; ++c) {
            const std::size_t src = c < 5 ? t : t - 1;
            ds.features.X(r, c) = cols[c][src];
            asof = std::max(asof, InfoTime{ret_t.dates[src], closes[c]});
        }
        ds.features.dates.push_back(ret_t.dates[t]);
        ds.features.asof.push_back(asof);
        ds.y.push_back(ret_t.values[t] > 0.0 ? 1.0 : 0.0);
        ds.label_time.push_back({ret_t.dates[t], label_close});
        ds.source_index.push_back(t + 1);
    }
    return ds;
}

LabeledDataset build_high64(const std::vector<marketdata::PriceSeries>& aligned,
                            const std::string& target, int self_lags, int cross_lags) {
    require_aligned(aligned);
    find_series(aligned, target);
    std::map<std::string, marketdata::ReturnSeries> map;
    for (const auto& s : aligned)
        map.emplace(s.ticker, marketdata::compute_returns(s, marketdata::ReturnKind::log));
    auto ds = lag_matrix(map, target, self_lags, cross_lags);
    for (auto& i : ds.source_index) i += 1; // return index -> price index
    return ds;
}

WindowTensor build_trading_windows(const marketdata::PriceSeries& target, std::size_t T) {
    if (T < 1) throw std::invalid_argument("trading windows: T must be >= 1");
    const auto prices = target.prices();
    const auto dates = target.dates();
    const std::size_t n = prices.size();
    if (n < 35 + T) throw DataError("trading windows: insufficient history for " + target.ticker);
    const auto m = macd(prices);
    const auto r14 = rsi(prices, 14);
    const int close = session_close_utc(target.ticker);

    std::vector<std::array<double, 4>> day(n);
    std::vector<bool> ok(n, false);
    for (std::size_t d = 1; d < n; ++d) {
        day[d] = {std::log(prices[d] / prices[d - 1]), m.line[d], m.signal[d], r14[d]};
        ok[d] = std::all_of(day[d].begin(), day[d].end(), [](double v) { return std::isfinite(v); });
    }

    WindowTensor w;
    w.T = T;
    w.F = 4;
    w.names = {"log_return", "macd_line", "macd_signal", "rsi14"};
    for (std::size_t e = T; e + 1 < n; ++e) {
        bool full = true;
        for (std::size_t d = e + 1 - T; d <= e; ++d) full = full && ok[d];
        if (!full) continue;
        Matrix sample(T, 4);
        for (std::size_t i = 0; i < T; ++i)
            for (int c = 0; c < 4; ++c) sample(i, c) = day[e + 1 - T + i][c];
        w.samples.push_back(std::move(sample));
        w.labels.push_back(prices[e + 1] > prices[e] ? 1.0 : 0.0);
        w.next_return.push_back(prices[e + 1] / prices[e] - 1.0);
        w.window_end.push_back(dates[e]);
        w.label_date.push_back(dates[e + 1]);
        w.asof.push_back({dates[e], close});
        w.label_time.push_back({dates[e + 1], close});
    }
    return w;
}

std::size_t volatility_warmup(int p, int q, int rv_window) {
    return static_cast<std::size_t>(std::max(p - 1, q - 1 + rv_window - 1));
}

LabeledDataset build_volatility(const marketdata::ReturnSeries& returns, int p, int q,
                                std::size_t first_day, int rv_window) {
    if (p < 0 || q < 0 || p + q < 1) throw std::invalid_argument("vol(p,q): need p + q >= 1");
    const std::size_t n = returns.size();
    const auto rv = realized_variance(returns.values, rv_window);
    const std::size_t start = std::max(first_day, volatility_warmup(p, q, rv_window));
    if (n < start + 2) throw DataError("vol(p,q): insufficient history");

    LabeledDataset ds;
    ds.target_kind = TargetKind::realized_variance;
    for (int i = 0; i < p; ++i) ds.features.names.push_back("r_lag" + std::to_string(i));
    for (int i = 0; i < q; ++i) ds.features.names.push_back("rv_lag" + std::to_string(i));
    const std::size_t rows = n - 1 - start;
    ds.features.X.resize(rows, p + q);
    for (std::size_t row = 0; row < rows; ++row) {
        const std::size_t t = start + row;
        for (int i = 0; i < p; ++i) ds.features.X(row, i) = returns.values[t - i];
        for (int i = 0; i < q; ++i) ds.features.X(row, p + i) = rv[t - i];
        ds.features.dates.push_back(returns.dates[t + 1]);
        ds.features.asof.push_back({returns.dates[t], kUsCloseUtcMinute});
        ds.y.push_back(rv[t + 1]);
        ds.label_time.push_back({returns.dates[t + 1], kUsCloseUtcMinute});
        ds.source_index.push_back(t + 1);
    }
    return ds;
}

FeatureRegime FeatureRegime::parse(const std::string& name) {
    FeatureRegime r;
    if (name == "low3") r.kind = Kind::low3;
    else if (name == "mid7") r.kind = Kind::mid7;
    else if (name == "high64") r.kind = Kind::high64;
    else if (name == "trading10x4") r.kind = Kind::trading10x4;
    else {
        static const std::regex kVol(R"(vol\(\s*(\d+)\s*,\s*(\d+)\s*\))");
        std::smatch m;
        if (!std::regex_match(name, m, kVol)) throw ConfigError("unknown feature regime: " + name);
        r.kind = Kind::vol;
        r.p = std::stoi(m[1]);
        r.q = std::stoi(m[2]);
        if (r.p + r.q < 1) throw ConfigError("vol(p,q) needs p + q >= 1");
    }
    return r;
}

std::string FeatureRegime::name() const {
    switch (kind) {
    case Kind::low3: return "low3";
    case Kind::mid7: return "mid7";
    case Kind::high64: return "high64";
    case Kind::trading10x4: return "trading10x4";
    case Kind::vol: return "vol(" + std::to_string(p) + "," + std::to_string(q) + ")";
    }
    return {};
}

std::size_t FeatureRegime::dimension() const {
    switch (kind) {
    case Kind::low3: return 3;
    case Kind::mid7: return 7;
    case Kind::high64: return 64;
    case Kind::trading10x4: return 4;
    case Kind::vol: return static_cast<std::size_t>(p + q);
    }
    return 0;
}

std::variant<LabeledDataset, WindowTensor> build_feature_set(const FeatureRegime& regime,
                                                             const FeatureInputs& inputs) {
    switch (regime.kind) {
    case FeatureRegime::Kind::low3: return build_low3(find_series(inputs.series, inputs.target));
    case FeatureRegime::Kind::mid7: return build_mid7(inputs.series, inputs.target);
    case FeatureRegime::Kind::high64: return build_high64(inputs.series, inputs.target);
    case FeatureRegime::Kind::trading10x4:
        return build_trading_windows(find_series(inputs.series, inputs.target), 10);
    case FeatureRegime::Kind::vol: {
        const auto& s = find_series(inputs.series, inputs.target);
        return build_volatility(marketdata::compute_returns(s, marketdata::ReturnKind::log),
                                regime.p, regime.q);
    }
    }
    throw ConfigError("unknown feature regime");
}

// ---------------------------------------------------------------------------
// Scaling
// ---------------------------------------------------------------------------

ScalerParams minmax_fit(const Matrix& X) {
    if (X.rows() == 0) throw DataError("minmax_fit: empty training set");
    ScalerParams p;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        p.min.push_back(X.col(c).minCoeff());
        p.max.push_back(X.col(c).maxCoeff());
    }
    return p;
}

ScalerParams minmax_fit(const std::vector<Matrix>& windows, std::size_t begin, std::size_t end) {
    if (end <= begin || end > windows.size()) throw DataError("minmax_fit: empty training set");
    ScalerParams p;
    const auto cols = windows[begin].cols();
    p.min.assign(cols, std::numeric_limits<double>::infinity());
    p.max.assign(cols, -std::numeric_limits<double>::infinity());
    for (std::size_t i = begin; i < end; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) {
            p.min[c] = std::min(p.min[c], windows[i].col(c).minCoeff());
            p.max[c] = std::max(p.max[c], windows[i].col(c).maxCoeff());
        }
    return p;
}

Matrix minmax_apply(const ScalerParams& params, const Matrix& X) {
    if (static_cast<std::size_t>(X.cols()) != params.min.size())
        throw std::invalid_argument("minmax_apply: column count mismatch");
    Matrix out(X.rows(), X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
        const double span = params.max[c] - params.min[c];
        for (Eigen::Index r = 0; r < X.rows(); ++r)
            out(r, c) = span > 0.0 ? (X(r, c) - params.min[c]) / span : 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

SplitPlan make_walkforward_splits(std::size_t n_rows, std::size_t n_folds) {
    if (n_folds < 1) throw std::invalid_argument("walk-forward: need at least one fold");
    const std::size_t test_len = n_rows / (n_folds + 1);
    if (test_len < 1) throw DataError("walk-forward: not enough rows for the requested folds");
    SplitPlan plan;
    const std::size_t first_train = n_rows - n_folds * test_len;
    for (std::size_t k = 0; k < n_folds; ++k) {
        const std::size_t train_end = first_train + k * test_len;
        plan.folds.push_back({{0, train_end}, {train_end, train_end + test_len}});
    }
    return plan;
}

SplitPlan make_walkforward_splits(const std::vector<Date>& dates, std::size_t n_folds,
                                  const Date& final_train_end, const Date& final_test_end) {
    if (n_folds < 1) throw std::invalid_argument("walk-forward: need at least one fold");
    if (!(final_train_end < final_test_end))
        throw DataError("walk-forward: test range predates train range");
    if (dates.empty() || final_train_end < dates.front() || dates.back() < final_test_end)
        throw DataError("walk-forward: fold boundaries outside the data");
    auto upper = [&](const Date& d) {
        return static_cast<std::size_t>(std::upper_bound(dates.begin(), dates.end(), d) -
                                        dates.begin());
    };
    const std::size_t train_end = upper(final_train_end);
    const std::size_t test_end = upper(final_test_end);
    const std::size_t test_len = test_end - train_end;
    if (test_len == 0) throw DataError("walk-forward: empty final test window");
    if (train_end < n_folds * test_len)
        throw DataError("walk-forward: not enough history for the requested folds");
    SplitPlan plan;
    for (std::size_t k = 0; k < n_folds; ++k) {
        const std::size_t back = (n_folds - 1 - k) * test_len;
        plan.folds.push_back({{0, train_end - back}, {train_end - back, test_end - back}});
    }
    return plan;
}

RegimePhases make_regime_phase_splits(std::size_t rows) {
    if (rows < 10) throw DataError("regime phases: need at least 10 rows");
    const std::size_t tenth = rows / 10;
    const std::size_t train = rows - 3 * tenth;
    RegimePhases p;
    p.train = {0, train};
    p.early_stop = {train, train + tenth};
    p.model_select = {train + tenth, train + 2 * tenth};
    p.calibration = {train + 2 * tenth, rows};
    return p;
}

// ---------------------------------------------------------------------------
// Audits and export
// ---------------------------------------------------------------------------

std::size_t count_lookahead_violations(const LabeledDataset& ds) {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!(ds.features.asof[i] < ds.label_time[i])) ++bad;
    return bad;
}

std::size_t count_lookahead_violations(const WindowTensor& w) {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w.asof[i] < w.label_time[i]) || !(w.window_end[i] < w.label_date[i])) ++bad;
    return bad;
}

void write_dataset_csv(const std::filesystem::path& path, const LabeledDataset& ds) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out.precision(17);
    out << "date";
    for (const auto& n : ds.features.names) out << ',' << n;
    out << ",y\n";
    for (std::size_t r = 0; r < ds.size(); ++r) {
        out << ds.features.dates[r].iso();
        for (Eigen::Index c = 0; c < ds.features.X.cols(); ++c) out << ',' << ds.features.X(r, c);
        out << ',' << ds.y[r] << '\n';
    }
}

} // namespace qfb::features
