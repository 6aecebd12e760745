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

#include "qfb/volstudy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "qfb/error.hpp"
#include "qfb/garch.hpp"
#include "qfb/qkernel.hpp"

namespace qfb::volstudy {

using features::LabeledDataset;
using features::Matrix;

void ExpandingPlan::validate() const {
    if (initial_train < 2) throw std::invalid_argument("plan: initial_train must be >= 2");
    if (retrain_every < 1) throw std::invalid_argument("plan: retrain_every must be >= 1");
    if (initial_train > max_window) throw std::invalid_argument("plan: initial_train must not exceed max_window");
}

std::vector<Boundary> plan_boundaries(const ExpandingPlan& plan, std::size_t n) {
    plan.validate();
    if (n <= plan.initial_train + 1) throw DataError("volatility study: not enough rows for the plan");
    std::vector<Boundary> out;
    for (std::size_t b = plan.initial_train; b < n; b += plan.retrain_every) {
        Boundary bd;
        bd.at = b;
        bd.train = {b > plan.max_window ? b - plan.max_window : 0, b};
        bd.forecast = {b, std::min(n, b + plan.retrain_every)};
        out.push_back(bd);
    }
    return out;
}

std::string to_string(ForecastFamily f) {
    switch (f) {
    case ForecastFamily::linear: return "svr_linear";
    case ForecastFamily::poly: return "svr_poly";
    case ForecastFamily::rbf: return "svr_rbf";
    case ForecastFamily::quantum_angle: return "qsvr_angle";
    case ForecastFamily::quantum_amplitude: return "qsvr_amplitude";
    case ForecastFamily::garch: return "garch";
    case ForecastFamily::persistence: return "persistence";
    }
    return {};
}

ForecastFamily parse_forecast_family(const std::string& s) {
    for (auto f : {ForecastFamily::linear, ForecastFamily::poly, ForecastFamily::rbf, ForecastFamily::quantum_angle,
                   ForecastFamily::quantum_amplitude, ForecastFamily::garch, ForecastFamily::persistence})
        if (to_string(f) == s) return f;
    throw ConfigError("unknown volatility model family: " + s);
}

bool is_svr(ForecastFamily f) {
    return f != ForecastFamily::garch && f != ForecastFamily::persistence;
}

bool is_quantum(ForecastFamily f) {
    return f == ForecastFamily::quantum_angle || f == ForecastFamily::quantum_amplitude;
}

namespace {

svr::Family svr_family(ForecastFamily f) {
    switch (f) {
    case ForecastFamily::linear: return svr::Family::linear;
    case ForecastFamily::poly: return svr::Family::poly;
    case ForecastFamily::rbf: return svr::Family::rbf;
    case ForecastFamily::quantum_angle: return svr::Family::quantum_angle;
    case ForecastFamily::quantum_amplitude: return svr::Family::quantum_amplitude;
    default: break;
    }
    throw std::logic_error("not an SVR family");
}

std::pair<int, int> max_lags(const VolStudyConfig& cfg) {
    int p = cfg.space.p, q = cfg.space.q;
    for (auto f : cfg.families) {
        if (f == ForecastFamily::quantum_angle) {
            for (int n : cfg.space.qubits) {
                p = std::max(p, (n + 1) / 2);
                q = std::max(q, n / 2);
            }
        } else if (f == ForecastFamily::quantum_amplitude) {
            p = std::max(p, (cfg.space.amplitude_dim + 1) / 2);
            q = std::max(q, cfg.space.amplitude_dim / 2);
        }
    }
    return {p, q};
}

Matrix rows(const Matrix& X, IndexRange r) {
    return X.middleRows(static_cast<Eigen::Index>(r.begin), static_cast<Eigen::Index>(r.size()));
}

struct TargetScaler {
    double mean = 0.0, sd = 1.0, floor = 0.0;

    TargetScaler(std::span<const double> y) {
        mean = metrics::mean(y);
        sd = y.size() > 1 ? metrics::stddev(y) : 0.0;
        if (!(sd > 0.0)) sd = 1.0;
        floor = std::numeric_limits<double>::infinity();
        for (double v : y)
            if (v > 0.0) floor = std::min(floor, v);
        if (!std::isfinite(floor)) floor = std::numeric_limits<double>::min();
    }
    std::vector<double> forward(std::span<const double> y) const {
        std::vector<double> z(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) z[i] = (y[i] - mean) / sd;
        return z;
    }
    std::vector<double> inverse(std::span<const double> z) const {
        std::vector<double> y(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) y[i] = std::max(floor, mean + sd * z[i]);
        return y;
    }
};

/// Fits a trial on `train` rows of ds and predicts `test` rows, on the RV scale.
std::vector<double> fit_predict(const svr::Trial& t, const LabeledDataset& ds, IndexRange train, IndexRange test) {
    const Matrix Xtr_raw = rows(ds.features.X, train), Xte_raw = rows(ds.features.X, test);
    const auto scaler = features::minmax_fit(Xtr_raw);
    const Matrix Xtr = features::minmax_apply(scaler, Xtr_raw), Xte = features::minmax_apply(scaler, Xte_raw);
    const std::span<const double> ytr(ds.y.data() + train.begin, train.size());
    const TargetScaler ts(ytr);
    const auto z = ts.forward(ytr);
    std::vector<double> zhat;
    if (t.qmap) {
        const auto K = qkernel::kernel_matrix(*t.qmap, Xtr).entries;
        const auto model = svr::svr_fit_precomputed(t.svr, K, z);
        zhat = svr::svr_predict_precomputed(model, qkernel::kernel_cross(*t.qmap, Xtr, Xte));
    } else {
        const auto model = svr::svr_fit(t.svr, Xtr, z);
        zhat = svr::svr_predict(model, Xte);
    }
    return ts.inverse(zhat);
}

std::string describe(const svr::Trial& t) {
    std::string s = fmt::format("C={:.6g} eps={:.6g}", t.svr.C, t.svr.epsilon);
    if (t.svr.kernel == svr::KernelKind::poly)
        s += " degree=" + std::to_string(t.svr.degree) + " gamma=" + svr::to_string(t.svr.gamma_mode);
    if (t.svr.kernel == svr::KernelKind::rbf) s += " gamma=" + svr::to_string(t.svr.gamma_mode);
    if (t.qmap) {
        s += " qubits=" + std::to_string(t.qmap->n_qubits) + " layers=" + std::to_string(t.qmap->layers);
        if (t.qmap->variant == qkernel::MapVariant::amplitude) s += " beta=" + std::to_string(t.qmap->beta);
    }
    s += " p=" + std::to_string(t.p) + " q=" + std::to_string(t.q);
    return s;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    return h;
}

} // namespace

std::size_t common_first_day(const VolStudyConfig& cfg) {
    const auto [p, q] = max_lags(cfg);
    return features::volatility_warmup(p, q, cfg.rv_window);
}

std::size_t dataset_rows(const marketdata::ReturnSeries& returns, const VolStudyConfig& cfg) {
    const std::size_t first = common_first_day(cfg);
    return returns.size() > first + 1 ? returns.size() - first - 1 : 0;
}

std::size_t audit_leakage(const LabeledDataset& ds, const std::vector<Boundary>& boundaries) {
    std::size_t bad = 0;
    for (const auto& b : boundaries) {
        InfoTime last_label{};
        for (std::size_t r = b.train.begin; r < b.train.end; ++r) last_label = std::max(last_label, ds.label_time[r]);
        for (std::size_t r = b.forecast.begin; r < b.forecast.end; ++r) {
            const bool feature_ok = ds.features.asof[r] < ds.label_time[r];
            const bool train_ok = b.train.empty() || last_label <= ds.features.asof[r];
            if (!feature_ok || !train_ok) ++bad;
        }
    }
    return bad;
}

std::vector<double> persistence_forecast(const LabeledDataset& ds, int p) {
    std::vector<double> out(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) out[r] = ds.features.X(static_cast<Eigen::Index>(r), p);
    return out;
}

VolatilityResult run_expanding_forecast(const marketdata::ReturnSeries& returns, const VolStudyConfig& cfg) {
    if (cfg.families.empty()) throw ConfigError("volatility study: no model families configured");
    if (cfg.budget < 1) throw ConfigError("volatility study: search budget must be >= 1");
    if (!(cfg.validation_fraction > 0.0 && cfg.validation_fraction < 1.0))
        throw ConfigError("volatility study: validation fraction must lie in (0, 1)");
    const std::size_t first = common_first_day(cfg);
    if (returns.size() <= first + cfg.plan.initial_train + 1)
        throw DataError("volatility study: return series too short for the plan");

    std::map<std::pair<int, int>, LabeledDataset> cache;
    auto dataset = [&](int p, int q) -> const LabeledDataset& {
        auto it = cache.find({p, q});
        if (it == cache.end())
            it = cache.emplace(std::make_pair(p, q), features::build_volatility(returns, p, q, first, cfg.rv_window)).first;
        return it->second;
    };
    const LabeledDataset& base = dataset(cfg.space.p, cfg.space.q);
    const std::size_t n = base.size();

    VolatilityResult res;
    res.n_rows = n;
    res.boundaries = plan_boundaries(cfg.plan, n);
    const std::size_t f0 = res.boundaries.front().at;
    for (std::size_t r = f0; r < n; ++r) {
        res.dates.push_back(base.features.dates[r]);
        res.rv_true.push_back(base.y[r]);
    }
    res.leakage_violations = audit_leakage(base, res.boundaries);

    for (std::size_t fi = 0; fi < cfg.families.size(); ++fi) {
        const ForecastFamily fam = cfg.families[fi];
        ForecastSeries fs;
        fs.model = to_string(fam);
        fs.pred.reserve(n - f0);

        for (std::size_t bi = 0; bi < res.boundaries.size(); ++bi) {
            const Boundary& b = res.boundaries[bi];
            if (fam == ForecastFamily::persistence) {
                const auto pers = persistence_forecast(base, cfg.space.p);
                const double floor = TargetScaler({base.y.data() + b.train.begin, b.train.size()}).floor;
                for (std::size_t r = b.forecast.begin; r < b.forecast.end; ++r) fs.pred.push_back(std::max(floor, pers[r]));
                fs.chosen.push_back("rv_t");
                fs.validation_qlike.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            if (fam == ForecastFamily::garch) {
                // Return index of the last day known when forecasting row r is source_index[r] - 1.
                const std::size_t t_end = base.source_index[b.at] - 1;
                const std::size_t len = b.train.size();
                const std::size_t t_begin = t_end + 1 >= len ? t_end + 1 - len : 0;
                const std::span<const double> fit_window(returns.values.data() + t_begin, t_end + 1 - t_begin);
                const auto params = garch::garch_fit(fit_window);
                double s2 = garch::garch_filter(params, fit_window).back();
                std::size_t t = t_end + 1;
                for (std::size_t r = b.forecast.begin; r < b.forecast.end; ++r) {
                    const std::size_t known = base.source_index[r] - 1;
                    for (; t <= known; ++t) s2 = garch::garch_forecast(params, returns.values[t], s2);
                    fs.pred.push_back(s2);
                }
                fs.chosen.push_back(
                    fmt::format("omega={:.6g} alpha={:.6g} beta={:.6g}", params.omega, params.alpha, params.beta));
                fs.validation_qlike.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }

            const std::size_t n_val = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(b.train.size()))));
            const IndexRange inner{b.train.begin, b.train.end - n_val}, val{b.train.end - n_val, b.train.end};
            const auto search = svr::hyper_search(
                svr_family(fam), cfg.space, cfg.budget, mix(mix(cfg.seed, fi), bi), [&](const svr::Trial& t) {
                    const auto& ds = dataset(t.p, t.q);
                    const auto pred = fit_predict(t, ds, inner, val);
                    return metrics::qlike({ds.y.data() + val.begin, val.size()}, pred);
                });
            const auto& best = search.best;
            const auto pred = fit_predict(best, dataset(best.p, best.q), b.train, b.forecast);
            fs.pred.insert(fs.pred.end(), pred.begin(), pred.end());
            fs.chosen.push_back(describe(best));
            fs.validation_qlike.push_back(best.objective);
            spdlog::debug("{} boundary {}: {} (val QLIKE {:.4f})", fs.model, b.at, fs.chosen.back(), best.objective);
        }
        res.models.push_back(std::move(fs));
    }
    return res;
}

std::vector<ModelScore> score_models(const VolatilityResult& r, std::string reference) {
    if (reference.empty())
        for (const auto& m : r.models)
            if (m.model.rfind("qsvr", 0) == 0) {
                reference = m.model;
                break;
            }
    const ForecastSeries* ref = nullptr;
    for (const auto& m : r.models)
        if (m.model == reference) ref = &m;
    std::vector<double> ref_loss;
    if (ref) ref_loss = metrics::qlike_terms(r.rv_true, ref->pred);

    std::vector<ModelScore> out;
    for (const auto& m : r.models) {
        ModelScore s;
        s.model = m.model;
        s.qlike = metrics::qlike(r.rv_true, m.pred);
        const auto reg = metrics::regression_metrics(r.rv_true, m.pred);
        s.mse = reg.mse;
        s.r2 = reg.r2;
        s.dir_acc = reg.dir_acc;
        s.dm_p = std::numeric_limits<double>::quiet_NaN();
        if (ref && &m != ref) {
            const auto loss = metrics::qlike_terms(r.rv_true, m.pred);
            s.dm_p = metrics::dm_test(ref_loss, loss, metrics::DmLoss::qlike_series).p_value;
        }
        out.push_back(s);
    }
    return out;
}

} // namespace qfb::volstudy
