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

#include "qfb/bench/studies.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "qfb/backtest.hpp"
#include "qfb/error.hpp"
#include "qfb/features.hpp"
#include "qfb/marketdata.hpp"
#include "qfb/metrics.hpp"
#include "qfb/neural.hpp"
#include "qfb/volstudy.hpp"

namespace qfb::bench {

using features::IndexRange;
using features::Matrix;

std::vector<std::string> classify_columns() {
    return {"Ticker", "Model", "Arch.", "Layers", "Hyb.", "MQR", "Accuracy", "AUC", "Precision", "Recall",
            "Encoding", "Qubits", "Params", "MeanFoldAUC"};
}

std::vector<std::string> trade_columns() {
    return {"Regime", "Ticker", "Model", "h", "L", "Params", "Test AUC", "ARC", "ASD", "Sharpe", "Sortino",
            "MaxDD", "TauLong", "TauShort", "Trades", "NoTrade"};
}

std::vector<std::string> volatility_columns() {
    return {"Ticker", "Model", "QLIKE", "MSE", "R2", "DirAcc", "DM-p", "LastConfig"};
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 29;
    return h;
}

std::map<std::string, marketdata::PriceSeries> load_all(const RunConfig& cfg) {
    std::map<std::string, marketdata::PriceSeries> out;
    for (const auto& t : cfg.tickers) {
        auto r = marketdata::load_price_csv(cfg.data_path(t), cfg.price_field, t);
        if (r.dropped_rows > 0) spdlog::warn("{}: dropped {} malformed rows", t, r.dropped_rows);
        out.emplace(t, std::move(r.series));
    }
    return out;
}

neural::TrainConfig train_config(const TrainOptions& o, std::uint64_t seed) {
    neural::TrainConfig c;
    c.learning_rate = o.learning_rate;
    c.momentum = o.momentum;
    c.max_epochs = o.epochs;
    c.patience = o.patience;
    c.batch_size = static_cast<std::size_t>(o.batch_size);
    c.seed = seed;
    return c;
}

ReportTable new_table(const std::string& name, std::vector<std::string> columns, const RunConfig& cfg) {
    ReportTable t;
    t.name = name;
    t.columns = std::move(columns);
    t.config_hash = cfg.hash();
    t.seeds = {{"run", cfg.seed}};
    return t;
}

std::string yes_no(bool b) { return b ? "Yes" : "No"; }

std::string sanitize(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

/// Builds a scaled fold: fit = train minus its last 10%, early-stop = that tail.
struct PreparedFold {
    neural::Dataset fit, es, test;
};

PreparedFold prepare_fold(const features::LabeledDataset& ds, const features::Fold& f) {
    const std::size_t es_len = std::max<std::size_t>(1, f.train.size() / 10);
    if (f.train.size() <= es_len + 1) throw DataError("classify: training fold too small");
    const IndexRange fit{f.train.begin, f.train.end - es_len}, es{f.train.end - es_len, f.train.end};
    const Matrix& X = ds.features.X;
    const auto scaler = features::minmax_fit(X.middleRows(fit.begin, fit.size()));
    auto make = [&](IndexRange r) {
        neural::Dataset d;
        const Matrix Xs = features::minmax_apply(scaler, X.middleRows(r.begin, r.size()));
        for (Eigen::Index i = 0; i < Xs.rows(); ++i) d.x.push_back(Xs.row(i));
        d.y.assign(ds.y.begin() + r.begin, ds.y.begin() + r.end);
        return d;
    };
    return {make(fit), make(es), make(f.test)};
}

struct Evaluated {
    double mean_auc = -std::numeric_limits<double>::infinity();
    std::vector<double> final_probs;
    neural::TrainResult final_train;
};

Evaluated evaluate_folds(const neural::ModelSpec& spec, const std::vector<PreparedFold>& folds,
                         const neural::TrainConfig& base) {
    const auto model = neural::make_model(spec);
    Evaluated ev;
    double sum = 0.0;
    int counted = 0;
    for (std::size_t k = 0; k < folds.size(); ++k) {
        auto tc = base;
        tc.seed = mix(base.seed, k);
        auto tr = neural::train(*model, folds[k].fit, folds[k].es, tc);
        if (tr.diverged && tr.history.empty()) return ev;
        const auto probs = neural::predict(*model, tr.weights, folds[k].test);
        const auto auc = metrics::roc_auc(probs, folds[k].test.y);
        sum += auc.value_or(0.5);
        ++counted;
        if (k + 1 == folds.size()) {
            ev.final_probs = probs;
            ev.final_train = std::move(tr);
        }
    }
    ev.mean_auc = sum / counted;
    return ev;
}

std::size_t fold_order_violations(const features::SplitPlan& plan) {
    std::size_t bad = 0;
    for (const auto& f : plan.folds)
        if (f.train.end > f.test.begin || f.train.empty() || f.test.empty()) ++bad;
    return bad;
}

} // namespace

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

StudyOutput run_classify(const RunConfig& cfg) {
    const auto& o = cfg.classify;
    const auto regime = features::FeatureRegime::parse(o.regime);
    const auto series = load_all(cfg);
    StudyOutput out;
    auto table = new_table("classify_" + o.regime, classify_columns(), cfg);
    auto grid_table = new_table("classify_" + o.regime + "_grid",
                                {"Ticker", "Candidate", "Params", "Feasible", "MeanFoldAUC"}, cfg);

    std::vector<std::string> targets;
    if (regime.kind == features::FeatureRegime::Kind::low3) {
        targets = o.target.empty() ? cfg.tickers : std::vector<std::string>{o.target};
    } else {
        targets = {o.target.empty() ? cfg.tickers.front() : o.target};
    }

    for (const auto& target : targets) {
        features::FeatureInputs inputs;
        if (regime.kind == features::FeatureRegime::Kind::low3) {
            inputs.series = {series.at(target)};
        } else {
            std::vector<marketdata::PriceSeries> all;
            for (const auto& t : cfg.tickers) all.push_back(series.at(t));
            inputs.series = marketdata::align_calendars(all);
        }
        inputs.target = target;
        const auto ds = std::get<features::LabeledDataset>(features::build_feature_set(regime, inputs));
        const auto plan = features::make_walkforward_splits(ds.size(), static_cast<std::size_t>(o.folds));
        out.leakage_violations += features::count_lookahead_violations(ds) + fold_order_violations(plan);

        std::vector<PreparedFold> folds;
        for (const auto& f : plan.folds) folds.push_back(prepare_fold(ds, f));
        const int d = static_cast<int>(ds.features.cols());
        const auto base = train_config(o.train, mix(cfg.seed, fnv1a64(target)));
        table.seeds["train_" + target] = base.seed;
        grid_table.seeds["train_" + target] = base.seed;

        for (const auto& family : o.models) {
            std::vector<neural::ModelSpec> grid;
            if (family == "ann") {
                grid.push_back(neural::baseline_ann(d));
            } else {
                grid = neural::qnn_grid(neural::parse_encoding(o.encoding), d, o.qnn_layers, o.qnn_qubits);
            }
            std::mutex mu;
            std::map<std::string, Evaluated> results;
            const auto t0 = Clock::now();
            const auto search = neural::architecture_search(
                grid,
                [&](const neural::ModelSpec& spec) {
                    auto ev = evaluate_folds(spec, folds, base);
                    const double auc = ev.mean_auc;
                    std::lock_guard lock(mu);
                    results.emplace(neural::spec_key(spec), std::move(ev));
                    return auc;
                },
                cfg.jobs);
            spdlog::info("classify {} {}: {} candidates in {:.1f}s", target, family, grid.size(),
                         std::chrono::duration<double>(Clock::now() - t0).count());
            for (const auto& c : search.candidates)
                grid_table.add_row({target, neural::spec_key(c.spec), static_cast<std::int64_t>(neural::spec_param_count(c.spec)),
                                    yes_no(c.feasible), c.mean_auc});

            const auto& win = search.winner();
            const auto key = neural::spec_key(win.spec);
            const auto it = results.find(key);
            if (it == results.end() || it->second.final_probs.empty()) {
                spdlog::warn("classify {} {}: no feasible candidate", target, family);
                continue;
            }
            const auto rep = metrics::classification_metrics(it->second.final_probs, folds.back().test.y);
            const double auc = metrics::roc_auc(it->second.final_probs, folds.back().test.y).value_or(std::nan(""));
            std::vector<Cell> row{target};
            if (const auto* q = std::get_if<neural::QnnSpec>(&win.spec)) {
                const bool mq = q->multi_readout();
                row.insert(row.end(), {std::string("QNN"), std::string(mq ? "MQ" : "SQ"), static_cast<std::int64_t>(q->layers),
                                       yes_no(q->hybrid()), yes_no(mq)});
                row.insert(row.end(), {rep.accuracy, auc, rep.precision, rep.recall, neural::to_string(q->encoding),
                                       static_cast<std::int64_t>(q->n_qubits)});
            } else {
                row.insert(row.end(), {std::string("ANN"), std::string("-"), std::string("-"), std::string("-"), std::string("-")});
                row.insert(row.end(), {rep.accuracy, auc, rep.precision, rep.recall, std::string("-"), std::string("-")});
            }
            row.push_back(static_cast<std::int64_t>(neural::spec_param_count(win.spec)));
            row.push_back(win.mean_auc);
            table.add_row(std::move(row));
            const auto model_path = cfg.output / "models" / (sanitize(target + "_" + key) + ".json");
            write_text(model_path, neural::to_json(win.spec, it->second.final_train));
            out.files.push_back(model_path);
        }
    }
    out.tables.push_back(std::move(table));
    out.tables.push_back(std::move(grid_table));
    return out;
}

// ---------------------------------------------------------------------------
// Trading
// ---------------------------------------------------------------------------

StudyOutput run_trade(const RunConfig& cfg) {
    const auto& o = cfg.trade;
    const auto series = load_all(cfg);
    StudyOutput out;
    auto table = new_table("trade", trade_columns(), cfg);

    for (const auto& ticker : cfg.tickers) {
        const auto wt = features::build_trading_windows(series.at(ticker), static_cast<std::size_t>(o.window));
        out.leakage_violations += features::count_lookahead_violations(wt);
        for (std::size_t ri = 0; ri < o.regimes.size(); ++ri) {
            const auto& reg = o.regimes[ri];
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < wt.size(); ++i)
                if (!(wt.label_date[i] < reg.start) && !(reg.end < wt.label_date[i])) idx.push_back(i);
            if (idx.size() < 40) {
                spdlog::warn("trade {} {}: only {} windows in range, skipped", ticker, reg.name, idx.size());
                continue;
            }
            const auto ph = features::make_regime_phase_splits(idx.size());
            if (ph.train.end > ph.early_stop.begin || ph.early_stop.end > ph.model_select.begin ||
                ph.model_select.end > ph.calibration.begin)
                ++out.leakage_violations;

            std::vector<Matrix> windows;
            for (auto i : idx) windows.push_back(wt.samples[i]);
            const auto scaler = features::minmax_fit(windows, ph.train.begin, ph.train.end);
            auto slice = [&](IndexRange r) {
                neural::Dataset d;
                for (std::size_t k = r.begin; k < r.end; ++k) {
                    d.x.push_back(features::minmax_apply(scaler, windows[k]));
                    d.y.push_back(wt.labels[idx[k]]);
                }
                return d;
            };
            const auto tr = slice(ph.train), es = slice(ph.early_stop), ms = slice(ph.model_select),
                       tau = slice(ph.calibration);
            std::vector<double> tau_returns;
            std::vector<Date> tau_dates;
            for (std::size_t k = ph.calibration.begin; k < ph.calibration.end; ++k) {
                tau_returns.push_back(wt.next_return[idx[k]]);
                tau_dates.push_back(wt.label_date[idx[k]]);
            }
            const auto base = train_config(o.train, mix(mix(cfg.seed, ri), fnv1a64(ticker)));
            table.seeds["train_" + ticker + "_" + reg.name] = base.seed;
            const int F = static_cast<int>(wt.F);

            for (const auto& family : o.models) {
                const auto grid = family == "lstm" ? neural::lstm_grid(F, o.hidden, o.lstm_layers)
                                                   : neural::qlstm_grid(F, o.hidden, o.qlstm_layers);
                std::mutex mu;
                std::map<std::string, neural::TrainResult> trained;
                const auto t0 = Clock::now();
                const auto search = neural::architecture_search(
                    grid,
                    [&](const neural::ModelSpec& spec) {
                        const auto model = neural::make_model(spec);
                        auto r = neural::train(*model, tr, es, base);
                        const auto probs = neural::predict(*model, r.weights, ms);
                        const double auc = metrics::roc_auc(probs, ms.y).value_or(0.5);
                        std::lock_guard lock(mu);
                        trained.emplace(neural::spec_key(spec), std::move(r));
                        return auc;
                    },
                    cfg.jobs);
                spdlog::info("trade {} {} {}: {} candidates in {:.1f}s", ticker, reg.name, family, grid.size(),
                             std::chrono::duration<double>(Clock::now() - t0).count());
                const auto& win = search.winner();
                const auto& res = trained.at(neural::spec_key(win.spec));
                const auto model = neural::make_model(win.spec);
                const auto probs = neural::predict(*model, res.weights, tau);
                const auto cal = backtest::calibrate_thresholds(probs, tau_returns, o.grid_step, o.fee);
                const auto pos = backtest::threshold_signals(probs, cal.pair);
                const auto curve = backtest::simulate(pos, tau_returns, o.fee, tau_dates);
                const auto tm = metrics::trading_metrics(curve.equity);
                int h = 0, L = 0;
                if (const auto* s = std::get_if<neural::LstmSpec>(&win.spec)) { h = s->hidden; L = s->layers; }
                if (const auto* s = std::get_if<neural::QlstmSpec>(&win.spec)) { h = s->hidden; L = s->layers; }
                const std::string name = family == "lstm" ? "LSTM" : "QLSTM";
                table.add_row({reg.name, ticker, name, static_cast<std::int64_t>(h), static_cast<std::int64_t>(L),
                               static_cast<std::int64_t>(neural::spec_param_count(win.spec)),
                               metrics::roc_auc(probs, tau.y).value_or(std::nan("")), tm.arc, tm.asd, tm.sharpe,
                               tm.sortino, tm.max_drawdown, cal.pair.tau_long, cal.pair.tau_short,
                               static_cast<std::int64_t>(backtest::count_trades(pos)), yes_no(cal.no_trade)});
                const auto eq = cfg.output / "equity" / (sanitize(ticker + "_" + reg.name + "_" + name) + ".csv");
                std::filesystem::create_directories(eq.parent_path());
                backtest::write_equity_csv(eq, curve);
                out.files.push_back(eq);
                const auto mp = cfg.output / "models" / (sanitize(ticker + "_" + reg.name + "_" + neural::spec_key(win.spec)) + ".json");
                write_text(mp, neural::to_json(win.spec, res));
                out.files.push_back(mp);
            }
            const auto bh = backtest::buy_and_hold(tau_returns, o.fee, tau_dates);
            const auto bm = metrics::trading_metrics(bh.equity);
            table.add_row({reg.name, ticker, std::string("BuyHold"), std::string("-"), std::string("-"), std::int64_t{0},
                           std::nan(""), bm.arc, bm.asd, bm.sharpe, bm.sortino, bm.max_drawdown, std::nan(""),
                           std::nan(""), std::int64_t{1}, std::string("No")});
            const auto eq = cfg.output / "equity" / (sanitize(ticker + "_" + reg.name + "_BuyHold") + ".csv");
            std::filesystem::create_directories(eq.parent_path());
            backtest::write_equity_csv(eq, bh);
            out.files.push_back(eq);
        }
    }
    out.tables.push_back(std::move(table));
    return out;
}

// ---------------------------------------------------------------------------
// Volatility
// ---------------------------------------------------------------------------

namespace {

volstudy::VolStudyConfig vol_config(const RunConfig& cfg) {
    const auto& o = cfg.volatility;
    volstudy::VolStudyConfig v;
    v.plan = {o.initial_train, o.retrain_every, o.max_window};
    v.families.clear();
    for (const auto& m : o.models) v.families.push_back(volstudy::parse_forecast_family(m));
    v.space.qubits = o.qubits;
    v.space.layers = o.layers;
    v.space.betas = o.betas;
    v.space.amplitude_dim = o.amplitude_dim;
    v.space.p = o.p;
    v.space.q = o.q;
    v.budget = o.budget;
    v.seed = cfg.seed;
    return v;
}

} // namespace

StudyOutput run_volatility(const RunConfig& cfg) {
    const auto series = load_all(cfg);
    const auto vc = vol_config(cfg);
    StudyOutput out;
    auto table = new_table("volatility", volatility_columns(), cfg);
    for (const auto& ticker : cfg.tickers) {
        const auto returns = marketdata::compute_returns(series.at(ticker), marketdata::ReturnKind::log);
        const auto t0 = Clock::now();
        const auto res = volstudy::run_expanding_forecast(returns, vc);
        spdlog::info("volatility {}: {} forecasts, {} retrains in {:.1f}s", ticker, res.dates.size(),
                     res.boundaries.size(), std::chrono::duration<double>(Clock::now() - t0).count());
        out.leakage_violations += res.leakage_violations;
        const auto scores = volstudy::score_models(res);
        for (std::size_t m = 0; m < scores.size(); ++m) {
            const auto& s = scores[m];
            table.add_row({ticker, s.model, s.qlike, s.mse, s.r2, s.dir_acc, s.dm_p,
                           res.models[m].chosen.empty() ? std::string() : res.models[m].chosen.back()});
        }
        std::vector<std::string> cols{"date", "rv_true"};
        for (const auto& m : res.models) cols.push_back("rv_pred_" + m.model);
        auto fc = new_table("forecast_" + sanitize(ticker), cols, cfg);
        for (std::size_t i = 0; i < res.dates.size(); ++i) {
            std::vector<Cell> row{res.dates[i].iso(), res.rv_true[i]};
            for (const auto& m : res.models) row.emplace_back(m.pred[i]);
            fc.add_row(std::move(row));
        }
        out.tables.push_back(std::move(fc));
    }
    out.tables.insert(out.tables.begin(), std::move(table));
    return out;
}

// ---------------------------------------------------------------------------

std::string execution_plan(const RunConfig& cfg) {
    cfg.validate();
    std::ostringstream o;
    o << "study: " << to_string(cfg.study) << "\nconfig hash: " << cfg.hash() << "\nseed: " << cfg.seed
      << "\noutput: " << cfg.output.string() << "\njobs: " << cfg.jobs << "\n";
    for (const auto& t : cfg.tickers) o << "data " << t << ": " << cfg.data_path(t).string() << "\n";
    switch (cfg.study) {
    case Study::classify: {
        const auto& c = cfg.classify;
        const auto regime = features::FeatureRegime::parse(c.regime);
        const int d = static_cast<int>(regime.dimension());
        o << "regime: " << c.regime << " (d = " << d << "), folds: " << c.folds << "\n";
        for (const auto& m : c.models) {
            if (m == "ann") {
                const auto a = neural::baseline_ann(d);
                o << "  ANN " << a.key() << " (" << a.param_count() << " params)\n";
            } else {
                const auto g = neural::qnn_grid(neural::parse_encoding(c.encoding), d, c.qnn_layers, c.qnn_qubits);
                std::size_t feasible = 0;
                for (const auto& s : g) feasible += neural::spec_feasible(s) ? 1 : 0;
                o << "  QNN " << c.encoding << " grid: " << g.size() << " candidates (" << feasible << " feasible)\n";
            }
        }
        o << "  training: lr " << c.train.learning_rate << ", momentum " << c.train.momentum << ", epochs "
          << c.train.epochs << ", patience " << c.train.patience << ", batch " << c.train.batch_size << "\n";
        break;
    }
    case Study::trade: {
        const auto& t = cfg.trade;
        for (const auto& r : t.regimes) o << "regime " << r.name << ": " << r.start.iso() << " .. " << r.end.iso() << "\n";
        for (const auto& m : t.models) {
            const auto g = m == "lstm" ? neural::lstm_grid(4, t.hidden, t.lstm_layers) : neural::qlstm_grid(4, t.hidden, t.qlstm_layers);
            o << "  " << m << " grid: " << g.size() << " candidates\n";
        }
        o << "  window " << t.window << ", fee " << t.fee << ", threshold step " << t.grid_step << "\n";
        break;
    }
    case Study::volatility: {
        const auto& v = cfg.volatility;
        o << "plan: initial " << v.initial_train << ", retrain every " << v.retrain_every << ", max window "
          << v.max_window << "\nmodels:";
        for (const auto& m : v.models) o << " " << m;
        o << "\nsearch budget: " << v.budget << " trials per model per retrain\n";
        break;
    }
    }
    return o.str();
}

StudyOutput run_study(const RunConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.output);
    const auto t0 = Clock::now();
    StudyOutput out;
    switch (cfg.study) {
    case Study::classify: out = run_classify(cfg); break;
    case Study::trade: out = run_trade(cfg); break;
    case Study::volatility: out = run_volatility(cfg); break;
    }
    for (const auto& t : out.tables) {
        if (t.rows.empty()) {
            spdlog::warn("report {} is empty; not written", t.name);
            continue;
        }
        out.files.push_back(emit_report(t, ReportFormat::csv, cfg.output));
        out.files.push_back(emit_report(t, ReportFormat::json, cfg.output));
    }
    nlohmann::json manifest{{"study", to_string(cfg.study)},
                            {"config_hash", cfg.hash()},
                            {"seed", cfg.seed},
                            {"leakage_violations", out.leakage_violations}};
    spdlog::info("{} study finished in {:.1f}s", to_string(cfg.study),
                 std::chrono::duration<double>(Clock::now() - t0).count());
    std::vector<std::string> files;
    for (const auto& f : out.files) files.push_back(std::filesystem::relative(f, cfg.output).generic_string());
    manifest["files"] = files;
    write_text(cfg.output / "config_used.ini.txt", cfg.canonical());
    write_text(cfg.output / "manifest.json", manifest.dump(2) + "\n");
    if (out.leakage_violations > 0) spdlog::error("look-ahead audit found {} violations", out.leakage_violations);
    return out;
}

} // namespace qfb::bench
