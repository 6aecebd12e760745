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

#include "qfb/bench/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qfb/error.hpp"
#include "qfb/features.hpp"
#include "qfb/volstudy.hpp"

namespace qfb::bench {

namespace pt = boost::property_tree;

std::string to_string(Study s) {
    switch (s) {
    case Study::classify: return "classify";
    case Study::trade: return "trade";
    case Study::volatility: return "volatility";
    }
    return {};
}

Study parse_study(const std::string& s) {
    if (s == "classify") return Study::classify;
    if (s == "trade") return Study::trade;
    if (s == "volatility") return Study::volatility;
    throw ConfigError("unknown study: " + s);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T> T convert(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        T out{};
        if constexpr (std::is_same_v<T, double>) out = std::stod(v, &used);
        else if constexpr (std::is_same_v<T, int>) out = std::stoi(v, &used);
        else out = static_cast<T>(std::stoull(v, &used));
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("invalid value for " + key + ": '" + v + "'");
    }
}

std::vector<int> int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& s : split_list(v)) out.push_back(convert<int>(key, s));
    if (out.empty()) throw ConfigError(key + " must not be empty");
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<TradeRegime> parse_regimes(const std::string& v) {
    std::vector<TradeRegime> out;
    for (const auto& item : split_list(v)) {
        const auto a = item.find(':'), b = item.rfind(':');
        if (a == std::string::npos || a == b) throw ConfigError("trade regime must be NAME:START:END, got " + item);
        try {
            out.push_back({item.substr(0, a), Date::parse(item.substr(a + 1, b - a - 1)), Date::parse(item.substr(b + 1))});
        } catch (const std::exception& e) {
            throw ConfigError("invalid trade regime '" + item + "': " + e.what());
        }
        if (!(out.back().start < out.back().end)) throw ConfigError("trade regime " + item + " ends before it starts");
    }
    return out;
}

void apply_train(TrainOptions& t, const std::string& section, const std::string& key, const std::string& v, bool& used) {
    used = true;
    const auto k = section + "." + key;
    if (key == "learning_rate") t.learning_rate = convert<double>(k, v);
    else if (key == "momentum") t.momentum = convert<double>(k, v);
    else if (key == "epochs") t.epochs = convert<int>(k, v);
    else if (key == "patience") t.patience = convert<int>(k, v);
    else if (key == "batch_size") t.batch_size = convert<int>(k, v);
    else used = false;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() || base.empty() ? p : (base / p).lexically_normal();
}

void check_train(const TrainOptions& t, const std::string& s) {
    if (!(t.learning_rate > 0.0)) throw ConfigError(s + ".learning_rate must be positive");
    if (t.momentum < 0.0 || t.momentum >= 1.0) throw ConfigError(s + ".momentum must be in [0, 1)");
    if (t.epochs < 1 || t.patience < 1 || t.batch_size < 1)
        throw ConfigError(s + ": epochs, patience and batch_size must be >= 1");
}

} // namespace

std::filesystem::path RunConfig::data_path(const std::string& ticker) const {
    if (auto it = data_files.find(ticker); it != data_files.end()) return it->second;
    return data_dir / (ticker + ".csv");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    RunConfig c;
    c.trade.regimes = {{"F1", {2008, 1, 2}, {2009, 12, 31}},
                       {"F2", {2018, 1, 2}, {2019, 12, 31}},
                       {"F3", {2020, 1, 2}, {2021, 12, 31}},
                       {"F4", {2022, 1, 3}, {2024, 12, 31}}};
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError("config key outside a section: " + section);
        for (const auto& [key, node] : body) {
            const std::string v = trim(node.data());
            const std::string k = section + "." + key;
            bool used = true;
            if (section == "run") {
                if (key == "study") c.study = parse_study(v);
                else if (key == "tickers") c.tickers = split_list(v);
                else if (key == "data_dir") c.data_dir = resolve(base, v);
                else if (key == "price_field") {
                    try { c.price_field = marketdata::parse_price_field(v); }
                    catch (const std::exception&) { throw ConfigError("invalid price_field: " + v); }
                }
                else if (key == "seed") c.seed = convert<std::uint64_t>(k, v);
                else if (key == "output") c.output = resolve(base, v);
                else if (key == "jobs") c.jobs = convert<int>(k, v);
                else used = false;
            } else if (section == "data") {
                c.data_files[key] = resolve(base, v);
            } else if (section == "classify") {
                auto& o = c.classify;
                if (key == "regime") o.regime = v;
                else if (key == "models") o.models = split_list(v);
                else if (key == "encoding") o.encoding = v;
                else if (key == "qnn_layers") o.qnn_layers = int_list(k, v);
                else if (key == "qnn_qubits") o.qnn_qubits = int_list(k, v);
                else if (key == "folds") o.folds = convert<int>(k, v);
                else if (key == "target") o.target = v;
                else apply_train(o.train, section, key, v, used);
            } else if (section == "trade") {
                auto& o = c.trade;
                if (key == "regimes") o.regimes = parse_regimes(v);
                else if (key == "models") o.models = split_list(v);
                else if (key == "hidden") o.hidden = int_list(k, v);
                else if (key == "lstm_layers") o.lstm_layers = int_list(k, v);
                else if (key == "qlstm_layers") o.qlstm_layers = int_list(k, v);
                else if (key == "window") o.window = convert<int>(k, v);
                else if (key == "fee") o.fee = convert<double>(k, v);
                else if (key == "grid_step") o.grid_step = convert<double>(k, v);
                else apply_train(o.train, section, key, v, used);
            } else if (section == "volatility") {
                auto& o = c.volatility;
                if (key == "initial_train") o.initial_train = convert<std::size_t>(k, v);
                else if (key == "retrain_every") o.retrain_every = convert<std::size_t>(k, v);
                else if (key == "max_window") o.max_window = convert<std::size_t>(k, v);
                else if (key == "models") o.models = split_list(v);
                else if (key == "budget") o.budget = convert<int>(k, v);
                else if (key == "qubits") o.qubits = int_list(k, v);
                else if (key == "layers") o.layers = int_list(k, v);
                else if (key == "betas") o.betas = int_list(k, v);
                else if (key == "amplitude_dim") o.amplitude_dim = convert<int>(k, v);
                else if (key == "p") o.p = convert<int>(k, v);
                else if (key == "q") o.q = convert<int>(k, v);
                else used = false;
            } else {
                throw ConfigError("unknown config section: [" + section + "]");
            }
            if (!used) throw ConfigError("unknown config key: " + k);
        }
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto c = parse_config(ss.str(), path.parent_path());
    c.source = path;
    return c;
}

void RunConfig::validate() const {
    if (tickers.empty()) throw ConfigError("run.tickers must list at least one ticker");
    if (jobs < 1) throw ConfigError("run.jobs must be >= 1");
    switch (study) {
    case Study::classify: {
        try { (void)features::FeatureRegime::parse(classify.regime); }
        catch (const std::exception& e) { throw ConfigError(e.what()); }
        if (classify.regime.rfind("vol", 0) == 0 || classify.regime == "trading10x4")
            throw ConfigError("classify.regime must be low3, mid7 or high64");
        if (classify.folds < 1) throw ConfigError("classify.folds must be >= 1");
        if (classify.encoding != "angle" && classify.encoding != "amplitude")
            throw ConfigError("classify.encoding must be angle or amplitude");
        for (const auto& m : classify.models)
            if (m != "ann" && m != "qnn") throw ConfigError("classify.models: unknown model " + m);
        for (int L : classify.qnn_layers)
            if (L < 1 || L > 6) throw ConfigError("classify.qnn_layers must lie in 1..6");
        for (int q : classify.qnn_qubits)
            if (q < 1 || q > 14) throw ConfigError("classify.qnn_qubits must lie in 1..14");
        if (!classify.target.empty() &&
            std::find(tickers.begin(), tickers.end(), classify.target) == tickers.end())
            throw ConfigError("classify.target must be one of run.tickers");
        check_train(classify.train, "classify");
        break;
    }
    case Study::trade:
        if (trade.regimes.empty()) throw ConfigError("trade.regimes must not be empty");
        for (const auto& m : trade.models)
            if (m != "lstm" && m != "qlstm") throw ConfigError("trade.models: unknown model " + m);
        if (trade.window < 2) throw ConfigError("trade.window must be >= 2");
        if (trade.fee < 0.0 || trade.fee >= 1.0) throw ConfigError("trade.fee must be in [0, 1)");
        if (!(trade.grid_step > 0.0 && trade.grid_step <= 0.4)) throw ConfigError("trade.grid_step must be in (0, 0.4]");
        for (int h : trade.hidden)
            if (h < 1 || h > 10) throw ConfigError("trade.hidden must lie in 1..10");
        check_train(trade.train, "trade");
        break;
    case Study::volatility: {
        const auto& v = volatility;
        if (v.initial_train < 2 || v.retrain_every < 1 || v.initial_train > v.max_window)
            throw ConfigError("volatility plan must satisfy 2 <= initial_train <= max_window and retrain_every >= 1");
        if (v.budget < 1) throw ConfigError("volatility.budget must be >= 1");
        if (v.p < 1 || v.q < 1) throw ConfigError("volatility.p and volatility.q must be >= 1");
        for (const auto& m : v.models) {
            try { (void)volstudy::parse_forecast_family(m); }
            catch (const ConfigError&) { throw ConfigError("volatility.models: unknown model " + m); }
        }
        for (int n : v.qubits)
            if (n < 2 || n > 14) throw ConfigError("volatility.qubits must lie in 2..14");
        for (int b : v.betas)
            if (b < 1 || b > 3) throw ConfigError("volatility.betas must lie in 1..3");
        if (v.amplitude_dim < 2 || v.amplitude_dim > (1 << 14)) throw ConfigError("volatility.amplitude_dim out of range");
        break;
    }
    }
    for (const auto& t : tickers) {
        const auto p = data_path(t);
        if (!std::filesystem::exists(p)) throw DataError("missing data file for " + t + ": " + p.string());
    }
}

std::string RunConfig::canonical() const {
    std::ostringstream o;
    o << "run.study=" << to_string(study) << "\n";
    o << "run.tickers=" << join(tickers) << "\n";
    o << "run.price_field=" << (price_field == marketdata::PriceField::close ? "close" : "adj_close") << "\n";
    o << "run.seed=" << seed << "\n";
    for (const auto& t : tickers) o << "data." << t << "=" << data_path(t).filename().string() << "\n";
    auto train = [&](const std::string& s, const TrainOptions& t) {
        o << s << ".learning_rate=" << fmt(t.learning_rate) << "\n" << s << ".momentum=" << fmt(t.momentum) << "\n"
          << s << ".epochs=" << t.epochs << "\n" << s << ".patience=" << t.patience << "\n"
          << s << ".batch_size=" << t.batch_size << "\n";
    };
    switch (study) {
    case Study::classify:
        o << "classify.regime=" << classify.regime << "\nclassify.models=" << join(classify.models)
          << "\nclassify.encoding=" << classify.encoding << "\nclassify.qnn_layers=" << join(classify.qnn_layers)
          << "\nclassify.qnn_qubits=" << join(classify.qnn_qubits) << "\nclassify.folds=" << classify.folds
          << "\nclassify.target=" << classify.target << "\n";
        train("classify", classify.train);
        break;
    case Study::trade: {
        std::vector<std::string> regs;
        for (const auto& r : trade.regimes) regs.push_back(r.name + ":" + r.start.iso() + ":" + r.end.iso());
        o << "trade.regimes=" << join(regs) << "\ntrade.models=" << join(trade.models) << "\ntrade.hidden="
          << join(trade.hidden) << "\ntrade.lstm_layers=" << join(trade.lstm_layers) << "\ntrade.qlstm_layers="
          << join(trade.qlstm_layers) << "\ntrade.window=" << trade.window << "\ntrade.fee=" << fmt(trade.fee)
          << "\ntrade.grid_step=" << fmt(trade.grid_step) << "\n";
        train("trade", trade.train);
        break;
    }
    case Study::volatility: {
        const auto& v = volatility;
        o << "volatility.initial_train=" << v.initial_train << "\nvolatility.retrain_every=" << v.retrain_every
          << "\nvolatility.max_window=" << v.max_window << "\nvolatility.models=" << join(v.models)
          << "\nvolatility.budget=" << v.budget << "\nvolatility.qubits=" << join(v.qubits)
          << "\nvolatility.layers=" << join(v.layers) << "\nvolatility.betas=" << join(v.betas)
          << "\nvolatility.amplitude_dim=" << v.amplitude_dim << "\nvolatility.p=" << v.p << "\nvolatility.q=" << v.q
          << "\n";
        break;
    }
    }
    return o.str();
}

std::string RunConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

} // namespace qfb::bench
