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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "qfb/neural.hpp"

namespace qfb::neural {

namespace {

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::unique_ptr<Model> make_model(const ModelSpec& spec) {
    return std::visit(overloaded{
        [](const AnnSpec& s) -> std::unique_ptr<Model> { return std::make_unique<Ann>(s); },
        [](const QnnSpec& s) -> std::unique_ptr<Model> { return std::make_unique<Qnn>(s); },
        [](const LstmSpec& s) -> std::unique_ptr<Model> { return std::make_unique<Lstm>(s); },
        [](const QlstmSpec& s) -> std::unique_ptr<Model> { return std::make_unique<Qlstm>(s); },
    }, spec);
}

std::string spec_key(const ModelSpec& spec) {
    return std::visit(overloaded{
        [](const AnnSpec& s) { return "ANN/" + s.key(); },
        [](const QnnSpec& s) { return "QNN/" + s.key(); },
        [](const LstmSpec& s) { return "LSTM/" + s.key(); },
        [](const QlstmSpec& s) { return "QLSTM/" + s.key(); },
    }, spec);
}

std::size_t spec_param_count(const ModelSpec& spec) {
    return std::visit([](const auto& s) { return s.param_count(); }, spec);
}

bool spec_feasible(const ModelSpec& spec) {
    if (const auto* q = std::get_if<QnnSpec>(&spec)) return q->feasible();
    return true;
}

std::vector<ModelSpec> qnn_grid(Encoding enc, int d, std::span<const int> layers, std::span<const int> qubits) {
    std::vector<ModelSpec> grid;
    for (QnnArch a : {QnnArch::SQ, QnnArch::MQ, QnnArch::HybridSQ, QnnArch::HybridMQ})
        for (int L : layers) {
            if (enc == Encoding::angle) {
                grid.push_back(QnnSpec{a, enc, L, d, d});
            } else {
                for (int q : qubits) grid.push_back(QnnSpec{a, enc, L, q, d});
            }
        }
    return grid;
}

std::vector<ModelSpec> lstm_grid(int F, std::span<const int> hidden, std::span<const int> layers) {
    std::vector<ModelSpec> grid;
    for (int h : hidden)
        for (int L : layers) grid.push_back(LstmSpec{F, h, L});
    return grid;
}

std::vector<ModelSpec> qlstm_grid(int F, std::span<const int> hidden, std::span<const int> layers) {
    std::vector<ModelSpec> grid;
    for (int h : hidden)
        for (int L : layers) grid.push_back(QlstmSpec{F, h, L});
    return grid;
}

std::size_t select_best(const std::vector<Candidate>& c) {
    if (c.empty()) throw std::invalid_argument("architecture search: empty grid");
    auto score = [](const Candidate& x) {
        return x.feasible && std::isfinite(x.mean_auc) ? x.mean_auc : -std::numeric_limits<double>::infinity();
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const double si = score(c[i]), sb = score(c[best]);
        if (si > sb) {
            best = i;
        } else if (si == sb) {
            const auto pi = spec_param_count(c[i].spec), pb = spec_param_count(c[best].spec);
            if (pi < pb || (pi == pb && spec_key(c[i].spec) < spec_key(c[best].spec))) best = i;
        }
    }
    return best;
}

SearchOutcome architecture_search(const std::vector<ModelSpec>& grid,
                                  const std::function<double(const ModelSpec&)>& evaluate, int jobs) {
    if (grid.empty()) throw std::invalid_argument("architecture search: empty grid");
    SearchOutcome out;
    out.candidates.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.candidates[i].spec = grid[i];
        out.candidates[i].feasible = spec_feasible(grid[i]);
        out.candidates[i].mean_auc = -std::numeric_limits<double>::infinity();
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            if (out.candidates[i].feasible) out.candidates[i].mean_auc = evaluate(grid[i]);
        }
    };
    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    out.best = select_best(out.candidates);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json spec_to_json(const ModelSpec& spec) {
    return std::visit(overloaded{
        [](const AnnSpec& s) {
            return json{{"family", "ANN"}, {"layer_sizes", s.layer_sizes}, {"hidden_activation", to_string(s.hidden)}};
        },
        [](const QnnSpec& s) {
            return json{{"family", "QNN"}, {"arch", to_string(s.arch)}, {"encoding", to_string(s.encoding)},
                        {"layers", s.layers}, {"n_qubits", s.n_qubits}, {"input_dim", s.input_dim}};
        },
        [](const LstmSpec& s) {
            return json{{"family", "LSTM"}, {"input_dim", s.input_dim}, {"hidden", s.hidden}, {"layers", s.layers}};
        },
        [](const QlstmSpec& s) {
            return json{{"family", "QLSTM"}, {"input_dim", s.input_dim}, {"hidden", s.hidden}, {"layers", s.layers}};
        },
    }, spec);
}

ModelSpec spec_from_json(const json& j) {
    const auto family = j.at("family").get<std::string>();
    if (family == "ANN")
        return AnnSpec{j.at("layer_sizes").get<std::vector<int>>(), parse_activation(j.at("hidden_activation"))};
    if (family == "QNN")
        return QnnSpec{parse_qnn_arch(j.at("arch")), parse_encoding(j.at("encoding")), j.at("layers"),
                       j.at("n_qubits"), j.at("input_dim")};
    if (family == "LSTM") return LstmSpec{j.at("input_dim"), j.at("hidden"), j.at("layers")};
    if (family == "QLSTM") return QlstmSpec{j.at("input_dim"), j.at("hidden"), j.at("layers")};
    throw std::invalid_argument("unknown model family: " + family);
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

} // namespace

std::string to_json(const ModelSpec& spec, const TrainResult& r) {
    json hist = json::array();
    for (const auto& e : r.history) hist.push_back({{"epoch", e.epoch}, {"train_loss", number(e.train_loss)}, {"es_auc", number(e.es_auc)}});
    json j{{"spec", spec_to_json(spec)},
           {"n_params", spec_param_count(spec)},
           {"weights", r.weights},
           {"best_epoch", r.best_epoch},
           {"best_es_auc", number(r.best_es_auc)},
           {"diverged", r.diverged},
           {"history", hist}};
    return j.dump(2);
}

LoadedModel from_json(const std::string& text) {
    const json j = json::parse(text);
    LoadedModel m{spec_from_json(j.at("spec")), {}};
    m.result.weights = j.at("weights").get<std::vector<double>>();
    m.result.best_epoch = j.value("best_epoch", 0);
    m.result.best_es_auc = number(j.value("best_es_auc", json(nullptr)));
    m.result.diverged = j.value("diverged", false);
    for (const auto& e : j.at("history"))
        m.result.history.push_back({e.at("epoch").get<int>(), number(e.at("train_loss")), number(e.at("es_auc"))});
    if (m.result.weights.size() != spec_param_count(m.spec))
        throw std::invalid_argument("model JSON: weight count does not match the spec");
    return m;
}

} // namespace qfb::neural
