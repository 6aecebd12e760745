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
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "qfb/metrics.hpp"
#include "qfb/neural.hpp"

namespace qfb::neural {

ClassWeights inverse_frequency_weights(std::span<const double> labels) {
    if (labels.empty()) throw std::invalid_argument("class weights: empty label set");
    double pos = 0.0;
    for (double y : labels) pos += y > 0.5 ? 1.0 : 0.0;
    const double n = static_cast<double>(labels.size()), neg = n - pos;
    if (pos == 0.0 || neg == 0.0) return {};
    return {n / (2.0 * neg), n / (2.0 * pos)};
}

double weighted_bce(std::span<const double> probs, std::span<const double> labels, const ClassWeights& cw) {
    if (probs.size() != labels.size()) throw std::invalid_argument("weighted_bce: length mismatch");
    if (probs.empty()) throw std::invalid_argument("weighted_bce: empty input");
    double total = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = std::clamp(probs[i], kProbClamp, 1.0 - kProbClamp);
        const bool pos = labels[i] > 0.5;
        total += pos ? cw.positive * std::log(p) : cw.negative * std::log(1.0 - p);
    }
    return -total / static_cast<double>(probs.size());
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (momentum < 0.0 || momentum >= 1.0) throw std::invalid_argument("momentum must be in [0, 1)");
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be >= 1");
    if (patience < 1) throw std::invalid_argument("patience must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
}

Dataset Dataset::slice(features::IndexRange r) const {
    if (r.end > size() || r.begin > r.end) throw std::out_of_range("dataset slice out of range");
    Dataset d;
    d.x.assign(x.begin() + r.begin, x.begin() + r.end);
    d.y.assign(y.begin() + r.begin, y.begin() + r.end);
    return d;
}

Dataset from_labeled(const features::LabeledDataset& ds) {
    Dataset d;
    d.y = ds.y;
    d.x.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) d.x.push_back(ds.features.X.row(static_cast<Eigen::Index>(i)));
    return d;
}

Dataset from_windows(const features::WindowTensor& wt) { return {wt.samples, wt.labels}; }

std::vector<double> predict(const Model& model, std::span<const double> w, const Dataset& ds) {
    std::vector<double> p(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) p[i] = model.forward(w, ds.x[i]);
    return p;
}

TrainResult train(const Model& model, const Dataset& tr, const Dataset& es, const TrainConfig& cfg) {
    cfg.validate();
    if (tr.size() == 0) throw std::invalid_argument("train: empty training set");
    if (es.size() == 0) throw std::invalid_argument("train: empty early-stop set");
    const ClassWeights cw = cfg.class_weights.value_or(inverse_frequency_weights(tr.y));
    const std::size_t P = model.param_count();

    TrainResult res;
    std::vector<double> w = model.init_params(cfg.seed);
    std::vector<double> vel(P, 0.0), g(P), batch_g(P);
    std::vector<std::size_t> order(tr.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    res.weights = w;
    res.best_es_auc = -std::numeric_limits<double>::infinity();
    int since_best = 0;
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::fill(batch_g.begin(), batch_g.end(), 0.0);
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t i = order[b];
                const double p_raw = model.forward_grad(w, tr.x[i], g);
                const double p = std::clamp(p_raw, kProbClamp, 1.0 - kProbClamp);
                const bool pos = tr.y[i] > 0.5;
                loss += pos ? -cw.positive * std::log(p) : -cw.negative * std::log(1.0 - p);
                // dL/dp; zero where the clamp is active.
                double dl = pos ? -cw.positive / p : cw.negative / (1.0 - p);
                if (p != p_raw) dl = 0.0;
                for (std::size_t k = 0; k < P; ++k) batch_g[k] += dl * g[k];
            }
            const double inv = 1.0 / static_cast<double>(stop - start);
            for (std::size_t k = 0; k < P; ++k) {
                vel[k] = cfg.momentum * vel[k] - cfg.learning_rate * batch_g[k] * inv;
                w[k] += vel[k];
            }
        }
        loss /= static_cast<double>(tr.size());
        if (!std::isfinite(loss) ||
            std::any_of(w.begin(), w.end(), [](double v) { return !std::isfinite(v); })) {
            spdlog::warn("{}: training diverged at epoch {}", model.describe(), epoch);
            res.diverged = true;
            break;
        }
        const auto probs = predict(model, w, es);
        const auto auc = metrics::roc_auc(probs, es.y);
        const double es_auc = auc.value_or(std::numeric_limits<double>::quiet_NaN());
        res.history.push_back({epoch, loss, es_auc});
        const double score = auc.value_or(0.5);
        if (score > res.best_es_auc) {
            res.best_es_auc = score;
            res.best_epoch = epoch;
            res.weights = w;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }
    return res;
}

} // namespace qfb::neural
