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

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qfb/neural.hpp"

using namespace qfb;
using namespace qfb::neural;

namespace {

Sample random_sample(int rows, int cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Sample s(rows, cols);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = u(rng);
    return s;
}

/// Max abs difference between the analytic gradient and central differences.
double gradient_error(const Model& m, const Sample& x, std::uint64_t seed) {
    auto w = m.init_params(seed);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 0.3);
    for (auto& v : w) v += z(rng);
    std::vector<double> g(w.size());
    m.forward_grad(w, x, g);
    double err = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        auto wp = w, wm = w;
        wp[i] += 1e-6;
        wm[i] -= 1e-6;
        const double fd = (m.forward(wp, x) - m.forward(wm, x)) / 2e-6;
        err = std::max(err, std::fabs(fd - g[i]));
    }
    return err;
}

} // namespace

TEST_CASE("parameter counts of the reference architectures") {
    CHECK(baseline_ann(3).param_count() == 56);
    CHECK(baseline_ann(3).key() == "3-11-1");
    CHECK(baseline_ann(7).param_count() == 801);
    CHECK(baseline_ann(64).param_count() == 2113);
    CHECK(LstmSpec{4, 4, 2}.param_count() == 325);
    CHECK(LstmSpec{4, 4, 4}.param_count() == 645);
    CHECK(LstmSpec{4, 5, 6}.param_count() == 1426);
    CHECK(QlstmSpec{4, 4, 2}.param_count() == 233);
    CHECK(QlstmSpec{4, 5, 4}.param_count() == 476);
    CHECK(QlstmSpec{4, 5, 3}.param_count() == 386);
    CHECK(QlstmSpec{4, 5, 6}.param_count() == 656);
}

TEST_CASE("ann forward") {
    const auto spec = baseline_ann(3);
    const std::vector<double> w(spec.param_count(), 0.0), x{0.3, -0.2, 0.9};
    CHECK(ann_forward(spec, w, x) == 0.5);
}

TEST_CASE("qnn forward on trivial circuits") {
    QnnSpec sq{QnnArch::SQ, Encoding::angle, 1, 2, 2};
    const std::vector<double> zero(sq.param_count(), 0.0), x0{0.0, 0.0};
    CHECK(qnn_forward(sq, zero, x0) == doctest::Approx(1.0));

    QnnSpec mq{QnnArch::MQ, Encoding::angle, 2, 3, 3};
    std::vector<double> w(mq.param_count(), 0.4);
    for (std::size_t i = w.size() - 4; i < w.size(); ++i) w[i] = 0.0;
    CHECK(qnn_forward(mq, w, std::vector<double>{0.1, 0.2, 0.3}) == doctest::Approx(0.5));

    QnnSpec one{QnnArch::SQ, Encoding::angle, 1, 1, 1};
    const std::vector<double> flip{0.0, std::numbers::pi, 0.0};
    CHECK(qnn_forward(one, flip, std::vector<double>{0.0}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("qnn feasibility and grids") {
    CHECK_FALSE(QnnSpec{QnnArch::SQ, Encoding::amplitude, 1, 2, 7}.feasible());
    CHECK(QnnSpec{QnnArch::HybridSQ, Encoding::amplitude, 1, 2, 7}.feasible());
    CHECK(QnnSpec{QnnArch::SQ, Encoding::amplitude, 1, 3, 7}.feasible());
    const std::vector<int> layers{1, 2, 3, 4, 5, 6}, qubits{2, 3, 4, 5, 6};
    CHECK(qnn_grid(Encoding::angle, 3, layers, qubits).size() == 24);
    CHECK(qnn_grid(Encoding::amplitude, 7, layers, qubits).size() == 120);
}

TEST_CASE("analytic gradients match finite differences") {
    std::mt19937_64 rng(21);
    CHECK(gradient_error(Ann(AnnSpec{{3, 5, 4, 1}}), random_sample(1, 3, rng), 1) < 1e-7);
    for (auto arch : {QnnArch::SQ, QnnArch::MQ, QnnArch::HybridSQ, QnnArch::HybridMQ}) {
        CAPTURE(to_string(arch));
        CHECK(gradient_error(Qnn(QnnSpec{arch, Encoding::angle, 2, 3, 3}), random_sample(1, 3, rng), 2) < 1e-7);
        CHECK(gradient_error(Qnn(QnnSpec{arch, Encoding::amplitude, 2, 3, 7}), random_sample(1, 7, rng), 3) < 1e-7);
    }
    CHECK(gradient_error(Lstm(LstmSpec{4, 3, 2}), random_sample(6, 4, rng), 4) < 1e-7);
    CHECK(gradient_error(Qlstm(QlstmSpec{4, 3, 1}), random_sample(5, 4, rng), 5) < 1e-7);
}

TEST_CASE("lstm cell algebra") {
    const int in = 2, h = 3;
    const std::size_t n = 4 * h * (in + h) + 8 * h;
    std::vector<double> w(n, 0.0);
    CellState prev{{0.1, -0.2, 0.3}, {0.5, -0.7, 0.2}};
    const std::vector<double> x{0.4, -0.9};

    const auto zero = lstm_step(in, h, w, x, CellState{{0, 0, 0}, {0, 0, 0}});
    for (int k = 0; k < h; ++k) {
        CHECK(zero.c[k] == 0.0);
        CHECK(zero.h[k] == 0.0);
    }

    // b_ih block order is i, f, g, o.
    const std::size_t b_ih = 4 * h * (in + h);
    for (int k = 0; k < h; ++k) {
        w[b_ih + k] = -50.0;    // input gate closed
        w[b_ih + h + k] = 50.0; // forget gate open
    }
    const auto keep = lstm_step(in, h, w, x, prev);
    for (int k = 0; k < h; ++k) CHECK(keep.c[k] == doctest::Approx(prev.c[k]).epsilon(1e-12));
}

TEST_CASE("qlstm shapes") {
    const QlstmSpec spec{4, 3, 2};
    Qlstm m(spec);
    std::mt19937_64 rng(2);
    const auto w = m.init_params(1);
    CHECK(w.size() == spec.param_count());
    CHECK(m.final_hidden(w, random_sample(10, 4, rng)).size() == 3);
    const auto out = vqc_block(3, 2, std::vector<double>(vqc_block_params(3, 2), 0.0), std::vector<double>{1, 2, 3});
    CHECK(out == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("weighted binary cross-entropy") {
    const ClassWeights eq{1.0, 1.0};
    CHECK(weighted_bce(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 0.0}, eq) <= 1e-6);
    CHECK(weighted_bce(std::vector<double>{0.5, 0.5}, std::vector<double>{1.0, 0.0}, eq) ==
          doctest::Approx(std::log(2.0)));
    const std::vector<double> p{0.7}, y{1.0};
    CHECK(weighted_bce(p, y, ClassWeights{1.0, 2.0}) == doctest::Approx(2.0 * weighted_bce(p, y, eq)));
    const auto cw = inverse_frequency_weights(std::vector<double>{1, 0, 0, 0});
    CHECK(cw.positive == doctest::Approx(2.0));
    CHECK(cw.negative == doctest::Approx(4.0 / 6.0));
    const auto bal = inverse_frequency_weights(std::vector<double>{1, 0, 1, 0});
    CHECK(bal.positive == 1.0);
    CHECK(bal.negative == 1.0);
}

namespace {

Dataset separable(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Dataset d;
    while (d.size() < n) {
        const double a = u(rng), b = u(rng);
        if (std::fabs(a + b) < 0.2) continue;
        d.x.push_back(as_sample(std::vector<double>{a, b}));
        d.y.push_back(a + b > 0 ? 1.0 : 0.0);
    }
    return d;
}

} // namespace

TEST_CASE("training separates a linearly separable set") {
    const auto tr = separable(120, 1), es = separable(40, 2);
    Ann model(AnnSpec{{2, 4, 1}});
    TrainConfig cfg;
    cfg.max_epochs = 200;
    cfg.patience = 200;
    cfg.seed = 3;
    const auto r = train(model, tr, es, cfg);
    const auto p = predict(model, r.weights, tr);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < p.size(); ++i) correct += (p[i] > 0.5) == (tr.y[i] > 0.5);
    CHECK(correct == tr.size());
    CHECK_FALSE(r.diverged);
}

TEST_CASE("training is deterministic and stops on a flat early-stop curve") {
    const auto tr = separable(60, 4);
    Dataset es = separable(20, 5);
    for (auto& y : es.y) y = 1.0; // single class: AUC is flat
    Ann model(AnnSpec{{2, 3, 1}});
    TrainConfig cfg;
    cfg.max_epochs = 200;
    cfg.patience = 30;
    cfg.seed = 9;
    const auto a = train(model, tr, es, cfg);
    const auto b = train(model, tr, es, cfg);
    CHECK(a.history.size() <= 31);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) CHECK(a.history[i].train_loss == b.history[i].train_loss);
    CHECK(a.weights == b.weights);
}

TEST_CASE("architecture selection") {
    const ModelSpec big = QnnSpec{QnnArch::HybridMQ, Encoding::angle, 3, 3, 3};
    const ModelSpec small = QnnSpec{QnnArch::SQ, Encoding::angle, 1, 3, 3};
    CHECK(select_best({{big, 0.7, true}, {small, 0.7, true}}) == 1);
    CHECK(select_best({{big, 0.71, true}, {small, 0.7, true}}) == 0);
    CHECK(select_best({{small, 0.6, true}}) == 0);

    const std::vector<ModelSpec> grid{big, small, QnnSpec{QnnArch::SQ, Encoding::amplitude, 1, 2, 7}};
    const auto out = architecture_search(grid, [](const ModelSpec& s) { return spec_param_count(s) > 20 ? 0.8 : 0.6; }, 2);
    CHECK(out.best == 0);
    CHECK_FALSE(out.candidates[2].feasible);
    CHECK(std::isinf(out.candidates[2].mean_auc));
}

TEST_CASE("model json round-trip") {
    const ModelSpec spec = QlstmSpec{4, 3, 2};
    TrainResult r;
    r.weights = make_model(spec)->init_params(7);
    r.history = {{1, 0.69, 0.55}, {2, 0.68, std::nan("")}};
    r.best_epoch = 1;
    r.best_es_auc = 0.55;
    const auto back = from_json(to_json(spec, r));
    CHECK(spec_key(back.spec) == spec_key(spec));
    CHECK(back.result.weights == r.weights);
    CHECK(back.result.history.size() == 2);
    CHECK(std::isnan(back.result.history[1].es_auc));
}
