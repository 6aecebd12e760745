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

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "circuits.hpp"
#include "qfb/neural.hpp"

namespace qfb::neural {

namespace {

constexpr int kBlocks = 6;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Layout {
    int h, F, L;
    std::size_t emb_w = 0, emb_b, block0, block_size, readout;

    Layout(const QlstmSpec& s) : h(s.hidden), F(s.input_dim), L(s.layers) {
        emb_b = static_cast<std::size_t>(h) * (h + F);
        block0 = emb_b + h;
        block_size = vqc_block_params(h, L);
        readout = block0 + kBlocks * block_size;
    }
    std::size_t block(int k) const { return block0 + k * block_size; }
};

std::vector<double> embed(const Layout& lay, std::span<const double> w, std::span<const double> u) {
    const int n_in = lay.h + lay.F;
    std::vector<double> v(lay.h);
    for (int r = 0; r < lay.h; ++r) {
        double z = w[lay.emb_b + r];
        for (int k = 0; k < n_in; ++k) z += w[lay.emb_w + static_cast<std::size_t>(r) * n_in + k] * u[k];
        v[r] = z;
    }
    return v;
}

std::span<const double> block_params(const Layout& lay, std::span<const double> w, int k) {
    return w.subspan(lay.block(k), lay.block_size);
}

struct Gates {
    std::vector<double> f, i, g, o, c, tanh_c, m;
};

Gates gate_algebra(int h, const std::vector<double>& E0, const std::vector<double>& E1,
                   const std::vector<double>& E2, const std::vector<double>& E3,
                   const std::vector<double>& c_prev) {
    Gates s;
    s.f.resize(h); s.i.resize(h); s.g.resize(h); s.o.resize(h);
    s.c.resize(h); s.tanh_c.resize(h); s.m.resize(h);
    for (int k = 0; k < h; ++k) {
        s.f[k] = sigmoid(E0[k]);
        s.i[k] = sigmoid(E1[k]);
        s.g[k] = std::tanh(E2[k]);
        s.o[k] = sigmoid(E3[k]);
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.g[k];
        s.tanh_c[k] = std::tanh(s.c[k]);
        s.m[k] = s.o[k] * s.tanh_c[k];
    }
    return s;
}

std::vector<double> concat(const std::vector<double>& h, std::span<const double> x) {
    std::vector<double> u(h);
    u.insert(u.end(), x.begin(), x.end());
    return u;
}

/// Accumulates parameter gradients of one circuit block and returns d/d input.
std::vector<double> block_backward(const Layout& lay, std::span<const double> w, std::span<double> grad,
                                   int k, const detail::BlockGrad& bg, std::span<const double> v,
                                   std::span<const double> gE) {
    const int q = lay.h;
    const auto params = block_params(lay, w, k);
    double* ga = grad.data() + lay.block(k);
    double* gb = ga + q;
    double* gth = gb + q;
    const std::size_t n_th = lay.block_size - 2 * q;
    std::vector<double> dv(q, 0.0);
    for (int j = 0; j < q; ++j) {
        double du = 0.0;
        for (int r = 0; r < q; ++r) du += gE[r] * bg.dE_du[r * q + j];
        ga[j] += du * v[j];
        gb[j] += du;
        dv[j] = du * params[j];
    }
    for (int r = 0; r < q; ++r) {
        if (gE[r] == 0.0) continue;
        for (std::size_t j = 0; j < n_th; ++j) gth[j] += gE[r] * bg.dE_dth[r * n_th + j];
    }
    return dv;
}

void check(const QlstmSpec& s, std::size_t n_w, const Sample& x) {
    if (n_w != s.param_count()) throw std::invalid_argument("QLSTM: weight length mismatch");
    if (x.cols() != s.input_dim || x.rows() < 1) throw std::invalid_argument("QLSTM: input dimension mismatch");
}

} // namespace

void QlstmSpec::validate() const {
    if (input_dim < 1 || hidden < 1 || layers < 1) throw std::invalid_argument("QLSTM dimensions must be positive");
    if (hidden > qsim::kMaxQubits) throw std::invalid_argument("QLSTM hidden size exceeds the qubit limit");
}

std::size_t QlstmSpec::param_count() const {
    const std::size_t h = hidden, F = input_dim;
    return (h + F) * h + h + kBlocks * vqc_block_params(hidden, layers) + h + 1;
}

std::string QlstmSpec::key() const { return "h" + std::to_string(hidden) + "/L" + std::to_string(layers); }

CellState qlstm_step(const QlstmSpec& spec, std::span<const double> w, std::span<const double> x_t,
                     const CellState& prev) {
    spec.validate();
    if (w.size() != spec.param_count()) throw std::invalid_argument("qlstm_step: weight length mismatch");
    if (static_cast<int>(x_t.size()) != spec.input_dim) throw std::invalid_argument("qlstm_step: input dimension mismatch");
    const Layout lay(spec);
    const int h = spec.hidden;
    const std::vector<double> zeros(h, 0.0);
    const auto& hp = prev.h.empty() ? zeros : prev.h;
    const auto& cp = prev.c.empty() ? zeros : prev.c;
    if (static_cast<int>(hp.size()) != h || static_cast<int>(cp.size()) != h)
        throw std::invalid_argument("qlstm_step: state dimension mismatch");
    const auto v = embed(lay, w, concat(hp, x_t));
    std::vector<std::vector<double>> E(4);
    for (int k = 0; k < 4; ++k) E[k] = vqc_block(h, spec.layers, block_params(lay, w, k), v);
    const auto g = gate_algebra(h, E[0], E[1], E[2], E[3], cp);
    return {vqc_block(h, spec.layers, block_params(lay, w, 4), g.m), g.c};
}

Qlstm::Qlstm(QlstmSpec spec) : spec_(spec) { spec_.validate(); }

std::vector<double> Qlstm::init_params(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    const Layout lay(spec_);
    const int h = spec_.hidden;
    std::vector<double> w(param_count(), 0.0);
    const double lim = std::sqrt(6.0 / (2 * h + spec_.input_dim));
    std::uniform_real_distribution<double> u(-lim, lim);
    for (std::size_t k = 0; k < lay.emb_b; ++k) w[k] = u(rng);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    for (int b = 0; b < kBlocks; ++b) {
        const std::size_t o = lay.block(b);
        for (int j = 0; j < h; ++j) {
            w[o + j] = 1.0 + jitter(rng);
            w[o + h + j] = jitter(rng);
        }
        for (std::size_t j = 2 * h; j < lay.block_size; ++j) w[o + j] = ang(rng);
    }
    std::uniform_real_distribution<double> r(-0.5, 0.5);
    for (std::size_t k = lay.readout; k < w.size(); ++k) w[k] = r(rng);
    return w;
}

std::vector<double> Qlstm::final_hidden(std::span<const double> w, const Sample& x) const {
    check(spec_, w.size(), x);
    CellState st{std::vector<double>(spec_.hidden, 0.0), std::vector<double>(spec_.hidden, 0.0)};
    for (Eigen::Index t = 0; t < x.rows(); ++t)
        st = qlstm_step(spec_, w, {x.row(t).data(), static_cast<std::size_t>(x.cols())}, st);
    return st.h;
}

double Qlstm::forward(std::span<const double> w, const Sample& x) const {
    check(spec_, w.size(), x);
    const Layout lay(spec_);
    const int h = spec_.hidden;
    std::vector<double> hs(h, 0.0), cs(h, 0.0), m;
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        const auto v = embed(lay, w, concat(hs, {x.row(t).data(), static_cast<std::size_t>(x.cols())}));
        std::vector<std::vector<double>> E(4);
        for (int k = 0; k < 4; ++k) E[k] = vqc_block(h, spec_.layers, block_params(lay, w, k), v);
        const auto g = gate_algebra(h, E[0], E[1], E[2], E[3], cs);
        cs = g.c;
        m = g.m;
        hs = vqc_block(h, spec_.layers, block_params(lay, w, 4), m);
    }
    const auto y = vqc_block(h, spec_.layers, block_params(lay, w, 5), m);
    double z = w[lay.readout + h];
    for (int k = 0; k < h; ++k) z += w[lay.readout + k] * y[k];
    return sigmoid(z);
}

double Qlstm::forward_grad(std::span<const double> w, const Sample& x, std::span<double> grad) const {
    check(spec_, w.size(), x);
    if (grad.size() != w.size()) throw std::invalid_argument("QLSTM: gradient buffer size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const Layout lay(spec_);
    const int h = spec_.hidden, L = spec_.layers;
    const std::size_t T = static_cast<std::size_t>(x.rows());

    struct Step {
        std::vector<double> u, v, c_prev;
        std::array<detail::BlockGrad, 5> blocks;
        Gates g;
    };
    std::vector<Step> steps(T);
    std::vector<double> hs(h, 0.0), cs(h, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        Step& s = steps[t];
        s.u = concat(hs, {x.row(t).data(), static_cast<std::size_t>(x.cols())});
        s.v = embed(lay, w, s.u);
        s.c_prev = cs;
        for (int k = 0; k < 4; ++k) s.blocks[k] = detail::vqc_block_grad(h, L, block_params(lay, w, k), s.v);
        s.g = gate_algebra(h, s.blocks[0].E, s.blocks[1].E, s.blocks[2].E, s.blocks[3].E, cs);
        s.blocks[4] = detail::vqc_block_grad(h, L, block_params(lay, w, 4), s.g.m);
        cs = s.g.c;
        hs = s.blocks[4].E;
    }
    const auto& mT = steps.back().g.m;
    const auto out = detail::vqc_block_grad(h, L, block_params(lay, w, 5), mT);
    double z = w[lay.readout + h];
    for (int k = 0; k < h; ++k) z += w[lay.readout + k] * out.E[k];
    const double p = sigmoid(z);
    const double dz = p * (1.0 - p);
    std::vector<double> gy(h);
    for (int k = 0; k < h; ++k) {
        grad[lay.readout + k] = dz * out.E[k];
        gy[k] = dz * w[lay.readout + k];
    }
    grad[lay.readout + h] = dz;

    std::vector<double> dm_extra = block_backward(lay, w, grad, 5, out, mT, gy);
    std::vector<double> dh(h, 0.0), dc(h, 0.0);
    const int n_in = h + spec_.input_dim;
    for (std::size_t t = T; t-- > 0;) {
        const Step& s = steps[t];
        auto dm = block_backward(lay, w, grad, 4, s.blocks[4], s.g.m, dh);
        if (t == T - 1)
            for (int k = 0; k < h; ++k) dm[k] += dm_extra[k];
        std::array<std::vector<double>, 4> dE;
        for (auto& v : dE) v.assign(h, 0.0);
        for (int k = 0; k < h; ++k) {
            const double dck = dc[k] + dm[k] * s.g.o[k] * (1.0 - s.g.tanh_c[k] * s.g.tanh_c[k]);
            dE[0][k] = dck * s.c_prev[k] * s.g.f[k] * (1.0 - s.g.f[k]);
            dE[1][k] = dck * s.g.g[k] * s.g.i[k] * (1.0 - s.g.i[k]);
            dE[2][k] = dck * s.g.i[k] * (1.0 - s.g.g[k] * s.g.g[k]);
            dE[3][k] = dm[k] * s.g.tanh_c[k] * s.g.o[k] * (1.0 - s.g.o[k]);
            dc[k] = dck * s.g.f[k];
        }
        std::vector<double> dv(h, 0.0);
        for (int b = 0; b < 4; ++b) {
            const auto d = block_backward(lay, w, grad, b, s.blocks[b], s.v, dE[b]);
            for (int k = 0; k < h; ++k) dv[k] += d[k];
        }
        std::fill(dh.begin(), dh.end(), 0.0);
        for (int r = 0; r < h; ++r) {
            grad[lay.emb_b + r] += dv[r];
            for (int k = 0; k < n_in; ++k) {
                grad[lay.emb_w + static_cast<std::size_t>(r) * n_in + k] += dv[r] * s.u[k];
                if (k < h) dh[k] += w[lay.emb_w + static_cast<std::size_t>(r) * n_in + k] * dv[r];
            }
        }
    }
    return p;
}

} // namespace qfb::neural
