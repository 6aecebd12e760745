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

#include <cmath>
#include <random>
#include <stdexcept>

#include "qfb/neural.hpp"

namespace qfb::neural {

void LstmSpec::validate() const {
    if (input_dim < 1 || hidden < 1 || layers < 1) throw std::invalid_argument("LSTM dimensions must be positive");
}

namespace {

std::size_t layer_params(int in, int h) { return static_cast<std::size_t>(4 * h * (in + h) + 8 * h); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct StepCache {
    std::vector<double> x, h_prev, c_prev, i, f, g, o, c, tanh_c, h;
};

StepCache step(int in, int h, const double* w, std::span<const double> x, std::span<const double> h_prev,
               std::span<const double> c_prev) {
    const double* Wih = w;
    const double* Whh = Wih + static_cast<std::size_t>(4 * h) * in;
    const double* bih = Whh + static_cast<std::size_t>(4 * h) * h;
    const double* bhh = bih + 4 * h;
    StepCache s;
    s.x.assign(x.begin(), x.end());
    s.h_prev.assign(h_prev.begin(), h_prev.end());
    s.c_prev.assign(c_prev.begin(), c_prev.end());
    std::vector<double> a(4 * h);
    for (int r = 0; r < 4 * h; ++r) {
        double z = bih[r] + bhh[r];
        for (int k = 0; k < in; ++k) z += Wih[static_cast<std::size_t>(r) * in + k] * x[k];
        for (int k = 0; k < h; ++k) z += Whh[static_cast<std::size_t>(r) * h + k] * h_prev[k];
        a[r] = z;
    }
    s.i.resize(h);
    s.f.resize(h);
    s.g.resize(h);
    s.o.resize(h);
    s.c.resize(h);
    s.tanh_c.resize(h);
    s.h.resize(h);
    for (int k = 0; k < h; ++k) {
        s.i[k] = sigmoid(a[k]);
        s.f[k] = sigmoid(a[h + k]);
        s.g[k] = std::tanh(a[2 * h + k]);
        s.o[k] = sigmoid(a[3 * h + k]);
        s.c[k] = s.f[k] * c_prev[k] + s.i[k] * s.g[k];
        s.tanh_c[k] = std::tanh(s.c[k]);
        s.h[k] = s.o[k] * s.tanh_c[k];
    }
    return s;
}

std::vector<std::vector<double>> rows_of(const Sample& x) {
    std::vector<std::vector<double>> rows(x.rows());
    for (Eigen::Index t = 0; t < x.rows(); ++t) rows[t].assign(x.row(t).data(), x.row(t).data() + x.cols());
    return rows;
}

} // namespace

std::size_t LstmSpec::param_count() const {
    std::size_t n = layer_params(input_dim, hidden);
    for (int l = 1; l < layers; ++l) n += layer_params(hidden, hidden);
    return n + static_cast<std::size_t>(hidden + 1);
}

std::string LstmSpec::key() const { return "h" + std::to_string(hidden) + "/L" + std::to_string(layers); }

CellState lstm_step(int input_dim, int hidden, std::span<const double> weights,
                    std::span<const double> x_t, const CellState& prev) {
    if (weights.size() != layer_params(input_dim, hidden)) throw std::invalid_argument("lstm_step: weight length mismatch");
    if (static_cast<int>(x_t.size()) != input_dim) throw std::invalid_argument("lstm_step: input dimension mismatch");
    const std::vector<double> zeros(hidden, 0.0);
    const auto& hp = prev.h.empty() ? zeros : prev.h;
    const auto& cp = prev.c.empty() ? zeros : prev.c;
    if (static_cast<int>(hp.size()) != hidden || static_cast<int>(cp.size()) != hidden)
        throw std::invalid_argument("lstm_step: state dimension mismatch");
    auto s = step(input_dim, hidden, weights.data(), x_t, hp, cp);
    return {s.h, s.c};
}

Lstm::Lstm(LstmSpec spec) : spec_(spec) { spec_.validate(); }

std::vector<double> Lstm::init_params(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    const double lim = 1.0 / std::sqrt(static_cast<double>(spec_.hidden));
    std::uniform_real_distribution<double> u(-lim, lim);
    std::vector<double> w(param_count());
    for (double& v : w) v = u(rng);
    return w;
}

std::vector<double> Lstm::final_hidden(std::span<const double> w, const Sample& x) const {
    if (w.size() != param_count()) throw std::invalid_argument("LSTM: weight length mismatch");
    if (x.cols() != spec_.input_dim || x.rows() < 1) throw std::invalid_argument("LSTM: input dimension mismatch");
    const int h = spec_.hidden;
    auto seq = rows_of(x);
    std::size_t off = 0;
    for (int l = 0; l < spec_.layers; ++l) {
        const int in = l == 0 ? spec_.input_dim : h;
        std::vector<double> hs(h, 0.0), cs(h, 0.0);
        for (auto& xt : seq) {
            auto s = step(in, h, w.data() + off, xt, hs, cs);
            hs = s.h;
            cs = s.c;
            xt = s.h;
        }
        off += layer_params(in, h);
    }
    return seq.back();
}

double Lstm::forward(std::span<const double> w, const Sample& x) const {
    const auto hT = final_hidden(w, x);
    const double* r = w.data() + w.size() - (spec_.hidden + 1);
    double z = r[spec_.hidden];
    for (int k = 0; k < spec_.hidden; ++k) z += r[k] * hT[k];
    return sigmoid(z);
}

double Lstm::forward_grad(std::span<const double> w, const Sample& x, std::span<double> grad) const {
    if (w.size() != param_count() || grad.size() != w.size()) throw std::invalid_argument("LSTM: weight length mismatch");
    if (x.cols() != spec_.input_dim || x.rows() < 1) throw std::invalid_argument("LSTM: input dimension mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    const int h = spec_.hidden;
    const std::size_t T = static_cast<std::size_t>(x.rows());
    std::vector<std::vector<StepCache>> cache(spec_.layers);
    std::vector<std::size_t> offs(spec_.layers);
    auto seq = rows_of(x);
    std::size_t off = 0;
    for (int l = 0; l < spec_.layers; ++l) {
        const int in = l == 0 ? spec_.input_dim : h;
        offs[l] = off;
        std::vector<double> hs(h, 0.0), cs(h, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            cache[l].push_back(step(in, h, w.data() + off, seq[t], hs, cs));
            hs = cache[l].back().h;
            cs = cache[l].back().c;
            seq[t] = hs;
        }
        off += layer_params(in, h);
    }
    const std::size_t roff = off;
    const auto& hT = seq.back();
    double z = w[roff + h];
    for (int k = 0; k < h; ++k) z += w[roff + k] * hT[k];
    const double p = sigmoid(z);
    const double dz = p * (1.0 - p);
    for (int k = 0; k < h; ++k) grad[roff + k] = dz * hT[k];
    grad[roff + h] = dz;

    // dh_ext[t]: gradient flowing into layer output h_t from above.
    std::vector<std::vector<double>> dh_ext(T, std::vector<double>(h, 0.0));
    for (int k = 0; k < h; ++k) dh_ext[T - 1][k] = dz * w[roff + k];

    for (int l = spec_.layers - 1; l >= 0; --l) {
        const int in = l == 0 ? spec_.input_dim : h;
        const double* Wih = w.data() + offs[l];
        const double* Whh = Wih + static_cast<std::size_t>(4 * h) * in;
        double* gWih = grad.data() + offs[l];
        double* gWhh = gWih + static_cast<std::size_t>(4 * h) * in;
        double* gbih = gWhh + static_cast<std::size_t>(4 * h) * h;
        double* gbhh = gbih + 4 * h;
        std::vector<double> dh_next(h, 0.0), dc_next(h, 0.0), da(4 * h);
        std::vector<std::vector<double>> dx(T, std::vector<double>(in, 0.0));
        for (std::size_t t = T; t-- > 0;) {
            const auto& s = cache[l][t];
            for (int k = 0; k < h; ++k) {
                const double dh = dh_ext[t][k] + dh_next[k];
                const double dc = dc_next[k] + dh * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
                da[k] = dc * s.g[k] * s.i[k] * (1.0 - s.i[k]);
                da[h + k] = dc * s.c_prev[k] * s.f[k] * (1.0 - s.f[k]);
                da[2 * h + k] = dc * s.i[k] * (1.0 - s.g[k] * s.g[k]);
                da[3 * h + k] = dh * s.tanh_c[k] * s.o[k] * (1.0 - s.o[k]);
                dc_next[k] = dc * s.f[k];
            }
            std::fill(dh_next.begin(), dh_next.end(), 0.0);
            for (int r = 0; r < 4 * h; ++r) {
                gbih[r] += da[r];
                gbhh[r] += da[r];
                for (int k = 0; k < in; ++k) {
                    gWih[static_cast<std::size_t>(r) * in + k] += da[r] * s.x[k];
                    dx[t][k] += Wih[static_cast<std::size_t>(r) * in + k] * da[r];
                }
                for (int k = 0; k < h; ++k) {
                    gWhh[static_cast<std::size_t>(r) * h + k] += da[r] * s.h_prev[k];
                    dh_next[k] += Whh[static_cast<std::size_t>(r) * h + k] * da[r];
                }
            }
        }
        if (l > 0) dh_ext = std::move(dx);
    }
    return p;
}

} // namespace qfb::neural
