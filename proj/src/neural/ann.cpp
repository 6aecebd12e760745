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

Sample as_sample(std::span<const double> x) {
    Sample s(1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) s(0, static_cast<Eigen::Index>(j)) = x[j];
    return s;
}

std::string to_string(Activation a) {
    switch (a) {
    case Activation::tanh: return "tanh";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    }
    return {};
}

Activation parse_activation(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "relu") return Activation::relu;
    if (s == "sigmoid") return Activation::sigmoid;
    throw std::invalid_argument("unknown activation: " + s);
}

void AnnSpec::validate() const {
    if (layer_sizes.size() < 2) throw std::invalid_argument("ANN needs input and output layers");
    for (int n : layer_sizes)
        if (n < 1) throw std::invalid_argument("ANN layer sizes must be positive");
    if (layer_sizes.back() != 1) throw std::invalid_argument("ANN output layer must have size 1");
}

std::size_t AnnSpec::param_count() const {
    std::size_t n = 0;
    for (std::size_t l = 1; l < layer_sizes.size(); ++l)
        n += static_cast<std::size_t>(layer_sizes[l - 1] + 1) * static_cast<std::size_t>(layer_sizes[l]);
    return n;
}

std::string AnnSpec::key() const {
    std::string k;
    for (std::size_t l = 0; l < layer_sizes.size(); ++l) {
        if (l) k += '-';
        k += std::to_string(layer_sizes[l]);
    }
    return k;
}

AnnSpec baseline_ann(int d) {
    switch (d) {
    case 3: return {{3, 11, 1}};
    case 7: return {{7, 32, 16, 1}};
    case 64: return {{64, 32, 1}};
    default: return {{d, 11, 1}};
    }
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double activate(Activation a, double z) {
    switch (a) {
    case Activation::tanh: return std::tanh(z);
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::sigmoid: return sigmoid(z);
    }
    return z;
}

/// Derivative expressed through the activation output.
double activate_grad(Activation a, double z, double out) {
    switch (a) {
    case Activation::tanh: return 1.0 - out * out;
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::sigmoid: return out * (1.0 - out);
    }
    return 1.0;
}

void check_input(const AnnSpec& spec, std::size_t n_w, std::size_t d) {
    if (n_w != spec.param_count()) throw std::invalid_argument("ANN: weight vector length mismatch");
    if (static_cast<int>(d) != spec.layer_sizes.front())
        throw std::invalid_argument("ANN: input dimension mismatch");
}

/// Pre-activations and outputs for every layer; outputs[0] is the input.
void run(const AnnSpec& spec, std::span<const double> w, std::span<const double> x,
         std::vector<std::vector<double>>& pre, std::vector<std::vector<double>>& out) {
    const std::size_t nl = spec.layer_sizes.size();
    pre.assign(nl, {});
    out.assign(nl, {});
    out[0].assign(x.begin(), x.end());
    std::size_t off = 0;
    for (std::size_t l = 1; l < nl; ++l) {
        const int n_in = spec.layer_sizes[l - 1], n_out = spec.layer_sizes[l];
        const double* W = w.data() + off;
        const double* b = W + static_cast<std::size_t>(n_in) * n_out;
        off += static_cast<std::size_t>(n_in + 1) * n_out;
        pre[l].resize(n_out);
        out[l].resize(n_out);
        const bool last = l + 1 == nl;
        for (int o = 0; o < n_out; ++o) {
            double z = b[o];
            for (int i = 0; i < n_in; ++i) z += W[static_cast<std::size_t>(o) * n_in + i] * out[l - 1][i];
            pre[l][o] = z;
            out[l][o] = last ? sigmoid(z) : activate(spec.hidden, z);
        }
    }
}

std::span<const double> row_span(const Sample& x) {
    if (x.rows() != 1) throw std::invalid_argument("feed-forward model expects a single-row sample");
    return {x.data(), static_cast<std::size_t>(x.cols())};
}

} // namespace

double ann_forward(const AnnSpec& spec, std::span<const double> w, std::span<const double> x) {
    spec.validate();
    check_input(spec, w.size(), x.size());
    std::vector<std::vector<double>> pre, out;
    run(spec, w, x, pre, out);
    return out.back()[0];
}

Ann::Ann(AnnSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

std::vector<double> Ann::init_params(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<double> w(param_count(), 0.0);
    std::size_t off = 0;
    for (std::size_t l = 1; l < spec_.layer_sizes.size(); ++l) {
        const int n_in = spec_.layer_sizes[l - 1], n_out = spec_.layer_sizes[l];
        const double lim = std::sqrt(6.0 / (n_in + n_out));
        std::uniform_real_distribution<double> u(-lim, lim);
        for (int k = 0; k < n_in * n_out; ++k) w[off + k] = u(rng);
        off += static_cast<std::size_t>(n_in + 1) * n_out;
    }
    return w;
}

double Ann::forward(std::span<const double> w, const Sample& x) const {
    return ann_forward(spec_, w, row_span(x));
}

double Ann::forward_grad(std::span<const double> w, const Sample& x, std::span<double> grad) const {
    const auto xs = row_span(x);
    check_input(spec_, w.size(), xs.size());
    if (grad.size() != w.size()) throw std::invalid_argument("ANN: gradient buffer size mismatch");
    std::vector<std::vector<double>> pre, out;
    run(spec_, w, xs, pre, out);
    const std::size_t nl = spec_.layer_sizes.size();
    const double p = out.back()[0];

    std::vector<std::size_t> offsets(nl, 0);
    for (std::size_t l = 1, off = 0; l < nl; ++l) {
        offsets[l] = off;
        off += static_cast<std::size_t>(spec_.layer_sizes[l - 1] + 1) * spec_.layer_sizes[l];
    }
    std::vector<double> delta{p * (1.0 - p)};
    for (std::size_t l = nl - 1; l >= 1; --l) {
        const int n_in = spec_.layer_sizes[l - 1], n_out = spec_.layer_sizes[l];
        double* gW = grad.data() + offsets[l];
        double* gb = gW + static_cast<std::size_t>(n_in) * n_out;
        const double* W = w.data() + offsets[l];
        std::vector<double> prev(n_in, 0.0);
        for (int o = 0; o < n_out; ++o) {
            gb[o] = delta[o];
            for (int i = 0; i < n_in; ++i) {
                gW[static_cast<std::size_t>(o) * n_in + i] = delta[o] * out[l - 1][i];
                prev[i] += W[static_cast<std::size_t>(o) * n_in + i] * delta[o];
            }
        }
        if (l == 1) break;
        for (int i = 0; i < n_in; ++i) prev[i] *= activate_grad(spec_.hidden, pre[l - 1][i], out[l - 1][i]);
        delta = std::move(prev);
    }
    return p;
}

} // namespace qfb::neural
