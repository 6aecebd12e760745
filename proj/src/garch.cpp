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

#include "qfb/garch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <spdlog/spdlog.h>

#include "qfb/error.hpp"

namespace qfb::garch {

void GarchParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("GARCH: omega must be > 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("GARCH: alpha must be >= 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("GARCH: beta must be >= 0");
    if (!(alpha + beta < 1.0)) throw std::invalid_argument("GARCH: alpha + beta must be < 1");
}

GarchParams make_params(double omega, double alpha, double beta, double mu) {
    GarchParams p{omega, alpha, beta, mu};
    p.validate();
    return p;
}

namespace {

double sample_variance(std::span<const double> r, double mu) {
    double s = 0.0;
    for (double v : r) s += (v - mu) * (v - mu);
    return s / static_cast<double>(r.size());
}

double sample_mean(std::span<const double> r) {
    double s = 0.0;
    for (double v : r) s += v;
    return s / static_cast<double>(r.size());
}

double nll_unchecked(const GarchParams& p, std::span<const double> r, double var0) {
    constexpr double kLog2Pi = 1.8378770664093453;
    double s2 = p.omega + (p.alpha + p.beta) * var0, nll = 0.0;
    for (double v : r) {
        const double e = v - p.mu;
        nll += 0.5 * (kLog2Pi + std::log(s2) + e * e / s2);
        s2 = p.omega + p.alpha * e * e + p.beta * s2;
    }
    return nll;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct FitData {
    std::span<const double> r;
    double mu;
    double var0;
};

GarchParams decode(const gsl_vector* u, double mu) {
    const double s = logistic(gsl_vector_get(u, 1));
    const double a = s * logistic(gsl_vector_get(u, 2));
    return {std::exp(gsl_vector_get(u, 0)), a, s - a, mu};
}

double objective(const gsl_vector* u, void* raw) {
    const auto* d = static_cast<const FitData*>(raw);
    const GarchParams p = decode(u, d->mu);
    if (!(p.omega > 0.0) || !std::isfinite(p.omega) || !(p.alpha + p.beta < 1.0))
        return std::numeric_limits<double>::max();
    const double v = nll_unchecked(p, d->r, d->var0);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

} // namespace

double garch_nll(const GarchParams& params, std::span<const double> returns) {
    params.validate();
    if (returns.size() < 10) throw std::invalid_argument("GARCH: need at least 10 observations");
    const double var0 = sample_variance(returns, sample_mean(returns));
    if (!(var0 > 0.0)) throw NumericalError("GARCH: returns have zero variance");
    return nll_unchecked(params, returns, var0);
}

std::vector<double> garch_filter(const GarchParams& params, std::span<const double> returns) {
    params.validate();
    if (returns.empty()) throw std::invalid_argument("GARCH: empty return series");
    std::vector<double> s2(returns.size() + 1);
    const double v = sample_variance(returns, sample_mean(returns));
    s2[0] = params.omega + (params.alpha + params.beta) * (v > 0.0 ? v : params.omega);
    for (std::size_t t = 0; t < returns.size(); ++t) s2[t + 1] = garch_forecast(params, returns[t], s2[t]);
    return s2;
}

FitResult garch_fit_detailed(std::span<const double> returns) {
    if (returns.size() < 10) throw std::invalid_argument("GARCH: need at least 10 observations");
    if (returns.size() < 100)
        spdlog::warn("GARCH fit on only {} observations", returns.size());
    FitData data{returns, sample_mean(returns), 0.0};
    data.var0 = sample_variance(returns, data.mu);
    if (!(data.var0 > 0.0) || !std::isfinite(data.var0))
        throw NumericalError("GARCH: degenerate likelihood (zero-variance returns)");

    gsl_set_error_handler_off();
    gsl_multimin_function fn{&objective, 3, &data};
    const gsl_multimin_fminimizer_type* type = gsl_multimin_fminimizer_nmsimplex2;
    gsl_multimin_fminimizer* solver = gsl_multimin_fminimizer_alloc(type, 3);
    gsl_vector* x = gsl_vector_alloc(3);
    gsl_vector* step = gsl_vector_alloc(3);
    gsl_vector_set_all(step, 0.5);

    FitResult best;
    best.nll = std::numeric_limits<double>::infinity();
    constexpr std::array<double, 3> kPersistence{0.5, 0.9, 0.98};
    constexpr std::array<double, 3> kAlphaShare{0.05, 0.15, 0.4};
    for (double s : kPersistence) {
        for (double share : kAlphaShare) {
            const double omega0 = data.var0 * (1.0 - s);
            gsl_vector_set(x, 0, std::log(omega0));
            gsl_vector_set(x, 1, logit(s));
            gsl_vector_set(x, 2, logit(share));
            gsl_multimin_fminimizer_set(solver, &fn, x, step);
            int status = GSL_CONTINUE;
            for (int it = 0; it < 2000 && status == GSL_CONTINUE; ++it) {
                if (gsl_multimin_fminimizer_iterate(solver)) break;
                status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver), 1e-7);
            }
            const double f = solver->fval;
            if (status == GSL_SUCCESS) ++best.starts_converged;
            if (std::isfinite(f) && f < std::numeric_limits<double>::max() && f < best.nll) {
                best.nll = f;
                best.params = decode(solver->x, data.mu);
            }
        }
    }
    gsl_vector_free(step);
    gsl_vector_free(x);
    gsl_multimin_fminimizer_free(solver);
    if (!std::isfinite(best.nll)) throw NumericalError("GARCH: no start produced a finite likelihood");
    if (best.starts_converged == 0) throw NumericalError("GARCH: Nelder-Mead failed to converge from every start");
    return best;
}

GarchParams garch_fit(std::span<const double> returns) { return garch_fit_detailed(returns).params; }

double garch_forecast(const GarchParams& params, double r_t, double sigma2_t) {
    if (!(sigma2_t > 0.0)) throw std::invalid_argument("GARCH: sigma^2_t must be > 0");
    const double e = r_t - params.mu;
    return params.omega + params.alpha * e * e + params.beta * sigma2_t;
}

std::vector<double> garch_simulate(const GarchParams& params, std::size_t n, std::uint64_t seed) {
    params.validate();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> r(n);
    double s2 = params.unconditional_variance();
    for (std::size_t t = 0; t < n; ++t) {
        const double e = std::sqrt(s2) * z(rng);
        r[t] = params.mu + e;
        s2 = params.omega + params.alpha * e * e + params.beta * s2;
    }
    return r;
}

} // namespace qfb::garch
