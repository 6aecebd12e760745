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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qfb::garch {

struct GarchParams {
    double omega = 1e-6;
    double alpha = 0.05;
    double beta = 0.9;
    double mu = 0.0;

    /// Throws std::invalid_argument unless omega > 0, alpha, beta >= 0, alpha + beta < 1.
    void validate() const;
    double persistence() const { return alpha + beta; }
    double unconditional_variance() const { return omega / (1.0 - alpha - beta); }
};

/// Validated construction.
GarchParams make_params(double omega, double alpha, double beta, double mu = 0.0);

/// Gaussian negative log-likelihood. The pre-sample variance and squared shock are both
/// the sample variance v, so sigma^2_0 = omega + (alpha + beta) v.
double garch_nll(const GarchParams& params, std::span<const double> returns);

/// In-sample conditional variances sigma^2_0..sigma^2_N; the last entry is the
/// one-step forecast past the final observation.
std::vector<double> garch_filter(const GarchParams& params, std::span<const double> returns);

struct FitResult {
    GarchParams params;
    double nll = 0.0;
    int starts_converged = 0;
};

/// Quasi-MLE via Nelder-Mead on an unconstrained reparameterisation, started from a
/// fixed grid. mu is the sample mean.
FitResult garch_fit_detailed(std::span<const double> returns);
GarchParams garch_fit(std::span<const double> returns);

/// omega + alpha (r_t - mu)^2 + beta sigma^2_t.
double garch_forecast(const GarchParams& params, double r_t, double sigma2_t);

std::vector<double> garch_simulate(const GarchParams& params, std::size_t n, std::uint64_t seed);

} // namespace qfb::garch
