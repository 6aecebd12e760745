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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfb/features.hpp"
#include "qfb/qkernel.hpp"

namespace qfb::svr {

using features::Matrix;

enum class KernelKind { linear, poly, rbf, precomputed };
enum class GammaMode { scale, automatic, value };

std::string to_string(KernelKind k);
std::string to_string(GammaMode g);

struct SvrSpec {
    KernelKind kernel = KernelKind::rbf;
    double C = 1.0;
    double epsilon = 0.1;
    GammaMode gamma_mode = GammaMode::scale;
    double gamma_value = 1.0;
    int degree = 3;
    double coef0 = 0.0;
    double tolerance = 1e-3;  ///< stop when the maximal KKT violation drops below this
    long max_iterations = 0;  ///< 0: max(100000, 100 N)

    void validate() const;
};

/// gamma for "scale" = 1/(d var(X)), "auto" = 1/d, otherwise the fixed value.
double resolve_gamma(const SvrSpec& spec, const Matrix& X_train);

/// linear x.y; rbf exp(-gamma |x-y|^2); poly (gamma x.y + r)^degree.
double classical_kernel(const SvrSpec& spec, double gamma, std::span<const double> x,
                        std::span<const double> y);

/// Rows index A, columns index B.
Matrix gram(const SvrSpec& spec, double gamma, const Matrix& A, const Matrix& B);

struct SvrModel {
    KernelKind kernel = KernelKind::rbf;
    double gamma = 1.0;
    int degree = 3;
    double coef0 = 0.0;
    std::vector<double> coef;            ///< alpha_i - alpha_i^*, one per support vector
    std::vector<std::size_t> support;    ///< training-row index of each support vector
    Matrix support_vectors;              ///< explicit kernels only
    std::size_t n_train = 0;
    double bias = 0.0;
    bool converged = false;
    long iterations = 0;
    double max_violation = 0.0;
    bool kernel_clipped = false;         ///< precomputed kernel was projected onto the PSD cone

    std::size_t n_support() const { return coef.size(); }
};

/// Epsilon-SVR dual solved by two-coefficient (SMO) updates with second-order working
/// set selection. Hitting the iteration cap is reported via `converged`, not thrown.
SvrModel svr_fit(const SvrSpec& spec, const Matrix& X, std::span<const double> y);

/// Same solver on a square symmetric training kernel. Kernels whose minimum eigenvalue
/// is below -1e-6 are clipped to the PSD cone with a warning.
SvrModel svr_fit_precomputed(const SvrSpec& spec, const Matrix& K, std::span<const double> y);

/// Builds the training kernel from a callable and fits as precomputed.
SvrModel svr_fit_callable(const SvrSpec& spec, std::size_t n,
                          const std::function<double(std::size_t, std::size_t)>& kernel,
                          std::span<const double> y);

std::vector<double> svr_predict(const SvrModel& model, const Matrix& X_new);
/// K_cross: rows = new samples, columns = all training samples.
std::vector<double> svr_predict_precomputed(const SvrModel& model, const Matrix& K_cross);

// ---------------------------------------------------------------------------
// Hyper-parameter search
// ---------------------------------------------------------------------------

enum class Family { linear, poly, rbf, quantum_angle, quantum_amplitude };

std::string to_string(Family f);
Family parse_family(const std::string& name);

struct SearchSpace {
    double c_min = 1e-2, c_max = 1e2;
    double eps_min = 1e-3, eps_max = 1.0;
    std::vector<int> degrees{2, 3};
    std::vector<GammaMode> gammas{GammaMode::scale, GammaMode::automatic};
    std::vector<int> qubits{6, 8, 10, 12};
    std::vector<int> layers{0, 1, 2, 3};
    std::vector<int> betas{1, 2, 3};
    int amplitude_dim = 32;
    int p = 5; ///< classical families: vol(p, q) features
    int q = 5;
};

struct Trial {
    Family family = Family::rbf;
    SvrSpec svr;
    std::optional<qkernel::FeatureMapSpec> qmap;
    int p = 5;
    int q = 5;
    double objective = 0.0;
    bool failed = false;
};

/// Deterministic trial sequence: C and epsilon log-uniform, categorical axes uniform.
/// Angle maps use (p, q) = (ceil(n/2), floor(n/2)); amplitude maps split amplitude_dim
/// evenly and set n = ceil(log2 d).
std::vector<Trial> sample_trials(Family family, const SearchSpace& space, int budget,
                                 std::uint64_t seed);

struct SearchResult {
    Trial best;
    std::vector<Trial> trials;
};

/// Seeded random search; the objective is minimised. Trials whose objective throws or
/// returns a non-finite value are marked failed. Throws NumericalError if all fail.
SearchResult hyper_search(Family family, const SearchSpace& space, int budget, std::uint64_t seed,
                          const std::function<double(const Trial&)>& objective);

} // namespace qfb::svr
