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

#include "qfb/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

#include "qfb/error.hpp"
#include "qfb/simd.hpp"

namespace qfb::svr {

std::string to_string(KernelKind k) {
    switch (k) {
    case KernelKind::linear: return "linear";
    case KernelKind::poly: return "poly";
    case KernelKind::rbf: return "rbf";
    case KernelKind::precomputed: return "precomputed";
    }
    return {};
}

std::string to_string(GammaMode g) {
    switch (g) {
    case GammaMode::scale: return "scale";
    case GammaMode::automatic: return "auto";
    case GammaMode::value: return "value";
    }
    return {};
}

void SvrSpec::validate() const {
    if (!(C > 0.0)) throw std::invalid_argument("SVR: C must be positive");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("SVR: epsilon must be non-negative");
    if (kernel == KernelKind::poly && degree < 1)
        throw std::invalid_argument("SVR: polynomial degree must be >= 1");
    if (coef0 < 0.0) throw std::invalid_argument("SVR: coef0 must be non-negative");
    if (gamma_mode == GammaMode::value && !(gamma_value > 0.0))
        throw std::invalid_argument("SVR: gamma must be positive");
    if (!(tolerance > 0.0)) throw std::invalid_argument("SVR: tolerance must be positive");
}

double resolve_gamma(const SvrSpec& spec, const Matrix& X) {
    const double d = static_cast<double>(X.cols());
    switch (spec.gamma_mode) {
    case GammaMode::automatic: return 1.0 / d;
    case GammaMode::value: return spec.gamma_value;
    case GammaMode::scale: {
        const double n = static_cast<double>(X.size());
        const double m = X.sum() / n;
        const double var = (X.array() - m).square().sum() / n;
        return var > 0.0 ? 1.0 / (d * var) : 1.0;
    }
    }
    return 1.0;
}

double classical_kernel(const SvrSpec& spec, double gamma, std::span<const double> x,
                        std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("kernel: dimension mismatch");
    switch (spec.kernel) {
    case KernelKind::linear: return simd::dot(x, y);
    case KernelKind::rbf: return std::exp(-gamma * simd::squared_distance(x, y));
    case KernelKind::poly: return std::pow(gamma * simd::dot(x, y) + spec.coef0, spec.degree);
    case KernelKind::precomputed: break;
    }
    throw std::invalid_argument("kernel: precomputed kernels have no closed form");
}

Matrix gram(const SvrSpec& spec, double gamma, const Matrix& A, const Matrix& B) {
    if (A.cols() != B.cols()) throw std::invalid_argument("gram: dimension mismatch");
    Matrix K(A.rows(), B.rows());
    const auto d = static_cast<std::size_t>(A.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < B.rows(); ++j)
            K(i, j) = classical_kernel(spec, gamma, {A.row(i).data(), d}, {B.row(j).data(), d});
    return K;
}

namespace {

struct DualSolution {
    std::vector<double> coef; // alpha - alpha*, length l
    double bias = 0.0;
    bool converged = false;
    long iterations = 0;
    double max_violation = 0.0;
};

// Epsilon-SVR as a 2l-variable box-constrained QP with one equality constraint:
// min 1/2 a'Qa + p'a, y'a = 0, 0 <= a <= C, where for t < l: y_t = +1,
// p_t = eps - z_t; for t >= l: y_t = -1, p_t = eps + z_t; Q_st = y_s y_t K.
DualSolution solve_dual(const Matrix& K, std::span<const double> z, double C, double eps,
                        double tol, long max_iter) {
    const std::size_t l = z.size();
    const std::size_t n = 2 * l;
    constexpr double kTau = 1e-12;
    std::vector<double> alpha(n, 0.0), G(n);
    std::vector<signed char> y(n);
    for (std::size_t t = 0; t < l; ++t) {
        y[t] = 1;
        y[t + l] = -1;
        G[t] = eps - z[t];
        G[t + l] = eps + z[t];
    }
    auto kidx = [l](std::size_t t) { return t < l ? t : t - l; };
    auto Q = [&](std::size_t s, std::size_t t) {
        return static_cast<double>(y[s] * y[t]) * K(kidx(s), kidx(t));
    };
    auto is_upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto is_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    DualSolution sol;
    if (max_iter <= 0) max_iter = std::max<long>(100000, 100 * static_cast<long>(l));
    long iter = 0;
    for (; iter < max_iter; ++iter) {
        // Second-order working set selection.
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            const bool up = y[t] == 1 ? !is_upper(t) : !is_lower(t);
            if (up && -y[t] * G[t] >= gmax) {
                gmax = -y[t] * G[t];
                i = t;
            }
        }
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::size_t j = n;
        double obj_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            const bool low = y[t] == 1 ? !is_lower(t) : !is_upper(t);
            if (!low) continue;
            const double yg = y[t] * G[t];
            gmax2 = std::max(gmax2, yg);
            if (i == n) continue;
            const double b = gmax + yg;
            if (b > 0.0) {
                double a = K(kidx(i), kidx(i)) + K(kidx(t), kidx(t)) - 2.0 * y[i] * y[t] * Q(i, t);
                if (a <= 0.0) a = kTau;
                const double obj = -(b * b) / a;
                if (obj <= obj_min) {
                    obj_min = obj;
                    j = t;
                }
            }
        }
        sol.max_violation = gmax + gmax2;
        if (i == n || j == n || gmax + gmax2 < tol) {
            sol.converged = true;
            break;
        }

        const double Qij = Q(i, j);
        const double Qii = K(kidx(i), kidx(i)), Qjj = K(kidx(j), kidx(j));
        const double old_ai = alpha[i], old_aj = alpha[j];
        if (y[i] != y[j]) {
            double quad = Qii + Qjj + 2.0 * Qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
            }
            if (diff > 0.0) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = C - diff; }
            } else {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = C + diff; }
            }
        } else {
            double quad = Qii + Qjj - 2.0 * Qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (G[i] - G[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) { alpha[i] = C; alpha[j] = sum - C; }
            } else {
                if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
            }
            if (sum > C) {
                if (alpha[j] > C) { alpha[j] = C; alpha[i] = sum - C; }
            } else {
                if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
            }
        }
        const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
        const std::size_t ki = kidx(i), kj = kidx(j);
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t kt = kidx(t);
            G[t] += y[t] * (y[i] * K(ki, kt) * dai + y[j] * K(kj, kt) * daj);
        }
    }
    sol.iterations = iter;

    // Bias from free variables, or the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    long nr_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * G[t];
        if (is_upper(t)) {
            if (y[t] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (is_lower(t)) {
            if (y[t] == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++nr_free;
            sum_free += yg;
        }
    }
    const double rho = nr_free > 0 ? sum_free / nr_free : 0.5 * (ub + lb);
    sol.bias = -rho;
    sol.coef.resize(l);
    for (std::size_t t = 0; t < l; ++t) sol.coef[t] = alpha[t] - alpha[t + l];
    return sol;
}

SvrModel model_from(const DualSolution& sol, const SvrSpec& spec) {
    SvrModel m;
    m.kernel = spec.kernel;
    m.degree = spec.degree;
    m.coef0 = spec.coef0;
    m.n_train = sol.coef.size();
    m.bias = sol.bias;
    m.converged = sol.converged;
    m.iterations = sol.iterations;
    m.max_violation = sol.max_violation;
    for (std::size_t t = 0; t < sol.coef.size(); ++t)
        if (sol.coef[t] != 0.0) {
            m.coef.push_back(sol.coef[t]);
            m.support.push_back(t);
        }
    if (!sol.converged)
        spdlog::warn("SVR solver hit the iteration cap ({} iterations, violation {:.3g})",
                     sol.iterations, sol.max_violation);
    return m;
}

void check_training_inputs(std::size_t n, std::span<const double> y) {
    if (n < 2) throw std::invalid_argument("SVR: need at least 2 training samples");
    if (y.size() != n) throw std::invalid_argument("SVR: target length mismatch");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("SVR: non-finite target");
}

} // namespace

SvrModel svr_fit(const SvrSpec& spec, const Matrix& X, std::span<const double> y) {
    spec.validate();
    if (spec.kernel == KernelKind::precomputed)
        throw std::invalid_argument("svr_fit: use svr_fit_precomputed for precomputed kernels");
    check_training_inputs(static_cast<std::size_t>(X.rows()), y);
    const double gamma = resolve_gamma(spec, X);
    const Matrix K = gram(spec, gamma, X, X);
    auto model = model_from(
        solve_dual(K, y, spec.C, spec.epsilon, spec.tolerance, spec.max_iterations), spec);
    model.gamma = gamma;
    model.support_vectors.resize(static_cast<Eigen::Index>(model.support.size()), X.cols());
    for (std::size_t s = 0; s < model.support.size(); ++s)
        model.support_vectors.row(s) = X.row(model.support[s]);
    return model;
}

SvrModel svr_fit_precomputed(const SvrSpec& spec, const Matrix& K, std::span<const double> y) {
    spec.validate();
    if (K.rows() != K.cols()) throw std::invalid_argument("precomputed kernel must be square");
    check_training_inputs(static_cast<std::size_t>(K.rows()), y);
    if (!K.isApprox(K.transpose(), 1e-10))
        throw std::invalid_argument("precomputed kernel must be symmetric");

    SvrSpec pspec = spec;
    pspec.kernel = KernelKind::precomputed;
    Eigen::MatrixXd sym = 0.5 * (K + K.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    bool clipped = false;
    if (eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() < -1e-6) {
        spdlog::warn("precomputed kernel is not PSD (min eigenvalue {:.3g}); clipping",
                     eig.eigenvalues().minCoeff());
        const Eigen::VectorXd clippedVals = eig.eigenvalues().cwiseMax(0.0);
        sym = eig.eigenvectors() * clippedVals.asDiagonal() * eig.eigenvectors().transpose();
        clipped = true;
    }
    const Matrix Kuse = clipped ? Matrix(sym) : K;
    auto model = model_from(
        solve_dual(Kuse, y, pspec.C, pspec.epsilon, pspec.tolerance, pspec.max_iterations), pspec);
    model.kernel_clipped = clipped;
    return model;
}

SvrModel svr_fit_callable(const SvrSpec& spec, std::size_t n,
                          const std::function<double(std::size_t, std::size_t)>& kernel,
                          std::span<const double> y) {
    Matrix K(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) K(i, j) = K(j, i) = kernel(i, j);
    return svr_fit_precomputed(spec, K, y);
}

std::vector<double> svr_predict(const SvrModel& model, const Matrix& X_new) {
    if (model.kernel == KernelKind::precomputed)
        throw std::invalid_argument("svr_predict: model was fit on a precomputed kernel");
    if (model.n_support() > 0 && X_new.cols() != model.support_vectors.cols())
        throw std::invalid_argument("svr_predict: dimension mismatch");
    SvrSpec spec;
    spec.kernel = model.kernel;
    spec.degree = model.degree;
    spec.coef0 = model.coef0;
    const auto d = static_cast<std::size_t>(X_new.cols());
    std::vector<double> out(X_new.rows(), model.bias);
    for (Eigen::Index r = 0; r < X_new.rows(); ++r)
        for (std::size_t s = 0; s < model.n_support(); ++s)
            out[r] += model.coef[s] * classical_kernel(spec, model.gamma,
                                                       {model.support_vectors.row(s).data(), d},
                                                       {X_new.row(r).data(), d});
    return out;
}

std::vector<double> svr_predict_precomputed(const SvrModel& model, const Matrix& K_cross) {
    if (model.kernel != KernelKind::precomputed)
        throw std::invalid_argument("svr_predict_precomputed: model uses an explicit kernel");
    if (static_cast<std::size_t>(K_cross.cols()) != model.n_train)
        throw std::invalid_argument("svr_predict_precomputed: kernel column count mismatch");
    std::vector<double> out(K_cross.rows(), model.bias);
    for (Eigen::Index r = 0; r < K_cross.rows(); ++r)
        for (std::size_t s = 0; s < model.n_support(); ++s)
            out[r] += model.coef[s] * K_cross(r, model.support[s]);
    return out;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

std::string to_string(Family f) {
    switch (f) {
    case Family::linear: return "svr_linear";
    case Family::poly: return "svr_poly";
    case Family::rbf: return "svr_rbf";
    case Family::quantum_angle: return "qsvr_angle";
    case Family::quantum_amplitude: return "qsvr_amplitude";
    }
    return {};
}

Family parse_family(const std::string& name) {
    for (Family f : {Family::linear, Family::poly, Family::rbf, Family::quantum_angle,
                     Family::quantum_amplitude})
        if (to_string(f) == name) return f;
    throw ConfigError("unknown SVR family: " + name);
}

std::vector<Trial> sample_trials(Family family, const SearchSpace& space, int budget,
                                 std::uint64_t seed) {
    if (budget < 1) throw std::invalid_argument("hyper_search: budget must be >= 1");
    if (!(space.c_min > 0 && space.c_max >= space.c_min && space.eps_min > 0 &&
          space.eps_max >= space.eps_min))
        throw std::invalid_argument("hyper_search: invalid C/epsilon ranges");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
    };
    auto pick = [&](const auto& v) {
        if (v.empty()) throw std::invalid_argument("hyper_search: empty categorical axis");
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };

    std::vector<Trial> trials;
    for (int b = 0; b < budget; ++b) {
        Trial t;
        t.family = family;
        t.p = space.p;
        t.q = space.q;
        t.svr.C = log_uniform(space.c_min, space.c_max);
        t.svr.epsilon = log_uniform(space.eps_min, space.eps_max);
        switch (family) {
        case Family::linear: t.svr.kernel = KernelKind::linear; break;
        case Family::poly:
            t.svr.kernel = KernelKind::poly;
            t.svr.degree = pick(space.degrees);
            t.svr.gamma_mode = pick(space.gammas);
            t.svr.coef0 = 0.0;
            break;
        case Family::rbf:
            t.svr.kernel = KernelKind::rbf;
            t.svr.gamma_mode = pick(space.gammas);
            break;
        case Family::quantum_angle: {
            t.svr.kernel = KernelKind::precomputed;
            qkernel::FeatureMapSpec m;
            m.variant = qkernel::MapVariant::angle;
            m.n_qubits = pick(space.qubits);
            m.layers = pick(space.layers);
            m.seed = rng();
            t.p = (m.n_qubits + 1) / 2;
            t.q = m.n_qubits / 2;
            t.qmap = m;
            break;
        }
        case Family::quantum_amplitude: {
            t.svr.kernel = KernelKind::precomputed;
            qkernel::FeatureMapSpec m;
            m.variant = qkernel::MapVariant::amplitude;
            m.n_qubits = qsim::amplitude_qubits(static_cast<std::size_t>(space.amplitude_dim));
            m.layers = pick(space.layers);
            m.beta = pick(space.betas);
            m.seed = rng();
            t.p = (space.amplitude_dim + 1) / 2;
            t.q = space.amplitude_dim / 2;
            t.qmap = m;
            break;
        }
        }
        trials.push_back(t);
    }
    return trials;
}

SearchResult hyper_search(Family family, const SearchSpace& space, int budget, std::uint64_t seed,
                          const std::function<double(const Trial&)>& objective) {
    SearchResult result;
    result.trials = sample_trials(family, space, budget, seed);
    bool any = false;
    for (auto& t : result.trials) {
        try {
            t.objective = objective(t);
            t.failed = !std::isfinite(t.objective);
        } catch (const std::exception& e) {
            spdlog::debug("trial failed: {}", e.what());
            t.failed = true;
        }
        if (t.failed) continue;
        if (!any || t.objective < result.best.objective) result.best = t;
        any = true;
    }
    if (!any) throw NumericalError("hyper_search: all trials failed for " + to_string(family));
    return result;
}

} // namespace qfb::svr
