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
#include <filesystem>
#include <span>
#include <vector>

#include "qfb/features.hpp"
#include "qfb/qsim.hpp"

namespace qfb::qkernel {

using features::Matrix;

enum class MapVariant { angle, amplitude };

struct FeatureMapSpec {
    MapVariant variant = MapVariant::angle;
    int n_qubits = 2;
    int layers = 1;   ///< L >= 0; L = 0 is the bare data layer (angle) / bare embedding (amplitude)
    int beta = 1;     ///< kernel exponent, amplitude variant only
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument if the spec cannot embed d features.
    void validate(std::size_t d) const;
};

/// Feature map with its data-independent circuit pieces generated once from the seed.
/// Angle variant:     (U_rot RY(pi x)^{(x)d})^L |0>, U_rot = seeded RY/RZ per qubit + CZ ring.
/// Amplitude variant: U_rnd^L (x/||x||), U_rnd = seeded RY/RZ per qubit + CZ ring.
class FeatureMap {
public:
    FeatureMap(const FeatureMapSpec& spec, std::size_t d);

    qsim::StateVector state(std::span<const double> x) const;
    const FeatureMapSpec& spec() const { return spec_; }

private:
    FeatureMapSpec spec_;
    std::size_t d_;
    std::vector<qsim::CircuitSpec> blocks_; ///< one per layer
};

qsim::StateVector feature_map_state(const FeatureMapSpec& spec, std::span<const double> x);

/// |<Phi(x_i)|Phi(x_j)>|^(2 beta)
double kernel_entry(const FeatureMapSpec& spec, std::span<const double> xi,
                    std::span<const double> xj);

struct KernelMatrix {
    Matrix entries;
    std::vector<std::size_t> row_ids;
};

/// Gram matrix over the rows of X. Statevectors are computed once per row and each
/// unordered pair is evaluated once.
KernelMatrix kernel_matrix(const FeatureMapSpec& spec, const Matrix& X);
/// Rows index X_test, columns index X_train.
Matrix kernel_cross(const FeatureMapSpec& spec, const Matrix& X_train, const Matrix& X_test);

/// Elementwise power K^(beta) of a fidelity (beta = 1) matrix.
Matrix elementwise_power(const Matrix& fidelity, int beta);

double min_eigenvalue(const Matrix& symmetric);

void write_kernel_csv(const std::filesystem::path& path, const Matrix& K);
Matrix read_kernel_csv(const std::filesystem::path& path);

} // namespace qfb::qkernel
