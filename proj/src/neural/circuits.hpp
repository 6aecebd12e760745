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

#include <span>
#include <vector>

#include "qfb/qsim.hpp"

namespace qfb::neural::detail {

/// L layers of RX, RY, RZ on every qubit followed by a CZ ring.
void append_ansatz(qsim::CircuitSpec& spec, int layers, int first_param);

/// Z expectations on every qubit and their parameter-shift Jacobian
/// (row k, column j: d<Z_k>/d param j), row-major, over params [0, n_params).
struct Jacobian {
    std::vector<double> E;
    std::vector<double> J;
    int n_params = 0;

    double at(int k, int j) const { return J[static_cast<std::size_t>(k) * n_params + j]; }
};

Jacobian expectation_jacobian(const qsim::CircuitSpec& spec, const qsim::StateVector& input,
                              int n_params);

/// Encoding RY(pi u_j) on qubit j (params 0..q-1) then the ansatz (params q..).
qsim::CircuitSpec encoded_circuit(int q, int layers, std::span<const double> u,
                                  std::span<const double> angles);

struct BlockGrad {
    std::vector<double> E;        ///< q expectations
    std::vector<double> dE_du;    ///< q x q, d E_k / d u_j
    std::vector<double> dE_dth;   ///< q x 3qL
};

/// Circuit block evaluated at pre-affine input v; params = a (q), b (q), angles (3qL).
BlockGrad vqc_block_grad(int q, int layers, std::span<const double> params,
                         std::span<const double> v);

} // namespace qfb::neural::detail
