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

// Dense statevector simulation of small parameterised circuits.
// Qubit k corresponds to bit k of the basis-state index.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qfb::qsim {

using cplx = std::complex<double>;

/// Largest register the simulator accepts.
inline constexpr int kMaxQubits = 14;

class StateVector {
public:
    /// |0...0> on n qubits.
    explicit StateVector(int n = 1);

    static StateVector basis(int n, std::size_t index);
    /// Takes ownership of amplitudes; the length must be a power of two and the
    /// norm 1 within 1e-9.
    static StateVector from_amplitudes(std::vector<cplx> amplitudes);

    int qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    std::span<cplx> amplitudes() { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm() const;

private:
    int n_;
    std::vector<cplx> amps_;
};

enum class GateKind { RX, RY, RZ, CZ, CNOT };

bool is_rotation(GateKind kind);

/// One gate. Rotations read their angle from `params[param]` when param >= 0,
/// otherwise from `angle`.
struct Gate {
    GateKind kind = GateKind::RY;
    int target = 0;
    int control = -1;
    int param = -1;
    double angle = 0.0;
};

struct CircuitSpec {
    int n = 1;
    std::vector<Gate> ops;
    std::vector<double> params;

    /// Throws std::invalid_argument on out-of-range qubits/parameters, a parameter
    /// attached to a non-rotation gate, or non-finite angles.
    void validate() const;
    double angle_of(const Gate& g) const { return g.param >= 0 ? params[g.param] : g.angle; }
};

/// Appends RX/RY/RZ on every qubit (three new parameters per qubit, starting at
/// `first_param`) followed by a CZ ring. Returns the next free parameter index.
int append_rotation_layer(CircuitSpec& spec, int first_param, bool ring = true);
/// CZ between neighbours, closing the ring when n > 2.
void append_cz_ring(CircuitSpec& spec);

void apply_gate(StateVector& state, const Gate& gate, double angle);
void run_inplace(const CircuitSpec& spec, StateVector& state);
/// Applies the inverse circuit (reverse order, negated angles).
void run_inverse_inplace(const CircuitSpec& spec, StateVector& state);
StateVector run_circuit(const CircuitSpec& spec, const StateVector& input);
/// Circuit whose unitary is the inverse of `spec` (parameters resolved to literals).
CircuitSpec inverse(const CircuitSpec& spec);

/// Tensor product of RY(pi * x_i)|0>, one qubit per feature.
StateVector angle_encode(std::span<const double> x);
/// x/||x|| zero-padded to 2^ceil(log2 d) amplitudes (at least one qubit).
StateVector amplitude_encode(std::span<const double> x);
int amplitude_qubits(std::size_t d);

double expectation_z(const StateVector& state, int qubit);
std::vector<double> expectation_z_all(const StateVector& state);
/// <psi| Z_{q1} Z_{q2} ... |psi>
double expectation_z_product(const StateVector& state, std::span<const int> qubits);

/// <a|b>
cplx overlap(const StateVector& a, const StateVector& b);

/// d<Z_{qubits}>/d params[param_index] by the two-term shift rule, summed over every
/// gate driven by that parameter.
double parameter_shift_grad(const CircuitSpec& spec, const StateVector& input,
                            std::span<const int> qubits, int param_index);

/// d<Z_k>/d params[param_index] for every qubit k, by the shift rule.
std::vector<double> parameter_shift_jacobian(const CircuitSpec& spec, const StateVector& input,
                                             int param_index);

} // namespace qfb::qsim
