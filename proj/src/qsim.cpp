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

#include "qfb/qsim.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qfb/simd.hpp"

namespace qfb::qsim {

namespace {

void check_qubits(int n) {
    if (n < 0 || n > kMaxQubits)
        throw std::invalid_argument("qubit count " + std::to_string(n) + " outside [0, " +
                                    std::to_string(kMaxQubits) + "]");
}

simd::Mat2 rotation_matrix(GateKind kind, double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    switch (kind) {
    case GateKind::RX: return {{c, 0}, {0, -s}, {0, -s}, {c, 0}};
    case GateKind::RY: return {{c, 0}, {-s, 0}, {s, 0}, {c, 0}};
    case GateKind::RZ: return {{c, -s}, {0, 0}, {0, 0}, {c, s}};
    default: throw std::invalid_argument("not a rotation gate");
    }
}

void apply_single(StateVector& state, int target, const simd::Mat2& m) {
    auto a = state.amplitudes();
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t dim = a.size();
    if (stride == 1) {
        for (std::size_t i = 0; i < dim; i += 2) {
            const cplx x = a[i], y = a[i + 1];
            a[i] = m.m00 * x + m.m01 * y;
            a[i + 1] = m.m10 * x + m.m11 * y;
        }
        return;
    }
    for (std::size_t base = 0; base < dim; base += 2 * stride)
        simd::apply_pair(a.subspan(base, stride), a.subspan(base + stride, stride), m);
}

double run_observable(const CircuitSpec& spec, const StateVector& input,
                      std::span<const int> qubits) {
    StateVector s = input;
    run_inplace(spec, s);
    return expectation_z_product(s, qubits);
}

} // namespace

StateVector::StateVector(int n) : n_(n) {
    check_qubits(n);
    amps_.assign(std::size_t{1} << n, cplx{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector StateVector::basis(int n, std::size_t index) {
    StateVector s(n);
    if (index >= s.dim()) throw std::invalid_argument("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim == 0 || (dim & (dim - 1)) != 0)
        throw std::invalid_argument("amplitude count must be a power of two");
    int n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    StateVector s(n);
    s.amps_ = std::move(amplitudes);
    if (std::abs(s.norm() - 1.0) > 1e-9) throw std::invalid_argument("state is not normalised");
    return s;
}

double StateVector::norm() const {
    return std::sqrt(simd::inner(amps_, amps_).real());
}

bool is_rotation(GateKind kind) {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

void CircuitSpec::validate() const {
    check_qubits(n);
    for (const auto& g : ops) {
        if (g.target < 0 || g.target >= n) throw std::invalid_argument("gate target out of range");
        if (g.kind == GateKind::CZ || g.kind == GateKind::CNOT) {
            if (g.control < 0 || g.control >= n || g.control == g.target)
                throw std::invalid_argument("invalid control qubit");
            if (g.param >= 0)
                throw std::invalid_argument("parameter attached to non-rotation gate");
        }
        if (g.param >= static_cast<int>(params.size()))
            throw std::invalid_argument("parameter index out of range");
        if (is_rotation(g.kind) && !std::isfinite(angle_of(g)))
            throw std::invalid_argument("non-finite rotation angle");
    }
}

void append_cz_ring(CircuitSpec& spec) {
    const int n = spec.n;
    if (n < 2) return;
    for (int q = 0; q + 1 < n; ++q) spec.ops.push_back({GateKind::CZ, q + 1, q});
    if (n > 2) spec.ops.push_back({GateKind::CZ, 0, n - 1});
}

int append_rotation_layer(CircuitSpec& spec, int first_param, bool ring) {
    int p = first_param;
    for (int q = 0; q < spec.n; ++q)
        for (GateKind k : {GateKind::RX, GateKind::RY, GateKind::RZ})
            spec.ops.push_back({k, q, -1, p++});
    if (ring) append_cz_ring(spec);
    return p;
}

void apply_gate(StateVector& state, const Gate& gate, double angle) {
    auto a = state.amplitudes();
    switch (gate.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: apply_single(state, gate.target, rotation_matrix(gate.kind, angle)); break;
    case GateKind::CZ: {
        const std::size_t mask = (std::size_t{1} << gate.target) | (std::size_t{1} << gate.control);
        for (std::size_t i = 0; i < a.size(); ++i)
            if ((i & mask) == mask) a[i] = -a[i];
        break;
    }
    case GateKind::CNOT: {
        const std::size_t cbit = std::size_t{1} << gate.control;
        const std::size_t tbit = std::size_t{1} << gate.target;
        for (std::size_t i = 0; i < a.size(); ++i)
            if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
        break;
    }
    }
}

void run_inplace(const CircuitSpec& spec, StateVector& state) {
    if (state.qubits() != spec.n) throw std::invalid_argument("state/circuit qubit mismatch");
    for (const auto& g : spec.ops) apply_gate(state, g, spec.angle_of(g));
}

void run_inverse_inplace(const CircuitSpec& spec, StateVector& state) {
    if (state.qubits() != spec.n) throw std::invalid_argument("state/circuit qubit mismatch");
    for (auto it = spec.ops.rbegin(); it != spec.ops.rend(); ++it)
        apply_gate(state, *it, -spec.angle_of(*it));
}

StateVector run_circuit(const CircuitSpec& spec, const StateVector& input) {
    spec.validate();
    StateVector out = input;
    run_inplace(spec, out);
    return out;
}

CircuitSpec inverse(const CircuitSpec& spec) {
    CircuitSpec inv;
    inv.n = spec.n;
    for (auto it = spec.ops.rbegin(); it != spec.ops.rend(); ++it) {
        Gate g = *it;
        g.angle = -spec.angle_of(*it);
        g.param = -1;
        inv.ops.push_back(g);
    }
    return inv;
}

StateVector angle_encode(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("angle_encode: empty input");
    const int n = static_cast<int>(x.size());
    check_qubits(n);
    // Product state: amplitude of basis index i is prod_k (bit_k ? sin : cos)(pi x_k / 2).
    std::vector<cplx> amps(std::size_t{1} << n);
    amps[0] = 1.0;
    std::size_t filled = 1;
    for (int k = 0; k < n; ++k) {
        if (!std::isfinite(x[k])) throw std::invalid_argument("angle_encode: non-finite feature");
        const double half = std::numbers::pi * x[k] / 2.0;
        const double c = std::cos(half), s = std::sin(half);
        for (std::size_t i = 0; i < filled; ++i) {
            amps[i + filled] = amps[i] * s;
            amps[i] *= c;
        }
        filled *= 2;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

int amplitude_qubits(std::size_t d) {
    int n = 1;
    while ((std::size_t{1} << n) < d) ++n;
    return n;
}

StateVector amplitude_encode(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("amplitude_encode: empty input");
    double norm2 = 0.0;
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("amplitude_encode: non-finite feature");
        norm2 += v * v;
    }
    if (!(norm2 > 0.0)) throw std::invalid_argument("amplitude_encode: zero vector");
    const int n = amplitude_qubits(x.size());
    check_qubits(n);
    const double inv = 1.0 / std::sqrt(norm2);
    std::vector<cplx> amps(std::size_t{1} << n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) amps[i] = x[i] * inv;
    return StateVector::from_amplitudes(std::move(amps));
}

double expectation_z(const StateVector& state, int qubit) {
    if (qubit < 0 || qubit >= state.qubits())
        throw std::invalid_argument("expectation_z: qubit out of range");
    const std::size_t bit = std::size_t{1} << qubit;
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) acc += (i & bit ? -1.0 : 1.0) * std::norm(state[i]);
    return acc;
}

std::vector<double> expectation_z_all(const StateVector& state) {
    std::vector<double> probs(state.dim());
    simd::abs_squared(state.amplitudes(), probs);
    std::vector<double> out(state.qubits(), 0.0);
    for (std::size_t i = 0; i < probs.size(); ++i)
        for (int k = 0; k < state.qubits(); ++k) out[k] += (i >> k & 1) ? -probs[i] : probs[i];
    return out;
}

double expectation_z_product(const StateVector& state, std::span<const int> qubits) {
    std::size_t mask = 0;
    for (int q : qubits) {
        if (q < 0 || q >= state.qubits())
            throw std::invalid_argument("expectation_z: qubit out of range");
        mask ^= std::size_t{1} << q;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i)
        acc += (std::popcount(i & mask) & 1 ? -1.0 : 1.0) * std::norm(state[i]);
    return acc;
}

cplx overlap(const StateVector& a, const StateVector& b) {
    if (a.qubits() != b.qubits()) throw std::invalid_argument("overlap: dimension mismatch");
    return simd::inner(a.amplitudes(), b.amplitudes());
}

double parameter_shift_grad(const CircuitSpec& spec, const StateVector& input,
                            std::span<const int> qubits, int param_index) {
    spec.validate();
    if (param_index < 0 || param_index >= static_cast<int>(spec.params.size()))
        throw std::invalid_argument("parameter index out of range");
    if (input.qubits() != spec.n) throw std::invalid_argument("state/circuit qubit mismatch");
    constexpr double shift = std::numbers::pi / 2.0;
    double grad = 0.0;
    CircuitSpec shifted = spec;
    for (std::size_t g = 0; g < spec.ops.size(); ++g) {
        if (spec.ops[g].param != param_index) continue;
        // Detach this occurrence so only it is shifted.
        Gate& gate = shifted.ops[g];
        gate.param = -1;
        gate.angle = spec.params[param_index] + shift;
        const double plus = run_observable(shifted, input, qubits);
        gate.angle = spec.params[param_index] - shift;
        const double minus = run_observable(shifted, input, qubits);
        gate = spec.ops[g];
        grad += 0.5 * (plus - minus);
    }
    return grad;
}

std::vector<double> parameter_shift_jacobian(const CircuitSpec& spec, const StateVector& input,
                                             int param_index) {
    if (input.qubits() != spec.n) throw std::invalid_argument("state/circuit qubit mismatch");
    constexpr double shift = std::numbers::pi / 2.0;
    std::vector<double> jac(spec.n, 0.0);
    CircuitSpec shifted = spec;
    for (std::size_t g = 0; g < spec.ops.size(); ++g) {
        if (spec.ops[g].param != param_index) continue;
        Gate& gate = shifted.ops[g];
        gate.param = -1;
        StateVector plus = input, minus = input;
        gate.angle = spec.params[param_index] + shift;
        run_inplace(shifted, plus);
        gate.angle = spec.params[param_index] - shift;
        run_inplace(shifted, minus);
        gate = spec.ops[g];
        const auto ep = expectation_z_all(plus), em = expectation_z_all(minus);
        for (int k = 0; k < spec.n; ++k) jac[k] += 0.5 * (ep[k] - em[k]);
    }
    return jac;
}

} // namespace qfb::qsim
