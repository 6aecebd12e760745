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

// Data-parallel inner loops shared by the statevector simulator and the
// kernel code. Each kernel has a scalar reference implementation and an
// AVX2/FMA variant; the dispatching entry points pick one at runtime.

#include <complex>
#include <span>
#include <string_view>

namespace qfb::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

/// 2x2 complex matrix, row-major: {m00, m01, m10, m11}.
struct Mat2 {
    cplx m00, m01, m10, m11;
};

bool isa_available(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

/// Selects the kernel set used by the dispatching entry points.
/// Throws std::invalid_argument if the ISA is not supported by this CPU.
/// The initial choice is the best available one unless QFB_SIMD=scalar is set.
void set_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
/// Sum of conj(a_i) * b_i.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
/// out_i = |a_i|^2
void abs_squared(std::span<const cplx> a, std::span<double> out);
/// (lo_i, hi_i) <- (m00 lo_i + m01 hi_i, m10 lo_i + m11 hi_i)
void apply_pair(std::span<cplx> lo, std::span<cplx> hi, const Mat2& m);
/// a_i <- s * a_i
void scale(std::span<cplx> a, cplx s);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
void abs_squared(std::span<const cplx> a, std::span<double> out);
void apply_pair(std::span<cplx> lo, std::span<cplx> hi, const Mat2& m);
void scale(std::span<cplx> a, cplx s);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define QFB_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
void abs_squared(std::span<const cplx> a, std::span<double> out);
void apply_pair(std::span<cplx> lo, std::span<cplx> hi, const Mat2& m);
void scale(std::span<cplx> a, cplx s);
} // namespace avx2
#else
#define QFB_HAVE_AVX2_KERNELS 0
#endif

} // namespace qfb::simd
