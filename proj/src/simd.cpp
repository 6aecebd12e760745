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

#include "qfb/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#if QFB_HAVE_AVX2_KERNELS
#include <immintrin.h>
#endif

namespace qfb::simd {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace scalar {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void abs_squared(std::span<const cplx> a, std::span<double> out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::norm(a[i]);
}

void apply_pair(std::span<cplx> lo, std::span<cplx> hi, const Mat2& m) {
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const cplx x = lo[i], y = hi[i];
        lo[i] = m.m00 * x + m.m01 * y;
        hi[i] = m.m10 * x + m.m11 * y;
    }
}

void scale(std::span<cplx> a, cplx s) {
    for (auto& v : a) v *= s;
}

} // namespace scalar

// ---------------------------------------------------------------------------
// AVX2 / FMA kernels. A __m256d holds two complex doubles.
// ---------------------------------------------------------------------------

#if QFB_HAVE_AVX2_KERNELS
namespace avx2 {

#define QFB_AVX2 __attribute__((target("avx2,fma")))

namespace {

QFB_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// (c * v) for a broadcast complex c and two packed complex values v.
QFB_AVX2 inline __m256d cmul(__m256d cr, __m256d ci, __m256d v) {
    const __m256d swapped = _mm256_permute_pd(v, 0b0101);
    return _mm256_addsub_pd(_mm256_mul_pd(cr, v), _mm256_mul_pd(ci, swapped));
}

} // namespace

QFB_AVX2 double dot(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i + 4]), _mm256_loadu_pd(&b[i + 4]), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

QFB_AVX2 double squared_distance(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(&a[i]), _mm256_loadu_pd(&b[i]));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double out = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        out += d * d;
    }
    return out;
}

QFB_AVX2 cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    const std::size_t n = a.size();
    const double* pa = reinterpret_cast<const double*>(a.data());
    const double* pb = reinterpret_cast<const double*>(b.data());
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(pa + 2 * i);
        const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_fmadd_pd(va, vb, acc_re);
        acc_im = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), acc_im);
    }
    // acc_im lanes hold (ar*bi, ai*br, ...): imaginary part is even - odd.
    alignas(32) double im_lanes[4];
    _mm256_store_pd(im_lanes, acc_im);
    double re = hsum(acc_re);
    double im = (im_lanes[0] + im_lanes[2]) - (im_lanes[1] + im_lanes[3]);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

QFB_AVX2 void abs_squared(std::span<const cplx> a, std::span<double> out) {
    const std::size_t n = a.size();
    const double* pa = reinterpret_cast<const double*>(a.data());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(pa + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(pa + 2 * i + 4);
        // hadd gives (|a0|^2, |a2|^2, |a1|^2, |a3|^2) ordering after the squares.
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        _mm256_storeu_pd(&out[i], _mm256_permute4x64_pd(h, 0b11011000));
    }
    for (; i < n; ++i) out[i] = std::norm(a[i]);
}

QFB_AVX2 void apply_pair(std::span<cplx> lo, std::span<cplx> hi, const Mat2& m) {
    const std::size_t n = lo.size();
    double* pl = reinterpret_cast<double*>(lo.data());
    double* ph = reinterpret_cast<double*>(hi.data());
    const __m256d m00r = _mm256_set1_pd(m.m00.real()), m00i = _mm256_set1_pd(m.m00.imag());
    const __m256d m01r = _mm256_set1_pd(m.m01.real()), m01i = _mm256_set1_pd(m.m01.imag());
    const __m256d m10r = _mm256_set1_pd(m.m10.real()), m10i = _mm256_set1_pd(m.m10.imag());
    const __m256d m11r = _mm256_set1_pd(m.m11.real()), m11i = _mm256_set1_pd(m.m11.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d x = _mm256_loadu_pd(pl + 2 * i);
        const __m256d y = _mm256_loadu_pd(ph + 2 * i);
        const __m256d nx = _mm256_add_pd(cmul(m00r, m00i, x), cmul(m01r, m01i, y));
        const __m256d ny = _mm256_add_pd(cmul(m10r, m10i, x), cmul(m11r, m11i, y));
        _mm256_storeu_pd(pl + 2 * i, nx);
        _mm256_storeu_pd(ph + 2 * i, ny);
    }
    for (; i < n; ++i) {
        const cplx x = lo[i], y = hi[i];
        lo[i] = m.m00 * x + m.m01 * y;
        hi[i] = m.m10 * x + m.m11 * y;
    }
}

QFB_AVX2 void scale(std::span<cplx> a, cplx s) {
    const std::size_t n = a.size();
    double* p = reinterpret_cast<double*>(a.data());
    const __m256d sr = _mm256_set1_pd(s.real()), si = _mm256_set1_pd(s.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(p + 2 * i, cmul(sr, si, _mm256_loadu_pd(p + 2 * i)));
    for (; i < n; ++i) a[i] *= s;
}

#undef QFB_AVX2

} // namespace avx2
#endif

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace {

bool cpu_has_avx2() {
#if QFB_HAVE_AVX2_KERNELS
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa initial_isa() {
    if (const char* env = std::getenv("QFB_SIMD"); env && std::string(env) == "scalar")
        return Isa::scalar;
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

} // namespace

bool isa_available(Isa isa) {
    return isa == Isa::scalar || cpu_has_avx2();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void set_isa(Isa isa) {
    if (!isa_available(isa))
        throw std::invalid_argument("ISA not supported on this CPU: " + std::string(isa_name(isa)));
    current().store(isa, std::memory_order_relaxed);
}

#if QFB_HAVE_AVX2_KERNELS
#define QFB_DISPATCH(fn, ...) \
    (active_isa() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define QFB_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) {
    return QFB_DISPATCH(dot, a, b);
}
double squared_distance(std::span<const double> a, std::span<const double> b) {
    return QFB_DISPATCH(squared_distance, a, b);
}
cplx inner(std::span<const cplx> a, std::span<const cplx> b) { return QFB_DISPATCH(inner, a, b); }
void abs_squared(std::span<const cplx> a, std::span<double> out) {
    QFB_DISPATCH(abs_squared, a, out);
}
void apply_pair(std::span<cplx> lo, std::span<cplx> hi, const Mat2& m) {
    QFB_DISPATCH(apply_pair, lo, hi, m);
}
void scale(std::span<cplx> a, cplx s) { QFB_DISPATCH(scale, a, s); }

#undef QFB_DISPATCH

} // namespace qfb::simd
