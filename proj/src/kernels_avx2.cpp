// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2+FMA kernel variants, two complex doubles per vector. Compiled with
// per-function target attributes so this TU builds on baseline x86-64 and
// the dispatcher decides at runtime. On non-x86 builds the table falls
// back to the scalar reference.

#include "ksafe/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define KSAFE_X86 1
#include <immintrin.h>
#else
#define KSAFE_X86 0
#endif

namespace ksafe::kernels {

#if KSAFE_X86

namespace {

#define KSAFE_AVX2 __attribute__((target("avx2,fma")))

// [r0,i0,r1,i1] * [s0,j0,s1,j1] -> complex product per pair
KSAFE_AVX2 inline __m256d cmul2(__m256d a, __m256d b) {
    __m256d re = _mm256_movedup_pd(a);         // [r0,r0,r1,r1]
    __m256d im = _mm256_permute_pd(a, 0xF);    // [i0,i0,i1,i1]
    __m256d bs = _mm256_permute_pd(b, 0x5);    // [j0,s0,j1,s1]
    return _mm256_fmaddsub_pd(re, b, _mm256_mul_pd(im, bs));
}

KSAFE_AVX2 void v_cmul(cd* dst, const cd* a, const cd* b, std::size_t n) {
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(dst);
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(d + 2 * i, cmul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
    for (; i < n; ++i) dst[i] = a[i] * b[i];
}

KSAFE_AVX2 void v_cmul_add(cd* acc, const cd* a, const cd* b, std::size_t n) {
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(acc);
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    for (; i + 2 <= n; i += 2) {
        __m256d sum = _mm256_add_pd(_mm256_loadu_pd(d + 2 * i),
                                    cmul2(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i)));
        _mm256_storeu_pd(d + 2 * i, sum);
    }
    for (; i < n; ++i) acc[i] += a[i] * b[i];
}

KSAFE_AVX2 void v_caxpy(cd* y, cd alpha, const cd* x, std::size_t n) {
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(y);
    const auto* px = reinterpret_cast<const double*>(x);
    __m256d ar = _mm256_set1_pd(alpha.real());
    __m256d ai = _mm256_set1_pd(alpha.imag());
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(px + 2 * i);
        __m256d xs = _mm256_permute_pd(xv, 0x5);
        __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
        _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i), prod));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

KSAFE_AVX2 cd v_cdot(const cd* a, const cd* b, std::size_t n) {
    std::size_t i = 0;
    const auto* pa = reinterpret_cast<const double*>(a);
    const auto* pb = reinterpret_cast<const double*>(b);
    __m256d acc = _mm256_setzero_pd();
    for (; i + 2 <= n; i += 2) {
        __m256d av = _mm256_loadu_pd(pa + 2 * i);
        __m256d bv = _mm256_loadu_pd(pb + 2 * i);
        __m256d are = _mm256_movedup_pd(av);
        __m256d aim = _mm256_permute_pd(av, 0xF);
        __m256d bs = _mm256_permute_pd(bv, 0x5);
        // even lanes: ar*br + ai*bi ; odd lanes: ar*bi - ai*br (= -imag)
        acc = _mm256_add_pd(acc, _mm256_fmsubadd_pd(are, bv, _mm256_mul_pd(aim, bs)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double re = lanes[0] + lanes[2];
    double im = -(lanes[1] + lanes[3]);
    for (; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
    }
    return {re, im};
}

KSAFE_AVX2 void v_rscale(cd* dst, const double* w, const cd* src, std::size_t n) {
    std::size_t i = 0;
    auto* d = reinterpret_cast<double*>(dst);
    const auto* ps = reinterpret_cast<const double*>(src);
    for (; i + 2 <= n; i += 2) {
        __m128d wp = _mm_loadu_pd(w + i);
        __m256d wd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wp), 0x50);  // [w0,w0,w1,w1]
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(wd, _mm256_loadu_pd(ps + 2 * i)));
    }
    for (; i < n; ++i) dst[i] = w[i] * src[i];
}

KSAFE_AVX2 double v_wnorm2(const double* w, const cd* a, std::size_t n) {
    std::size_t i = 0;
    const auto* pa = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    for (; i + 2 <= n; i += 2) {
        __m128d wp = _mm_loadu_pd(w + i);
        __m256d wd = _mm256_permute4x64_pd(_mm256_castpd128_pd256(wp), 0x50);
        __m256d av = _mm256_loadu_pd(pa + 2 * i);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(av, av), wd, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i)
        s += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
    return s;
}

#undef KSAFE_AVX2

}  // namespace

namespace detail {
const Table& avx2_table() {
    static const Table t{v_cmul, v_cmul_add, v_caxpy, v_cdot, v_rscale, v_wnorm2};
    return t;
}
}  // namespace detail

#else  // !KSAFE_X86

namespace detail {
const Table& avx2_table() { return scalar_table(); }
}  // namespace detail

#endif

}  // namespace ksafe::kernels
