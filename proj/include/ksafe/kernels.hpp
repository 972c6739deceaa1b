// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Data-parallel inner loops of the spectral engine. Every kernel has a
// scalar reference implementation and an AVX2+FMA variant; the active
// backend is chosen once at startup from CPUID, overridable with the
// environment variable KSAFE_KERNEL=scalar|avx2 or force_backend().
//
// SIMD variants may reassociate reductions; callers must treat results as
// equal to the scalar reference only up to roundoff (the equivalence tests
// pin this at 1e-13 relative).

#include <complex>
#include <cstddef>

namespace ksafe::kernels {

using cd = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active();
bool supported(Backend b);
void force_backend(Backend b);  // throws std::runtime_error if unsupported
const char* backend_name();

// dst[i] = a[i] * b[i]
void cmul(cd* dst, const cd* a, const cd* b, std::size_t n);
// acc[i] += a[i] * b[i]
void cmul_add(cd* acc, const cd* a, const cd* b, std::size_t n);
// y[i] += alpha * x[i]
void caxpy(cd* y, cd alpha, const cd* x, std::size_t n);
// sum_i a[i] * conj(b[i])
cd cdot(const cd* a, const cd* b, std::size_t n);
// dst[i] = w[i] * src[i]   (real diagonal, e.g. Sobolev weights)
void rscale(cd* dst, const double* w, const cd* src, std::size_t n);
// sum_i w[i] * |a[i]|^2
double wnorm2(const double* w, const cd* a, std::size_t n);

namespace detail {
struct Table {
    void (*cmul)(cd*, const cd*, const cd*, std::size_t);
    void (*cmul_add)(cd*, const cd*, const cd*, std::size_t);
    void (*caxpy)(cd*, cd, const cd*, std::size_t);
    cd (*cdot)(const cd*, const cd*, std::size_t);
    void (*rscale)(cd*, const double*, const cd*, std::size_t);
    double (*wnorm2)(const double*, const cd*, std::size_t);
};
const Table& scalar_table();
const Table& avx2_table();
}  // namespace detail

}  // namespace ksafe::kernels
