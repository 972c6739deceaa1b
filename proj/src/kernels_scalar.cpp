// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0

// Reference kernels. These define the semantics; the SIMD variants must
// agree with them to roundoff.

#include "ksafe/kernels.hpp"

namespace ksafe::kernels {
namespace {

void s_cmul(cd* dst, const cd* a, const cd* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void s_cmul_add(cd* acc, const cd* a, const cd* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += a[i] * b[i];
}

void s_caxpy(cd* y, cd alpha, const cd* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

cd s_cdot(const cd* a, const cd* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].imag() * b[i].real() - a[i].real() * b[i].imag();
    }
    return {re, im};
}

void s_rscale(cd* dst, const double* w, const cd* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = w[i] * src[i];
}

double s_wnorm2(const double* w, const cd* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += w[i] * (a[i].real() * a[i].real() + a[i].imag() * a[i].imag());
    return acc;
}

}  // namespace

namespace detail {
const Table& scalar_table() {
    static const Table t{s_cmul, s_cmul_add, s_caxpy, s_cdot, s_rscale, s_wnorm2};
    return t;
}
}  // namespace detail

}  // namespace ksafe::kernels
