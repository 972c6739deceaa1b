// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

namespace ksafe {

// Dense complex matrix, row-major.
struct DenseMatrix {
    long rows = 0;
    long cols = 0;
    std::vector<std::complex<double>> a;

    std::complex<double>& at(long r, long c) { return a[static_cast<size_t>(r) * cols + c]; }
    std::complex<double> at(long r, long c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Singular values in descending order.
std::vector<double> singular_values(const DenseMatrix& m);

}  // namespace ksafe
