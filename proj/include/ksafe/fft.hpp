// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>

namespace ksafe::fft {

// In-place radix-2 transforms, power-of-two length only. No scaling is
// applied: `forward` uses e^{-i}, `inverse` uses e^{+i}; analysis
// normalization (1/N) is the caller's business.
void forward(std::complex<double>* data, std::size_t n);
void inverse(std::complex<double>* data, std::size_t n);

}  // namespace ksafe::fft
