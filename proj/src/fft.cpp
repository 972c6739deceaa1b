// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/fft.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "ksafe/util.hpp"

namespace ksafe::fft {

namespace {

// Twiddle table for size n: tw[t] = exp(-2*pi*i*t/n), t < n/2.
// Cached per thread; grid sizes in a run are few.
const std::vector<cd>& twiddles(std::size_t n) {
    thread_local std::map<std::size_t, std::vector<cd>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cd> tw(n / 2);
    for (std::size_t t = 0; t < n / 2; ++t) {
        double ang = -kTwoPi * static_cast<double>(t) / static_cast<double>(n);
        tw[t] = cd(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(tw)).first->second;
}

void bit_reverse(std::complex<double>* a, std::size_t n) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

template <bool Forward>
void transform(std::complex<double>* a, std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;
    const auto& tw = twiddles(n);
    bit_reverse(a, n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cd w = tw[j * step];
                if constexpr (!Forward) w = std::conj(w);
                cd u = a[i + j];
                cd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace

void forward(std::complex<double>* data, std::size_t n) { transform<true>(data, n); }
void inverse(std::complex<double>* data, std::size_t n) { transform<false>(data, n); }

}  // namespace ksafe::fft
