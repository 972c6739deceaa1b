// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksafe {

using cd = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Grade bookkeeping failures (ungraded products, negative grades).
struct GradeError : std::runtime_error {
    explicit GradeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operator spec file problems, with a JSON-pointer-ish location.
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

// splitmix64: the project-wide deterministic bit mixer. All randomness
// (probe fields, phases, low-discrepancy offsets) derives from it so that
// results are identical across platforms and standard-library versions.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

// Deterministic uniform/gaussian draws chained off a seed state.
inline double uniform01(std::uint64_t& state) {
    return (splitmix64(state) >> 11) * 0x1.0p-53;
}

inline double gaussian(std::uint64_t& state) {
    // Box-Muller; consumes two uniforms.
    double u1 = uniform01(state);
    double u2 = uniform01(state);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// --- small dense complex matrices (rank q is tiny: 1..4 in practice) ---

// |det| by Gaussian elimination with partial pivoting; m is row-major q x q.
double det_abs(std::vector<cd> m, int q);

// Inverse of a row-major q x q matrix; throws std::runtime_error if singular.
std::vector<cd> mat_inverse(std::vector<cd> m, int q);

// Largest singular value of a q x q matrix (power iteration on m^H m;
// exact enough for the tiny q used in symbol bounds).
double mat_norm2(const std::vector<cd>& m, int q);

// Least-squares slope of y against x (used for log-log rate fits).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ksafe
