// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ksafe/coefficient.hpp"
#include "ksafe/fft.hpp"
#include "ksafe/field.hpp"

using namespace ksafe;

namespace {

std::vector<cd> naive_dft(const std::vector<cd>& u, int dir) {
    const size_t n = u.size();
    std::vector<cd> out(n, cd(0.0));
    for (size_t k = 0; k < n; ++k)
        for (size_t x = 0; x < n; ++x)
            out[k] += u[x] * std::polar(1.0, dir * kTwoPi * static_cast<double>(k * x % n) / n);
    return out;
}

}  // namespace

TEST_CASE("fft matches the naive dft") {
    std::uint64_t st = 42;
    std::vector<cd> u(16);
    for (auto& z : u) z = cd(gaussian(st), gaussian(st));
    std::vector<cd> fwd = u;
    fft::forward(fwd.data(), fwd.size());
    std::vector<cd> ref = naive_dft(u, -1);
    for (size_t i = 0; i < u.size(); ++i) CHECK(std::abs(fwd[i] - ref[i]) < 1e-12);

    std::vector<cd> inv = u;
    fft::inverse(inv.data(), inv.size());
    std::vector<cd> ref2 = naive_dft(u, +1);
    for (size_t i = 0; i < u.size(); ++i) CHECK(std::abs(inv[i] - ref2[i]) < 1e-12);
}

TEST_CASE("fft round trip") {
    std::uint64_t st = 7;
    std::vector<cd> u(128);
    for (auto& z : u) z = cd(gaussian(st), gaussian(st));
    std::vector<cd> v = u;
    fft::forward(v.data(), v.size());
    fft::inverse(v.data(), v.size());
    for (size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(v[i] / static_cast<double>(u.size()) - u[i]) < 1e-12);
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(TorusGrid(3, 64), std::invalid_argument);
    CHECK_THROWS_AS(TorusGrid(1, 48), std::invalid_argument);   // not a power of two
    CHECK_THROWS_AS(TorusGrid(1, 4), std::invalid_argument);    // too small
    CHECK_THROWS_AS(TorusGrid(1, 64, 1.2), std::invalid_argument);
    TorusGrid g(2, 16);
    CHECK(g.mode_count() == 256);
    CHECK(g.padded_per_dim() == 32);
    CHECK(TorusGrid::freq_of(9, 16) == -7);
    CHECK(TorusGrid::freq_of(8, 16) == 8);
}

TEST_CASE("normalization anchor: constant field") {
    TorusGrid grid(1, 8);
    SpectralField f = sample(ScalarCoefficient::constant(1, 1.0), grid);
    CHECK(std::abs(f.at(0, 0) - cd(1.0)) < 1e-15);
    for (long m = 1; m < grid.mode_count(); ++m) CHECK(std::abs(f.at(0, m)) < 1e-15);
    for (int s = 0; s <= 5; ++s) CHECK(sobolev_norm(f, s) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("cos(kx) has half-weight at +-k and the closed-form norm") {
    TorusGrid grid(1, 64);
    for (int k : {1, 3, 7}) {
        SpectralField f = sample(ScalarCoefficient::cosine({k}), grid);
        CHECK(std::abs(f.at(0, TorusGrid::idx_of(k, 64)) - cd(0.5)) < 1e-15);
        CHECK(std::abs(f.at(0, TorusGrid::idx_of(-k, 64)) - cd(0.5)) < 1e-15);
        for (int s = 0; s <= 3; ++s) {
            double expect = std::sqrt(0.5 * std::pow(1.0 + k * k, s));
            CHECK(sobolev_norm(f, s) == doctest::Approx(expect).epsilon(1e-13));
        }
    }
}

TEST_CASE("H^0 equals the physical mean square (quadrature oracle)") {
    TorusGrid grid(1, 128);
    SpectralField u = random_bandlimited(grid, 1, 32, 99);
    std::vector<cd> phys = to_physical(grid, u.comp(0));
    // uniform quadrature = trapezoid rule on a periodic grid
    double ms = 0.0;
    for (const cd& v : phys) ms += std::norm(v);
    ms /= static_cast<double>(phys.size());
    CHECK(sobolev_norm(u, 0) == doctest::Approx(std::sqrt(ms)).epsilon(1e-10));
}

TEST_CASE("norm monotone in the order") {
    TorusGrid grid(1, 64);
    SpectralField u = random_bandlimited(grid, 1, 16, 5);
    for (int s = 0; s < 4; ++s) CHECK(sobolev_norm(u, s) <= sobolev_norm(u, s + 1));
    CHECK_THROWS_AS(sobolev_norm(u, -1), std::invalid_argument);
}

TEST_CASE("random bandlimited fields are real and bandlimited") {
    TorusGrid grid(2, 16);
    SpectralField u = random_bandlimited(grid, 2, 4, 17);
    CHECK(u.is_real(1e-12));
    int f[2];
    for (long m = 0; m < grid.mode_count(); ++m) {
        grid.freq(m, f);
        if (f[0] * f[0] + f[1] * f[1] > 16) {
            CHECK(std::abs(u.at(0, m)) == 0.0);
            CHECK(std::abs(u.at(1, m)) == 0.0);
        }
    }
    // deterministic in the seed
    SpectralField v = random_bandlimited(grid, 2, 4, 17);
    for (size_t i = 0; i < u.raw().size(); ++i) CHECK(u.raw()[i] == v.raw()[i]);
}

TEST_CASE("padded round trip is exact") {
    for (int dims : {1, 2}) {
        TorusGrid grid(dims, 16);
        SpectralField u = random_bandlimited(grid, 1, 7, 3);
        std::vector<cd> phys = to_padded_physical(grid, u.comp(0));
        std::vector<cd> back(static_cast<size_t>(grid.mode_count()));
        from_padded_physical(grid, std::move(phys), back.data());
        for (long m = 0; m < grid.mode_count(); ++m)
            CHECK(std::abs(back[static_cast<size_t>(m)] - u.at(0, m)) < 1e-13);
    }
}

TEST_CASE("2d synthesis hits the physical values") {
    TorusGrid grid(2, 16);
    SpectralField f = sample(ScalarCoefficient::cosine({1, 2}), grid);
    std::vector<cd> phys = to_physical(grid, f.comp(0));
    for (int gy = 0; gy < 16; gy += 5) {
        for (int gx = 0; gx < 16; gx += 3) {
            double x = kTwoPi * gx / 16, y = kTwoPi * gy / 16;
            CHECK(std::abs(phys[static_cast<size_t>(gy) * 16 + gx] - cd(std::cos(x + 2 * y))) <
                  1e-12);
        }
    }
}
