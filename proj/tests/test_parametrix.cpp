// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "ksafe/examples.hpp"
#include "ksafe/parametrix.hpp"

using namespace ksafe;
namespace par = ksafe::parametrix;

namespace {

DiffOp scalar_op(int order, std::map<MultiIndex, ScalarCoefficient> coeffs) {
    std::map<MultiIndex, Coefficient> m;
    for (auto& [idx, c] : coeffs) m.emplace(idx, Coefficient::scalar(std::move(c)));
    return DiffOp(1, 1, order, std::move(m));
}

MultiIndex d1(int p) { return MultiIndex({p}); }

}  // namespace

TEST_CASE("partition of unity sums to one on the grid") {
    TorusGrid grid(1, 256);
    par::BumpPartition part(8, grid);
    for (long g = 0; g < grid.mode_count(); ++g) {
        double s = 0.0;
        for (int j = 0; j < 8; ++j) s += part.values(j)[static_cast<size_t>(g)];
        CHECK(std::abs(s - 1.0) < 1e-10);
    }
}

TEST_CASE("bumps are nonnegative with the declared support radius") {
    TorusGrid grid(1, 128);
    par::BumpPartition part(8, grid);
    double eps = part.eps();
    for (int j = 0; j < 8; ++j) {
        for (long g = 0; g < grid.mode_count(); ++g) {
            double v = part.values(j)[static_cast<size_t>(g)];
            CHECK(v >= 0.0);
            double x = kTwoPi * g / grid.modes_per_dim();
            double d = std::remainder(x - part.center(j), kTwoPi);
            if (std::abs(d) > 2.0 * eps) CHECK(v == 0.0);  // support within 2 cells
        }
    }
}

TEST_CASE("translation equivariance on compatible grids is exact") {
    TorusGrid grid(1, 64);
    par::BumpPartition part(8, grid);
    const int shift = 64 / 8;
    for (int j = 0; j + 1 < 8; ++j)
        for (long g = 0; g < grid.mode_count(); ++g)
            CHECK(part.values(j + 1)[static_cast<size_t>((g + shift) % 64)] ==
                  part.values(j)[static_cast<size_t>(g)]);
}

TEST_CASE("too-narrow bump support fails construction") {
    TorusGrid grid(1, 128);
    CHECK_THROWS_AS(par::BumpPartition(8, grid, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(par::BumpPartition(3, grid), std::invalid_argument);
}

TEST_CASE("interval averages: constants, cosine closed form, odd symmetry") {
    TorusGrid grid(1, 512);
    SpectralField cfield = sample(ScalarCoefficient::constant(1, 3.25), grid);
    SpectralField cosfield = sample(ScalarCoefficient::cosine({1}), grid);
    for (double eps : {kTwoPi / 8, kTwoPi / 16, kTwoPi / 32}) {
        for (double center : {0.0, 1.1, 4.0})
            CHECK(par::average_coefficient(cfield, center, eps) == doctest::Approx(3.25).epsilon(1e-12));
        // mean of cos over [c-eps, c+eps] is cos(c) sin(eps)/eps
        CHECK(par::average_coefficient(cosfield, 0.0, eps) ==
              doctest::Approx(std::sin(eps) / eps).epsilon(1e-8));
        CHECK(std::abs(par::average_coefficient(cosfield, kTwoPi / 4, eps)) < 1e-12);
    }
    CHECK_THROWS_AS(par::average_coefficient(cfield, 0.0, kTwoPi / 1024), std::invalid_argument);
}

TEST_CASE("freezing constants reproduces the operator everywhere") {
    TorusGrid grid(1, 128);
    DiffOp P = examples::identity_minus_laplacian();
    par::BumpPartition part(8, grid);
    auto frozen = par::freeze(P, part, grid);
    REQUIRE(frozen.size() == 8);
    for (const auto& f : frozen) {
        CHECK(f.coeffs.at(d1(2))[0] == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(f.coeffs.at(d1(0))[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frozen top coefficient of the smooth divergence form") {
    TorusGrid grid(1, 512);
    DiffOp P = examples::smooth_divform();
    par::BumpPartition part(16, grid);
    auto frozen = par::freeze(P, part, grid);
    double eps = part.eps();
    // center 0: mean of 1 + cos(x)/2 over [-eps, eps] = 1 + sinc(eps)/2
    CHECK(frozen[0].coeffs.at(d1(2))[0] ==
          doctest::Approx(1.0 + 0.5 * std::sin(eps) / eps).epsilon(1e-8));
}

TEST_CASE("freezing error scales linearly for a smooth coefficient") {
    TorusGrid grid(1, 1024);
    DiffOp P = examples::smooth_divform();
    auto rows = par::freezing_error_sweep(P, grid, {8, 16, 32, 64});
    REQUIRE(rows.size() == 4);
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].a_eps < rows[i - 1].a_eps);
    double gamma = par::fitted_rate(rows);
    CHECK(gamma > 0.8);
    CHECK(gamma < 1.3);
    // A(eps)/eps approaches the Lipschitz-type constant
    double r0 = rows[2].a_eps / rows[2].eps;
    double r1 = rows[3].a_eps / rows[3].eps;
    CHECK(r1 / r0 == doctest::Approx(1.0).epsilon(0.35));
}

TEST_CASE("freezing error for a grade-1 (continuous) rough coefficient") {
    ScalarCoefficient a = ScalarCoefficient::constant(1, 1.0) +
                          ScalarCoefficient::power_law(1, 2.0, 512, 3, 0.1);
    DiffOp P = divergence_form_laplacian(a);
    auto rows = par::freezing_error_sweep(P, TorusGrid(1, 1024), {8, 16, 32, 64});
    for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].a_eps < rows[i - 1].a_eps);
    double gamma = par::fitted_rate(rows);
    CHECK(gamma > 0.0);
    CHECK(gamma <= 1.0);
}

TEST_CASE("freezing error vanishes for constant coefficients") {
    TorusGrid grid(1, 256);
    DiffOp P = examples::identity_minus_laplacian();
    auto rows = par::freezing_error_sweep(P, grid, {8, 16});
    for (const auto& r : rows) CHECK(r.a_eps < 1e-12);
}

TEST_CASE("near-inverse multiplier of the frozen Laplacian") {
    TorusGrid grid(1, 128);
    DiffOp lap = scalar_op(2, {{d1(2), ScalarCoefficient::constant(1, 1.0)}});
    par::BumpPartition part(8, grid);
    auto frozen = par::freeze(lap, part, grid);
    double kc = 1.0;
    par::FourierMultiplier E = par::near_inverse(frozen[0], kc, grid);
    for (long m = 0; m < grid.mode_count(); ++m) {
        int f = TorusGrid::freq_of(static_cast<int>(m), 128);
        cd block = E.blocks[static_cast<size_t>(m)];
        if (std::abs(f) <= kc) {
            CHECK(std::abs(block) == 0.0);  // kappa = 1 inside the ball
        } else if (std::abs(f) >= kc + 1) {
            CHECK(std::abs(block - cd(-1.0 / (static_cast<double>(f) * f))) < 1e-12);
        }
    }
    // H^sigma -> H^{sigma+2} bound: |E|(1+xi^2) stays O(1)
    CHECK(E.weighted_bound(2) < 3.0);
}

TEST_CASE("E o F = 1 + rho with compactly supported rho") {
    TorusGrid grid(1, 128);
    DiffOp P = examples::smooth_divform();
    par::BumpPartition part(8, grid);
    auto frozen = par::freeze(P, part, grid);
    double kc = 2.0;
    for (const auto& fro : frozen) {
        par::FourierMultiplier E = par::near_inverse(fro, kc, grid);
        par::FourierMultiplier rho = par::smoothing_remainder(E, fro);
        for (long m = 0; m < grid.mode_count(); ++m) {
            int f = TorusGrid::freq_of(static_cast<int>(m), 128);
            // multiplied-out E(f) symbol(f) - 1 agrees with rho entrywise
            cd product = E.blocks[static_cast<size_t>(m)] * fro.symbol(f)[0] - cd(1.0);
            CHECK(std::abs(rho.blocks[static_cast<size_t>(m)] - product) < 1e-12);
            // bit-level support: zero outside B_{kc+1}
            if (std::abs(f) >= kc + 1.0) CHECK(rho.blocks[static_cast<size_t>(m)] == cd(0.0));
        }
    }
}

TEST_CASE("E o F acts as the identity on spectra outside the cutoff support") {
    TorusGrid grid(1, 128);
    DiffOp P = examples::smooth_divform();
    par::BumpPartition part(8, grid);
    auto frozen = par::freeze(P, part, grid);
    double kc = 2.0;
    par::FourierMultiplier E = par::near_inverse(frozen[3], kc, grid);
    // u with spectrum strictly outside B_{kc+1}: kappa = 0 exactly there
    SpectralField u = sample(ScalarCoefficient::cosine({5}, 1.0, 0.4), grid);
    par::FourierMultiplier Pj{grid, 1, {}};
    Pj.blocks.assign(static_cast<size_t>(grid.mode_count()), cd(0.0));
    for (long m = 0; m < grid.mode_count(); ++m) {
        int f = TorusGrid::freq_of(static_cast<int>(m), 128);
        Pj.blocks[static_cast<size_t>(m)] = frozen[3].symbol(f)[0];
    }
    SpectralField roundtrip = E.apply(Pj.apply(u));
    roundtrip -= u;
    CHECK(sobolev_norm(roundtrip, 0) < 1e-12);
}

TEST_CASE("uniform near-inverse bound across the lattice sweep") {
    TorusGrid grid(1, 512);
    DiffOp P = examples::rough_divform();
    double kc = 2.0;
    std::vector<double> bounds;
    for (int m : {8, 16, 32}) {
        par::BumpPartition part(m, grid);
        auto frozen = par::freeze(P, part, grid);
        double worst = 0.0;
        for (const auto& fro : frozen) {
            par::FourierMultiplier E = par::near_inverse(fro, kc, grid);
            worst = std::max(worst, E.weighted_bound(2));
        }
        bounds.push_back(worst);
    }
    double lo = *std::min_element(bounds.begin(), bounds.end());
    double hi = *std::max_element(bounds.begin(), bounds.end());
    CHECK(hi / lo < 1.05);
}

TEST_CASE("degenerate frozen symbol is rejected") {
    TorusGrid grid(1, 128);
    // top coefficient averages to ~0 at the center pi/2
    DiffOp P(1, 1, 2,
             [] {
                 std::map<MultiIndex, Coefficient> m;
                 m.emplace(MultiIndex({2}), Coefficient::scalar(ScalarCoefficient::cosine({1})));
                 return m;
             }());
    par::BumpPartition part(8, grid);
    auto frozen = par::freeze(P, part, grid);
    CHECK_THROWS_AS(par::near_inverse(frozen[2], 2.0, grid), std::runtime_error);
}

TEST_CASE("splitting: constant coefficients reconstruct bandlimited fields") {
    TorusGrid grid(1, 256);
    DiffOp P = examples::identity_minus_laplacian();
    par::BumpPartition part(8, grid);
    // spectrum outside B_{kc}: the R term vanishes because means are exact
    SpectralField u = sample(ScalarCoefficient::cosine({7}, 1.0, 0.2), grid);
    par::SplittingReport rep = par::splitting_check(P, u, part, 2.0, 2);
    CHECK(rep.term_r < 1e-12);
    CHECK(rep.residual <= 1e-8);
}

TEST_CASE("splitting: zero field gives all-zero terms") {
    TorusGrid grid(1, 256);
    DiffOp P = examples::smooth_divform();
    par::BumpPartition part(8, grid);
    SpectralField u(grid, 1);
    par::SplittingReport rep = par::splitting_check(P, u, part, 2.0, 2);
    CHECK(rep.residual == 0.0);
    CHECK(rep.term_f == 0.0);
    CHECK(rep.term_r == 0.0);
    CHECK(rep.term_q == 0.0);
    CHECK(rep.term_rho == 0.0);
}

TEST_CASE("splitting: rough example at the acceptance configuration") {
    TorusGrid grid(1, 512);
    DiffOp P = examples::rough_divform();
    par::BumpPartition part(16, grid);
    SpectralField u = random_bandlimited(grid, 1, 128, 2026);
    par::SplittingReport rep = par::splitting_check(P, u, part, 2.0, 3);
    CHECK(rep.residual <= 1e-6 * rep.u_norm);
}

TEST_CASE("contraction onset: the E R coefficient tracks A(eps) and drops below 1/2") {
    TorusGrid grid(1, 512);
    DiffOp P = examples::smooth_divform();
    SpectralField u = random_bandlimited(grid, 1, 64, 11);
    std::vector<double> ratio;
    double er64 = 0.0;
    for (int m : {8, 16, 32, 64}) {
        par::BumpPartition part(m, grid);
        par::SplittingReport rep = par::splitting_check(P, u, part, 2.0, 2);
        auto rows = par::freezing_error_sweep(P, grid, {m});
        ratio.push_back(rep.er_coefficient / rows.front().a_eps);
        if (m == 64) er64 = rep.er_coefficient;
    }
    CHECK(er64 < 0.5);
    double lo = *std::min_element(ratio.begin(), ratio.end());
    double hi = *std::max_element(ratio.begin(), ratio.end());
    CHECK(hi / lo < 4.0);  // C(l) stable while A(eps) shrinks
}
