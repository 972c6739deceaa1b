// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <array>
#include <cmath>

#include "ksafe/diffop.hpp"
#include "ksafe/engine.hpp"
#include "ksafe/examples.hpp"

using namespace ksafe;

namespace {

DiffOp scalar_op(int order, std::map<MultiIndex, ScalarCoefficient> coeffs) {
    std::map<MultiIndex, Coefficient> m;
    for (auto& [idx, c] : coeffs) m.emplace(idx, Coefficient::scalar(std::move(c)));
    return DiffOp(1, 1, order, std::move(m));
}

MultiIndex d1(int p) { return MultiIndex({p}); }

// weighted physical pairing <u,v>_w = mean of u * conj(v) * w
cd weighted_inner(const SpectralField& u, const SpectralField& v, const ScalarCoefficient& w) {
    const TorusGrid& grid = u.grid();
    std::vector<cd> wp = to_physical(grid, sample(w, grid).comp(0));
    cd acc = 0.0;
    for (int c = 0; c < u.rank(); ++c) {
        std::vector<cd> up = to_physical(grid, u.comp(c));
        std::vector<cd> vp = to_physical(grid, v.comp(c));
        for (size_t g = 0; g < up.size(); ++g) acc += up[g] * std::conj(vp[g]) * wp[g];
    }
    return acc / static_cast<double>(grid.mode_count());
}

double coeff_value(const DiffOp& op, const MultiIndex& idx, double x) {
    const Coefficient* c = op.coeff(idx);
    if (!c) return 0.0;
    std::array<double, 1> pt{x};
    return c->entry(0, 0).eval(pt);
}

}  // namespace

TEST_CASE("safeness: rough potential, unsafe first-order, smooth operators") {
    // d^2 + c(x), c of grade 1, n=1, k=3: every row needs grade 1
    DiffOp p1 = scalar_op(2, {{d1(2), ScalarCoefficient::constant(1, 1.0)},
                              {d1(0), ScalarCoefficient::power_law(1, 2.0, 64, 7)}});
    SafenessReport r1 = is_safe(p1, Regularity::finite(3));
    CHECK(r1.overall);
    REQUIRE(r1.rows.size() == 3);
    CHECK(r1.rows[0].required == Regularity::finite(1));  // |i|=0: max{1,-1}
    CHECK(r1.rows[0].actual == Regularity::finite(1));
    CHECK(r1.rows[2].required == Regularity::finite(1));  // |i|=2: max{1,1}
    CHECK(r1.rows[1].actual.is_infinite());               // absent coefficient

    // a(x) d with grade-0 a: required a((1),1) = max{0,1} = 1 > 0
    DiffOp p2 = scalar_op(1, {{d1(1), ScalarCoefficient::power_law(1, 0.6, 64, 0)}});
    SafenessReport r2 = is_safe(p2, Regularity::finite(1));
    CHECK_FALSE(r2.overall);
    CHECK(r2.rows[1].required == Regularity::finite(1));
    CHECK(r2.rows[1].actual == Regularity::finite(0));
    CHECK_FALSE(r2.minimal_safe_k.has_value());

    // all-smooth operators pass every k >= s
    DiffOp p3 = scalar_op(2, {{d1(2), ScalarCoefficient::cosine({1}, 0.5)},
                              {d1(0), ScalarCoefficient::constant(1, 2.0)}});
    for (int k = 2; k <= 7; ++k) CHECK(is_safe(p3, Regularity::finite(k)).overall);
    CHECK(is_safe(p3, Regularity::infinite()).overall);
    CHECK(is_safe(p3, Regularity::finite(5)).minimal_safe_k == Regularity::finite(2));
    // rough coefficients fail at k = infinity
    CHECK_FALSE(is_safe(p1, Regularity::infinite()).overall);
}

TEST_CASE("formal adjoint of a*d is -a*d - a'") {
    ScalarCoefficient a = ScalarCoefficient::cosine({1}, 1.0, 0.7);
    DiffOp p = scalar_op(1, {{d1(1), a}});
    DiffOp adj = formal_adjoint(p);
    for (double x : {0.0, 0.9, 2.5, 5.1}) {
        CHECK(coeff_value(adj, d1(1), x) == doctest::Approx(-std::cos(x + 0.7)).epsilon(1e-12));
        CHECK(coeff_value(adj, d1(0), x) == doctest::Approx(std::sin(x + 0.7)).epsilon(1e-12));
    }
}

TEST_CASE("formal adjoint: inner-product oracle") {
    TorusGrid grid(1, 256);
    ScalarCoefficient one = ScalarCoefficient::constant(1, 1.0);
    std::uint64_t seed = 31;
    for (int trial = 0; trial < 5; ++trial) {
        ScalarCoefficient a = ScalarCoefficient::cosine({1 + trial % 3}, 1.0 + 0.2 * trial, 0.3);
        ScalarCoefficient b = ScalarCoefficient::cosine({2}, 0.7, 1.1 * trial);
        DiffOp p = scalar_op(2, {{d1(2), a}, {d1(1), b}, {d1(0), one.scaled(0.5)}});
        DiffOp adj = formal_adjoint(p);
        SpectralField u = random_bandlimited(grid, 1, 64, seed + 2 * trial);
        SpectralField v = random_bandlimited(grid, 1, 64, seed + 2 * trial + 1);
        cd lhs = l2_inner(apply(p, u), v);
        cd rhs = l2_inner(u, apply(adj, v));
        double scale = sobolev_norm(u, 2) * sobolev_norm(v, 2) + 1e-30;
        CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
}

TEST_CASE("formal adjoint with a density: <Pu,v>_w = <u,P'v>") {
    TorusGrid grid(1, 256);
    ScalarCoefficient w =
        ScalarCoefficient::constant(1, 2.0) + ScalarCoefficient::cosine({1}, 0.5);
    ScalarCoefficient a = ScalarCoefficient::cosine({2}, 1.0, 0.2);
    DiffOp p = scalar_op(1, {{d1(1), a}});
    AdjointOptions opts;
    opts.density = w;
    DiffOp adj = formal_adjoint(p, opts);
    SpectralField u = random_bandlimited(grid, 1, 32, 5);
    SpectralField v = random_bandlimited(grid, 1, 32, 6);
    cd lhs = weighted_inner(apply(p, u), v, w);
    cd rhs = l2_inner(u, apply(adj, v));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + 1.0));
}

TEST_CASE("adjoint of constant-coefficient d^2 and of multiplication") {
    DiffOp lap = scalar_op(2, {{d1(2), ScalarCoefficient::constant(1, 1.0)}});
    DiffOp lap_adj = formal_adjoint(lap);
    for (double x : {0.1, 1.0}) {
        CHECK(coeff_value(lap_adj, d1(2), x) == doctest::Approx(1.0));
        CHECK(coeff_value(lap_adj, d1(1), x) == doctest::Approx(0.0));
        CHECK(coeff_value(lap_adj, d1(0), x) == doctest::Approx(0.0));
    }
    ScalarCoefficient c = ScalarCoefficient::cosine({3}, 1.4);
    DiffOp mult = scalar_op(0, {{d1(0), c}});
    DiffOp mult_adj = formal_adjoint(mult);
    for (double x : {0.0, 0.5, 2.2})
        CHECK(coeff_value(mult_adj, d1(0), x) ==
              doctest::Approx(1.4 * std::cos(3 * x)).epsilon(1e-12));
}

TEST_CASE("adjoint involution reproduces the coefficients") {
    ScalarCoefficient a = ScalarCoefficient::cosine({1}, 1.0, 0.4);
    ScalarCoefficient b = ScalarCoefficient::cosine({2}, 0.6);
    DiffOp p = scalar_op(2, {{d1(2), a}, {d1(1), b}});
    DiffOp back = formal_adjoint(formal_adjoint(p));
    for (int g = 0; g < 16; ++g) {
        double x = kTwoPi * g / 16.0;
        for (int ord = 0; ord <= 2; ++ord)
            CHECK(coeff_value(back, d1(ord), x) ==
                  doctest::Approx(coeff_value(p, d1(ord), x)).epsilon(1e-9));
    }
}

TEST_CASE("adjoint grade bookkeeping failures throw") {
    // derivative of the grade-0 top coefficient would go negative
    DiffOp p = scalar_op(1, {{d1(1), ScalarCoefficient::power_law(1, 0.6, 64, 0)}});
    CHECK_THROWS_AS(formal_adjoint(p), GradeError);
}

TEST_CASE("metric validation") {
    DiffOp p = scalar_op(1, {{d1(1), ScalarCoefficient::cosine({1})}});
    AdjointOptions opts;
    Coefficient bad(1, 1, 1);
    bad.set_entry(0, 0, ScalarCoefficient::constant(1, -2.0));
    opts.metric = bad;
    CHECK_THROWS_AS(formal_adjoint(p, opts), std::invalid_argument);
    Coefficient varying(1, 1, 1);
    varying.set_entry(0, 0, ScalarCoefficient::cosine({1}));
    opts.metric = varying;
    CHECK_THROWS_AS(formal_adjoint(p, opts), std::invalid_argument);
    opts.metric = Coefficient::constant_matrix(1, 1, {3.0});
    CHECK_NOTHROW(formal_adjoint(p, opts));
}

TEST_CASE("composition: (a d) o (b d) = ab d^2 + a b' d") {
    ScalarCoefficient a = ScalarCoefficient::cosine({1}, 1.0, 0.3);
    ScalarCoefficient b = ScalarCoefficient::cosine({2}, 0.7, 1.2);
    DiffOp A = scalar_op(1, {{d1(1), a}});
    DiffOp B = scalar_op(1, {{d1(1), b}});
    DiffOp AB = compose(A, B);
    CHECK(AB.order() == 2);
    for (double x : {0.0, 0.8, 1.9, 4.4}) {
        double av = std::cos(x + 0.3), bv = 0.7 * std::cos(2 * x + 1.2);
        double bd = -1.4 * std::sin(2 * x + 1.2);
        CHECK(coeff_value(AB, d1(2), x) == doctest::Approx(av * bv).epsilon(1e-12));
        CHECK(coeff_value(AB, d1(1), x) == doctest::Approx(av * bd).epsilon(1e-12));
    }
}

TEST_CASE("composition with the identity") {
    ScalarCoefficient a = ScalarCoefficient::cosine({1}, 1.0, 0.3);
    DiffOp A = scalar_op(2, {{d1(2), a}, {d1(0), ScalarCoefficient::constant(1, 2.0)}});
    DiffOp I = scalar_op(0, {{d1(0), ScalarCoefficient::constant(1, 1.0)}});
    DiffOp AI = compose(A, I);
    DiffOp IA = compose(I, A);
    TorusGrid grid(1, 64);
    SpectralField u = random_bandlimited(grid, 1, 16, 9);
    SpectralField ref = apply(A, u);
    for (const DiffOp* op : {&AI, &IA}) {
        SpectralField got = apply(*op, u);
        got -= ref;
        CHECK(sobolev_norm(got, 0) <= 1e-12 * sobolev_norm(ref, 0));
    }
}

TEST_CASE("composition oracle: apply both sides") {
    // (d) o (c .) = c d + c'
    TorusGrid grid(1, 128);
    ScalarCoefficient c = ScalarCoefficient::cosine({3}, 1.1, 0.5);
    DiffOp D = scalar_op(1, {{d1(1), ScalarCoefficient::constant(1, 1.0)}});
    DiffOp M = scalar_op(0, {{d1(0), c}});
    DiffOp DM = compose(D, M);
    SpectralField u = random_bandlimited(grid, 1, 32, 13);
    SpectralField lhs = apply(DM, u);
    SpectralField rhs = apply(D, apply(M, u));
    lhs -= rhs;
    CHECK(sobolev_norm(lhs, 0) <= 1e-10 * sobolev_norm(rhs, 0));
}

TEST_CASE("composition associativity on bandlimited fields") {
    TorusGrid grid(1, 256);
    DiffOp A = scalar_op(1, {{d1(1), ScalarCoefficient::cosine({1}, 0.9)}});
    DiffOp B = scalar_op(1, {{d1(1), ScalarCoefficient::cosine({2}, 0.5, 0.4)},
                             {d1(0), ScalarCoefficient::constant(1, 1.0)}});
    DiffOp C = scalar_op(0, {{d1(0), ScalarCoefficient::cosine({1}, 0.8, 2.0)}});
    SpectralField u = random_bandlimited(grid, 1, 32, 21);
    SpectralField lhs = apply(compose(A, compose(B, C)), u);
    SpectralField rhs = apply(compose(compose(A, B), C), u);
    double scale = sobolev_norm(rhs, 0);
    lhs -= rhs;
    CHECK(sobolev_norm(lhs, 0) <= 1e-9 * scale);
}

TEST_CASE("principal symbol values and adjoint symbol relation") {
    DiffOp lap = scalar_op(2, {{d1(2), ScalarCoefficient::constant(1, 1.0)}});
    std::array<double, 1> x{1.3}, xi{2.0};
    CHECK(principal_symbol(lap, x, xi).value[0].real() == doctest::Approx(4.0));

    ScalarCoefficient a = ScalarCoefficient::cosine({1});
    DiffOp P = scalar_op(1, {{d1(1), a}});
    std::array<double, 1> x0{0.0}, xi3{3.0};
    CHECK(principal_symbol(P, x0, xi3).value[0].real() == doctest::Approx(3.0));

    // sigma(P') = (-1)^s sigma(P) for g = 1
    DiffOp Padj = formal_adjoint(P);
    std::uint64_t st = 77;
    for (int t = 0; t < 10; ++t) {
        std::array<double, 1> xx{uniform01(st) * kTwoPi};
        std::array<double, 1> xxi{uniform01(st) * 4.0 - 2.0};
        double lhs = principal_symbol(Padj, xx, xxi).value[0].real();
        double rhs = -principal_symbol(P, xx, xxi).value[0].real();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("symbol multiplicativity at top order") {
    ScalarCoefficient a = ScalarCoefficient::cosine({1}, 1.2, 0.1);
    ScalarCoefficient b = ScalarCoefficient::cosine({2}, 0.8, 0.9);
    DiffOp A = scalar_op(1, {{d1(1), a}});
    DiffOp B = scalar_op(1, {{d1(1), b}, {d1(0), ScalarCoefficient::constant(1, 3.0)}});
    DiffOp AB = compose(A, B);
    std::uint64_t st = 5;
    for (int t = 0; t < 10; ++t) {
        std::array<double, 1> x{uniform01(st) * kTwoPi};
        std::array<double, 1> xi{uniform01(st) * 2.0 + 0.5};
        cd sa = principal_symbol(A, x, xi).value[0];
        cd sb = principal_symbol(B, x, xi).value[0];
        cd sab = principal_symbol(AB, x, xi).value[0];
        CHECK(std::abs(sab - sa * sb) <= 1e-10 * (1.0 + std::abs(sa * sb)));
    }
}

TEST_CASE("safeness closure under composition and adjoint") {
    // k = 3, n = 1: grade-2 coefficients on first-order operators
    ScalarCoefficient a = ScalarCoefficient::power_law(1, 2.75, 128, 3);
    ScalarCoefficient b = ScalarCoefficient::power_law(1, 2.75, 128, 4);
    DiffOp A = scalar_op(1, {{d1(1), ScalarCoefficient::constant(1, 1.0) + a}});
    DiffOp B = scalar_op(1, {{d1(1), ScalarCoefficient::constant(1, 1.0) + b}});
    Regularity k = Regularity::finite(3);
    REQUIRE(is_safe(A, k).overall);
    REQUIRE(is_safe(B, k).overall);
    CHECK(is_safe(compose(A, B), k).overall);

    DiffOp divform = examples::rough_divform();
    REQUIRE(is_safe(divform, k).overall);
    DiffOp adj = formal_adjoint(divform);
    CHECK(is_safe(adj, Regularity::finite(3 - 2)).overall);
}

TEST_CASE("divergence-form Laplacian") {
    // a = 1: constant-coefficient Laplacian
    DiffOp lap = divergence_form_laplacian(ScalarCoefficient::constant(1, 1.0));
    CHECK(lap.order() == 2);
    CHECK(lap.coeff(d1(1)) == nullptr);
    CHECK(coeff_value(lap, d1(2), 0.5) == doctest::Approx(1.0));

    // a = 1 + cos(x)/2: top a, first-order coefficient a' = -sin(x)/2
    ScalarCoefficient a =
        ScalarCoefficient::constant(1, 1.0) + ScalarCoefficient::cosine({1}, 0.5);
    DiffOp p = divergence_form_laplacian(a);
    for (double x : {0.0, 1.1, 3.9}) {
        CHECK(coeff_value(p, d1(2), x) == doctest::Approx(1.0 + 0.5 * std::cos(x)).epsilon(1e-12));
        CHECK(coeff_value(p, d1(1), x) == doctest::Approx(-0.5 * std::sin(x)).epsilon(1e-12));
    }
    for (int k = 2; k <= 6; ++k) CHECK(is_safe(p, Regularity::finite(k)).overall);

    // rough a of grade k-1 = 2: safe at k = 3, not at k = 4
    DiffOp rough = examples::rough_divform();
    CHECK(is_safe(rough, Regularity::finite(3)).overall);
    CHECK_FALSE(is_safe(rough, Regularity::finite(4)).overall);

    // sign-changing a is rejected
    CHECK_THROWS_AS(divergence_form_laplacian(ScalarCoefficient::cosine({1})),
                    std::invalid_argument);
}

TEST_CASE("schroedinger-like constructor") {
    DiffOp plain = schroedinger_like(ScalarCoefficient::constant(1, 1.0),
                                     ScalarCoefficient::zero(1), 3.0);
    CHECK(plain.coeff(MultiIndex({0})) == nullptr);

    // a=1, V=1, C=-1: 1 + d^2 pattern
    DiffOp shifted = schroedinger_like(ScalarCoefficient::constant(1, 1.0),
                                       ScalarCoefficient::constant(1, 1.0), -1.0);
    CHECK(coeff_value(shifted, d1(0), 0.3) == doctest::Approx(1.0));

    DiffOp rough = examples::rough_schroedinger();
    CHECK(is_safe(rough, Regularity::finite(3)).overall);  // order-0 needs grade 1
}

TEST_CASE("ellipticity sampling") {
    // Laplacian on T^2: symbol xi1^2 + xi2^2 = 1 on the cosphere
    std::map<MultiIndex, Coefficient> coeffs;
    coeffs.emplace(MultiIndex({2, 0}), Coefficient::scalar(ScalarCoefficient::constant(2, 1.0)));
    coeffs.emplace(MultiIndex({0, 2}), Coefficient::scalar(ScalarCoefficient::constant(2, 1.0)));
    DiffOp lap2(2, 1, 2, std::move(coeffs));
    EllipticityReport r = is_elliptic(lap2);
    CHECK(r.elliptic);
    CHECK(r.worst_margin == doctest::Approx(1.0).epsilon(1e-12));

    // d1^2 - d2^2 degenerates on the diagonal
    std::map<MultiIndex, Coefficient> wave;
    wave.emplace(MultiIndex({2, 0}), Coefficient::scalar(ScalarCoefficient::constant(2, 1.0)));
    wave.emplace(MultiIndex({0, 2}), Coefficient::scalar(ScalarCoefficient::constant(2, -1.0)));
    DiffOp hyperbolic(2, 1, 2, std::move(wave));
    CHECK_FALSE(is_elliptic(hyperbolic).elliptic);

    // (1 + cos(x)/2) d^2: margin is the coefficient minimum 1/2
    ScalarCoefficient a =
        ScalarCoefficient::constant(1, 1.0) + ScalarCoefficient::cosine({1}, 0.5);
    DiffOp var = scalar_op(2, {{d1(2), a}});
    EllipticityReport rv = is_elliptic(var);
    CHECK(rv.elliptic);
    CHECK(rv.worst_margin == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("diffop validation") {
    CHECK_THROWS_AS(scalar_op(2, {{d1(0), ScalarCoefficient::constant(1, 1.0)}}),
                    std::invalid_argument);  // no top-order coefficient
    CHECK_THROWS_AS(scalar_op(1, {{d1(2), ScalarCoefficient::constant(1, 1.0)}}),
                    std::invalid_argument);  // key above declared order
}
