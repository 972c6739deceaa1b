// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/diffop.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ksafe/util.hpp"

namespace ksafe {

DiffOp::DiffOp(int dims, int rank, int order, std::map<MultiIndex, Coefficient> coeffs,
               bool validate_top)
    : n_(dims), q_(rank), s_(order) {
    if (dims < 1) throw std::invalid_argument("DiffOp: dims >= 1");
    if (rank < 1) throw std::invalid_argument("DiffOp: rank >= 1");
    if (order < 0) throw std::invalid_argument("DiffOp: order >= 0");
    bool top_nonzero = false;
    for (auto& [idx, coeff] : coeffs) {
        if (idx.dims() != dims)
            throw std::invalid_argument("DiffOp: multiindex " + idx.str() + " has wrong dimension");
        if (idx.order() > order)
            throw std::invalid_argument("DiffOp: multiindex " + idx.str() +
                                        " exceeds declared order " + std::to_string(order));
        if (coeff.dims() != dims || coeff.rows() != rank || coeff.cols() != rank)
            throw std::invalid_argument("DiffOp: coefficient shape mismatch at " + idx.str());
        if (coeff.is_zero()) continue;
        if (idx.order() == order) top_nonzero = true;
        coeffs_.emplace(idx, coeff);
    }
    if (validate_top && order > 0 && !top_nonzero)
        throw std::invalid_argument("DiffOp: no nonzero coefficient of top order " +
                                    std::to_string(order));
    if (validate_top && order == 0 && coeffs_.empty())
        throw std::invalid_argument("DiffOp: zero operator");
}

const Coefficient* DiffOp::coeff(const MultiIndex& i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? nullptr : &it->second;
}

DiffOp operator+(const DiffOp& a, const DiffOp& b) {
    if (a.n_ != b.n_ || a.q_ != b.q_) throw std::invalid_argument("DiffOp sum: shape mismatch");
    std::map<MultiIndex, Coefficient> coeffs = a.coeffs_;
    for (const auto& [idx, c] : b.coeffs_) {
        auto it = coeffs.find(idx);
        if (it == coeffs.end())
            coeffs.emplace(idx, c);
        else
            it->second = it->second + c;
    }
    return DiffOp(a.n_, a.q_, std::max(a.s_, b.s_), std::move(coeffs), /*validate_top=*/false);
}

DiffOp operator-(const DiffOp& a, const DiffOp& b) { return a + b.scaled(-1.0); }

DiffOp DiffOp::scaled(double s) const {
    std::map<MultiIndex, Coefficient> coeffs;
    for (const auto& [idx, c] : coeffs_) coeffs.emplace(idx, c.scaled(s));
    return DiffOp(n_, q_, s_, std::move(coeffs), /*validate_top=*/false);
}

// --- safeness ---------------------------------------------------------------

SafenessReport is_safe(const DiffOp& op, Regularity k) {
    SafenessReport rep;
    rep.k = k;
    if (!k.is_infinite() && op.order() > k.value())
        rep.warnings.push_back("operator order s = " + std::to_string(op.order()) +
                               " exceeds k = " + k.str());
    if (!k.is_infinite() && 2 * k.value() <= op.dims())
        rep.warnings.push_back("k = " + k.str() + " is not above n/2; Fredholm statements need k > n/2");
    rep.overall = true;
    for (const auto& idx : enumerate_multiindices(op.dims(), op.order())) {
        SafenessRow row;
        row.index = idx;
        row.required = safe_grade_threshold(idx.order(), k, op.order(), op.dims());
        const Coefficient* c = op.coeff(idx);
        row.actual = c ? c->exact_grade() : Regularity::infinite();
        row.pass = row.actual >= row.required;
        rep.overall = rep.overall && row.pass;
        rep.rows.push_back(std::move(row));
    }
    // Least k' <= k with every row passing (the passing set is an interval
    // starting at s when nonempty, since thresholds are monotone in k).
    int k_max = k.is_infinite() ? op.order() : k.value();
    for (int kp = op.order(); kp <= k_max; ++kp) {
        bool all = true;
        for (const auto& row : rep.rows) {
            Regularity req = safe_grade_threshold(row.index.order(), Regularity::finite(kp),
                                                  op.order(), op.dims());
            if (!(row.actual >= req)) {
                all = false;
                break;
            }
        }
        if (all) {
            rep.minimal_safe_k = Regularity::finite(kp);
            break;
        }
    }
    return rep;
}

// --- formal adjoint ----------------------------------------------------------

namespace {

std::vector<double> constant_matrix_values(const Coefficient& g) {
    std::vector<double> vals(static_cast<size_t>(g.rows()) * g.cols());
    for (int r = 0; r < g.rows(); ++r) {
        for (int c = 0; c < g.cols(); ++c) {
            const ScalarCoefficient& e = g.entry(r, c);
            double v = 0.0;
            if (e.is_zero()) {
                v = 0.0;
            } else if (e.terms().size() == 1 && std::holds_alternative<ConstTerm>(e.terms()[0])) {
                v = std::get<ConstTerm>(e.terms()[0]).value;
            } else {
                throw std::invalid_argument(
                    "bundle metric must be a constant matrix (variable metrics are not "
                    "representable in the coefficient algebra)");
            }
            vals[static_cast<size_t>(r) * g.cols() + c] = v;
        }
    }
    return vals;
}

void check_spd(const std::vector<double>& g, int q) {
    for (int r = 0; r < q; ++r)
        for (int c = 0; c < q; ++c)
            if (std::abs(g[static_cast<size_t>(r) * q + c] - g[static_cast<size_t>(c) * q + r]) > 1e-12)
                throw std::invalid_argument("bundle metric must be symmetric");
    // Cholesky; fails on a non-positive pivot.
    std::vector<double> a = g;
    for (int col = 0; col < q; ++col) {
        double d = a[static_cast<size_t>(col) * q + col];
        for (int m = 0; m < col; ++m) {
            double l = a[static_cast<size_t>(col) * q + m];
            d -= l * l;
        }
        if (d <= 0.0) throw std::invalid_argument("bundle metric must be positive definite");
        double rt = std::sqrt(d);
        a[static_cast<size_t>(col) * q + col] = rt;
        for (int r = col + 1; r < q; ++r) {
            double v = a[static_cast<size_t>(r) * q + col];
            for (int m = 0; m < col; ++m)
                v -= a[static_cast<size_t>(r) * q + m] * a[static_cast<size_t>(col) * q + m];
            a[static_cast<size_t>(r) * q + col] = v / rt;
        }
    }
}

std::vector<double> invert_real(const std::vector<double>& g, int q) {
    std::vector<cd> m(g.begin(), g.end());
    std::vector<cd> inv = mat_inverse(std::move(m), q);
    std::vector<double> out(inv.size());
    for (size_t i = 0; i < inv.size(); ++i) out[i] = inv[i].real();
    return out;
}

void check_density_positive(const ScalarCoefficient& w) {
    const int n = w.dims();
    TorusGrid grid(n, n == 1 ? 128 : 32);
    SpectralField f = sample(w, grid);
    std::vector<cd> phys = to_physical(grid, f.comp(0));
    for (const cd& v : phys)
        if (v.real() <= 0.0)
            throw std::invalid_argument("density must be positive at every sampled point");
}

Coefficient multiply_by_scalar(const Coefficient& a, const ScalarCoefficient& w) {
    Coefficient out(a.dims(), a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r) {
        for (int c = 0; c < a.cols(); ++c) {
            if (a.entry(r, c).is_zero()) continue;
            out.set_entry(r, c, ScalarCoefficient::multiply(a.entry(r, c), w).first);
        }
    }
    return out;
}

}  // namespace

DiffOp formal_adjoint(const DiffOp& op, const AdjointOptions& opts) {
    const int q = op.rank();
    std::vector<double> g, g_inv;
    bool metric_nontrivial = false;
    if (opts.metric) {
        if (opts.metric->rows() != q || opts.metric->cols() != q)
            throw std::invalid_argument("metric shape mismatch");
        g = constant_matrix_values(*opts.metric);
        check_spd(g, q);
        g_inv = invert_real(g, q);
        metric_nontrivial = true;
    }
    if (opts.density) check_density_positive(*opts.density);

    std::map<MultiIndex, Coefficient> adj;
    for (const auto& [l, A_l] : op.coeffs()) {
        Coefficient conj_l = A_l.transpose();
        if (metric_nontrivial && q > 1) conj_l = conj_l.conjugated(g_inv, g);
        if (opts.density) conj_l = multiply_by_scalar(conj_l, *opts.density);
        double sign = (l.order() % 2 == 0) ? 1.0 : -1.0;
        for (const auto& j : enumerate_below(l)) {
            Coefficient contrib =
                conj_l.derivative(sub(l, j)).scaled(sign * static_cast<double>(binom(l, j)));
            auto it = adj.find(j);
            if (it == adj.end())
                adj.emplace(j, std::move(contrib));
            else
                it->second = it->second + contrib;
        }
    }
    return DiffOp(op.dims(), q, op.order(), std::move(adj), /*validate_top=*/false);
}

// --- composition --------------------------------------------------------------

DiffOp compose(const DiffOp& first, const DiffOp& second) {
    if (first.dims() != second.dims() || first.rank() != second.rank())
        throw std::invalid_argument("compose: shape mismatch");
    std::map<MultiIndex, Coefficient> out;
    for (const auto& [j1, A1] : first.coeffs()) {
        for (const auto& [j2, A2] : second.coeffs()) {
            for (const auto& m : enumerate_below(j1)) {
                // d^{j1}(A2 d^{j2}u) Leibniz term with m derivatives on A2
                Coefficient dA2 = A2.derivative(m);
                auto [prod, cert] = Coefficient::multiply(A1, dA2);
                (void)cert;
                MultiIndex J = sub(j1, m) + j2;
                Coefficient contrib = prod.scaled(static_cast<double>(binom(j1, m)));
                auto it = out.find(J);
                if (it == out.end())
                    out.emplace(J, std::move(contrib));
                else
                    it->second = it->second + contrib;
            }
        }
    }
    return DiffOp(first.dims(), first.rank(), first.order() + second.order(), std::move(out),
                  /*validate_top=*/false);
}

// --- principal symbol and ellipticity -----------------------------------------

SymbolSample principal_symbol(const DiffOp& op, std::span<const double> x,
                              std::span<const double> xi) {
    if (static_cast<int>(x.size()) != op.dims() || static_cast<int>(xi.size()) != op.dims())
        throw std::invalid_argument("principal_symbol: dimension mismatch");
    const int q = op.rank();
    SymbolSample out;
    out.x.assign(x.begin(), x.end());
    out.xi.assign(xi.begin(), xi.end());
    out.value.assign(static_cast<size_t>(q) * q, cd(0.0));
    for (const auto& [idx, coeff] : op.coeffs()) {
        if (idx.order() != op.order()) continue;
        double mono = 1.0;
        for (int c = 0; c < op.dims(); ++c)
            for (int r = 0; r < idx[c]; ++r) mono *= xi[static_cast<size_t>(c)];
        std::vector<double> vals = coeff.eval(x);
        for (size_t i = 0; i < out.value.size(); ++i) out.value[i] += mono * vals[i];
    }
    out.det_abs = det_abs(out.value, q);
    return out;
}

EllipticityReport is_elliptic(const DiffOp& op, long sample_budget, std::uint64_t seed,
                              double margin_tolerance) {
    EllipticityReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const int n = op.dims();
    std::uint64_t st = hash_combine(seed, 0xe111ull);
    double off1 = uniform01(st), off2 = uniform01(st);

    std::vector<std::vector<double>> dirs;
    if (n == 1) {
        dirs = {{1.0}, {-1.0}};
    } else {
        // Equally spaced angles from 0 (multiples of pi/4 land exactly on
        // axis and diagonal directions, where model symbols degenerate).
        int A = 16;
        for (int a = 0; a < A; ++a) {
            double th = kTwoPi * a / A;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    long per_dir = std::max<long>(4, sample_budget / static_cast<long>(dirs.size()));

    for (const auto& xi : dirs) {
        for (long t = 0; t < per_dir; ++t) {
            std::vector<double> x(static_cast<size_t>(n), 0.0);
            if (t > 0) {
                if (n == 1) {
                    // half structured, half golden-ratio fill
                    double u = (t % 2 == 0) ? static_cast<double>(t) / per_dir
                                            : std::fmod(off1 + 0.6180339887498949 * t, 1.0);
                    x[0] = kTwoPi * u;
                } else {
                    x[0] = kTwoPi * std::fmod(off1 + 0.7548776662466927 * t, 1.0);
                    x[1] = kTwoPi * std::fmod(off2 + 0.5698402909980532 * t, 1.0);
                }
            }
            SymbolSample s = principal_symbol(op, x, xi);
            rep.worst_margin = std::min(rep.worst_margin, s.det_abs);
            ++rep.samples;
        }
    }
    rep.elliptic = rep.worst_margin >= margin_tolerance;
    return rep;
}

// --- example constructors ------------------------------------------------------

DiffOp divergence_form_laplacian(const ScalarCoefficient& a,
                                 std::optional<Regularity> target_grade) {
    const int n = a.dims();
    if (target_grade && !target_grade->is_infinite()) {
        Regularity need = Regularity::finite(target_grade->value() - 1);
        if (!(a.exact_grade() >= need))
            throw std::invalid_argument("divergence-form coefficient grade " +
                                        a.exact_grade().str() + " is below k-1 = " + need.str());
    }
    {
        TorusGrid grid(n, n == 1 ? 256 : 32);
        SpectralField f = sample(a, grid);
        std::vector<cd> phys = to_physical(grid, f.comp(0));
        for (const cd& v : phys)
            if (v.real() <= 0.0)
                throw std::invalid_argument("divergence-form coefficient must be positive");
    }
    std::map<MultiIndex, Coefficient> coeffs;
    for (int c = 0; c < n; ++c) {
        MultiIndex second = MultiIndex::unit(n, c, 2);
        MultiIndex firstd = MultiIndex::unit(n, c, 1);
        Coefficient top = Coefficient::scalar(a);
        auto it = coeffs.find(second);
        if (it == coeffs.end())
            coeffs.emplace(second, std::move(top));
        else
            it->second = it->second + top;
        ScalarCoefficient da = a.derivative(firstd);
        if (!da.is_zero()) {
            Coefficient low = Coefficient::scalar(da);
            auto jt = coeffs.find(firstd);
            if (jt == coeffs.end())
                coeffs.emplace(firstd, std::move(low));
            else
                jt->second = jt->second + low;
        }
    }
    return DiffOp(n, 1, 2, std::move(coeffs));
}

DiffOp schroedinger_like(const ScalarCoefficient& a, const ScalarCoefficient& V, double C) {
    DiffOp lap = divergence_form_laplacian(a);
    if (V.is_zero() || C == 0.0) return lap;
    std::map<MultiIndex, Coefficient> coeffs = lap.coeffs();
    MultiIndex zero = MultiIndex::zero(a.dims());
    Coefficient pot = Coefficient::scalar(V.scaled(-C));
    auto it = coeffs.find(zero);
    if (it == coeffs.end())
        coeffs.emplace(zero, std::move(pot));
    else
        it->second = it->second + pot;
    return DiffOp(a.dims(), 1, 2, std::move(coeffs));
}

}  // namespace ksafe
