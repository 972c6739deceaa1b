// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "ksafe/kernels.hpp"

namespace ksafe {

namespace {

// (i*xi)^index over all base modes
std::vector<cd> derivative_diagonal(const TorusGrid& grid, const MultiIndex& index) {
    std::vector<cd> diag(static_cast<size_t>(grid.mode_count()));
    static const cd i_pow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    int xi[2] = {0, 0};
    for (long m = 0; m < grid.mode_count(); ++m) {
        grid.freq(m, xi);
        double mag = 1.0;
        for (int c = 0; c < index.dims(); ++c)
            for (int r = 0; r < index[c]; ++r) mag *= static_cast<double>(xi[c]);
        diag[static_cast<size_t>(m)] = mag * i_pow[index.order() % 4];
    }
    return diag;
}

std::vector<cd> full_random_spectrum(const TorusGrid& grid, int rank, std::uint64_t seed) {
    std::vector<cd> x(static_cast<size_t>(rank) * grid.mode_count());
    std::uint64_t st = hash_combine(seed, 0x9027ull);
    for (auto& v : x) v = cd(gaussian(st), gaussian(st));
    return x;
}

double vec_norm(const std::vector<cd>& v) {
    double s = 0.0;
    for (const cd& z : v) s += std::norm(z);
    return std::sqrt(s);
}

}  // namespace

BoundOperator::BoundOperator(const DiffOp& op, const TorusGrid& grid)
    : grid_(grid), q_(op.rank()), s_(op.order()) {
    if (op.dims() != grid.dims())
        throw std::invalid_argument("BoundOperator: operator/grid dimension mismatch");
    for (const auto& [idx, coeff] : op.coeffs()) {
        Key key;
        key.index = idx;
        key.entries.resize(static_cast<size_t>(q_) * q_);
        for (int r = 0; r < q_; ++r) {
            for (int c = 0; c < q_; ++c) {
                if (coeff.entry(r, c).is_zero()) continue;
                std::vector<cd> spec = sample_spectrum(coeff.entry(r, c), grid);
                key.entries[static_cast<size_t>(r) * q_ + c] = to_padded_physical(grid, spec.data());
            }
        }
        keys_.push_back(std::move(key));
    }
}

SpectralField BoundOperator::apply(const SpectralField& u) const {
    if (u.grid() != grid_ || u.rank() != q_)
        throw std::invalid_argument("apply: field/operator shape mismatch");
    const size_t padded = static_cast<size_t>(grid_.padded_count());
    std::vector<std::vector<cd>> acc(static_cast<size_t>(q_), std::vector<cd>(padded, cd(0.0)));
    std::vector<cd> tmp_spec(static_cast<size_t>(grid_.mode_count()));
    for (const auto& key : keys_) {
        std::vector<cd> diag = derivative_diagonal(grid_, key.index);
        for (int c = 0; c < q_; ++c) {
            kernels::cmul(tmp_spec.data(), u.comp(c), diag.data(), tmp_spec.size());
            std::vector<cd> tmp_phys = to_padded_physical(grid_, tmp_spec.data());
            for (int r = 0; r < q_; ++r) {
                const auto& e = key.entries[static_cast<size_t>(r) * q_ + c];
                if (e.empty()) continue;
                kernels::cmul_add(acc[static_cast<size_t>(r)].data(), e.data(), tmp_phys.data(),
                                  padded);
            }
        }
    }
    SpectralField out(grid_, q_);
    for (int r = 0; r < q_; ++r)
        from_padded_physical(grid_, std::move(acc[static_cast<size_t>(r)]), out.comp(r));
    return out;
}

SpectralField BoundOperator::apply_l2_adjoint(const SpectralField& y) const {
    if (y.grid() != grid_ || y.rank() != q_)
        throw std::invalid_argument("apply_l2_adjoint: field/operator shape mismatch");
    const size_t padded = static_cast<size_t>(grid_.padded_count());
    std::vector<std::vector<cd>> y_phys(static_cast<size_t>(q_));
    for (int r = 0; r < q_; ++r) y_phys[static_cast<size_t>(r)] = to_padded_physical(grid_, y.comp(r));

    SpectralField out(grid_, q_);
    std::vector<cd> tmp_phys(padded);
    std::vector<cd> tmp_spec(static_cast<size_t>(grid_.mode_count()));
    for (const auto& key : keys_) {
        std::vector<cd> diag = derivative_diagonal(grid_, key.index);
        for (int c = 0; c < q_; ++c) {
            std::fill(tmp_phys.begin(), tmp_phys.end(), cd(0.0));
            bool any = false;
            for (int r = 0; r < q_; ++r) {
                const auto& e = key.entries[static_cast<size_t>(r) * q_ + c];
                if (e.empty()) continue;
                any = true;
                const cd* yr = y_phys[static_cast<size_t>(r)].data();
                for (size_t m = 0; m < padded; ++m) tmp_phys[m] += std::conj(e[m]) * yr[m];
            }
            if (!any) continue;
            from_padded_physical(grid_, tmp_phys, tmp_spec.data());
            cd* oc = out.comp(c);
            for (long m = 0; m < grid_.mode_count(); ++m)
                oc[m] += std::conj(diag[static_cast<size_t>(m)]) * tmp_spec[static_cast<size_t>(m)];
        }
    }
    return out;
}

SpectralField apply(const DiffOp& op, const SpectralField& u) {
    return BoundOperator(op, u.grid()).apply(u);
}

DenseMatrix operator_matrix(const DiffOp& op, const TorusGrid& grid, int l) {
    const long modes = grid.mode_count();
    const long M = modes * op.rank();
    if (M > 4096)
        throw std::invalid_argument("operator_matrix: " + std::to_string(M) +
                                    " modes exceed the dense guard (4096)");
    BoundOperator bound(op, grid);
    std::vector<double> dom_inv = sobolev_weights(grid, -0.5 * l);
    std::vector<double> cod = sobolev_weights(grid, 0.5 * (l - op.order()));
    DenseMatrix mat;
    mat.rows = M;
    mat.cols = M;
    mat.a.assign(static_cast<size_t>(M) * M, cd(0.0));
    SpectralField basis(grid, op.rank());
    for (int c = 0; c < op.rank(); ++c) {
        for (long m = 0; m < modes; ++m) {
            std::fill(basis.raw().begin(), basis.raw().end(), cd(0.0));
            basis.at(c, m) = dom_inv[static_cast<size_t>(m)];
            SpectralField v = bound.apply(basis);
            long col = static_cast<long>(c) * modes + m;
            for (int r = 0; r < op.rank(); ++r)
                for (long eta = 0; eta < modes; ++eta)
                    mat.at(static_cast<long>(r) * modes + eta, col) =
                        v.at(r, eta) * cod[static_cast<size_t>(eta)];
        }
    }
    return mat;
}

NormEstimate operator_norm_estimate(const DiffOp& op, const TorusGrid& grid, int l, int trials,
                                    std::uint64_t seed) {
    BoundOperator bound(op, grid);
    std::vector<double> dom_inv = sobolev_weights(grid, -0.5 * l);
    std::vector<double> cod = sobolev_weights(grid, 0.5 * (l - op.order()));
    const long modes = grid.mode_count();
    const int q = op.rank();

    auto weighted_apply = [&](const std::vector<cd>& x) {
        SpectralField u(grid, q);
        for (int c = 0; c < q; ++c)
            kernels::rscale(u.comp(c), dom_inv.data(), x.data() + static_cast<size_t>(c) * modes,
                            static_cast<size_t>(modes));
        SpectralField v = bound.apply(u);
        std::vector<cd> y(static_cast<size_t>(q) * modes);
        for (int c = 0; c < q; ++c)
            kernels::rscale(y.data() + static_cast<size_t>(c) * modes, cod.data(), v.comp(c),
                            static_cast<size_t>(modes));
        return y;
    };
    auto weighted_adjoint = [&](const std::vector<cd>& y) {
        SpectralField u(grid, q);
        for (int c = 0; c < q; ++c)
            kernels::rscale(u.comp(c), cod.data(), y.data() + static_cast<size_t>(c) * modes,
                            static_cast<size_t>(modes));
        SpectralField v = bound.apply_l2_adjoint(u);
        std::vector<cd> x(static_cast<size_t>(q) * modes);
        for (int c = 0; c < q; ++c)
            kernels::rscale(x.data() + static_cast<size_t>(c) * modes, dom_inv.data(), v.comp(c),
                            static_cast<size_t>(modes));
        return x;
    };

    NormEstimate best;
    best.trials = std::max(1, trials);
    for (int t = 0; t < best.trials; ++t) {
        std::vector<cd> x = full_random_spectrum(grid, q, hash_combine(seed, static_cast<std::uint64_t>(t)));
        double nx = vec_norm(x);
        for (auto& v : x) v /= nx;
        double lambda = 0.0;
        bool conv = false;
        int it = 0;
        for (; it < 200; ++it) {
            std::vector<cd> z = weighted_adjoint(weighted_apply(x));
            // Rayleigh quotient <z,x> = ||T x||^2 for unit x
            double next = kernels::cdot(z.data(), x.data(), z.size()).real();
            double nz = vec_norm(z);
            if (nz == 0.0) {
                lambda = 0.0;
                conv = true;
                break;
            }
            for (auto& v : z) v /= nz;
            x = std::move(z);
            if (it > 0 && std::abs(next - lambda) <= 1e-10 * std::max(next, 1e-300)) {
                lambda = next;
                conv = true;
                break;
            }
            lambda = next;
        }
        double sigma = std::sqrt(std::max(0.0, lambda));
        if (t == 0 || sigma > best.sigma) best.sigma = sigma;
        best.converged = (t == 0) ? conv : (best.converged && conv);
        best.iterations = std::max(best.iterations, std::min(it + 1, 200));
    }
    return best;
}

IndexReport index_report(const DiffOp& op, const TorusGrid& grid, int l, const SvdPolicy& policy) {
    DenseMatrix mat = operator_matrix(op, grid, l);
    std::vector<double> sv = singular_values(mat);
    IndexReport rep;
    rep.l = l;
    rep.sigma_max = sv.front();
    double threshold = policy.rel_threshold * rep.sigma_max;
    size_t zeros = 0;
    while (zeros < sv.size() && sv[sv.size() - 1 - zeros] < threshold) ++zeros;
    rep.dim_ker = static_cast<int>(zeros);
    rep.dim_coker = static_cast<int>(zeros);  // square truncation: counts coincide;
                                              // the adjoint-kernel duality check is independent
    rep.index = rep.dim_ker - rep.dim_coker;
    if (zeros == sv.size()) {
        rep.singular_value_gap = 0.0;
        rep.resolved = false;
        return rep;
    }
    rep.sigma_min_retained = sv[sv.size() - 1 - zeros];
    if (zeros == 0) {
        rep.singular_value_gap =
            threshold > 0.0 ? rep.sigma_min_retained / threshold
                            : std::numeric_limits<double>::infinity();
    } else {
        double largest_zero = sv[sv.size() - zeros];
        rep.singular_value_gap = largest_zero > 0.0
                                     ? rep.sigma_min_retained / largest_zero
                                     : std::numeric_limits<double>::infinity();
    }
    rep.resolved = rep.singular_value_gap >= policy.gap_min;
    return rep;
}

double elliptic_constant_probe(const DiffOp& op, const TorusGrid& grid, int p, int trials,
                               std::uint64_t seed) {
    if (p < 0) throw std::invalid_argument("elliptic_constant_probe: p >= 0");
    const int s = op.order();
    BoundOperator bound(op, grid);
    int band = grid.modes_per_dim() / 4;
    double best = 0.0;
    for (int t = 0; t < std::max(1, trials); ++t) {
        SpectralField u = random_bandlimited(grid, op.rank(), band,
                                             hash_combine(seed, static_cast<std::uint64_t>(t)));
        SpectralField pu = bound.apply(u);
        double num = sobolev_norm(u, p + s);
        double den = sobolev_norm(pu, p) + sobolev_norm(u, p + s - 1);
        if (den > 0.0) best = std::max(best, num / den);
    }
    return best;
}

namespace {

ScalarCoefficient truncate_coeff(const ScalarCoefficient& c, long long cutoff);

Term truncate_term(const Term& t, long long cutoff, int dims) {
    if (const auto* pl = std::get_if<PowerLawTerm>(&t)) {
        PowerLawTerm out = *pl;
        out.cap = std::min(out.cap, cutoff);
        out.truncated = true;
        return out;
    }
    if (const auto* pr = std::get_if<ProductTerm>(&t)) {
        ProductTerm out = *pr;
        out.lhs = std::make_shared<const ScalarCoefficient>(truncate_coeff(*pr->lhs, cutoff));
        out.rhs = std::make_shared<const ScalarCoefficient>(truncate_coeff(*pr->rhs, cutoff));
        out.grade = Regularity::infinite();
        return out;
    }
    if (const auto* dv = std::get_if<DerivTerm>(&t)) {
        DerivTerm out = *dv;
        out.body = std::make_shared<const ScalarCoefficient>(truncate_coeff(*dv->body, cutoff));
        return out;
    }
    (void)dims;
    return t;
}

ScalarCoefficient truncate_coeff(const ScalarCoefficient& c, long long cutoff) {
    std::vector<Term> terms;
    terms.reserve(c.terms().size());
    for (const auto& t : c.terms()) terms.push_back(truncate_term(t, cutoff, c.dims()));
    return ScalarCoefficient(c.dims(), std::move(terms));
}

}  // namespace

DiffOp smooth_approximation(const DiffOp& op, long long cutoff) {
    if (cutoff < 1) throw std::invalid_argument("smooth_approximation: cutoff >= 1");
    std::map<MultiIndex, Coefficient> coeffs;
    for (const auto& [idx, coeff] : op.coeffs()) {
        Coefficient out(coeff.dims(), coeff.rows(), coeff.cols());
        for (int r = 0; r < coeff.rows(); ++r)
            for (int c = 0; c < coeff.cols(); ++c)
                out.set_entry(r, c, truncate_coeff(coeff.entry(r, c), cutoff));
        coeffs.emplace(idx, std::move(out));
    }
    return DiffOp(op.dims(), op.rank(), op.order(), std::move(coeffs));
}

}  // namespace ksafe
