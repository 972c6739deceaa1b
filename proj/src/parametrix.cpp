// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/parametrix.hpp"

#include <algorithm>
#include <cmath>

#include "ksafe/kernels.hpp"
#include "ksafe/util.hpp"

namespace ksafe::parametrix {

namespace {

double mollifier(double t) {
    // exp(-1/(1-t^2)) on (-1,1), zero outside
    double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t2));
}

double sinc(double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; }

std::vector<cd> grid_physical(const TorusGrid& grid, const ScalarCoefficient& c) {
    SpectralField f = sample(c, grid);
    return to_physical(grid, f.comp(0));
}

}  // namespace

BumpPartition::BumpPartition(int m, const TorusGrid& grid, double radius_cells)
    : m_(m), eps_(kTwoPi / m), grid_(grid) {
    if (grid.dims() != 1)
        throw std::invalid_argument("BumpPartition: implemented on T^1");
    if (m < 4) throw std::invalid_argument("BumpPartition: need m >= 4");
    if (radius_cells <= 0.5)
        throw std::invalid_argument("BumpPartition: support radius must exceed half a cell");
    const int N = grid.modes_per_dim();
    const long nm = static_cast<long>(N) * m;
    std::vector<std::vector<double>> raw(static_cast<size_t>(m),
                                         std::vector<double>(static_cast<size_t>(N), 0.0));
    std::vector<double> sum(static_cast<size_t>(N), 0.0);
    for (int j = 0; j < m; ++j) {
        for (int g = 0; g < N; ++g) {
            // x_g - eps*j = 2*pi*(g*m - j*N)/(N*m); wrap in exact integers so
            // the bump family is translation-equivariant to the bit.
            long r = (static_cast<long>(g) * m - static_cast<long>(j) * N) % nm;
            if (r >= nm / 2) r -= nm;
            if (r < -nm / 2) r += nm;
            double t = static_cast<double>(r) / static_cast<double>(N);  // (x - eps j)/eps
            double v = mollifier(t / radius_cells);
            raw[static_cast<size_t>(j)][static_cast<size_t>(g)] = v;
            sum[static_cast<size_t>(g)] += v;
        }
    }
    for (int g = 0; g < N; ++g)
        if (sum[static_cast<size_t>(g)] < 1e-12)
            throw std::invalid_argument(
                "BumpPartition: bump support too narrow, lattice not covered");
    phi_ = std::move(raw);
    for (int j = 0; j < m; ++j)
        for (int g = 0; g < N; ++g)
            phi_[static_cast<size_t>(j)][static_cast<size_t>(g)] /= sum[static_cast<size_t>(g)];
}

BumpPartition build_partition(int m, const TorusGrid& grid, double radius_cells) {
    return BumpPartition(m, grid, radius_cells);
}

double average_coefficient(const SpectralField& a, double center, double eps) {
    const TorusGrid& grid = a.grid();
    if (grid.dims() != 1 || a.rank() != 1)
        throw std::invalid_argument("average_coefficient: rank-1 field on T^1 required");
    double h = kTwoPi / grid.modes_per_dim();
    if (2.0 * eps < 4.0 * h)
        throw std::invalid_argument("average_coefficient: ball under-resolved (< 4 cells)");
    cd acc = 0.0;
    const cd* u = a.comp(0);
    for (long m = 0; m < grid.mode_count(); ++m) {
        int f = TorusGrid::freq_of(static_cast<int>(m), grid.modes_per_dim());
        acc += u[m] * std::polar(1.0, f * center) * sinc(f * eps);
    }
    return acc.real();
}

std::vector<cd> FrozenOperator::symbol(int f) const {
    static const cd i_pow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    std::vector<cd> sym(static_cast<size_t>(rank) * rank, cd(0.0));
    for (const auto& [idx, vals] : coeffs) {
        double mag = 1.0;
        for (int r = 0; r < idx[0]; ++r) mag *= static_cast<double>(f);
        cd factor = mag * i_pow[idx.order() % 4];
        for (size_t e = 0; e < sym.size(); ++e) sym[e] += factor * vals[e];
    }
    return sym;
}

std::vector<FrozenOperator> freeze(const DiffOp& op, const BumpPartition& partition,
                                   const TorusGrid& grid) {
    if (op.dims() != 1) throw std::invalid_argument("freeze: implemented on T^1");
    const int q = op.rank();
    // sampled coefficient fields, shared across centers
    std::map<MultiIndex, std::vector<SpectralField>> sampled;
    for (const auto& [idx, coeff] : op.coeffs()) {
        std::vector<SpectralField> entries;
        entries.reserve(static_cast<size_t>(q) * q);
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c) entries.push_back(sample(coeff.entry(r, c), grid));
        sampled.emplace(idx, std::move(entries));
    }
    std::vector<FrozenOperator> out;
    out.reserve(static_cast<size_t>(partition.centers()));
    for (int j = 0; j < partition.centers(); ++j) {
        FrozenOperator f;
        f.center_index = j;
        f.center = partition.center(j);
        f.dims = 1;
        f.rank = q;
        f.order = op.order();
        for (const auto& [idx, entries] : sampled) {
            std::vector<double> vals(static_cast<size_t>(q) * q);
            for (size_t e = 0; e < vals.size(); ++e)
                vals[e] = average_coefficient(entries[e], f.center, partition.eps());
            f.coeffs.emplace(idx, std::move(vals));
        }
        out.push_back(std::move(f));
    }
    return out;
}

SpectralField FourierMultiplier::apply(const SpectralField& u) const {
    if (u.grid() != grid || u.rank() != rank)
        throw std::invalid_argument("FourierMultiplier: shape mismatch");
    SpectralField out(grid, rank);
    const long modes = grid.mode_count();
    for (long m = 0; m < modes; ++m) {
        const cd* block = blocks.data() + static_cast<size_t>(m) * rank * rank;
        for (int r = 0; r < rank; ++r) {
            cd acc = 0.0;
            for (int c = 0; c < rank; ++c) acc += block[static_cast<size_t>(r) * rank + c] * u.at(c, m);
            out.at(r, m) = acc;
        }
    }
    return out;
}

double FourierMultiplier::weighted_bound(int s) const {
    double best = 0.0;
    const long modes = grid.mode_count();
    std::vector<cd> block(static_cast<size_t>(rank) * rank);
    for (long m = 0; m < modes; ++m) {
        std::copy(blocks.begin() + static_cast<long>(m) * rank * rank,
                  blocks.begin() + static_cast<long>(m + 1) * rank * rank, block.begin());
        double w = std::pow(1.0 + grid.freq_norm_sq(m), 0.5 * s);
        best = std::max(best, mat_norm2(block, rank) * w);
    }
    return best;
}

double cutoff_profile(double r, double cutoff_radius) {
    double t = r - cutoff_radius;  // transition width 1
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return b / (a + b);
}

FourierMultiplier near_inverse(const FrozenOperator& frozen, double cutoff_radius,
                               const TorusGrid& grid) {
    if (grid.dims() != 1) throw std::invalid_argument("near_inverse: implemented on T^1");
    const int q = frozen.rank;
    FourierMultiplier mult{grid, q, {}, cutoff_radius};
    mult.blocks.assign(static_cast<size_t>(grid.mode_count()) * q * q, cd(0.0));
    for (long m = 0; m < grid.mode_count(); ++m) {
        int f = TorusGrid::freq_of(static_cast<int>(m), grid.modes_per_dim());
        double kappa = cutoff_profile(std::abs(static_cast<double>(f)), cutoff_radius);
        if (kappa >= 1.0) continue;
        std::vector<cd> sym = frozen.symbol(f);
        double floor = 1e-12 * std::pow(std::max(1.0, std::abs(static_cast<double>(f))),
                                        static_cast<double>(frozen.order * q));
        if (det_abs(sym, q) < floor)
            throw std::runtime_error("near_inverse: frozen symbol vanishes outside the cutoff "
                                     "ball at |xi| = " + std::to_string(std::abs(f)));
        std::vector<cd> inv = mat_inverse(std::move(sym), q);
        for (size_t e = 0; e < inv.size(); ++e)
            mult.blocks[static_cast<size_t>(m) * q * q + e] = (1.0 - kappa) * inv[e];
    }
    return mult;
}

FourierMultiplier smoothing_remainder(const FourierMultiplier& E, const FrozenOperator& frozen) {
    // E o F - 1 = ((1-kappa) symbol^{-1}) symbol - 1 = -kappa, exactly; built
    // that way so the remainder support is compact to the bit. The identity
    // against the numerically multiplied-out product is a test property.
    const int q = frozen.rank;
    if (E.cutoff_radius < 0)
        throw std::invalid_argument("smoothing_remainder: multiplier was not built by near_inverse");
    FourierMultiplier rho{E.grid, q, {}, E.cutoff_radius};
    rho.blocks.assign(static_cast<size_t>(E.grid.mode_count()) * q * q, cd(0.0));
    for (long m = 0; m < E.grid.mode_count(); ++m) {
        int f = TorusGrid::freq_of(static_cast<int>(m), E.grid.modes_per_dim());
        double kappa = cutoff_profile(std::abs(static_cast<double>(f)), E.cutoff_radius);
        cd* rb = rho.blocks.data() + static_cast<size_t>(m) * q * q;
        for (int r = 0; r < q; ++r) rb[static_cast<size_t>(r) * q + r] = -kappa;
    }
    return rho;
}

namespace {

// physical-space samples of every coefficient entry, base grid, no padding
struct GridSamples {
    std::vector<MultiIndex> keys;
    std::vector<std::vector<std::vector<cd>>> coeff;  // [key][r*q+c][x]
    std::vector<std::vector<std::vector<cd>>> du;     // [key][c][x], D^i u in physical space
};

GridSamples sample_on_grid(const DiffOp& op, const SpectralField& u) {
    const TorusGrid& grid = u.grid();
    const int q = op.rank();
    GridSamples gs;
    for (const auto& [idx, coeff] : op.coeffs()) {
        gs.keys.push_back(idx);
        std::vector<std::vector<cd>> entries(static_cast<size_t>(q) * q);
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c)
                if (!coeff.entry(r, c).is_zero()) entries[static_cast<size_t>(r) * q + c] = grid_physical(grid, coeff.entry(r, c));
        gs.coeff.push_back(std::move(entries));

        std::vector<std::vector<cd>> du(static_cast<size_t>(q));
        static const cd i_pow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
        for (int c = 0; c < q; ++c) {
            std::vector<cd> spec(u.comp(c), u.comp(c) + grid.mode_count());
            for (long m = 0; m < grid.mode_count(); ++m) {
                int f = TorusGrid::freq_of(static_cast<int>(m), grid.modes_per_dim());
                double mag = 1.0;
                for (int r = 0; r < idx[0]; ++r) mag *= static_cast<double>(f);
                spec[static_cast<size_t>(m)] *= mag * i_pow[idx.order() % 4];
            }
            du[static_cast<size_t>(c)] = to_physical(grid, spec.data());
        }
        gs.du.push_back(std::move(du));
    }
    return gs;
}

SpectralField from_phys(const TorusGrid& grid, int q, const std::vector<std::vector<cd>>& phys) {
    SpectralField out(grid, q);
    for (int c = 0; c < q; ++c) to_spectral(grid, phys[static_cast<size_t>(c)], out.comp(c));
    return out;
}

std::vector<std::vector<cd>> field_phys(const SpectralField& u) {
    std::vector<std::vector<cd>> out(static_cast<size_t>(u.rank()));
    for (int c = 0; c < u.rank(); ++c) out[static_cast<size_t>(c)] = to_physical(u.grid(), u.comp(c));
    return out;
}

}  // namespace

SplittingReport splitting_check(const DiffOp& op, const SpectralField& u,
                                const BumpPartition& partition, double cutoff_radius, int l) {
    const TorusGrid& grid = u.grid();
    if (grid.dims() != 1) throw std::invalid_argument("splitting_check: implemented on T^1");
    if (partition.grid() != grid) throw std::invalid_argument("splitting_check: grid mismatch");
    const int q = op.rank();
    const long N = grid.mode_count();

    GridSamples gs = sample_on_grid(op, u);

    // f = Pu in the plain grid-product algebra
    std::vector<std::vector<cd>> f_phys(static_cast<size_t>(q),
                                        std::vector<cd>(static_cast<size_t>(N), cd(0.0)));
    for (size_t k = 0; k < gs.keys.size(); ++k)
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c) {
                const auto& a = gs.coeff[k][static_cast<size_t>(r) * q + c];
                if (a.empty()) continue;
                kernels::cmul_add(f_phys[static_cast<size_t>(r)].data(), a.data(),
                                  gs.du[k][static_cast<size_t>(c)].data(), static_cast<size_t>(N));
            }

    std::vector<std::vector<cd>> u_phys = field_phys(u);
    std::vector<FrozenOperator> frozen = freeze(op, partition, grid);

    SpectralField acc_f(grid, q), acc_r(grid, q), acc_q(grid, q), acc_rho(grid, q);
    std::vector<std::vector<cd>> scratch(static_cast<size_t>(q),
                                         std::vector<cd>(static_cast<size_t>(N)));

    for (int j = 0; j < partition.centers(); ++j) {
        const std::vector<double>& phi = partition.values(j);
        const FrozenOperator& fro = frozen[static_cast<size_t>(j)];
        FourierMultiplier E = near_inverse(fro, cutoff_radius, grid);
        FourierMultiplier rho = smoothing_remainder(E, fro);
        FourierMultiplier Pj{grid, q, {}};
        Pj.blocks.assign(static_cast<size_t>(N) * q * q, cd(0.0));
        for (long m = 0; m < N; ++m) {
            int fq = TorusGrid::freq_of(static_cast<int>(m), grid.modes_per_dim());
            std::vector<cd> sym = fro.symbol(fq);
            std::copy(sym.begin(), sym.end(), Pj.blocks.begin() + static_cast<long>(m) * q * q);
        }

        // E_j(phi_j f)
        for (int c = 0; c < q; ++c)
            for (long g = 0; g < N; ++g)
                scratch[static_cast<size_t>(c)][static_cast<size_t>(g)] =
                    phi[static_cast<size_t>(g)] * f_phys[static_cast<size_t>(c)][static_cast<size_t>(g)];
        acc_f += E.apply(from_phys(grid, q, scratch));

        // E_j R_j u with R_j u = phi_j sum_i (a_i - mean_i) D^i u
        for (int r = 0; r < q; ++r) std::fill(scratch[static_cast<size_t>(r)].begin(), scratch[static_cast<size_t>(r)].end(), cd(0.0));
        for (size_t k = 0; k < gs.keys.size(); ++k) {
            const auto& vals = fro.coeffs.at(gs.keys[k]);
            for (int r = 0; r < q; ++r)
                for (int c = 0; c < q; ++c) {
                    const auto& a = gs.coeff[k][static_cast<size_t>(r) * q + c];
                    double mean = vals[static_cast<size_t>(r) * q + c];
                    const auto& du = gs.du[k][static_cast<size_t>(c)];
                    auto& dst = scratch[static_cast<size_t>(r)];
                    if (a.empty()) {
                        if (mean == 0.0) continue;
                        for (long g = 0; g < N; ++g) dst[static_cast<size_t>(g)] -= mean * du[static_cast<size_t>(g)];
                    } else {
                        for (long g = 0; g < N; ++g)
                            dst[static_cast<size_t>(g)] += (a[static_cast<size_t>(g)] - mean) * du[static_cast<size_t>(g)];
                    }
                }
        }
        for (int r = 0; r < q; ++r)
            for (long g = 0; g < N; ++g) scratch[static_cast<size_t>(r)][static_cast<size_t>(g)] *= phi[static_cast<size_t>(g)];
        acc_r += E.apply(from_phys(grid, q, scratch));

        // E_j Q_j u with Q_j u = P_j(phi_j u) - phi_j P_j(u)
        for (int c = 0; c < q; ++c)
            for (long g = 0; g < N; ++g)
                scratch[static_cast<size_t>(c)][static_cast<size_t>(g)] =
                    phi[static_cast<size_t>(g)] * u_phys[static_cast<size_t>(c)][static_cast<size_t>(g)];
        SpectralField qfield = Pj.apply(from_phys(grid, q, scratch));
        std::vector<std::vector<cd>> pju = field_phys(Pj.apply(u));
        for (int c = 0; c < q; ++c)
            for (long g = 0; g < N; ++g)
                scratch[static_cast<size_t>(c)][static_cast<size_t>(g)] =
                    phi[static_cast<size_t>(g)] * pju[static_cast<size_t>(c)][static_cast<size_t>(g)];
        qfield -= from_phys(grid, q, scratch);
        acc_q += E.apply(qfield);

        // rho_j(phi_j u)
        for (int c = 0; c < q; ++c)
            for (long g = 0; g < N; ++g)
                scratch[static_cast<size_t>(c)][static_cast<size_t>(g)] =
                    phi[static_cast<size_t>(g)] * u_phys[static_cast<size_t>(c)][static_cast<size_t>(g)];
        acc_rho += rho.apply(from_phys(grid, q, scratch));
    }

    SpectralField rhs = acc_f;
    rhs -= acc_r;
    rhs += acc_q;
    rhs -= acc_rho;

    SplittingReport rep;
    rep.u_norm = sobolev_norm(u, l);
    SpectralField diff = u;
    diff -= rhs;
    rep.residual = sobolev_norm(diff, l);
    rep.term_f = sobolev_norm(acc_f, l);
    rep.term_r = sobolev_norm(acc_r, l);
    rep.term_q = sobolev_norm(acc_q, l);
    rep.term_rho = sobolev_norm(acc_rho, l);
    rep.er_coefficient = rep.u_norm > 0.0 ? rep.term_r / rep.u_norm : 0.0;
    return rep;
}

std::vector<FreezingRow> freezing_error_sweep(const DiffOp& op, const TorusGrid& grid,
                                              const std::vector<int>& lattice_sizes) {
    if (grid.dims() != 1) throw std::invalid_argument("freezing_error_sweep: implemented on T^1");
    const int q = op.rank();
    std::vector<std::pair<MultiIndex, std::vector<std::vector<cd>>>> top;
    for (const auto& [idx, coeff] : op.coeffs()) {
        if (idx.order() != op.order()) continue;
        std::vector<std::vector<cd>> entries(static_cast<size_t>(q) * q);
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c)
                if (!coeff.entry(r, c).is_zero())
                    entries[static_cast<size_t>(r) * q + c] = grid_physical(grid, coeff.entry(r, c));
        top.emplace_back(idx, std::move(entries));
    }
    std::vector<FreezingRow> rows;
    for (int m : lattice_sizes) {
        BumpPartition part(m, grid);
        std::vector<FrozenOperator> frozen = freeze(op, part, grid);
        double worst = 0.0;
        for (int j = 0; j < m; ++j) {
            const std::vector<double>& phi = part.values(j);
            for (const auto& [idx, entries] : top) {
                const auto& vals = frozen[static_cast<size_t>(j)].coeffs.at(idx);
                for (size_t e = 0; e < entries.size(); ++e) {
                    if (entries[e].empty()) continue;
                    for (long g = 0; g < grid.mode_count(); ++g) {
                        if (phi[static_cast<size_t>(g)] <= 0.0) continue;
                        worst = std::max(worst,
                                         std::abs(entries[e][static_cast<size_t>(g)].real() - vals[e]));
                    }
                }
            }
        }
        rows.push_back(FreezingRow{part.eps(), worst});
    }
    std::sort(rows.begin(), rows.end(),
              [](const FreezingRow& a, const FreezingRow& b) { return a.eps > b.eps; });
    return rows;
}

double fitted_rate(const std::vector<FreezingRow>& rows) {
    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        if (r.a_eps <= 0.0) throw std::invalid_argument("fitted_rate: A(eps) must be positive");
        lx.push_back(std::log(r.eps));
        ly.push_back(std::log(r.a_eps));
    }
    return fit_slope(lx, ly);
}

}  // namespace ksafe::parametrix
