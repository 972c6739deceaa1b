// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <vector>

#include "ksafe/diffop.hpp"
#include "ksafe/engine.hpp"
#include "ksafe/field.hpp"

namespace ksafe::parametrix {

using ksafe::cd;

// Lattice bump partition of unity on T^1: centers at eps*j, eps = 2*pi/m,
// bumps phi_0((x - eps*j)/eps) from a C^inf mollifier profile of support
// radius `radius_cells` cells, renormalized by their pointwise sum so the
// partition is exact on the grid.
class BumpPartition {
   public:
    BumpPartition(int m, const TorusGrid& grid, double radius_cells = 1.5);

    int centers() const { return m_; }
    double eps() const { return eps_; }
    double center(int j) const { return eps_ * j; }
    const TorusGrid& grid() const { return grid_; }
    // phi_j sampled on the base grid
    const std::vector<double>& values(int j) const { return phi_[static_cast<size_t>(j)]; }

   private:
    int m_;
    double eps_;
    TorusGrid grid_;
    std::vector<std::vector<double>> phi_;
};

BumpPartition build_partition(int m, const TorusGrid& grid, double radius_cells = 1.5);

// Exact mean of the sampled (bandlimited) rank-1 field over the interval
// [center-eps, center+eps], evaluated spectrally (sum of sinc-weighted
// modes). Requires at least 4 grid cells per interval.
double average_coefficient(const SpectralField& a, double center, double eps);

// Constant-coefficient freeze of P at one lattice point.
struct FrozenOperator {
    int center_index = 0;
    double center = 0.0;
    int dims = 1;
    int rank = 1;
    int order = 0;
    std::map<MultiIndex, std::vector<double>> coeffs;  // q x q row-major constants

    // Full symbol sum_i a_i (i*f)^i at integer frequency f; q x q.
    std::vector<cd> symbol(int f) const;
};

std::vector<FrozenOperator> freeze(const DiffOp& op, const BumpPartition& partition,
                                   const TorusGrid& grid);

// Diagonal Fourier multiplier with a q x q block per mode.
struct FourierMultiplier {
    TorusGrid grid;
    int rank = 1;
    std::vector<cd> blocks;     // mode-major, q*q each
    double cutoff_radius = -1;  // set by near_inverse

    SpectralField apply(const SpectralField& u) const;
    // sup over modes of ||block(xi)|| (1+|xi|^2)^{s/2}; equals the
    // H^sigma -> H^{sigma+s} operator norm for every sigma.
    double weighted_bound(int s) const;
};

// Near-inverse E with multiplier (1-kappa(xi)) * symbol(xi)^{-1}, kappa a
// smooth cutoff equal to 1 on B_{K_c} and 0 outside B_{K_c+1}. Throws if
// the symbol degenerates outside the cutoff ball.
FourierMultiplier near_inverse(const FrozenOperator& frozen, double cutoff_radius,
                               const TorusGrid& grid);

// kappa itself (for remainder support checks).
double cutoff_profile(double r, double cutoff_radius);

// E o F - 1 as a multiplier (the infinitely smoothing remainder rho).
FourierMultiplier smoothing_remainder(const FourierMultiplier& E, const FrozenOperator& frozen);

struct SplittingReport {
    double residual = 0.0;        // || u - RHS ||_l
    double u_norm = 0.0;          // || u ||_l
    double term_f = 0.0;          // || sum_j E_j(phi_j f) ||_l
    double term_r = 0.0;          // || sum_j E_j R_j u ||_l
    double term_q = 0.0;          // || sum_j E_j Q_j u ||_l
    double term_rho = 0.0;        // || sum_j rho_j(phi_j u) ||_l
    double er_coefficient = 0.0;  // term_r / ||u||_l
};

// Assembles the frozen-coefficient splitting of u against f = Pu and
// reports the reconstruction residual plus the four term norms. All
// products are plain grid products (the identity is exact in that algebra).
SplittingReport splitting_check(const DiffOp& op, const SpectralField& u,
                                const BumpPartition& partition, double cutoff_radius, int l);

struct FreezingRow {
    double eps = 0.0;
    double a_eps = 0.0;  // max_j max_{|i|=s} sup_{supp phi_j} |a_i - mean|
};

// A(eps) over a list of lattice sizes, finest last; rows sorted by eps
// descending (coarse to fine).
std::vector<FreezingRow> freezing_error_sweep(const DiffOp& op, const TorusGrid& grid,
                                              const std::vector<int>& lattice_sizes);

// Fitted log-log rate of A(eps) (positive gamma means decay).
double fitted_rate(const std::vector<FreezingRow>& rows);

}  // namespace ksafe::parametrix
