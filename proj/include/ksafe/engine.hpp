// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ksafe/diffop.hpp"
#include "ksafe/field.hpp"
#include "ksafe/svd.hpp"

namespace ksafe {

// Operator bound to a grid: coefficient matrices sampled once (capped at
// the grid's Nyquist limit) and stored in physical space on the dealiasing
// grid. apply() is then ifft-per-index + pointwise MAC + one fft.
class BoundOperator {
   public:
    BoundOperator(const DiffOp& op, const TorusGrid& grid);

    const TorusGrid& grid() const { return grid_; }
    int rank() const { return q_; }
    int order() const { return s_; }

    SpectralField apply(const SpectralField& u) const;
    // Adjoint of apply() in the plain spectral l2 pairing. Purely numeric:
    // no coefficient grade bookkeeping, so it works for unsafe operators
    // (norm probes need it); distinct from the symbolic formal_adjoint.
    SpectralField apply_l2_adjoint(const SpectralField& u) const;

   private:
    TorusGrid grid_;
    int q_, s_;
    struct Key {
        MultiIndex index;
        std::vector<std::vector<cd>> entries;  // q*q padded physical samples, row-major
    };
    std::vector<Key> keys_;
};

SpectralField apply(const DiffOp& op, const SpectralField& u);

// Matrix of P: H^l -> H^{l-s} in Sobolev-orthonormal mode bases: domain
// basis e_xi/(1+|xi|^2)^{l/2}, codomain e_xi/(1+|xi|^2)^{(l-s)/2}. Row and
// column indices are (component, mode) flattened component-major. Guarded
// at 4096 total modes.
DenseMatrix operator_matrix(const DiffOp& op, const TorusGrid& grid, int l);

struct NormEstimate {
    double sigma = 0.0;
    bool converged = false;
    int iterations = 0;
    int trials = 0;
};

// Largest singular value of the weighted operator via power iteration on
// the normal operator, matrix-free; 200 iterations or relative change
// below 1e-10 per trial, best over `trials` random starts.
NormEstimate operator_norm_estimate(const DiffOp& op, const TorusGrid& grid, int l,
                                    int trials = 2, std::uint64_t seed = 0);

struct SvdPolicy {
    double rel_threshold = 1e-7;  // sigma < rel_threshold * sigma_max counts as zero
    double gap_min = 1e3;         // smallest retained / largest zero must reach this
};

struct IndexReport {
    int l = 0;
    int dim_ker = 0;
    int dim_coker = 0;
    int index = 0;
    double singular_value_gap = 0.0;
    bool resolved = false;
    double sigma_max = 0.0;
    double sigma_min_retained = 0.0;
};

// Kernel/cokernel/index of the truncated operator from its singular value
// profile. Unresolved zero clusters flag the report instead of throwing.
IndexReport index_report(const DiffOp& op, const TorusGrid& grid, int l,
                         const SvdPolicy& policy = {});

// max over random bandlimited probes (band <= N/4) of
// ||u||_{p+s} / (||Pu||_p + ||u||_{p+s-1}).
double elliptic_constant_probe(const DiffOp& op, const TorusGrid& grid, int p, int trials = 16,
                               std::uint64_t seed = 0);

// Truncate every power-law term at min(cap, cutoff); the result is an
// honest trig sum and grades as smooth.
DiffOp smooth_approximation(const DiffOp& op, long long cutoff);

}  // namespace ksafe
