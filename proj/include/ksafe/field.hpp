// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ksafe/grid.hpp"
#include "ksafe/util.hpp"

namespace ksafe {

// Rank-q function on the discretized torus, stored as Fourier coefficients
// in FFT order, component-major. Normalization anchor: the constant-1 field
// has coefficient 1 at frequency 0.
class SpectralField {
   public:
    SpectralField(TorusGrid grid, int rank)
        : grid_(grid), q_(rank), a_(static_cast<size_t>(rank) * grid.mode_count(), cd(0.0)) {
        if (rank < 1) throw std::invalid_argument("SpectralField: rank >= 1");
    }

    const TorusGrid& grid() const { return grid_; }
    int rank() const { return q_; }
    long modes() const { return grid_.mode_count(); }

    cd* comp(int c) { return a_.data() + static_cast<size_t>(c) * modes(); }
    const cd* comp(int c) const { return a_.data() + static_cast<size_t>(c) * modes(); }
    cd& at(int c, long m) { return a_[static_cast<size_t>(c) * modes() + static_cast<size_t>(m)]; }
    cd at(int c, long m) const { return a_[static_cast<size_t>(c) * modes() + static_cast<size_t>(m)]; }

    std::vector<cd>& raw() { return a_; }
    const std::vector<cd>& raw() const { return a_; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }

    // Hermitian symmetry of the spectrum (real-valued field), checked to tol.
    bool is_real(double tol = 1e-12) const;

   private:
    TorusGrid grid_;
    int q_;
    std::vector<cd> a_;
};

// --- transforms between spectral and physical space -------------------

// Synthesis u(x) = sum \hat{u}(xi) e^{i xi.x} on the base grid.
std::vector<cd> to_physical(const TorusGrid& grid, const cd* spec);
// Analysis with 1/N^n normalization (inverse of to_physical).
void to_spectral(const TorusGrid& grid, std::vector<cd> phys, cd* spec_out);

// Same pair on the dealiasing grid: the base spectrum is zero-embedded into
// the padded mode set before synthesis; extraction truncates back.
std::vector<cd> to_padded_physical(const TorusGrid& grid, const cd* spec);
void from_padded_physical(const TorusGrid& grid, std::vector<cd> phys, cd* spec_out);

// --- Sobolev weighting -------------------------------------------------

// (1 + |xi|^2)^exponent per mode (any real exponent).
std::vector<double> sobolev_weights(const TorusGrid& grid, double exponent);

// ||u||_s with weights (1+|xi|^2)^s summed over components; s >= 0.
double sobolev_norm(const SpectralField& u, int s);

// Plain spectral l2 pairing sum_modes u * conj(v) over components.
cd l2_inner(const SpectralField& u, const SpectralField& v);

// --- deterministic probe fields ----------------------------------------

// Random field, Gaussian coefficients on modes with Euclidean |xi| <= band,
// Hermitian-symmetrized when real = true. Fully deterministic in seed.
SpectralField random_bandlimited(const TorusGrid& grid, int rank, int band, std::uint64_t seed,
                                 bool real = true);

}  // namespace ksafe
