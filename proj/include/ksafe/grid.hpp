// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

namespace ksafe {

// Uniform discretization of the flat torus T^n, n in {1,2}. N modes per
// dimension (power of two, >= 8); frequencies run over {-N/2+1,...,N/2} in
// FFT storage order. Products are dealiased on a grid enlarged by `padding`
// (>= 3/2; default 2 keeps padded sizes powers of two).
class TorusGrid {
   public:
    TorusGrid(int dims, int modes_per_dim, double padding = 2.0)
        : n_(dims), N_(modes_per_dim), pad_(padding) {
        if (n_ != 1 && n_ != 2) throw std::invalid_argument("TorusGrid: dimension must be 1 or 2");
        if (N_ < 8 || (N_ & (N_ - 1)) != 0)
            throw std::invalid_argument("TorusGrid: N must be a power of two >= 8");
        if (pad_ < 1.5) throw std::invalid_argument("TorusGrid: padding factor >= 3/2 required");
        int padded = static_cast<int>(pad_ * N_);
        if (static_cast<double>(padded) != pad_ * N_ || (padded & (padded - 1)) != 0)
            throw std::invalid_argument("TorusGrid: padded size must be a power of two");
    }

    int dims() const { return n_; }
    int modes_per_dim() const { return N_; }
    double padding() const { return pad_; }
    int padded_per_dim() const { return static_cast<int>(pad_ * N_); }

    long mode_count() const {
        long m = 1;
        for (int d = 0; d < n_; ++d) m *= N_;
        return m;
    }
    long padded_count() const {
        long m = 1;
        for (int d = 0; d < n_; ++d) m *= padded_per_dim();
        return m;
    }

    // index within one dimension -> signed frequency
    static int freq_of(int idx, int N) { return idx <= N / 2 ? idx : idx - N; }
    // signed frequency -> storage index; f in (-N/2, N/2]
    static int idx_of(int f, int N) { return f >= 0 ? f : f + N; }

    int max_placeable_freq() const { return N_ / 2 - 1; }

    // frequency vector of a flat mode index (dim 0 fastest)
    void freq(long flat, int* out) const {
        for (int d = 0; d < n_; ++d) {
            out[d] = freq_of(static_cast<int>(flat % N_), N_);
            flat /= N_;
        }
    }
    long flat_of_freq(const int* f) const {
        long idx = 0;
        for (int d = n_ - 1; d >= 0; --d) idx = idx * N_ + idx_of(f[d], N_);
        return idx;
    }

    // |xi|^2 for a flat mode
    double freq_norm_sq(long flat) const {
        int f[2] = {0, 0};
        freq(flat, f);
        double s = 0;
        for (int d = 0; d < n_; ++d) s += static_cast<double>(f[d]) * f[d];
        return s;
    }

    std::vector<double> grid_points_1d() const;  // physical abscissae, base grid

    bool operator==(const TorusGrid& o) const {
        return n_ == o.n_ && N_ == o.N_ && pad_ == o.pad_;
    }
    bool operator!=(const TorusGrid& o) const { return !(*this == o); }

   private:
    int n_;
    int N_;
    double pad_;
};

}  // namespace ksafe
