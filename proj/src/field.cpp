// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/field.hpp"

#include <cmath>
#include <stdexcept>

#include "ksafe/fft.hpp"
#include "ksafe/kernels.hpp"

namespace ksafe {

namespace {

// Apply the 1-d transform along every line of dimension `dim` of an
// n-dimensional array with `Nd` points per dimension (dim 0 fastest).
template <bool Forward>
void transform_dim(std::vector<cd>& data, int dims, int Nd, int dim) {
    const long total = static_cast<long>(data.size());
    if (dims == 1) {
        if (Forward)
            fft::forward(data.data(), static_cast<size_t>(Nd));
        else
            fft::inverse(data.data(), static_cast<size_t>(Nd));
        return;
    }
    // dims == 2
    std::vector<cd> line(static_cast<size_t>(Nd));
    if (dim == 0) {
        for (long off = 0; off < total; off += Nd) {
            if (Forward)
                fft::forward(data.data() + off, static_cast<size_t>(Nd));
            else
                fft::inverse(data.data() + off, static_cast<size_t>(Nd));
        }
    } else {
        long rows = total / Nd;
        for (long x = 0; x < rows; ++x) {
            for (int y = 0; y < Nd; ++y) line[static_cast<size_t>(y)] = data[static_cast<size_t>(y) * rows + x];
            if (Forward)
                fft::forward(line.data(), static_cast<size_t>(Nd));
            else
                fft::inverse(line.data(), static_cast<size_t>(Nd));
            for (int y = 0; y < Nd; ++y) data[static_cast<size_t>(y) * rows + x] = line[static_cast<size_t>(y)];
        }
    }
}

void synthesize(std::vector<cd>& data, int dims, int Nd) {
    for (int d = 0; d < dims; ++d) transform_dim<false>(data, dims, Nd, d);
}

void analyze(std::vector<cd>& data, int dims, int Nd) {
    for (int d = 0; d < dims; ++d) transform_dim<true>(data, dims, Nd, d);
    double scale = 1.0;
    for (int d = 0; d < dims; ++d) scale /= Nd;
    for (auto& v : data) v *= scale;
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (grid_ != o.grid_ || q_ != o.q_) throw std::invalid_argument("field addition: shape mismatch");
    kernels::caxpy(a_.data(), cd(1.0), o.a_.data(), a_.size());
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (grid_ != o.grid_ || q_ != o.q_) throw std::invalid_argument("field subtraction: shape mismatch");
    kernels::caxpy(a_.data(), cd(-1.0), o.a_.data(), a_.size());
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : a_) v *= s;
    return *this;
}

bool SpectralField::is_real(double tol) const {
    const int N = grid_.modes_per_dim();
    const long modes = grid_.mode_count();
    for (int c = 0; c < q_; ++c) {
        const cd* u = comp(c);
        for (long m = 0; m < modes; ++m) {
            // mirror index: each dim idx -> (N - idx) % N
            long rem = m, mir = 0, mult = 1;
            for (int d = 0; d < grid_.dims(); ++d) {
                int idx = static_cast<int>(rem % N);
                rem /= N;
                mir += static_cast<long>((N - idx) % N) * mult;
                mult *= N;
            }
            if (std::abs(u[m] - std::conj(u[mir])) > tol) return false;
        }
    }
    return true;
}

std::vector<double> TorusGrid::grid_points_1d() const {
    std::vector<double> x(static_cast<size_t>(N_));
    for (int g = 0; g < N_; ++g) x[static_cast<size_t>(g)] = kTwoPi * g / N_;
    return x;
}

std::vector<cd> to_physical(const TorusGrid& grid, const cd* spec) {
    std::vector<cd> data(spec, spec + grid.mode_count());
    synthesize(data, grid.dims(), grid.modes_per_dim());
    return data;
}

void to_spectral(const TorusGrid& grid, std::vector<cd> phys, cd* spec_out) {
    analyze(phys, grid.dims(), grid.modes_per_dim());
    std::copy(phys.begin(), phys.end(), spec_out);
}

std::vector<cd> to_padded_physical(const TorusGrid& grid, const cd* spec) {
    const int N = grid.modes_per_dim();
    const int M = grid.padded_per_dim();
    std::vector<cd> data(static_cast<size_t>(grid.padded_count()), cd(0.0));
    const long modes = grid.mode_count();
    for (long m = 0; m < modes; ++m) {
        if (spec[m] == cd(0.0)) continue;
        long rem = m, dst = 0, mult = 1;
        for (int d = 0; d < grid.dims(); ++d) {
            int f = TorusGrid::freq_of(static_cast<int>(rem % N), N);
            rem /= N;
            dst += static_cast<long>(TorusGrid::idx_of(f, M)) * mult;
            mult *= M;
        }
        data[static_cast<size_t>(dst)] = spec[m];
    }
    synthesize(data, grid.dims(), M);
    return data;
}

void from_padded_physical(const TorusGrid& grid, std::vector<cd> phys, cd* spec_out) {
    const int N = grid.modes_per_dim();
    const int M = grid.padded_per_dim();
    analyze(phys, grid.dims(), M);
    const long modes = grid.mode_count();
    for (long m = 0; m < modes; ++m) {
        long rem = m, src = 0, mult = 1;
        for (int d = 0; d < grid.dims(); ++d) {
            int f = TorusGrid::freq_of(static_cast<int>(rem % N), N);
            rem /= N;
            src += static_cast<long>(TorusGrid::idx_of(f, M)) * mult;
            mult *= M;
        }
        spec_out[m] = phys[static_cast<size_t>(src)];
    }
}

std::vector<double> sobolev_weights(const TorusGrid& grid, double exponent) {
    std::vector<double> w(static_cast<size_t>(grid.mode_count()));
    for (long m = 0; m < grid.mode_count(); ++m)
        w[static_cast<size_t>(m)] = std::pow(1.0 + grid.freq_norm_sq(m), exponent);
    return w;
}

double sobolev_norm(const SpectralField& u, int s) {
    if (s < 0) throw std::invalid_argument("sobolev_norm: order >= 0 required");
    std::vector<double> w = sobolev_weights(u.grid(), static_cast<double>(s));
    double acc = 0.0;
    for (int c = 0; c < u.rank(); ++c)
        acc += kernels::wnorm2(w.data(), u.comp(c), static_cast<size_t>(u.modes()));
    return std::sqrt(acc);
}

cd l2_inner(const SpectralField& u, const SpectralField& v) {
    if (u.grid() != v.grid() || u.rank() != v.rank())
        throw std::invalid_argument("l2_inner: shape mismatch");
    cd acc = 0.0;
    for (int c = 0; c < u.rank(); ++c)
        acc += kernels::cdot(u.comp(c), v.comp(c), static_cast<size_t>(u.modes()));
    return acc;
}

SpectralField random_bandlimited(const TorusGrid& grid, int rank, int band, std::uint64_t seed,
                                 bool real) {
    if (band < 1 || band >= grid.modes_per_dim() / 2)
        throw std::invalid_argument("random_bandlimited: need 1 <= band < N/2");
    SpectralField u(grid, rank);
    std::uint64_t st = hash_combine(seed, 0xf1e1d5ull);
    for (int c = 0; c < rank; ++c) {
        for (long m = 0; m < grid.mode_count(); ++m) {
            int f[2] = {0, 0};
            grid.freq(m, f);
            double norm2 = 0;
            for (int d = 0; d < grid.dims(); ++d) norm2 += static_cast<double>(f[d]) * f[d];
            if (norm2 > static_cast<double>(band) * band) continue;
            if (!real) {
                u.at(c, m) = cd(gaussian(st), gaussian(st));
                continue;
            }
            // Hermitian fill: draw on the canonical half (last nonzero
            // frequency component positive), mirror the conjugate.
            bool zero = true, canonical = false;
            for (int d = grid.dims() - 1; d >= 0; --d) {
                if (f[d] != 0) {
                    zero = false;
                    canonical = f[d] > 0;
                    break;
                }
            }
            if (zero) {
                u.at(c, m) = cd(gaussian(st), 0.0);
            } else if (canonical) {
                cd z(0.5 * gaussian(st), 0.5 * gaussian(st));
                int mf[2];
                for (int d = 0; d < grid.dims(); ++d) mf[d] = -f[d];
                u.at(c, m) += z;
                u.at(c, grid.flat_of_freq(mf)) += std::conj(z);
            }
        }
    }
    return u;
}

}  // namespace ksafe
