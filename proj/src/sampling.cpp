// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0

// Coefficient -> grid bridge. Trig content is placed exactly in the
// spectrum; power-law content is synthesized up to the grid's Nyquist
// limit; opaque products are formed on the dealiasing grid.

#include <array>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "ksafe/coefficient.hpp"
#include "ksafe/fft.hpp"
#include "ksafe/kernels.hpp"

namespace ksafe {

namespace {

// (i*xi)^index = i^{|index|} * prod xi_c^{index_c}
cd spectral_derivative_factor(const int* xi, const MultiIndex& index) {
    double mag = 1.0;
    for (int c = 0; c < index.dims(); ++c)
        for (int r = 0; r < index[c]; ++r) mag *= static_cast<double>(xi[c]);
    static const cd i_pow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
    return mag * i_pow[index.order() % 4];
}

void add_term_spectrum(const Term& t, const TorusGrid& grid, std::vector<cd>& spec);

void add_coeff_spectrum(const ScalarCoefficient& c, const TorusGrid& grid, std::vector<cd>& spec) {
    for (const auto& t : c.terms()) add_term_spectrum(t, grid, spec);
}

void add_term_spectrum(const Term& t, const TorusGrid& grid, std::vector<cd>& spec) {
    const int nyq = grid.max_placeable_freq();
    if (const auto* c = std::get_if<ConstTerm>(&t)) {
        spec[0] += c->value;
        return;
    }
    if (const auto* tr = std::get_if<TrigTerm>(&t)) {
        for (const auto& m : tr->modes) {
            for (int v : m.freq)
                if (std::abs(v) > nyq)
                    throw std::runtime_error("grid too small to hold trig frequency " +
                                             std::to_string(v) + " (N = " +
                                             std::to_string(grid.modes_per_dim()) + ")");
            std::vector<int> neg(m.freq);
            for (int& v : neg) v = -v;
            cd half = 0.5 * m.amp * std::polar(1.0, m.phase);
            spec[static_cast<size_t>(grid.flat_of_freq(m.freq.data()))] += half;
            spec[static_cast<size_t>(grid.flat_of_freq(neg.data()))] += std::conj(half);
        }
        return;
    }
    if (const auto* pl = std::get_if<PowerLawTerm>(&t)) {
        long long K = std::min<long long>(pl->cap, nyq);
        if (grid.dims() == 1) {
            for (int k = 1; k <= static_cast<int>(K); ++k) {
                // full-lattice model: mode amplitude |xi|^-beta at both +-xi
                std::array<int, 1> xi{k};
                double theta = power_law_phase(pl->seed, xi);
                cd val = pl->scale * std::pow(static_cast<double>(k), -pl->beta) *
                         spectral_derivative_factor(xi.data(), pl->deriv) * std::polar(1.0, theta);
                std::array<int, 1> mxi{-k};
                spec[static_cast<size_t>(grid.flat_of_freq(xi.data()))] += val;
                spec[static_cast<size_t>(grid.flat_of_freq(mxi.data()))] += std::conj(val);
            }
        } else {
            int Ki = static_cast<int>(std::min<long long>(K, nyq));
            for (int b = 0; b <= Ki; ++b) {
                for (int a = (b == 0 ? 1 : -Ki); a <= Ki; ++a) {
                    double r2 = static_cast<double>(a) * a + static_cast<double>(b) * b;
                    if (r2 > static_cast<double>(K) * static_cast<double>(K)) continue;
                    std::array<int, 2> xi{a, b};
                    double theta = power_law_phase(pl->seed, xi);
                    cd val = pl->scale * std::pow(r2, -0.5 * pl->beta) *
                             spectral_derivative_factor(xi.data(), pl->deriv) *
                             std::polar(1.0, theta);
                    std::array<int, 2> mxi{-a, -b};
                    spec[static_cast<size_t>(grid.flat_of_freq(xi.data()))] += val;
                    spec[static_cast<size_t>(grid.flat_of_freq(mxi.data()))] += std::conj(val);
                }
            }
        }
        return;
    }
    if (const auto* pr = std::get_if<ProductTerm>(&t)) {
        std::vector<cd> a = sample_spectrum(*pr->lhs, grid);
        std::vector<cd> b = sample_spectrum(*pr->rhs, grid);
        std::vector<cd> pa = to_padded_physical(grid, a.data());
        std::vector<cd> pb = to_padded_physical(grid, b.data());
        kernels::cmul(pa.data(), pa.data(), pb.data(), pa.size());
        std::vector<cd> prod(static_cast<size_t>(grid.mode_count()));
        from_padded_physical(grid, std::move(pa), prod.data());
        kernels::caxpy(spec.data(), cd(pr->scale), prod.data(), prod.size());
        return;
    }
    const auto& dv = std::get<DerivTerm>(t);
    std::vector<cd> body = sample_spectrum(*dv.body, grid);
    int xi[2] = {0, 0};
    for (long m = 0; m < grid.mode_count(); ++m) {
        grid.freq(m, xi);
        body[static_cast<size_t>(m)] *= dv.scale * spectral_derivative_factor(xi, dv.index);
    }
    kernels::caxpy(spec.data(), cd(1.0), body.data(), body.size());
}

}  // namespace

std::vector<cd> sample_spectrum(const ScalarCoefficient& c, const TorusGrid& grid) {
    if (c.dims() != grid.dims())
        throw std::invalid_argument("sample: coefficient/grid dimension mismatch");
    std::vector<cd> spec(static_cast<size_t>(grid.mode_count()), cd(0.0));
    add_coeff_spectrum(c, grid, spec);
    return spec;
}

SpectralField sample(const ScalarCoefficient& c, const TorusGrid& grid) {
    SpectralField f(grid, 1);
    std::vector<cd> spec = sample_spectrum(c, grid);
    std::copy(spec.begin(), spec.end(), f.comp(0));
    return f;
}

}  // namespace ksafe
