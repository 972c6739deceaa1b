// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/util.hpp"

#include <algorithm>

namespace ksafe {

double det_abs(std::vector<cd> m, int q) {
    double scale = 1.0;
    for (int col = 0; col < q; ++col) {
        int piv = col;
        double best = std::abs(m[static_cast<size_t>(col) * q + col]);
        for (int r = col + 1; r < q; ++r) {
            double v = std::abs(m[static_cast<size_t>(r) * q + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best == 0.0) return 0.0;
        if (piv != col)
            for (int c = 0; c < q; ++c)
                std::swap(m[static_cast<size_t>(piv) * q + c], m[static_cast<size_t>(col) * q + c]);
        scale *= std::abs(m[static_cast<size_t>(col) * q + col]);
        for (int r = col + 1; r < q; ++r) {
            cd f = m[static_cast<size_t>(r) * q + col] / m[static_cast<size_t>(col) * q + col];
            for (int c = col; c < q; ++c)
                m[static_cast<size_t>(r) * q + c] -= f * m[static_cast<size_t>(col) * q + c];
        }
    }
    return scale;
}

std::vector<cd> mat_inverse(std::vector<cd> m, int q) {
    std::vector<cd> inv(static_cast<size_t>(q) * q, cd(0.0));
    for (int i = 0; i < q; ++i) inv[static_cast<size_t>(i) * q + i] = 1.0;
    for (int col = 0; col < q; ++col) {
        int piv = col;
        double best = std::abs(m[static_cast<size_t>(col) * q + col]);
        for (int r = col + 1; r < q; ++r) {
            double v = std::abs(m[static_cast<size_t>(r) * q + col]);
            if (v > best) { best = v; piv = r; }
        }
        if (best < 1e-300) throw std::runtime_error("mat_inverse: singular matrix");
        if (piv != col)
            for (int c = 0; c < q; ++c) {
                std::swap(m[static_cast<size_t>(piv) * q + c], m[static_cast<size_t>(col) * q + c]);
                std::swap(inv[static_cast<size_t>(piv) * q + c], inv[static_cast<size_t>(col) * q + c]);
            }
        cd d = m[static_cast<size_t>(col) * q + col];
        for (int c = 0; c < q; ++c) {
            m[static_cast<size_t>(col) * q + c] /= d;
            inv[static_cast<size_t>(col) * q + c] /= d;
        }
        for (int r = 0; r < q; ++r) {
            if (r == col) continue;
            cd f = m[static_cast<size_t>(r) * q + col];
            if (f == cd(0.0)) continue;
            for (int c = 0; c < q; ++c) {
                m[static_cast<size_t>(r) * q + c] -= f * m[static_cast<size_t>(col) * q + c];
                inv[static_cast<size_t>(r) * q + c] -= f * inv[static_cast<size_t>(col) * q + c];
            }
        }
    }
    return inv;
}

double mat_norm2(const std::vector<cd>& m, int q) {
    if (q == 1) return std::abs(m[0]);
    std::vector<cd> x(static_cast<size_t>(q), cd(1.0, 0.25)), y(static_cast<size_t>(q));
    double sigma = 0.0;
    for (int it = 0; it < 64; ++it) {
        for (int r = 0; r < q; ++r) {
            cd s = 0.0;
            for (int c = 0; c < q; ++c) s += m[static_cast<size_t>(r) * q + c] * x[static_cast<size_t>(c)];
            y[static_cast<size_t>(r)] = s;
        }
        // x <- m^H y
        double ny = 0.0;
        for (int c = 0; c < q; ++c) {
            cd s = 0.0;
            for (int r = 0; r < q; ++r) s += std::conj(m[static_cast<size_t>(r) * q + c]) * y[static_cast<size_t>(r)];
            x[static_cast<size_t>(c)] = s;
            ny += std::norm(s);
        }
        double nx = std::sqrt(ny);
        if (nx == 0.0) return 0.0;
        for (auto& v : x) v /= nx;
        double next = std::sqrt(nx);
        if (it > 4 && std::abs(next - sigma) <= 1e-14 * next) { sigma = next; break; }
        sigma = next;
    }
    return sigma;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need at least two samples");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

}  // namespace ksafe
