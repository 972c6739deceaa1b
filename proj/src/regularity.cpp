// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/regularity.hpp"

#include <algorithm>
#include <stdexcept>

namespace ksafe {

std::optional<Regularity> product_grade(Regularity u, Regularity l, int n) {
    if (n < 1) throw std::invalid_argument("product_grade: dimension >= 1");
    if (!u.is_infinite() && u.value() < 0)
        throw std::invalid_argument("product_grade: u >= 0 required");
    if (!l.is_infinite() && l.value() < 0)
        throw std::invalid_argument("product_grade: l >= 0 required");
    if (u.is_infinite() && l.is_infinite()) return Regularity::infinite();
    // One smooth factor: the validity condition holds trivially and the
    // min reduces to the finite grade.
    if (u.is_infinite()) return l;
    if (l.is_infinite()) return u;
    int half_up = (n + 1) / 2;  // ceil(n/2)
    int c = u.value() + l.value() - half_up - 1;
    if (c < 1) return std::nullopt;
    return Regularity::finite(std::min({u.value(), l.value(), c}));
}

Regularity safe_grade_threshold(int index_order, Regularity k, int s, int n) {
    if (k.is_infinite()) return Regularity::infinite();
    int first = k.value() - s;
    int second = index_order - s + n / 2 + 1;
    return Regularity::finite(std::max(first, second));
}

Regularity safe_grade(int index_order, Regularity k, int s, int n) {
    if (k.is_infinite()) throw std::invalid_argument("safe_grade: k must be finite");
    if (index_order > s)
        throw std::invalid_argument("safe_grade: |i| = " + std::to_string(index_order) +
                                    " exceeds operator order s = " + std::to_string(s));
    if (s > k.value())
        throw std::invalid_argument("safe_grade: order s = " + std::to_string(s) +
                                    " exceeds grade k = " + std::to_string(k.value()));
    return safe_grade_threshold(index_order, k, s, n);
}

Regularity safe_grade(const MultiIndex& i, Regularity k, int s, int n) {
    if (i.dims() != n) throw std::invalid_argument("safe_grade: multiindex dimension mismatch");
    return safe_grade(i.order(), k, s, n);
}

bool embeds_in_continuous(Regularity r, int n) {
    if (r.is_infinite()) return true;
    return 2 * r.value() > n;
}

}  // namespace ksafe
