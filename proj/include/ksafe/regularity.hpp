// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "ksafe/multiindex.hpp"

namespace ksafe {

// A Sobolev grade: an integer order or +infinity (smooth). Coefficient
// grades are always >= 0; safeness thresholds computed from the grading
// formula may be negative, so the type itself carries any int.
class Regularity {
   public:
    constexpr Regularity() : inf_(false), v_(0) {}
    static constexpr Regularity finite(int v) { return Regularity(false, v); }
    static constexpr Regularity infinite() { return Regularity(true, 0); }

    constexpr bool is_infinite() const { return inf_; }
    constexpr int value() const { return v_; }  // meaningful only when finite

    constexpr bool operator==(const Regularity& o) const {
        return inf_ == o.inf_ && (inf_ || v_ == o.v_);
    }
    constexpr bool operator!=(const Regularity& o) const { return !(*this == o); }
    constexpr bool operator<(const Regularity& o) const {
        if (inf_) return false;
        if (o.inf_) return true;
        return v_ < o.v_;
    }
    constexpr bool operator<=(const Regularity& o) const { return *this < o || *this == o; }
    constexpr bool operator>=(const Regularity& o) const { return !(*this < o); }
    constexpr bool operator>(const Regularity& o) const { return o < *this; }

    // infinity absorbs: min(inf, a) = a
    static constexpr Regularity min(Regularity a, Regularity b) { return a < b ? a : b; }
    static constexpr Regularity max(Regularity a, Regularity b) { return a < b ? b : a; }

    // grade arithmetic; infinity is fixed by shifts
    constexpr Regularity minus(int d) const { return inf_ ? *this : finite(v_ - d); }
    constexpr Regularity plus(int d) const { return inf_ ? *this : finite(v_ + d); }

    std::string str() const { return inf_ ? "inf" : std::to_string(v_); }

   private:
    constexpr Regularity(bool inf, int v) : inf_(inf), v_(v) {}
    bool inf_;
    int v_;
};

// Grade of a product of H^u and H^l functions in n variables:
// min{u, l, u+l-ceil(n/2)-1}, valid only when u+l-ceil(n/2)-1 >= 1.
// nullopt  means "no conclusion" (callers must treat the product as
// ungraded), not an error. Infinite inputs absorb: smooth times H^l is H^l.
std::optional<Regularity> product_grade(Regularity u, Regularity l, int n);

// Required coefficient grade a(i,k) = max{k-s, |i|-s+floor(n/2)+1} for the
// coefficient at multiindex i of an order-s operator at target grade k.
// Preconditions: |i| <= s <= k, k finite.
Regularity safe_grade(const MultiIndex& i, Regularity k, int s, int n);
Regularity safe_grade(int index_order, Regularity k, int s, int n);

// Unchecked threshold used by the safeness checker, which must also handle
// k < s (adjoint targets) and infinite k. May be negative.
Regularity safe_grade_threshold(int index_order, Regularity k, int s, int n);

// Sobolev embedding into C^0: 2r > n (strict), or r infinite.
bool embeds_in_continuous(Regularity r, int n);

}  // namespace ksafe
