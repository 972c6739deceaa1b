// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksafe {

// Tuple of per-variable derivative counts. Length is the ambient dimension.
class MultiIndex {
   public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
        for (int v : e_)
            if (v < 0) throw std::invalid_argument("MultiIndex: negative entry");
    }
    static MultiIndex zero(int dims) { return MultiIndex(std::vector<int>(static_cast<size_t>(dims), 0)); }
    static MultiIndex unit(int dims, int axis, int power = 1) {
        std::vector<int> e(static_cast<size_t>(dims), 0);
        e.at(static_cast<size_t>(axis)) = power;
        return MultiIndex(std::move(e));
    }

    int dims() const { return static_cast<int>(e_.size()); }
    int order() const {
        int s = 0;
        for (int v : e_) s += v;
        return s;
    }
    int operator[](int i) const { return e_[static_cast<size_t>(i)]; }
    const std::vector<int>& entries() const { return e_; }

    bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
    bool operator!=(const MultiIndex& o) const { return e_ != o.e_; }

    // Graded-lexicographic order: by |i| first, then lexicographic on the
    // entries. Fixed so serialized operators are byte-stable.
    bool operator<(const MultiIndex& o) const {
        if (dims() != o.dims()) return dims() < o.dims();
        int a = order(), b = o.order();
        if (a != b) return a < b;
        return e_ < o.e_;
    }

    // componentwise j <= *this
    bool dominates(const MultiIndex& j) const {
        if (j.dims() != dims()) return false;
        for (int c = 0; c < dims(); ++c)
            if (j[c] > (*this)[c]) return false;
        return true;
    }

    MultiIndex operator+(const MultiIndex& o) const {
        require_same_dims(o);
        std::vector<int> e(e_);
        for (int c = 0; c < dims(); ++c) e[static_cast<size_t>(c)] += o[c];
        return MultiIndex(std::move(e));
    }

    std::string str() const;

   private:
    void require_same_dims(const MultiIndex& o) const {
        if (o.dims() != dims()) throw std::invalid_argument("MultiIndex: dimension mismatch");
    }
    std::vector<int> e_;
};

// i - j, defined only for j <= i componentwise.
MultiIndex sub(const MultiIndex& i, const MultiIndex& j);

// Product of componentwise binomial coefficients; requires j <= l.
std::int64_t binom(const MultiIndex& l, const MultiIndex& j);

std::int64_t binomial(int n, int k);

// All multiindices in `dims` variables with order <= max_order, in
// graded-lexicographic order. Count is C(dims + max_order, max_order).
std::vector<MultiIndex> enumerate_multiindices(int dims, int max_order);

// All j <= i componentwise (for Leibniz sums), graded-lex.
std::vector<MultiIndex> enumerate_below(const MultiIndex& i);

}  // namespace ksafe
