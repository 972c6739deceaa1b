// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/multiindex.hpp"

#include <algorithm>
#include <sstream>

namespace ksafe {

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << "(";
    for (int c = 0; c < dims(); ++c) os << (c ? "," : "") << (*this)[c];
    os << ")";
    return os.str();
}

MultiIndex sub(const MultiIndex& i, const MultiIndex& j) {
    if (!i.dominates(j))
        throw std::invalid_argument("multiindex subtraction " + i.str() + " - " + j.str() +
                                    ": not componentwise <=");
    std::vector<int> e(i.entries());
    for (int c = 0; c < i.dims(); ++c) e[static_cast<size_t>(c)] -= j[c];
    return MultiIndex(std::move(e));
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("binomial: need 0 <= k <= n");
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (int t = 1; t <= k; ++t) r = r * (n - k + t) / t;
    return r;
}

std::int64_t binom(const MultiIndex& l, const MultiIndex& j) {
    if (!l.dominates(j))
        throw std::invalid_argument("binom" + l.str() + j.str() + ": not componentwise <=");
    std::int64_t r = 1;
    for (int c = 0; c < l.dims(); ++c) r *= binomial(l[c], j[c]);
    return r;
}

namespace {
void fill_exact_order(int dims, int order, std::vector<int>& cur, int pos,
                      std::vector<MultiIndex>& out) {
    if (pos == dims - 1) {
        cur[static_cast<size_t>(pos)] = order;
        out.emplace_back(cur);
        return;
    }
    for (int v = 0; v <= order; ++v) {
        cur[static_cast<size_t>(pos)] = v;
        fill_exact_order(dims, order - v, cur, pos + 1, out);
    }
}
}  // namespace

std::vector<MultiIndex> enumerate_multiindices(int dims, int max_order) {
    if (dims < 1) throw std::invalid_argument("enumerate_multiindices: dims >= 1");
    if (max_order < 0) throw std::invalid_argument("enumerate_multiindices: max_order >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<size_t>(dims), 0);
    for (int ord = 0; ord <= max_order; ++ord) fill_exact_order(dims, ord, cur, 0, out);
    // fill_exact_order yields lexicographic order within each grade already,
    // but keep the sort as the single source of truth for the ordering.
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MultiIndex> enumerate_below(const MultiIndex& i) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<size_t>(i.dims()), 0);
    std::int64_t count = 1;
    for (int c = 0; c < i.dims(); ++c) count *= i[c] + 1;
    out.reserve(static_cast<size_t>(count));
    for (std::int64_t t = 0; t < count; ++t) {
        std::int64_t rem = t;
        for (int c = 0; c < i.dims(); ++c) {
            cur[static_cast<size_t>(c)] = static_cast<int>(rem % (i[c] + 1));
            rem /= i[c] + 1;
        }
        out.emplace_back(cur);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ksafe
