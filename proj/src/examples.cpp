// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/examples.hpp"

namespace ksafe::examples {

namespace {

DiffOp scalar_op(int order, std::map<MultiIndex, ScalarCoefficient> coeffs) {
    std::map<MultiIndex, Coefficient> m;
    for (auto& [idx, c] : coeffs) m.emplace(idx, Coefficient::scalar(std::move(c)));
    return DiffOp(1, 1, order, std::move(m));
}

MultiIndex d1(int p) { return MultiIndex({p}); }

}  // namespace

DiffOp identity_minus_laplacian() {
    return scalar_op(2, {{d1(2), ScalarCoefficient::constant(1, -1.0)},
                         {d1(0), ScalarCoefficient::constant(1, 1.0)}});
}

DiffOp circle_derivative() {
    return scalar_op(1, {{d1(1), ScalarCoefficient::constant(1, 1.0)}});
}

DiffOp smooth_divform() {
    ScalarCoefficient a =
        ScalarCoefficient::constant(1, 1.0) + ScalarCoefficient::cosine({1}, 0.5);
    return divergence_form_laplacian(a, Regularity::finite(3));
}

DiffOp rough_divform() {
    ScalarCoefficient a = ScalarCoefficient::constant(1, 1.0) +
                          ScalarCoefficient::power_law(1, 2.75, 4096, 11, 0.05);
    return divergence_form_laplacian(a, Regularity::finite(3));
}

DiffOp rough_schroedinger() {
    return schroedinger_like(ScalarCoefficient::constant(1, 1.0),
                             ScalarCoefficient::power_law(1, 2.0, 512, 7), 1.0);
}

DiffOp safe_mixed() {
    ScalarCoefficient top =
        ScalarCoefficient::constant(1, 1.0) + ScalarCoefficient::cosine({1}, 0.5);
    ScalarCoefficient zero_order = ScalarCoefficient::power_law(1, 2.0, 1 << 20, 5);
    return scalar_op(2, {{d1(2), std::move(top)}, {d1(0), std::move(zero_order)}});
}

DiffOp unsafe_counterexample() {
    return scalar_op(1, {{d1(1), ScalarCoefficient::power_law(1, 0.6, 1 << 30, 0)}});
}

std::vector<Shipped> shipped() {
    std::vector<Shipped> out;
    out.push_back({"laplacian", identity_minus_laplacian(), 2, true});
    out.push_back({"derivative", circle_derivative(), 1, false});
    out.push_back({"smooth_divform", smooth_divform(), 2, true});
    out.push_back({"rough_laplacian", rough_divform(), 3, true});
    out.push_back({"rough_potential", rough_schroedinger(), 3, true});
    out.push_back({"safe_mixed", safe_mixed(), 3, false});
    return out;
}

std::vector<std::pair<std::string, DiffOp>> all_named() {
    std::vector<std::pair<std::string, DiffOp>> out;
    for (auto& s : shipped()) out.emplace_back(s.name, s.op);
    out.emplace_back("unsafe_counterexample", unsafe_counterexample());
    return out;
}

}  // namespace ksafe::examples
