// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ksafe/diffop.hpp"

namespace ksafe::examples {

struct Shipped {
    std::string name;       // matches specs/<name>.spec
    DiffOp op;
    int l;                  // default Sobolev target for index/duality runs
    bool self_adjoint;      // formally self-adjoint at (g,w) = (1,1)
};

// 1 - d^2 (positive, invertible)
DiffOp identity_minus_laplacian();
// d on the circle (kernel and cokernel are the constants)
DiffOp circle_derivative();
// d((1 + cos(x)/2) d.)
DiffOp smooth_divform();
// d(a d.) with a = 1 + 0.05 * powerlaw(beta=2.75), grade-2 top coefficient
DiffOp rough_divform();
// d^2 - V with V = powerlaw(beta=2), a grade-1 potential
DiffOp rough_schroedinger();
// (1 + cos(x)/2) d^2 + powerlaw(beta=2) order-zero term
DiffOp safe_mixed();
// a(x) d with a = powerlaw(beta=0.6, seed 0): grade-0 coefficient, unsafe
// at every k, the sharpness witness
DiffOp unsafe_counterexample();

// The six index-capable examples (elliptic and safe at their listed l).
std::vector<Shipped> shipped();

// shipped() plus the unsafe counterexample (for spec-file round trips).
std::vector<std::pair<std::string, DiffOp>> all_named();

}  // namespace ksafe::examples
