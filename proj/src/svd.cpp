// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/svd.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ksafe {

std::vector<double> singular_values(const DenseMatrix& m) {
    if (m.rows <= 0 || m.cols <= 0) throw std::invalid_argument("singular_values: empty matrix");
    Eigen::MatrixXcd A(m.rows, m.cols);
    for (long r = 0; r < m.rows; ++r)
        for (long c = 0; c < m.cols; ++c) A(r, c) = m.at(r, c);
    Eigen::VectorXd sv;
    if (std::max(m.rows, m.cols) > 128) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
        sv = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
        sv = svd.singularValues();
    }
    std::vector<double> out(static_cast<size_t>(sv.size()));
    for (Eigen::Index i = 0; i < sv.size(); ++i) out[static_cast<size_t>(i)] = sv(i);
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

}  // namespace ksafe
