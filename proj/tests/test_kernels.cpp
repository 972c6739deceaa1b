// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <vector>

#include "ksafe/kernels.hpp"
#include "ksafe/util.hpp"

using namespace ksafe;
namespace k = ksafe::kernels;

namespace {

std::vector<cd> random_vec(size_t n, std::uint64_t seed) {
    std::vector<cd> v(n);
    std::uint64_t st = seed;
    for (auto& z : v) z = cd(gaussian(st), gaussian(st));
    return v;
}

std::vector<double> random_weights(size_t n, std::uint64_t seed) {
    std::vector<double> w(n);
    std::uint64_t st = seed;
    for (auto& x : w) x = 1.0 + uniform01(st) * 10.0;
    return w;
}

struct BackendGuard {
    k::Backend saved = k::active();
    ~BackendGuard() { k::force_backend(saved); }
};

}  // namespace

TEST_CASE("scalar kernel semantics") {
    BackendGuard guard;
    k::force_backend(k::Backend::scalar);
    auto a = random_vec(17, 11), b = random_vec(17, 22);
    std::vector<cd> dst(17);
    k::cmul(dst.data(), a.data(), b.data(), 17);
    for (size_t i = 0; i < 17; ++i) CHECK(std::abs(dst[i] - a[i] * b[i]) < 1e-15);

    cd dot = k::cdot(a.data(), b.data(), 17);
    cd ref = 0;
    for (size_t i = 0; i < 17; ++i) ref += a[i] * std::conj(b[i]);
    CHECK(std::abs(dot - ref) < 1e-12);

    // cdot(a,a) is real nonnegative
    CHECK(k::cdot(a.data(), a.data(), 17).imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("avx2 variants agree with the scalar reference") {
    if (!k::supported(k::Backend::avx2)) {
        MESSAGE("avx2 not available; dispatch stays scalar");
        return;
    }
    BackendGuard guard;
    for (size_t n : {size_t(1), size_t(2), size_t(3), size_t(8), size_t(17), size_t(64),
                     size_t(1000), size_t(1001)}) {
        auto a = random_vec(n, 7 + n), b = random_vec(n, 977 + n);
        auto w = random_weights(n, 31 + n);
        cd alpha(0.7, -1.3);

        k::force_backend(k::Backend::scalar);
        std::vector<cd> mul_s(n), axpy_s = b, rs_s(n), acc_s = a;
        k::cmul(mul_s.data(), a.data(), b.data(), n);
        k::cmul_add(acc_s.data(), a.data(), b.data(), n);
        k::caxpy(axpy_s.data(), alpha, a.data(), n);
        k::rscale(rs_s.data(), w.data(), a.data(), n);
        cd dot_s = k::cdot(a.data(), b.data(), n);
        double wn_s = k::wnorm2(w.data(), a.data(), n);

        k::force_backend(k::Backend::avx2);
        std::vector<cd> mul_v(n), axpy_v = b, rs_v(n), acc_v = a;
        k::cmul(mul_v.data(), a.data(), b.data(), n);
        k::cmul_add(acc_v.data(), a.data(), b.data(), n);
        k::caxpy(axpy_v.data(), alpha, a.data(), n);
        k::rscale(rs_v.data(), w.data(), a.data(), n);
        cd dot_v = k::cdot(a.data(), b.data(), n);
        double wn_v = k::wnorm2(w.data(), a.data(), n);

        for (size_t i = 0; i < n; ++i) {
            CHECK(std::abs(mul_s[i] - mul_v[i]) <= 1e-13 * (1.0 + std::abs(mul_s[i])));
            CHECK(std::abs(acc_s[i] - acc_v[i]) <= 1e-13 * (1.0 + std::abs(acc_s[i])));
            CHECK(std::abs(axpy_s[i] - axpy_v[i]) <= 1e-13 * (1.0 + std::abs(axpy_s[i])));
            CHECK(std::abs(rs_s[i] - rs_v[i]) <= 1e-13 * (1.0 + std::abs(rs_s[i])));
        }
        CHECK(std::abs(dot_s - dot_v) <= 1e-13 * (1.0 + std::abs(dot_s)));
        CHECK(wn_s == doctest::Approx(wn_v).epsilon(1e-13));
    }
}

TEST_CASE("backend dispatch is sticky and reports a name") {
    BackendGuard guard;
    k::force_backend(k::Backend::scalar);
    CHECK(k::active() == k::Backend::scalar);
    CHECK(std::string(k::backend_name()) == "scalar");
}
