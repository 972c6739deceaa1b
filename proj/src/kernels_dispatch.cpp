// Copyright 2026 The ksafe Authors
// SPDX-License-Identifier: Apache-2.0
#include "ksafe/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace ksafe::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend pick_initial() {
    if (const char* env = std::getenv("KSAFE_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
        return Backend::scalar;
    }
    return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& state() {
    static std::atomic<Backend> b{pick_initial()};
    return b;
}

const detail::Table& table() {
    return state().load(std::memory_order_relaxed) == Backend::avx2 ? detail::avx2_table()
                                                                    : detail::scalar_table();
}

}  // namespace

Backend active() { return state().load(std::memory_order_relaxed); }

bool supported(Backend b) {
    return b == Backend::scalar || (b == Backend::avx2 && cpu_has_avx2());
}

void force_backend(Backend b) {
    if (!supported(b)) throw std::runtime_error("kernel backend not supported on this CPU");
    state().store(b, std::memory_order_relaxed);
}

const char* backend_name() {
    return active() == Backend::avx2 ? "avx2" : "scalar";
}

void cmul(cd* dst, const cd* a, const cd* b, std::size_t n) { table().cmul(dst, a, b, n); }
void cmul_add(cd* acc, const cd* a, const cd* b, std::size_t n) { table().cmul_add(acc, a, b, n); }
void caxpy(cd* y, cd alpha, const cd* x, std::size_t n) { table().caxpy(y, alpha, x, n); }
cd cdot(const cd* a, const cd* b, std::size_t n) { return table().cdot(a, b, n); }
void rscale(cd* dst, const double* w, const cd* src, std::size_t n) { table().rscale(dst, w, src, n); }
double wnorm2(const double* w, const cd* a, std::size_t n) { return table().wnorm2(w, a, n); }

}  // namespace ksafe::kernels
