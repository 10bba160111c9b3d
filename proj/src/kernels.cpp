// kernels.cpp -- scalar reference kernels and runtime backend dispatch.
//
// The scalar variants are the semantic definition: libm log/exp element-wise,
// reduced by the fixed pairwise tree.  The AVX2 variants (kernels_avx2.cpp)
// must agree with these to ~1e-13 relative; the unit tests enforce that.

#include "lapzeta/kernels.hpp"

#include <cmath>
#include <vector>

namespace lapzeta::kernels {

namespace {

Backend g_requested = Backend::Auto;

bool cpu_has_avx2() {
#if defined(LAPZETA_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend resolve(Backend b) {
    if (b == Backend::Auto) return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
    return b;
}

// Fixed-shape pairwise reduction.  The base case of 32 keeps the recursion
// shallow without hurting accuracy: error growth is O(eps*(32 + log2(n/32))).
constexpr std::size_t kPairwiseBase = 32;

}  // namespace

void set_backend(Backend b) {
#if !defined(LAPZETA_HAVE_AVX2)
    if (b == Backend::Avx2) b = Backend::Scalar;  // not compiled in
#endif
    if (b == Backend::Avx2 && !cpu_has_avx2()) b = Backend::Scalar;
    g_requested = b;
}

Backend active_backend() { return resolve(g_requested); }

bool avx2_available() { return cpu_has_avx2(); }

double pairwise_sum(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= kPairwiseBase) {
        double s = x[0];
        for (std::size_t i = 1; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double sum_log_shifted_scalar(const double* e, std::size_t n, double base) {
    if (n == 0) return 0.0;
    // Compute per-element logs into a scratch buffer, then reduce with the
    // fixed tree.  The scratch is thread_local so concurrent block workers
    // do not contend.
    static thread_local std::vector<double> scratch;
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = std::log(base + e[i]);
    return pairwise_sum(scratch.data(), n);
}

double sum_exp_neg_scaled_scalar(const double* e, std::size_t n, double t) {
    if (n == 0) return 0.0;
    static thread_local std::vector<double> scratch;
    scratch.resize(n);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = std::exp(-e[i] * t);
    return pairwise_sum(scratch.data(), n);
}

double sum_log_shifted(const double* e, std::size_t n, double base) {
#if defined(LAPZETA_HAVE_AVX2)
    if (active_backend() == Backend::Avx2) return sum_log_shifted_avx2(e, n, base);
#endif
    return sum_log_shifted_scalar(e, n, base);
}

double sum_exp_neg_scaled(const double* e, std::size_t n, double t) {
#if defined(LAPZETA_HAVE_AVX2)
    if (active_backend() == Backend::Avx2) return sum_exp_neg_scaled_avx2(e, n, t);
#endif
    return sum_exp_neg_scaled_scalar(e, n, t);
}

}  // namespace lapzeta::kernels
