// kernels.hpp -- deterministic streaming reduction kernels.
//
// The whole laboratory funnels its bulk arithmetic through two kernels:
//
//     sum_log_shifted(e, n, base)   =  sum_i log(base + e[i])
//     sum_exp_neg_scaled(e, n, t)   =  sum_i exp(-e[i] * t)
//
// (log-determinants and heat traces of explicitly enumerated spectra).  Both
// are provided as a scalar reference implementation and an AVX2+FMA variant
// with hand-rolled vector log/exp polynomials; the active variant is selected
// once at runtime from CPUID.  The two variants are equivalence-tested
// against each other at 1e-13 relative tolerance (they are NOT bit-identical:
// the vector log/exp differ from libm by a couple of ulp).
//
// Determinism contract
// --------------------
// All kernels reduce with a fixed-shape pairwise tree that depends only on
// the element count, never on thread count or chunk scheduling:
//
//     pairwise_sum(x, n):  n <= 32 -> running sum;  else split at n/2.
//
// Pairwise reduction keeps the worst-case rounding error at O(eps * log n)
// instead of O(eps * n), which is what makes a 1e8-term log-determinant
// reproducible to ~1e-12 relative error, and it makes the result a pure
// function of the input array -- the property the multi-threaded
// log-determinant driver relies on for bit-identical results at any thread
// count.
#pragma once

#include <cstddef>

namespace lapzeta::kernels {

enum class Backend {
    Auto,    // resolve from CPUID at first use (AVX2+FMA if available)
    Scalar,  // portable reference (libm log/exp)
    Avx2,    // AVX2+FMA vector polynomials (x86-64 only)
};

// Force a backend (used by the equivalence tests); Backend::Auto restores
// runtime dispatch.  Not thread-safe; call before spawning workers.
void set_backend(Backend b);

// The backend that calls will actually use right now.
Backend active_backend();

// True if this process can run the AVX2 variant.
bool avx2_available();

// Fixed-shape pairwise sum; pure function of (x[0..n), n).
double pairwise_sum(const double* x, std::size_t n);

// sum_i log(base + e[i]) with the fixed pairwise reduction.
// Requires base + e[i] > 0 for a finite result (callers enforce; a
// non-positive argument propagates libm semantics: -inf or NaN).
double sum_log_shifted(const double* e, std::size_t n, double base);

// sum_i exp(-e[i] * t) with the fixed pairwise reduction.
double sum_exp_neg_scaled(const double* e, std::size_t n, double t);

// Scalar reference implementations (always available, used by the
// equivalence property tests regardless of the active backend).
double sum_log_shifted_scalar(const double* e, std::size_t n, double base);
double sum_exp_neg_scaled_scalar(const double* e, std::size_t n, double t);

#if defined(LAPZETA_HAVE_AVX2)
// AVX2 variants; call only if avx2_available().
double sum_log_shifted_avx2(const double* e, std::size_t n, double base);
double sum_exp_neg_scaled_avx2(const double* e, std::size_t n, double t);
#endif

}  // namespace lapzeta::kernels
