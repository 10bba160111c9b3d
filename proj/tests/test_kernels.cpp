// Reduction-kernel properties: fixed-shape pairwise summation, scalar/AVX2
// equivalence, and backend selection.
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lapzeta/kernels.hpp"

using namespace lapzeta;

namespace {

// Log-uniform positive samples spanning many magnitudes; fixed seed so the
// suite is reproducible.
std::vector<double> log_uniform(std::size_t n, double lo_exp, double hi_exp,
                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo_exp, hi_exp);
    std::vector<double> out(n);
    for (double& v : out) v = std::pow(10.0, u(rng));
    return out;
}

struct BackendGuard {
    ~BackendGuard() { kernels::set_backend(kernels::Backend::Auto); }
};

}  // namespace

TEST_CASE("pairwise_sum matches exact sums and is a pure function of input") {
    // sum 1..n = n(n+1)/2, exactly representable for these n.
    for (std::size_t n : {1u, 31u, 32u, 33u, 1000u, 65536u}) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = double(i + 1);
        const double got = kernels::pairwise_sum(x.data(), n);
        const double want = 0.5 * double(n) * double(n + 1);
        CHECK(got == want);
        // Repeat evaluation is bit-identical (no hidden state).
        CHECK(kernels::pairwise_sum(x.data(), n) == got);
    }
    CHECK(kernels::pairwise_sum(nullptr, 0) == 0.0);
}

TEST_CASE("pairwise_sum beats naive accumulation on adversarial data") {
    // Many tiny terms after one large one.  A running sum absorbs every
    // tiny term into the 1e8 (error ~1e-3); the pairwise tree only loses
    // the few tiny terms sharing the leading leaf block (error <~ 1e-6).
    std::vector<double> x(100001, 1e-8);
    x[0] = 1e8;
    const double got = kernels::pairwise_sum(x.data(), x.size());
    const double want = 1e8 + 1e-3;  // 100000 * 1e-8 = 1e-3
    double naive = 0.0;
    for (double v : x) naive += v;
    CHECK(std::abs(got - want) <= 1e-6);
    CHECK(std::abs(got - want) * 100.0 < std::abs(naive - want));
}

TEST_CASE("scalar log kernel equals direct libm loop") {
    const std::vector<double> e = log_uniform(4097, -6.0, 6.0, 12345);
    const double base = 0.25;
    double direct = 0.0;
    for (double v : e) direct += std::log(base + v);
    const double got = kernels::sum_log_shifted_scalar(e.data(), e.size(), base);
    CHECK(std::abs(got - direct) <= 1e-11 * std::abs(direct));
}

TEST_CASE("scalar exp kernel equals direct libm loop") {
    const std::vector<double> e = log_uniform(2048, -3.0, 1.5, 999);
    const double t = 0.37;
    double direct = 0.0;
    for (double v : e) direct += std::exp(-v * t);
    const double got = kernels::sum_exp_neg_scaled_scalar(e.data(), e.size(), t);
    CHECK(std::abs(got - direct) <= 1e-12 * std::abs(direct));
}

TEST_CASE("AVX2 kernels agree with scalar reference to 1e-13 relative") {
    if (!kernels::avx2_available()) {
        MESSAGE("AVX2 not available on this host; equivalence test skipped");
        return;
    }
#if defined(LAPZETA_HAVE_AVX2)
    // Sizes straddle the vector width and the pairwise base case.
    for (std::size_t n : {1u, 3u, 4u, 5u, 31u, 32u, 33u, 255u, 65536u,
                          100003u}) {
        const std::vector<double> e = log_uniform(n, -8.0, 8.0, 777 + n);
        for (double base : {0.0, 1e-6, 1.0, 3.5}) {
            const double s =
                kernels::sum_log_shifted_scalar(e.data(), n, base);
            const double v = kernels::sum_log_shifted_avx2(e.data(), n, base);
            CHECK(std::abs(v - s) <=
                  1e-13 * std::max(std::abs(s), 1.0));
        }
        for (double t : {1e-4, 0.3, 2.0}) {
            const double s =
                kernels::sum_exp_neg_scaled_scalar(e.data(), n, t);
            const double v = kernels::sum_exp_neg_scaled_avx2(e.data(), n, t);
            CHECK(std::abs(v - s) <=
                  1e-13 * std::max(std::abs(s), 1.0));
        }
    }
#endif
}

TEST_CASE("AVX2 kernels handle subnormal-adjacent and huge arguments") {
    if (!kernels::avx2_available()) return;
#if defined(LAPZETA_HAVE_AVX2)
    // Values near the bottom and top of the normal range still match the
    // scalar path (the vector screen falls back when needed).
    std::vector<double> e = {1e-300, 5e-300, 1e300, 2.5, 1e-17, 8.0};
    const double s = kernels::sum_log_shifted_scalar(e.data(), e.size(), 0.0);
    const double v = kernels::sum_log_shifted_avx2(e.data(), e.size(), 0.0);
    CHECK(std::abs(v - s) <= 1e-13 * std::abs(s));
#endif
}

TEST_CASE("backend selection: forced scalar, forced AVX2, auto restore") {
    BackendGuard guard;
    kernels::set_backend(kernels::Backend::Scalar);
    CHECK(kernels::active_backend() == kernels::Backend::Scalar);

    kernels::set_backend(kernels::Backend::Avx2);
    if (kernels::avx2_available()) {
        CHECK(kernels::active_backend() == kernels::Backend::Avx2);
    } else {
        // Graceful downgrade, never a crash.
        CHECK(kernels::active_backend() == kernels::Backend::Scalar);
    }

    kernels::set_backend(kernels::Backend::Auto);
    const kernels::Backend resolved = kernels::active_backend();
    CHECK((resolved == kernels::Backend::Scalar ||
           resolved == kernels::Backend::Avx2));
}

TEST_CASE("dispatched kernels equal the active variant exactly") {
    const std::vector<double> e = log_uniform(513, -2.0, 2.0, 4242);
    const double via_dispatch =
        kernels::sum_log_shifted(e.data(), e.size(), 1.0);
    double via_named = 0.0;
    if (kernels::active_backend() == kernels::Backend::Scalar) {
        via_named = kernels::sum_log_shifted_scalar(e.data(), e.size(), 1.0);
    } else {
#if defined(LAPZETA_HAVE_AVX2)
        via_named = kernels::sum_log_shifted_avx2(e.data(), e.size(), 1.0);
#endif
    }
    CHECK(via_dispatch == via_named);
}
