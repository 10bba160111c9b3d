// Scaled Bessel kernel, internally computed Catalan constant, and the small
// exact helpers (harmonic, binomial, half-integer Gamma, tail coefficients).
#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "lapzeta/special.hpp"

using namespace lapzeta;

TEST_CASE("scaled Bessel check values") {
    CHECK(bessel_i0_scaled(0.0) == 1.0);
    CHECK(std::abs(bessel_i0_scaled(1.0) - 0.46575960759364043610) <=
          1e-14);
    CHECK(std::abs(bessel_i0_scaled(15.0) - 0.10389953144882272143) <=
          2e-13);
}

TEST_CASE("series and asymptotic branches agree across the switch point") {
    // Dual evaluation in the overlap window [13, 18].
    for (double x : {13.0, 14.0, 15.0, 16.0, 18.0}) {
        const double s = bessel_i0_scaled_series(x);
        const double a = bessel_i0_scaled_asymptotic(x);
        CHECK(std::abs(s - a) <= 1.5e-12 * s);
    }
}

TEST_CASE("asymptotic regime matches the explicit three-term expansion") {
    const double x = 1e6;
    const double lead = 1.0 / std::sqrt(2.0 * kPiConst * x);
    const double want =
        lead * (1.0 + 1.0 / (8.0 * x) + 9.0 / (128.0 * x * x));
    CHECK(std::abs(bessel_i0_scaled(x) - want) <= 1e-13 * want);
}

TEST_CASE("Bessel kernel is positive and decreasing for t > 0") {
    double prev = bessel_i0_scaled(1e-3);
    for (double x : {0.01, 0.1, 1.0, 5.0, 14.0, 16.0, 100.0, 1e4}) {
        const double cur = bessel_i0_scaled(x);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("Catalan constant from the accelerated series") {
    // A couple of ulp of slack: the series accumulation order differs
    // from the correctly rounded literal.
    CHECK(std::abs(catalan_constant() - 0.91596559417721901505) <= 5e-16);
}

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(0) == 0.0);
    CHECK(harmonic(1) == 1.0);
    // Accumulation order can land an ulp or two away from the rounded
    // rational literal (harmonic(4) hits an exact round-to-even tie).
    CHECK(std::abs(harmonic(4) - 25.0 / 12.0) <= 5e-16);
    CHECK(std::abs(harmonic(10) - 7381.0 / 2520.0) <= 2e-15);
}

TEST_CASE("binomial coefficients are exact in the double range") {
    CHECK(binomial(0, 0) == 1.0);
    CHECK(binomial(10, 3) == 120.0);
    CHECK(binomial(16, 8) == 12870.0);
    CHECK(binomial(52, 26) == 495918532948104.0);
    CHECK(binomial(5, 7) == 0.0);
}

TEST_CASE("Gamma at negative half-integers by downward recursion") {
    const double sp = std::sqrt(kPiConst);
    CHECK(std::abs(gamma_negative_half(1) - (-2.0 * sp)) <= 1e-15 * sp);
    CHECK(std::abs(gamma_negative_half(3) - (4.0 * sp / 3.0)) <=
          1e-15 * sp);
    CHECK(std::abs(gamma_negative_half(5) - (-8.0 * sp / 15.0)) <=
          1e-15 * sp);
}

TEST_CASE("Bessel power tail coefficients: known low orders") {
    // power=1 reproduces the I0 asymptotic coefficients a_l themselves:
    // c = {1, 1/8, 9/128, ...}.
    double c1[3];
    bessel_power_tail_coeffs(1, 3, c1);
    CHECK(std::abs(c1[0] - 1.0) <= 1e-16);
    CHECK(std::abs(c1[1] - 0.125) <= 1e-16);
    CHECK(std::abs(c1[2] - 9.0 / 128.0) <= 1e-16);

    // power=2 is the series square: {1, 1/4, 5/32, ...}.
    double c2[3];
    bessel_power_tail_coeffs(2, 3, c2);
    CHECK(std::abs(c2[0] - 1.0) <= 1e-16);
    CHECK(std::abs(c2[1] - 0.25) <= 1e-15);
    CHECK(std::abs(c2[2] - 5.0 / 32.0) <= 1e-15);
}

TEST_CASE("Bessel power tail matches a brute-force power at large t") {
    // (e^{-2t} I0(2t))^3 at t = 30 vs the 6-term asymptotic sum.
    const double t = 30.0;
    const double direct = std::pow(bessel_i0_scaled(2.0 * t), 3);
    double c[6];
    bessel_power_tail_coeffs(3, 6, c);
    double series = 0.0;
    double ypow = 1.0;
    for (int l = 0; l < 6; ++l) {
        series += c[l] * ypow;
        ypow /= (2.0 * t);
    }
    series *= std::pow(4.0 * kPiConst * t, -1.5);
    // The first omitted term is ~5e-11 relative at this t.
    CHECK(std::abs(direct - series) <= 2e-10 * direct);
}
