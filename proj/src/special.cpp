// special.cpp -- scaled Bessel kernel and internal constants.

#include "lapzeta/special.hpp"

#include <cmath>
#include <vector>

#include "lapzeta/errors.hpp"

namespace lapzeta {

double bessel_i0_scaled_series(double x) {
    // e^{-x} * sum_k (x/2)^{2k} / (k!)^2 with Kahan compensation: at x = 15
    // the sum has ~40 terms of the same sign up to 3.4e5, so plain
    // accumulation would already give 4e-15 relative -- compensation keeps
    // the series branch at ~1e-16 so the dual-evaluation test budget is
    // spent on the asymptotic branch only.
    const double q = 0.25 * x * x;  // (x/2)^2
    double term = 1.0, sum = 1.0, comp = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (term < 1e-18 * sum) break;
    }
    return std::exp(-x) * sum;
}

double bessel_i0_scaled_asymptotic(double x) {
    // (2 pi x)^{-1/2} sum_k a_k x^{-k}, truncated at the smallest term.
    double term = 1.0, sum = 1.0;
    double prev = INFINITY;
    for (int k = 1; k < 60; ++k) {
        const double tk = 2.0 * k - 1.0;
        term *= tk * tk / (8.0 * static_cast<double>(k) * x);
        if (term >= prev) break;  // asymptotic series started diverging
        sum += term;
        prev = term;
        if (term < 1e-17 * sum) break;
    }
    return sum / std::sqrt(2.0 * kPiConst * x);
}

double bessel_i0_scaled(double x) {
    if (x < 0.0) throw Error("bessel_i0_scaled: x must be >= 0");
    return (x <= 15.0) ? bessel_i0_scaled_series(x) : bessel_i0_scaled_asymptotic(x);
}

double catalan_constant() {
    // G = (pi/8) log(2 + sqrt 3) + (3/8) sum_{n>=0} 1 / ( C(2n,n) (2n+1)^2 )
    // inv_binom tracks 1/C(2n,n):  1/C(2n+2,n+1) = 1/C(2n,n) * (n+1)/(2(2n+1)).
    double sum = 0.0;
    double inv_binom = 1.0;  // 1/C(0,0)
    for (int n = 0; n < 40; ++n) {
        const double odd = 2.0 * n + 1.0;
        const double term = inv_binom / (odd * odd);
        sum += term;
        if (term < 1e-18 * sum) break;
        inv_binom *= (n + 1.0) / (2.0 * odd);
    }
    return kPiConst / 8.0 * std::log(2.0 + std::sqrt(3.0)) + 0.375 * sum;
}

double harmonic(int n) {
    double h = 0.0;
    for (int j = 1; j <= n; ++j) h += 1.0 / static_cast<double>(j);
    return h;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    if (k > n - k) k = n - k;
    double c = 1.0;
    for (int j = 1; j <= k; ++j)
        c = c * static_cast<double>(n - k + j) / static_cast<double>(j);
    // binomials of small integers are exactly representable; round to undo
    // the division rounding so downstream integer identities hold exactly
    return std::nearbyint(c);
}

double gamma_negative_half(int d) {
    if (d < 1 || d % 2 == 0)
        throw Error("gamma_negative_half: d must be a positive odd integer");
    // walk down from Gamma(1/2) = sqrt(pi): Gamma(z-1) = Gamma(z)/(z-1)
    double g = std::sqrt(kPiConst);  // Gamma(1/2)
    double z = 0.5;                  // current argument
    while (z > -0.5 * d + 0.25) {
        z -= 1.0;
        g /= z;
    }
    return g;
}

void bessel_power_tail_coeffs(int power, int nterms, double* c) {
    // a_j coefficients of the I_0 asymptotic series in y = 1/x (x = 2t)
    std::vector<double> a(static_cast<std::size_t>(nterms), 0.0);
    a[0] = 1.0;
    for (int k = 1; k < nterms; ++k) {
        const double tk = 2.0 * k - 1.0;
        a[static_cast<std::size_t>(k)] =
            a[static_cast<std::size_t>(k - 1)] * tk * tk / (8.0 * k);
    }
    // c = a convolved with itself (power) times, truncated at nterms
    std::vector<double> acc(static_cast<std::size_t>(nterms), 0.0);
    acc[0] = 1.0;
    for (int p = 0; p < power; ++p) {
        std::vector<double> nxt(static_cast<std::size_t>(nterms), 0.0);
        for (int i = 0; i < nterms; ++i)
            for (int j = 0; i + j < nterms; ++j)
                nxt[static_cast<std::size_t>(i + j)] +=
                    acc[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)];
        acc.swap(nxt);
    }
    for (int i = 0; i < nterms; ++i) c[i] = acc[static_cast<std::size_t>(i)];
}

}  // namespace lapzeta
