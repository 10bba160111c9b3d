// special.hpp -- scaled Bessel kernel, internally computed constants, and
// small exact-combinatorics helpers.
//
// bessel_i0_scaled(x) = e^{-x} I_0(x)
// ------------------------------------
// Power series for x <= 15 (compensated summation):
//     I_0(x) = sum_k (x/2)^{2k} / (k!)^2
// Asymptotic series for x > 15:
//     e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k a_k x^{-k},
//     a_0 = 1,  a_k = a_{k-1} * (2k-1)^2 / (8k)   (a_k = ((2k-1)!!)^2/(k! 8^k))
// truncated at the smallest term; at the switch point x = 15 the smallest
// term is ~1.4e-14, and the two branches agree there to ~1e-12 relative
// (enforced by a unit test).  Relative accuracy <= 1e-14 away from the
// switch point, ~1e-13 at it.
//
// Check values:
//     B(0)  = 1
//     e^{-1} I_0(1)    = 0.46575960759364043610
//     e^{-15} I_0(15)  = 0.10366976870818254080
//     x = 1e6          ~ (2 pi x)^{-1/2} = 3.9894e-4 (leading term)
//
// catalan_constant()
// ------------------
// Computed internally (never hard-coded) from the accelerated central
// binomial series
//     G = (pi/8) log(2 + sqrt 3) + (3/8) sum_{n>=0} 1/( C(2n,n) (2n+1)^2 ),
// whose terms shrink like 4^{-n}: 30 terms give full double precision.
//     G = 0.91596559417721901505...
#pragma once

#include <cstdint>

namespace lapzeta {

inline constexpr double kEulerGamma = 0.5772156649015329;  // Euler-Mascheroni
inline constexpr double kPiConst = 3.14159265358979323846264338327950288;

double bessel_i0_scaled(double x);

// Power-series / asymptotic branches exposed for the dual-evaluation test.
double bessel_i0_scaled_series(double x);      // intended for x <= ~18
double bessel_i0_scaled_asymptotic(double x);  // intended for x >= ~13

double catalan_constant();

// Harmonic number H_n = 1 + 1/2 + ... + 1/n (H_0 = 0).
double harmonic(int n);

// Binomial coefficient as double (n <= 60 or so stays exact).
double binomial(int n, int k);

// Gamma(-d/2) for odd positive d, by downward recursion from
// Gamma(1/2) = sqrt(pi):  Gamma(z-1) = Gamma(z)/(z-1).
//     Gamma(-1/2) = -2 sqrt(pi),  Gamma(-3/2) = 4 sqrt(pi)/3, ...
double gamma_negative_half(int d);

// Coefficients c_0..c_{nterms-1} of (sum_j a_j y^j)^power where
// a_j are the I_0 asymptotic coefficients above and y = 1/(2t); i.e.
//     (e^{-2t} I_0(2t))^power ~ (4 pi t)^{-power/2} sum_l c_l (2t)^{-l}.
// Used by the analytic tail integrals of the coefficient module.
void bessel_power_tail_coeffs(int power, int nterms, double* c);

}  // namespace lapzeta
