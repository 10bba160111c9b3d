// continuum.hpp -- heat traces and zeta-regularized log-determinants for
// continuum boxes (Dirichlet) and flat tori (periodic, optionally massive).
//
// Spectra:
//   box K_d(a_1..a_d), Dirichlet:  lambda_q = sum_i (pi q_i / a_i)^2, q_i >= 1
//   torus T_d(a_1..a_d) + mass:    lambda_q = sum_i (2 pi q_i / a_i)^2 + m^2,
//                                  q in Z^d  (q = 0 excluded when m = 0)
//
// Heat traces are assembled from the one-dimensional theta
//     theta(a, t) = sum_{q in Z} e^{-(2 pi q / a)^2 t},
// evaluated through whichever of the dual representations converges fast:
// the spectral sum when (2 pi / a)^2 t >= 1, otherwise the modular image
//     theta(a, t) = a / sqrt(4 pi t) * (1 + 2 sum_{k>=1} e^{-a^2 k^2 / (4t)}).
// Terms are truncated once below 1e-30 of the running sum (plus two safety
// terms), so both branches deliver full double accuracy.
//
// The box trace uses theta_K(a_i) = (theta(2 a_i, t) - 1) / 2 per axis; the
// small-t counterterm is the exact finite sum
//     f(t) = sum_{i=0..d} (-1)^{d-i} V_i (4 pi t)^{-i/2},
// with V_i the face-volume coefficients of the box (V_d = prod a_i, ...,
// V_0 = 1).  theta_K - f decays like e^{-c/t} as t -> 0; the telescoped
// product form below computes it without cancellation.
//
// zeta'(0) splits as
//     zeta'_K(0) = int_0^1 (Theta_K - f) dt/t + int_1^T Theta_K dt/t
//                  + (-1)^d 2^{-d} gamma
//                  - sum_{i=1..d} (-1)^{d-i} (2/i) V_i (4 pi)^{-i/2}
// up to an e^{-lambda_min T} remainder, and the regularized determinant is
// logdet_zeta = -zeta'(0).  Check values (frozen oracles):
//     interval a:        -zeta' = log(2a)
//     square 1x1:        -zeta' = log Gamma(1/4) - (3/4) log(4 pi)
//                               = -0.610245660528890637363
//     box 1x2:           -0.870175853238870128394
//     box 0.5x1.5:       -0.785398169909860509313
//     cube 1x1x1:        +0.387064064517340377766
//
// Massive tori:  zeta'(0) = int_0^inf (Theta - V e^{-m^2 t} (4 pi t)^{-d/2})
// dt/t + gamma_term, where the gamma term integrates the counterterm in
// closed form:
//     d odd:   V Gamma(-d/2) (m^2 / 4 pi)^{d/2}
//     d even:  (-1)^{d/2} V m^d / ((4 pi)^{d/2} (d/2)!) * (H_{d/2} - log m^2)
// Frozen oracles: circle a=1, m=1: logdet_zeta = -zeta' =
// 0.082649709225836217957; torus 1x1, m=1: -1.28362581381550720624;
// torus 1x2, m=0.5: -2.167388972322846140752.
#pragma once

#include <vector>

#include "lapzeta/quadrature.hpp"

namespace lapzeta {

struct BoxSpec {
    std::vector<double> sides;
    double mass = 0.0;  // continuum mass m (enters spectra as +m^2)

    int dimension() const { return static_cast<int>(sides.size()); }
    double volume() const;
};

// One-axis theta (period a); t > 0 or NonPositiveT.
double theta_axis(double a, double t);

// Massive torus trace: e^{-m^2 t} prod_i theta_axis(a_i, t).
double theta_torus(const BoxSpec& box, double t);

// Dirichlet box trace prod_i (theta(2 a_i) - 1)/2; MassNotSupported if
// box.mass != 0.
double theta_hypercube(const BoxSpec& box, double t);

// Same quantity through the inclusion-exclusion subset sum
// 2^{-d} sum_{S subset of axes} (-1)^{d-|S|} prod_{i in S} theta(2 a_i, t);
// kept separate so the algebraic identity between the two can be tested.
double theta_hypercube_subset_sum(const BoxSpec& box, double t);

// f(t) = sum_i (-1)^{d-i} V_i (4 pi t)^{-i/2}; exact finite sum.
double counterterm_f(const BoxSpec& box, double t);

// Theta_K(t) - f(t) without cancellation (telescoped when every axis is in
// its modular regime, direct difference otherwise).
double theta_hypercube_minus_f(const BoxSpec& box, double t);

struct ZetaTerms {
    double integral_small = 0.0;  // int_{t0}^{1} (Theta - f) dt/t
    double integral_large = 0.0;  // int_1^T Theta dt/t
    double gamma_term = 0.0;      // (-1)^d 2^{-d} gamma
    double volume_term = 0.0;     // -sum_i (-1)^{d-i} (2/i) V_i (4pi)^{-i/2}
    double zeta_prime = 0.0;
    double logdet_zeta = 0.0;     // -zeta_prime
    double err_estimate = 0.0;
};

ZetaTerms zeta_prime_zero_box(const BoxSpec& box, const QuadratureConfig& cfg);

// Closed-form counterterm integral for the massive torus (see header note).
double gamma_term_massive(int d, double mass, double volume);

struct MassiveZetaTerms {
    double integral = 0.0;     // int_0^inf (Theta - counterterm) dt/t
    double gamma_term = 0.0;
    double zeta_prime = 0.0;
    double logdet_zeta = 0.0;  // -zeta_prime
    double err_estimate = 0.0;
};

// Requires box.mass > 0 (the massless torus has a zero mode).
MassiveZetaTerms zeta_prime_zero_massive_torus(const BoxSpec& box,
                                               const QuadratureConfig& cfg);

// Truncated direct spectral sums zeta(s) = sum lambda^{-s}, for integer
// s >= 2 where the sums converge absolutely (d <= 3).  The torus version
// excludes the zero mode when the box is massless.  Truncation is chosen so
// the remainder is below ~1e-10.
double zeta_value_hypercube(const BoxSpec& box, int s);
double zeta_value_torus(const BoxSpec& box, int s);

}  // namespace lapzeta
