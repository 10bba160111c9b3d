// coeffs.hpp -- asymptotic-expansion coefficients of lattice log-determinants.
//
// The d-dimensional Dirichlet lattice log-determinant expands over face
// volumes V^{d,N}_i with i-dependent constants given by semi-infinite
// Bessel-kernel integrals (B(t) = e^{-2t} I_0(2t) throughout):
//
//     L_i^d = -int_0^inf [ (-1-e^{-4t})^{d-i} B(t)^i - (-2)^{d-i} e^{-t} ] dt/t
//
// Check values (20+ digit oracles frozen from an independent
// arbitrary-precision prototype; closed forms where known):
//
//     L_1^1 = 0                        (cycle determinant is exactly n^2)
//     L_2^2 = 4G/pi                    =  1.16624361612327512055
//     L_1^2 = -2 log(1+sqrt 2)         = -1.76274717403908605048
//     L_1^3 =  5.81792601763934978874   L_2^3 = -3.21193988433729000969
//     L_3^3 =  1.67338930297019673228
//     L_1^4 = -14.7994523246504246321   L_2^4 =  7.72819602340269180738
//     L_3^4 = -3.94334314248662068785   L_4^4 =  1.99970764451731255969
//
// The s-dependent family (used only for the large-s consistency law
// L_i^d(s) -> (-2)^{d-i} log(s^2)) carries an extra e^{-s^2 t} on the
// Bessel part:
//
//     L_i^d(s) = -int_0^inf [ (-1-e^{-4t})^{d-i} e^{-s^2 t} B(t)^i
//                             - (-2)^{d-i} e^{-t} ] dt/t
//
// Massive volume coefficient (periodic lattices with mass shift mt^2):
//
//     L_mt = -int_0^inf [ e^{-mt^2 t} B(t)^d - e^{-t} ] dt/t
//
//     d = 1 closed form: L_mt = log( (2+mt^2)/2 + sqrt( ((2+mt^2)/2)^2 - 1 ) )
//     e.g. L_mt(1, 1)    = 0.962423650119206894996   ( = log((3+sqrt5)/2) )
//          L_mt(2, 1)    = 1.50798260227951338825
//          L_mt(2, 0.5)  = 1.2813429819870279391
//          L_mt(3, 1)    = 1.87087908028512877748
//
// Small-mass Taylor structure: L_mt is even in mt; through order d-1,
//
//     L_mt = L_0 + sum_{j>=1, 2j<=d-1} c_{2j} mt^{2j} + o(mt^{d-1}),
//     c_{2j} = -((-1)^j / j!) int_0^inf t^{j-1} B(t)^d dt
//     (odd coefficients vanish identically),
//     e.g. c_2(d=3) = 0.252731009858663002794,
//          c_2(d=4) = 0.154933390231060214071.
//
// Corner-type constants (exact finite sums):
//
//     corner_constant(d)        = (-1)^d 2^{-d} sum_{i=1..d} log(4i) C(d,i)
//         d=1: -log 2     d=2: (7/4) log 2     d=3: -1.61026429477339749...
//     free_boundary_constant(d) =        2^{-d} sum_{j=1..d} (-1)^j log(4j) C(d,j)
//         d=1: -log 2     d=2: -(1/4) log 2    d=3: (1/8) log(2/3)
//
// Numerical strategy shared by all the integrals: integrate in tau = log t;
// below t = 0.05 evaluate the integrand through telescoped expm1/binomial
// brackets so the O(t) behavior is produced without subtracting near-equal
// quantities; above t = T = 48 replace the numerically dead tail by the
// analytic power tail of B(t)^i (10 asymptotic terms; residual ~1e-15).
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lapzeta/quadrature.hpp"

namespace lapzeta {

struct CoeffTable {
    int d = 0;
    // i -> (value, error_estimate)
    std::map<int, std::pair<double, double>> entries;

    // {"d": d, "entries": {"1": {"value": v, "err": e}, ...}} with
    // shortest-round-trip floats.
    std::string to_json() const;
    static CoeffTable from_json(const std::string& text);

    // FNV-1a hash over the 17-significant-digit renderings of the values,
    // in ascending i; stamps expansion reports with the table they used.
    std::string fingerprint() const;
};

double L_coeff(int d, int i, const QuadratureConfig& cfg,
               double* err_out = nullptr);

// int_T^inf t^{j_shift - 1} B(t)^i dt from the large-t asymptotics of B^i
// (kTailTerms terms); shared by every integral that truncates at T and adds
// the analytic remainder.  Requires i/2 + l > j_shift for retained l >= 0.
// last_term_out (optional) reports the magnitude of the last retained term
// as a truncation-error proxy.
double bessel_power_tail_integral(int i, double T, int j_shift,
                                  double* last_term_out = nullptr);
double L_coeff_s(int d, int i, double s, const QuadratureConfig& cfg);
CoeffTable coeff_table(int d, const QuadratureConfig& cfg);

double corner_constant(int d);
double free_boundary_constant(int d);

double L_massive(int d, double mtilde, const QuadratureConfig& cfg,
                 double* err_out = nullptr);

// d = 1 closed form above (reference for tests).
double L_massive_closed_form_1d(double mtilde);

// Taylor terms k = 1..order of L_mt around mt = 0: odd entries are exact 0,
// even entries are c_k as above.  Throws OrderTooHigh if order >= d.
std::vector<double> L_massive_taylor(int d, int order,
                                     const QuadratureConfig& cfg);

}  // namespace lapzeta
