// verify.hpp -- the verification engine: discrete theta identities, the
// remainder split of the lattice log-determinant, asymptotic-expansion
// residual reports (Dirichlet boxes and massive tori), partie-finie
// regularized integrals, regularized-limit fits, and two exact determinant
// identities (2-d torus/box ratio, Chebyshev-type cosine products).
//
// The central expansion being verified: for a Dirichlet lattice with sizes
// n_i = round(a_i u) (round-half-to-even),
//
//   logdet = sum_{i=1..d} V_i L_i  +  2^{1-d} (-1)^{d+1} log u
//            + logdet_zeta(K_d(a)) + corner_constant(d) + o(1),
//
// and for the massive discrete torus with mt = m/u (exact division),
//
//   logdet = V_d L_massive(d, mt) + logdet_zeta(torus) + gamma_term + o(1).
//
// Every report row stores the exact value, each predicted term, and the
// residual, with the bookkeeping identity
//   residual = exact_logdet - predicted_sum(row)
// holding bit-exactly under recomputation (predicted_sum uses one fixed
// association order).
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lapzeta/coeffs.hpp"
#include "lapzeta/continuum.hpp"
#include "lapzeta/quadrature.hpp"
#include "lapzeta/spectra.hpp"

namespace lapzeta {

// ---------------------------------------------------------------------------
// Discrete theta inclusion-exclusion (exact spectra on both sides):
//   Theta_Dirichlet(n_1..n_d; t)
//     = 2^{-d} sum_{S subset axes} (-1-e^{-4t})^{d-|S|}
//                                  Theta_Periodic(2n_i : i in S; t),
// the empty subset contributing Theta = 1.  Returns (lhs, rhs); callers
// assert |lhs-rhs| <= 1e-12 |lhs|.  TooLarge when d > 4 or prod n_i > 1e6.
std::pair<double, double> dirichlet_theta_relation_check(
    const std::vector<std::int64_t>& sizes, double t);

// g(t) = sum_{p=1..d} V_p (-1-e^{-4t})^{d-p} B(t)^p: the volume-weighted
// Bessel proxy whose small-t law |Theta(t) - g(t) - (-1)^d e^{-t}| <= C t
// makes the remainder integral below converge at t = 0.
double expansion_g(const VolumeVector& V, int d, double t);

// Remainder of the bulk expansion at a fixed lattice, computed two ways:
//   algebraic = logdet_exact - sum_i V_i L_i          (table values)
//   integral  = -int_0^inf (Theta - g - (-1)^d e^{-t}) dt/t
// (numeric to T = max(40, 45/lambda_min) plus the analytic Bessel power
// tail of g).  Both agree to ~10x quadrature tolerance.
struct RemainderSplit {
    double algebraic = 0.0;
    double integral = 0.0;
    double err_estimate = 0.0;  // quadrature + tail-truncation bound
};
RemainderSplit remainder_at_zero(const LatticeSpec& spec,
                                 const CoeffTable& table,
                                 const QuadratureConfig& cfg);

// ---------------------------------------------------------------------------
// Expansion residual reports.

struct ExpansionRow {
    double u = 0.0;
    std::vector<std::int64_t> sizes;
    double mtilde = 0.0;  // m/u for massive tori, 0 for Dirichlet boxes
    double exact_logdet = 0.0;
    double term_bulk = 0.0;    // sum_i V_i L_i   (V_d L_mt for tori)
    double term_logu = 0.0;    // 2^{1-d} (-1)^{d+1} log u   (0 for tori)
    double term_zeta = 0.0;    // continuum logdet_zeta
    double term_corner = 0.0;  // corner constant (boxes) / gamma term (tori)
    double residual = 0.0;     // exact_logdet - predicted_sum
};

// Fixed association order; reports must reproduce `residual` bit-exactly.
double predicted_sum(const ExpansionRow& row);

struct ExpansionReport {
    std::vector<double> box_sides;
    double mass = 0.0;
    int d = 0;
    std::string table_fingerprint;  // coefficient table used for term_bulk
    double zeta_logdet = 0.0;
    double corner_or_gamma = 0.0;
    std::vector<ExpansionRow> rows;

    std::string to_json() const;
    static ExpansionReport from_json(const std::string& text);
    // header u,logdet,predicted,residual; 17 significant digits
    std::string to_csv() const;
};

// n_i(u) = round-half-to-even(a_i u); deterministic and documented since the
// integer sizes enter the prediction through V_i.
std::vector<std::int64_t> sizes_for_scale(const std::vector<double>& sides,
                                          double u);

// Dirichlet box report over a u-grid (massless box).
ExpansionReport hypercube_expansion_report(const BoxSpec& box,
                                           const std::vector<double>& u_grid,
                                           const CoeffTable& table,
                                           const QuadratureConfig& cfg);

// Massive-torus report: mt = box.mass / u exactly; requires box.mass > 0.
ExpansionReport massive_torus_expansion_report(
    const BoxSpec& box, const std::vector<double>& u_grid,
    const QuadratureConfig& cfg);

// ---------------------------------------------------------------------------
// Partie finie.  The regularized integral
//     -2 pf int_0^inf z^{2d-1} / (z^2 + lambda)^d dz
// evaluated exactly from the closed-form antiderivative (substituting
// x = z^2, x^{d-1}/(x+lambda)^d has antiderivative
// log(x+lambda) - sum_{j=1}^{d-1} C(d-1,j) (-lambda)^j (x+lambda)^{-j} / j),
// discarding the divergent log R term at the upper end.  The result is
//     log(lambda) + H_{d-1}
// (H the harmonic numbers, H_0 = 0): it matches the advertised value
// log(lambda) only for d = 1.  The function returns the honest finite part;
// callers adjudicate.
double partie_finie_integral(int d, double lambda);

// Closed-form image sums whose z -> infinity regularization produces the
// boundary constants.  Free:
//     2^{-d} sum_{k=0..d} C(d,k) (z^2 + 4 k n^2)^{-d}
// Dirichlet (combined form, alternating):
//     2^{-d} sum_{j=0..d} (-1)^j C(d,j) (z^2 + 4 n^2 j)^{-d}
// Requires z != 0 (the k = 0 / j = 0 term).
double h_minus_2d(int d, double z, std::int64_t n, BoundaryCondition bc);

// Term-by-term partie-finie evaluation of the free-boundary constant:
//     sum_{j=1..d} 2^{-d} (-1)^j C(d,j) * partie_finie_integral(d, 4j)
// (the j = 0 term, a partie finie of log 0, is excluded).  Equals
// free_boundary_constant(d) plus the honest extra -2^{-d} H_{d-1}.
double free_constant_via_partie_finie(int d);

// Exact binomial resummation linking the per-dimension free-boundary
// constants to the corner constant:
//     corner_constant(d) = sum_{j=1..d} (-1)^{d-j} C(d,j)
//                          free_boundary_constant(j).
// Returns (lhs, rhs); equal to rounding for d <= 6.
std::pair<double, double> corner_resummation(int d);

// ---------------------------------------------------------------------------
// Regularized-limit fit: least squares over the basis {n^alpha log^k n}.

struct BasisTerm {
    double alpha = 0.0;
    int k = 0;
};

struct FitModel {
    std::vector<BasisTerm> basis;
    std::vector<double> coefficients;
    double a00 = 0.0;  // coefficient of (alpha=0, k=0): the regularized limit
    double condition = 0.0;
    double residual_norm = 0.0;

    std::string to_json() const;
};

// Unweighted least squares via one-sided Jacobi SVD on the column-scaled
// design matrix.  Requires >= 2x as many samples as basis terms
// (InsufficientSamples) and condition <= 1e12 (IllConditioned); the basis
// must contain the (0,0) term.
FitModel reg_limit_fit(const std::vector<std::pair<double, double>>& samples,
                       const std::vector<BasisTerm>& basis);

// Default basis for logdet(n^2 Delta) on the d-cube:
// {n^d, ..., n} u {n^k log n : k = 0..d} u {1}.
std::vector<BasisTerm> default_cube_basis(int d);

// ---------------------------------------------------------------------------
// Exact 2-d torus/box determinant ratio.  In logs (raw ratios overflow):
//   lhs  = logdet(periodic 2n1 x 2n2, +m^2) - 4 logdet(Dirichlet n1 x n2, +m^2)
//   rhs_uncorrected = log[(8+m^2)(4+m^2)^2
//               prod_k (6+m^2-2cos(k pi/n1))^2 (6+m^2-2cos(k pi/n2))^2
//               prod_k (2+m^2-2cos(k pi/n1))^2 (2+m^2-2cos(k pi/n2))^2]
//   rhs_corrected = log(m^2) + rhs_uncorrected     (zero-momentum factor)
// The corrected identity is exact; the uncorrected one fails by exactly m^2.
struct RatioCheck {
    double lhs_log = 0.0;
    double rhs_uncorrected_log = 0.0;
    double rhs_corrected_log = 0.0;
};
RatioCheck torus_ratio_2d(std::int64_t n1, std::int64_t n2, double m_squared);

// Cosine products against the closed form (x + s)^n + (x - s)^n - 2,
// s = sqrt(x^2 - 1):
//   product_full_cycle = prod_{k=0}^{n-1} (2x - 2cos(2 pi k / n))
//   product_half_index = prod_{k=1}^{n-1} (2x - 2cos(k pi / n))
// The closed form equals the full-cycle product; the half-index product
// instead equals ((x+s)^n - (x-s)^n) / (2s), also returned.
struct ChebyshevProducts {
    double product_full_cycle = 0.0;
    double rhs_closed_form = 0.0;
    double product_half_index = 0.0;
    double half_index_u_form = 0.0;
};
ChebyshevProducts chebyshev_product(std::int64_t n, double x);

}  // namespace lapzeta
