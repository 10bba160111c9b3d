// Adaptive Gauss-Kronrod quadrature: closed-form integrals, Mellin wrapper,
// failure modes, and determinism of the panel re-summation.
#include <doctest.h>

#include <cmath>

#include "lapzeta/errors.hpp"
#include "lapzeta/quadrature.hpp"
#include "lapzeta/special.hpp"

using namespace lapzeta;

TEST_CASE("polynomial and classic integrals to near machine precision") {
    QuadratureConfig cfg;
    const QuadResult a =
        integrate([](double x) { return x * x; }, 0.0, 1.0, cfg);
    CHECK(a.converged);
    CHECK(std::abs(a.value - 1.0 / 3.0) <= 1e-15);

    const QuadResult b =
        integrate([](double x) { return std::sin(x); }, 0.0, kPiConst, cfg);
    CHECK(b.converged);
    CHECK(std::abs(b.value - 2.0) <= 1e-14);

    const double c = integrate_or_throw(
        [](double x) { return std::exp(x); }, 0.0, 1.0, cfg);
    CHECK(std::abs(c - (std::exp(1.0) - 1.0)) <= 1e-14);
}

TEST_CASE("oscillatory integrand needs subdivision and still converges") {
    QuadratureConfig cfg;
    const QuadResult r = integrate(
        [](double x) { return std::cos(10.0 * x); }, 0.0, 10.0, cfg);
    CHECK(r.converged);
    CHECK(r.panels > 1);
    CHECK(std::abs(r.value - std::sin(100.0) / 10.0) <= 1e-12);
}

TEST_CASE("mellin wrapper: dt/t measure in the log variable") {
    QuadratureConfig cfg;
    // int_1^2 t dt/t = 1.
    const double a = integrate_mellin_or_throw(
        [](double t) { return t; }, 1.0, 2.0, cfg);
    CHECK(std::abs(a - 1.0) <= 1e-14);

    // int_{1e-8}^{40} e^{-t} dt/t = E_1(1e-8) - E_1(40); the upper tail is
    // ~e^{-40}/40 ~ 1e-19.  E_1(x) = -gamma - log x + x - x^2/4 + ... .
    const double x = 1e-8;
    const double e1 = -kEulerGamma - std::log(x) + x;
    const double b = integrate_mellin_or_throw(
        [](double t) { return std::exp(-t); }, x, 40.0, cfg);
    CHECK(std::abs(b - e1) <= 1e-12 * e1);
}

TEST_CASE("budget exhaustion reports non-convergence and throws on demand") {
    QuadratureConfig cfg;
    cfg.max_subdivisions = 2;
    cfg.abs_tol = cfg.rel_tol = 1e-15;
    const auto nasty = [](double x) { return std::cos(200.0 * x * x); };
    const QuadResult r = integrate(nasty, 0.0, 10.0, cfg);
    CHECK_FALSE(r.converged);
    CHECK_THROWS_AS((void)integrate_or_throw(nasty, 0.0, 10.0, cfg),
                    QuadratureFailure);
}

TEST_CASE("error estimate is honest on a smooth integrand") {
    QuadratureConfig cfg;
    const QuadResult r = integrate(
        [](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, cfg);
    CHECK(r.converged);
    const double truth = kPiConst / 4.0;
    CHECK(std::abs(r.value - truth) <= std::max(r.error * 10.0, 1e-15));
}

TEST_CASE("repeat evaluation is bit-identical") {
    QuadratureConfig cfg;
    const auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
    const QuadResult r1 = integrate(f, 0.0, 20.0, cfg);
    const QuadResult r2 = integrate(f, 0.0, 20.0, cfg);
    CHECK(r1.value == r2.value);
    CHECK(r1.error == r2.error);
    CHECK(r1.panels == r2.panels);
}
