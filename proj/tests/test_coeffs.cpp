// Expansion coefficients: frozen regression values, closed-form oracles,
// the shifted and massive variants, Taylor structure, corner/boundary
// constants, and the JSON table round trip.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lapzeta/coeffs.hpp"
#include "lapzeta/errors.hpp"
#include "lapzeta/quadrature.hpp"
#include "lapzeta/special.hpp"

using namespace lapzeta;

namespace {
QuadratureConfig tight() {
    QuadratureConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-12;
    return cfg;
}
}  // namespace

TEST_CASE("L(1,1) vanishes (no 1-d bulk term)") {
    const double v = L_coeff(1, 1, tight());
    CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("closed-form oracles in two dimensions") {
    // Bulk: 4G/pi with the Catalan constant computed internally.
    const double bulk = L_coeff(2, 2, tight());
    CHECK(std::abs(bulk - 4.0 * catalan_constant() / kPiConst) <= 1e-10);
    // Boundary: -2 log(1 + sqrt 2).
    const double bdry = L_coeff(2, 1, tight());
    CHECK(std::abs(bdry - (-2.0 * std::log(1.0 + std::sqrt(2.0)))) <= 1e-10);
}

TEST_CASE("frozen coefficient regression values") {
    struct Case {
        int d, i;
        double want;
    };
    const Case cases[] = {
        {2, 1, -1.76274717403908605048}, {2, 2, 1.16624361612327512055},
        {3, 1, 5.81792601763934978874},  {3, 2, -3.21193988433729000969},
        {3, 3, 1.67338930297019673228},  {4, 1, -14.7994523246504246321},
        {4, 2, 7.72819602340269180738},  {4, 3, -3.94334314248662068785},
        {4, 4, 1.99970764451731255969},
    };
    for (const Case& c : cases) {
        double err = 0.0;
        const double got = L_coeff(c.d, c.i, tight(), &err);
        CAPTURE(c.d);
        CAPTURE(c.i);
        CHECK(std::abs(got - c.want) <= 5e-12 * std::abs(c.want));
        CHECK(err <= 1e-9);
    }
}

TEST_CASE("domain guards on (d, i)") {
    CHECK_THROWS_AS((void)L_coeff(2, 0, tight()), Error);
    CHECK_THROWS_AS((void)L_coeff(2, 3, tight()), Error);
    CHECK_THROWS_AS((void)L_coeff(0, 1, tight()), Error);
}

TEST_CASE("coeff_table collects exactly i = 1..d") {
    const CoeffTable t = coeff_table(3, tight());
    CHECK(t.d == 3);
    REQUIRE(t.entries.size() == 3);
    for (int i = 1; i <= 3; ++i) {
        REQUIRE(t.entries.count(i) == 1);
        const double direct = L_coeff(3, i, tight());
        CHECK(t.entries.at(i).first == direct);
    }
}

TEST_CASE("shifted coefficients: s -> 0 delegates, large s is logarithmic") {
    const QuadratureConfig cfg = tight();
    CHECK(L_coeff_s(2, 1, 0.0, cfg) == L_coeff(2, 1, cfg));
    CHECK(std::abs(L_coeff_s(2, 2, 1e-9, cfg) - L_coeff(2, 2, cfg)) <=
          1e-12);

    // As s -> infinity, L_s(d,i) -> 2 (-2)^{d-i} log s + O(1/s^2).
    const double s = 30.0;
    for (int i : {1, 2}) {
        const double f0 = (i == 1) ? -2.0 : 1.0;  // (-2)^{2-i}
        const double want = 2.0 * f0 * std::log(s);
        const double got = L_coeff_s(2, i, s, cfg);
        CHECK(std::abs(got - want) <= 1e-3 * std::abs(want));
    }
}

TEST_CASE("corner and free-boundary constants (exact binomial sums)") {
    const double log2 = std::log(2.0);
    CHECK(std::abs(corner_constant(1) - (-log2)) <= 1e-16);
    CHECK(std::abs(corner_constant(2) - 1.75 * log2) <= 1e-15);
    CHECK(std::abs(corner_constant(2) - 1.2130075659799042915) <= 1e-15);
    CHECK(std::abs(corner_constant(3) - (-1.6102642947733974939)) <= 1e-14);

    CHECK(std::abs(free_boundary_constant(1) - (-log2)) <= 1e-16);
    CHECK(std::abs(free_boundary_constant(2) -
                   (-0.17328679513998632735)) <= 1e-15);
    CHECK(std::abs(free_boundary_constant(2) - (-0.25 * log2)) <= 1e-15);
    CHECK(std::abs(free_boundary_constant(3) -
                   (-0.050683138513520547747)) <= 1e-15);
}

TEST_CASE("massive coefficient: 1-d closed form") {
    const QuadratureConfig cfg = tight();
    for (double mt : {0.1, 0.5, 1.0, 2.0}) {
        const double got = L_massive(1, mt, cfg);
        const double want = L_massive_closed_form_1d(mt);
        CAPTURE(mt);
        CHECK(std::abs(got - want) <= 1e-10);
    }
    // Closed form itself: log(y + sqrt(y^2 - 1)), y = 1 + mt^2/2.
    const double y = 1.5;
    CHECK(std::abs(L_massive_closed_form_1d(1.0) -
                   std::log(y + std::sqrt(y * y - 1.0))) <= 1e-16);
    CHECK(std::abs(L_massive(1, 1.0, cfg) - 0.962423650119206894996) <=
          5e-12);
}

TEST_CASE("massive coefficient: frozen values and massless limit") {
    const QuadratureConfig cfg = tight();
    CHECK(std::abs(L_massive(2, 1.0, cfg) - 1.50798260227951338825) <=
          5e-12);
    CHECK(std::abs(L_massive(2, 0.5, cfg) - 1.2813429819870279391) <=
          5e-12);
    CHECK(std::abs(L_massive(3, 1.0, cfg) - 1.87087908028512877748) <=
          5e-12);
    // mt = 0 reduces to the massless bulk coefficient L(d,d).
    CHECK(L_massive(2, 0.0, cfg) == L_coeff(2, 2, cfg));
}

TEST_CASE("massive Taylor: odd orders vanish exactly, frozen even values") {
    const QuadratureConfig cfg = tight();
    const std::vector<double> t3 = L_massive_taylor(3, 2, cfg);
    REQUIRE(t3.size() == 2);
    CHECK(t3[0] == 0.0);  // coefficient of mt^1: exactly zero by structure
    CHECK(std::abs(t3[1] - 0.252731009858663002794) <= 5e-11);

    const std::vector<double> t4 = L_massive_taylor(4, 3, cfg);
    REQUIRE(t4.size() == 3);
    CHECK(t4[0] == 0.0);
    CHECK(std::abs(t4[1] - 0.154933390231060214071) <= 5e-11);
    CHECK(t4[2] == 0.0);
}

TEST_CASE("massive Taylor rejects orders at or beyond the dimension") {
    CHECK_THROWS_AS((void)L_massive_taylor(3, 3, tight()), OrderTooHigh);
    CHECK_THROWS_AS((void)L_massive_taylor(2, 5, tight()), OrderTooHigh);
}

TEST_CASE("massive Taylor predicts the small-mass behavior") {
    const QuadratureConfig cfg = tight();
    const double L0 = L_coeff(3, 3, cfg);
    const double c2 = L_massive_taylor(3, 2, cfg)[1];
    const double mt = 0.01;
    const double predicted = L0 + c2 * mt * mt;
    CHECK(std::abs(L_massive(3, mt, cfg) - predicted) <= 1e-6);
}

TEST_CASE("analytic tail consistency: split at a larger T") {
    // tail(i, 48) = int_{48}^{400} B^i dt/t + tail(i, 400), and the same
    // with the t^{j-1} moment weight (j = 1).
    QuadratureConfig cfg = tight();
    for (int i : {1, 3}) {
        const double whole = bessel_power_tail_integral(i, 48.0, 0);
        const double mid = integrate_mellin_or_throw(
            [i](double t) { return std::pow(bessel_i0_scaled(2.0 * t), i); },
            48.0, 400.0, cfg);
        const double rest = bessel_power_tail_integral(i, 400.0, 0);
        CHECK(std::abs(whole - (mid + rest)) <= 5e-12);
    }
    {
        const double whole = bessel_power_tail_integral(3, 48.0, 1);
        const double mid = integrate_mellin_or_throw(
            [](double t) {
                return t * std::pow(bessel_i0_scaled(2.0 * t), 3);
            },
            48.0, 400.0, cfg);
        const double rest = bessel_power_tail_integral(3, 400.0, 1);
        CHECK(std::abs(whole - (mid + rest)) <= 5e-12);
    }
}

TEST_CASE("coefficient table JSON round trip is bit-exact") {
    const CoeffTable t = coeff_table(3, tight());
    const std::string j = t.to_json();
    const CoeffTable back = CoeffTable::from_json(j);
    CHECK(back.d == t.d);
    REQUIRE(back.entries.size() == t.entries.size());
    for (const auto& [i, ve] : t.entries) {
        REQUIRE(back.entries.count(i) == 1);
        CHECK(back.entries.at(i).first == ve.first);
        CHECK(back.entries.at(i).second == ve.second);
    }
    CHECK(back.to_json() == j);
    CHECK(back.fingerprint() == t.fingerprint());
}

TEST_CASE("fingerprint is stable and value-sensitive") {
    CoeffTable t = coeff_table(2, tight());
    const std::string f1 = t.fingerprint();
    CHECK(f1.size() == 16);
    CHECK(t.fingerprint() == f1);
    t.entries[1].first += 1e-13;
    CHECK(t.fingerprint() != f1);
}
