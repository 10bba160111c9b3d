#include "lapzeta/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "lapzeta/errors.hpp"
#include "lapzeta/special.hpp"
#include "lapzeta/spectra.hpp"

namespace lapzeta {
namespace {

void require_box(const BoxSpec& box) {
    if (box.sides.empty()) throw Error("box must have at least one axis");
    for (double a : box.sides)
        if (!(a > 0.0)) throw Error("box sides must be positive");
}

void require_t(double t) {
    if (!(t > 0.0)) throw NonPositiveT("heat traces require t > 0");
}

// 1 + 2 sum_{q>=1} e^{-x q^2}, truncated when terms fall below 1e-30 of the
// running sum (then two more terms for safety).
double gauss_sum(double x) {
    double acc = 1.0;
    int safety = 0;
    for (int q = 1; q < 100000; ++q) {
        const double term = 2.0 * std::exp(-x * q * q);
        acc += term;
        if (term < 1e-30 * acc) {
            if (++safety >= 2) break;
        } else {
            safety = 0;
        }
    }
    return acc;
}

// 2 sum_{k>=1} e^{-y k^2}: the modular-image correction eta with
// theta = c (1 + eta); exact relative accuracy even when eta ~ e^{-50}.
double modular_eta(double y) {
    double acc = 0.0;
    double first = 0.0;
    for (int k = 1; k < 100000; ++k) {
        const double term = 2.0 * std::exp(-y * k * k);
        if (k == 1) first = term;
        acc += term;
        if (term < 1e-30 * (first + 1e-300)) break;
    }
    return acc;
}

bool axis_in_modular_regime(double a, double t) {
    const double w = 2.0 * kPiConst / a;
    return w * w * t < 1.0;
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

double BoxSpec::volume() const {
    double v = 1.0;
    for (double a : sides) v *= a;
    return v;
}

double theta_axis(double a, double t) {
    if (!(a > 0.0)) throw Error("theta_axis requires a > 0");
    require_t(t);
    if (!axis_in_modular_regime(a, t)) {
        const double w = 2.0 * kPiConst / a;
        return gauss_sum(w * w * t);
    }
    const double c = a / std::sqrt(4.0 * kPiConst * t);
    const double y = a * a / (4.0 * t);
    return c * (1.0 + modular_eta(y));
}

double theta_torus(const BoxSpec& box, double t) {
    require_box(box);
    require_t(t);
    double prod = 1.0;
    for (double a : box.sides) prod *= theta_axis(a, t);
    const double m = box.mass;
    return prod * std::exp(-m * m * t);
}

namespace {

// theta_axis(a, t) - 1 at full relative precision.  The direct-regime sum is
// accumulated without the leading 1 (at large t the whole value is the q=1
// term ~ e^{-(2pi/a)^2 t}, which "1 + term - 1" would round away entirely),
// and the modular branch regroups c(1+eta) - 1 = (c-1) + c*eta.
double theta_axis_minus_1(double a, double t) {
    if (!axis_in_modular_regime(a, t)) {
        const double w = 2.0 * kPiConst / a;
        const double x = w * w * t;
        double acc = 0.0;
        int safety = 0;
        for (int q = 1; q < 100000; ++q) {
            const double term = 2.0 * std::exp(-x * q * q);
            acc += term;
            if (term < 1e-30 * (acc + 1.0)) {
                if (++safety >= 2) break;
            } else {
                safety = 0;
            }
        }
        return acc;
    }
    const double c = a / std::sqrt(4.0 * kPiConst * t);
    const double y = a * a / (4.0 * t);
    return (c - 1.0) + c * modular_eta(y);
}

}  // namespace

double theta_hypercube(const BoxSpec& box, double t) {
    require_box(box);
    require_t(t);
    if (box.mass != 0.0)
        throw MassNotSupported("Dirichlet box traces are massless here");
    double prod = 1.0;
    for (double a : box.sides) prod *= 0.5 * theta_axis_minus_1(2.0 * a, t);
    return prod;
}

double theta_hypercube_subset_sum(const BoxSpec& box, double t) {
    require_box(box);
    require_t(t);
    if (box.mass != 0.0)
        throw MassNotSupported("Dirichlet box traces are massless here");
    const int d = box.dimension();
    if (d > 16) throw TooLarge("subset-sum trace limited to d <= 16");
    double acc = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        double prod = 1.0;
        int size = 0;
        for (int i = 0; i < d; ++i) {
            if (mask & (1u << i)) {
                prod *= theta_axis(2.0 * box.sides[static_cast<std::size_t>(i)], t);
                ++size;
            }
        }
        const double sign = ((d - size) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * prod;
    }
    return std::ldexp(acc, -d);
}

double counterterm_f(const BoxSpec& box, double t) {
    require_box(box);
    require_t(t);
    const int d = box.dimension();
    const VolumeVector V = volume_vector(box.sides);
    double acc = 0.0;
    for (int i = 0; i <= d; ++i) {
        const double sign = ((d - i) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * V.v[static_cast<std::size_t>(i)] *
               std::pow(4.0 * kPiConst * t, -0.5 * i);
    }
    return acc;
}

double theta_hypercube_minus_f(const BoxSpec& box, double t) {
    require_box(box);
    require_t(t);
    if (box.mass != 0.0)
        throw MassNotSupported("Dirichlet box traces are massless here");
    const int d = box.dimension();

    bool all_modular = true;
    for (double a : box.sides)
        if (!axis_in_modular_regime(2.0 * a, t)) all_modular = false;
    if (!all_modular) return theta_hypercube(box, t) - counterterm_f(box, t);

    // Per axis (doubled side 2a): (theta(2a) - 1)/2 = A + delta with
    // A = a/sqrt(4 pi t) - 1/2 and delta = c * eta exponentially small, so
    //   Theta - f = prod (A_i + delta_i) - prod A_i
    //             = sum_j delta_j prod_{l<j} (A_l + delta_l) prod_{l>j} A_l,
    // every summand explicitly carrying one exponentially small factor.
    std::vector<double> A(static_cast<std::size_t>(d));
    std::vector<double> delta(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double a = box.sides[static_cast<std::size_t>(i)];
        const double c = a / std::sqrt(4.0 * kPiConst * t);
        A[static_cast<std::size_t>(i)] = c - 0.5;
        delta[static_cast<std::size_t>(i)] = c * modular_eta(a * a / t);
    }
    double acc = 0.0;
    for (int j = 0; j < d; ++j) {
        double term = delta[static_cast<std::size_t>(j)];
        for (int l = 0; l < j; ++l)
            term *= A[static_cast<std::size_t>(l)] +
                    delta[static_cast<std::size_t>(l)];
        for (int l = j + 1; l < d; ++l)
            term *= A[static_cast<std::size_t>(l)];
        acc += term;
    }
    return acc;
}

ZetaTerms zeta_prime_zero_box(const BoxSpec& box, const QuadratureConfig& cfg) {
    require_box(box);
    if (box.mass != 0.0)
        throw MassNotSupported("zeta_prime_zero_box is massless");
    const int d = box.dimension();
    const VolumeVector V = volume_vector(box.sides);

    double lambda_min = 0.0;
    double a_min = box.sides[0];
    for (double a : box.sides) {
        const double w = kPiConst / a;
        lambda_min += w * w;
        a_min = std::min(a_min, a);
    }
    const double t0 = a_min * a_min / 50.0;
    const double T = std::max(4.0, 50.0 / lambda_min);

    ZetaTerms z;
    double e1 = 0.0, e2 = 0.0;
    z.integral_small = integrate_mellin_or_throw(
        [&](double t) { return theta_hypercube_minus_f(box, t); }, t0, 1.0,
        cfg, &e1);
    z.integral_large = integrate_mellin_or_throw(
        [&](double t) { return theta_hypercube(box, t); }, 1.0, T, cfg, &e2);

    const double sign_d = (d % 2 == 0) ? 1.0 : -1.0;
    z.gamma_term = sign_d * std::ldexp(kEulerGamma, -d);
    double vol = 0.0;
    for (int i = 1; i <= d; ++i) {
        const double sign = ((d - i) % 2 == 0) ? 1.0 : -1.0;
        vol += sign * (2.0 / i) * V.v[static_cast<std::size_t>(i)] *
               std::pow(4.0 * kPiConst, -0.5 * i);
    }
    z.volume_term = -vol;
    z.zeta_prime =
        z.integral_small + z.integral_large + z.gamma_term + z.volume_term;
    z.logdet_zeta = -z.zeta_prime;
    // e^{-lambda_min T} bounds both the dropped tail of the large-t integral
    // and the dropped [0, t0] head (which is smaller still).
    z.err_estimate = e1 + e2 + std::exp(-lambda_min * T);
    return z;
}

double gamma_term_massive(int d, double mass, double volume) {
    if (d < 1 || d > 16) throw Error("gamma_term_massive requires 1 <= d <= 16");
    if (!(mass > 0.0)) throw ZeroMass("gamma term needs a positive mass");
    const double m2 = mass * mass;
    if (d % 2 == 1) {
        return volume * gamma_negative_half(d) *
               std::pow(m2 / (4.0 * kPiConst), 0.5 * d);
    }
    const int p = d / 2;
    double fact = 1.0;
    for (int j = 2; j <= p; ++j) fact *= j;
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    return sign * volume * std::pow(mass, d) /
           (std::pow(4.0 * kPiConst, p) * fact) * (harmonic(p) - std::log(m2));
}

MassiveZetaTerms zeta_prime_zero_massive_torus(const BoxSpec& box,
                                               const QuadratureConfig& cfg) {
    require_box(box);
    if (!(box.mass > 0.0))
        throw ZeroMass("massive torus requires mass > 0 (else a zero mode)");
    const int d = box.dimension();
    const double m2 = box.mass * box.mass;
    const double V = box.volume();

    double a_min = box.sides[0];
    for (double a : box.sides) a_min = std::min(a_min, a);
    const double modular_bound =
        a_min * a_min / (4.0 * kPiConst * kPiConst);

    auto integrand = [&](double t) {
        if (t < modular_bound) {
            // Every axis in modular regime: Theta - counterterm factors as
            // e^{-m^2 t} (prod c_i) (prod (1 + eta_i) - 1); accumulate
            // prod(1+eta) - 1 by p_k = p_{k-1} + eta_k (1 + p_{k-1}).
            double cprod = 1.0;
            double p = 0.0;
            for (double a : box.sides) {
                cprod *= a / std::sqrt(4.0 * kPiConst * t);
                const double eta = modular_eta(a * a / (4.0 * t));
                p += eta * (1.0 + p);
            }
            return std::exp(-m2 * t) * cprod * p;
        }
        return theta_torus(box, t) -
               V * std::pow(4.0 * kPiConst * t, -0.5 * d) * std::exp(-m2 * t);
    };

    const double t0 = a_min * a_min / 200.0;
    const double T = std::max(4.0, 50.0 / m2);

    MassiveZetaTerms z;
    double err = 0.0;
    z.integral = integrate_mellin_or_throw(integrand, t0, T, cfg, &err);
    z.gamma_term = gamma_term_massive(d, box.mass, V);
    z.zeta_prime = z.integral + z.gamma_term;
    z.logdet_zeta = -z.zeta_prime;
    z.err_estimate = err + std::exp(-m2 * T) + std::exp(-40.0);
    return z;
}

double zeta_value_hypercube(const BoxSpec& box, int s) {
    require_box(box);
    if (box.mass != 0.0)
        throw MassNotSupported("direct box zeta sums are massless");
    const int d = box.dimension();
    if (d > 3) throw TooLarge("direct box zeta sums limited to d <= 3");
    if (s < 2) throw Error("direct zeta sums require integer s >= 2");
    if (d == 3 && s < 3)
        throw TooLarge("d = 3 direct sums require s >= 3 for convergence");
    const int Q = (d <= 2) ? ((s == 2) ? 2400 : 600) : 250;

    std::vector<double> w2(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double w = kPiConst / box.sides[static_cast<std::size_t>(i)];
        w2[static_cast<std::size_t>(i)] = w * w;
    }
    double acc = 0.0;
    std::vector<int> q(static_cast<std::size_t>(d), 1);
    while (true) {
        double lambda = 0.0;
        for (int i = 0; i < d; ++i)
            lambda += w2[static_cast<std::size_t>(i)] *
                      q[static_cast<std::size_t>(i)] *
                      q[static_cast<std::size_t>(i)];
        acc += 1.0 / ipow(lambda, s);
        int axis = d - 1;
        while (axis >= 0 && q[static_cast<std::size_t>(axis)] == Q) {
            q[static_cast<std::size_t>(axis)] = 1;
            --axis;
        }
        if (axis < 0) break;
        ++q[static_cast<std::size_t>(axis)];
    }
    return acc;
}

double zeta_value_torus(const BoxSpec& box, int s) {
    if (box.sides.empty()) return 0.0;
    for (double a : box.sides)
        if (!(a > 0.0)) throw Error("box sides must be positive");
    const int d = box.dimension();
    if (d > 3) throw TooLarge("direct torus zeta sums limited to d <= 3");
    if (s < 2) throw Error("direct zeta sums require integer s >= 2");
    if (d == 3 && s < 3)
        throw TooLarge("d = 3 direct sums require s >= 3 for convergence");
    const int Q = (d <= 2) ? ((s == 2) ? 2400 : 600) : 150;
    const double m2 = box.mass * box.mass;

    std::vector<double> w2(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const double w =
            2.0 * kPiConst / box.sides[static_cast<std::size_t>(i)];
        w2[static_cast<std::size_t>(i)] = w * w;
    }
    double acc = 0.0;
    std::vector<int> q(static_cast<std::size_t>(d), -Q);
    while (true) {
        double lambda = m2;
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            const int qi = q[static_cast<std::size_t>(i)];
            if (qi != 0) zero = false;
            lambda += w2[static_cast<std::size_t>(i)] * qi * qi;
        }
        if (!(zero && m2 == 0.0)) acc += 1.0 / ipow(lambda, s);
        int axis = d - 1;
        while (axis >= 0 && q[static_cast<std::size_t>(axis)] == Q) {
            q[static_cast<std::size_t>(axis)] = -Q;
            --axis;
        }
        if (axis < 0) break;
        ++q[static_cast<std::size_t>(axis)];
    }
    return acc;
}

}  // namespace lapzeta
