#include "lapzeta/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include <json.hpp>

#include "lapzeta/errors.hpp"
#include "lapzeta/special.hpp"

namespace lapzeta {
namespace {

// Evaluation of the shared integrands switches representation here: below
// kSmallT everything is expressed through expm1-style differences, above it
// the direct formulas are already cancellation-free.
constexpr double kSmallT = 0.05;
constexpr double kTinyT = 1e-18;   // lower cutoff; integrand is O(t) there
constexpr double kTailT = 48.0;    // start of the analytic Bessel power tail
constexpr int kTailTerms = 10;

double bessel_b(double t) { return bessel_i0_scaled(2.0 * t); }

// B(t) - 1 to full relative accuracy for t <= kSmallT:
//   B - 1 = expm1(-x) + e^{-x} (I_0(x) - 1),   x = 2t,
// where I_0(x) - 1 is summed from its leading x^2/4 term so neither addend
// loses digits (they have different orders in x, so no cancellation).
double bessel_b_minus_1(double t) {
    const double x = 2.0 * t;
    const double q = 0.25 * x * x;
    double term = q;
    double i0m1 = q;
    for (int k = 2; k <= 30; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        i0m1 += term;
        if (term < 1e-20 * (1.0 + i0m1)) break;
    }
    return std::expm1(-x) + std::exp(-x) * i0m1;
}

// (1+b)^n - 1 summed from the linear term: exact for |b| << 1.
double pow1p_minus_1(double b, int n) {
    double acc = 0.0;
    double bp = 1.0;
    for (int l = 1; l <= n; ++l) {
        bp *= b;
        acc += binomial(n, l) * bp;
    }
    return acc;
}

// (2+w)^k - 2^k summed from the linear term.
double poly_shift2(double w, int k) {
    double acc = 0.0;
    double wp = 1.0;
    for (int j = 1; j <= k; ++j) {
        wp *= w;
        acc += binomial(k, j) * std::ldexp(1.0, k - j) * wp;
    }
    return acc;
}

void require_di(int d, int i) {
    if (d < 1 || d > 16 || i < 1 || i > d)
        throw Error("coefficient indices must satisfy 1 <= i <= d (and d <= 16)");
}

}  // namespace

// B(t)^i ~ (4 pi t)^{-i/2} sum_l c_l (2t)^{-l} integrated term by term.
double bessel_power_tail_integral(int i, double T, int j_shift,
                                  double* last_term_out) {
    std::vector<double> c(static_cast<std::size_t>(kTailTerms), 0.0);
    bessel_power_tail_coeffs(i, kTailTerms, c.data());
    const double pref = std::pow(4.0 * kPiConst, -0.5 * i);
    double acc = 0.0;
    double last = 0.0;
    for (int l = 0; l < kTailTerms; ++l) {
        const double expo = j_shift - 0.5 * i - l;
        const double denom = 0.5 * i + l - j_shift;
        last = pref * c[static_cast<std::size_t>(l)] * std::ldexp(1.0, -l) *
               std::pow(T, expo) / denom;
        acc += last;
    }
    if (last_term_out) *last_term_out = std::abs(last);
    return acc;
}

double L_coeff(int d, int i, const QuadratureConfig& cfg, double* err_out) {
    require_di(d, i);
    const int k = d - i;
    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    const double two_k = std::ldexp(1.0, k);

    auto small_form = [&](double t) {
        const double w = std::expm1(-4.0 * t);
        const double b = bessel_b_minus_1(t);
        const double p = poly_shift2(w, k);
        const double q = pow1p_minus_1(b, i);
        const double A = p + two_k * q + p * q;
        return sign_k * (A - two_k * std::expm1(-t));
    };
    auto large_form = [&](double t) {
        const double u4 = std::exp(-4.0 * t);
        const double B = bessel_b(t);
        return sign_k *
               (std::pow(1.0 + u4, k) * std::pow(B, i) - two_k * std::exp(-t));
    };

    double e1 = 0.0, e2 = 0.0, tail_err = 0.0;
    const double I1 = integrate_mellin_or_throw(small_form, kTinyT, kSmallT, cfg, &e1);
    const double I2 = integrate_mellin_or_throw(large_form, kSmallT, kTailT, cfg, &e2);
    const double tail = bessel_power_tail_integral(i, kTailT, 0, &tail_err);
    if (err_out) *err_out = e1 + e2 + tail_err;
    return -(I1 + I2 + sign_k * tail);
}

double L_coeff_s(int d, int i, double s, const QuadratureConfig& cfg) {
    require_di(d, i);
    if (!(s >= 0.0)) throw Error("L_coeff_s requires s >= 0");
    if (s < 1e-8) return L_coeff(d, i, cfg);
    const int k = d - i;
    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    const double two_k = std::ldexp(1.0, k);
    const double s2 = s * s;

    auto small_form = [&](double t) {
        const double w = std::expm1(-4.0 * t);
        const double b = bessel_b_minus_1(t);
        const double p = poly_shift2(w, k);
        const double q = pow1p_minus_1(b, i);
        const double A = p + two_k * q + p * q;
        const double Es = std::expm1(-s2 * t);
        return sign_k * (A + (two_k + A) * Es - two_k * std::expm1(-t));
    };
    auto large_form = [&](double t) {
        const double u4 = std::exp(-4.0 * t);
        const double B = bessel_b(t);
        return sign_k * (std::pow(1.0 + u4, k) * std::pow(B, i) *
                             std::exp(-s2 * t) -
                         two_k * std::exp(-t));
    };

    // The e^{-s^2 t} factor makes the Bessel part numerically dead well
    // before t = 48; by t = 48 the counterterm is ~1e-21 as well, so no
    // analytic tail is needed.
    const double I1 = integrate_mellin_or_throw(small_form, kTinyT, kSmallT, cfg);
    const double I2 = integrate_mellin_or_throw(large_form, kSmallT, kTailT, cfg);
    return -(I1 + I2);
}

CoeffTable coeff_table(int d, const QuadratureConfig& cfg) {
    CoeffTable table;
    table.d = d;
    for (int i = 1; i <= d; ++i) {
        double err = 0.0;
        const double v = L_coeff(d, i, cfg, &err);
        table.entries[i] = {v, err};
    }
    return table;
}

double corner_constant(int d) {
    if (d < 1 || d > 60) throw Error("corner_constant requires 1 <= d <= 60");
    double acc = 0.0;
    for (int i = 1; i <= d; ++i)
        acc += std::log(4.0 * i) * binomial(d, i);
    const double sign_d = (d % 2 == 0) ? 1.0 : -1.0;
    return sign_d * std::ldexp(acc, -d);
}

double free_boundary_constant(int d) {
    if (d < 1 || d > 60)
        throw Error("free_boundary_constant requires 1 <= d <= 60");
    double acc = 0.0;
    for (int j = 1; j <= d; ++j) {
        const double sign_j = (j % 2 == 0) ? 1.0 : -1.0;
        acc += sign_j * std::log(4.0 * j) * binomial(d, j);
    }
    return std::ldexp(acc, -d);
}

double L_massive(int d, double mtilde, const QuadratureConfig& cfg,
                 double* err_out) {
    if (d < 1 || d > 16) throw Error("L_massive requires 1 <= d <= 16");
    if (!(mtilde >= 0.0)) throw Error("L_massive requires mtilde >= 0");
    if (mtilde == 0.0) return L_coeff(d, d, cfg, err_out);
    const double m2 = mtilde * mtilde;

    auto small_form = [&](double t) {
        const double Am = std::expm1(-m2 * t);
        const double q = pow1p_minus_1(bessel_b_minus_1(t), d);
        return Am + q + Am * q - std::expm1(-t);
    };
    auto large_form = [&](double t) {
        return std::exp(-m2 * t) * std::pow(bessel_b(t), d) - std::exp(-t);
    };

    // Push the upper limit until e^{-m2 t} alone is ~1e-35; the B(t)^d factor
    // only shrinks the remainder further, so no analytic tail is required.
    const double T = std::max(kTailT, 80.0 / m2);
    double e1 = 0.0, e2 = 0.0;
    const double I1 = integrate_mellin_or_throw(small_form, kTinyT, kSmallT, cfg, &e1);
    const double I2 = integrate_mellin_or_throw(large_form, kSmallT, T, cfg, &e2);
    if (err_out) *err_out = e1 + e2;
    return -(I1 + I2);
}

double L_massive_closed_form_1d(double mtilde) {
    const double y = 1.0 + 0.5 * mtilde * mtilde;
    return std::log(y + std::sqrt(y * y - 1.0));
}

std::vector<double> L_massive_taylor(int d, int order,
                                     const QuadratureConfig& cfg) {
    if (d < 1 || d > 16) throw Error("L_massive_taylor requires 1 <= d <= 16");
    if (order < 1) throw Error("L_massive_taylor requires order >= 1");
    if (order >= d)
        throw OrderTooHigh(
            "Taylor order must stay below d: the mt^d term of the massive "
            "coefficient is non-analytic (fractional/log), so coefficients "
            "beyond order d-1 are not defined by this expansion");

    std::vector<double> out(static_cast<std::size_t>(order), 0.0);
    double factorial = 1.0;
    for (int j = 1; 2 * j <= order; ++j) {
        factorial *= j;
        // The quadrature integrates against dt/t, so the j-th moment
        // int t^{j-1} B^d dt needs the integrand t^j B^d.
        auto moment_form = [&](double t) {
            return std::pow(t, j) * std::pow(bessel_b(t), d);
        };
        const double numeric =
            integrate_mellin_or_throw(moment_form, kTinyT, kTailT, cfg);
        const double tail = bessel_power_tail_integral(d, kTailT, j, nullptr);
        const double sign_j = (j % 2 == 0) ? 1.0 : -1.0;
        out[static_cast<std::size_t>(2 * j - 1)] =
            -(sign_j / factorial) * (numeric + tail);
    }
    return out;
}

std::string CoeffTable::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = d;
    nlohmann::ordered_json ents = nlohmann::ordered_json::object();
    for (const auto& [i, ve] : entries) {
        nlohmann::ordered_json e;
        e["value"] = ve.first;
        e["err"] = ve.second;
        ents[std::to_string(i)] = e;
    }
    j["entries"] = ents;
    return j.dump(2);
}

CoeffTable CoeffTable::from_json(const std::string& text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    CoeffTable table;
    table.d = j.at("d").get<int>();
    for (const auto& [key, e] : j.at("entries").items()) {
        table.entries[std::stoi(key)] = {e.at("value").get<double>(),
                                         e.at("err").get<double>()};
    }
    return table;
}

std::string CoeffTable::fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64-bit offset basis
    auto mix = [&h](const char* s) {
        for (; *s; ++s) {
            h ^= static_cast<unsigned char>(*s);
            h *= 1099511628211ull;
        }
    };
    char buf[64];
    for (const auto& [i, ve] : entries) {
        std::snprintf(buf, sizeof buf, "%d=%.17g;", i, ve.first);
        mix(buf);
    }
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lapzeta
