#include "lapzeta/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "lapzeta/errors.hpp"
#include "lapzeta/kernels.hpp"
#include "lapzeta/special.hpp"

namespace lapzeta {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double sign_pm(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::vector<double> to_doubles(const std::vector<std::int64_t>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = static_cast<double>(v[i]);
    return out;
}

}  // namespace

std::pair<double, double> dirichlet_theta_relation_check(
    const std::vector<std::int64_t>& sizes, double t) {
    const int d = static_cast<int>(sizes.size());
    if (d < 1 || d > 4)
        throw TooLarge("theta relation check limited to 1 <= d <= 4");
    std::int64_t total = 1;
    for (std::int64_t n : sizes) {
        if (n < 1) throw Error("sizes must be positive");
        total *= n;
        if (total > 1000000)
            throw TooLarge("theta relation check limited to prod n_i <= 1e6");
    }

    LatticeSpec dir;
    dir.sizes = sizes;
    dir.bc = BoundaryCondition::Dirichlet;
    const double lhs = discrete_theta(dir, t);

    // The signed subset sum cancels down to the (small) Dirichlet trace, so
    // keep each term to ~1 ulp (integer powers by repeated multiplication)
    // and combine with a deterministic pairwise sum.
    const double base = -1.0 - std::exp(-4.0 * t);
    std::vector<double> base_pow(static_cast<std::size_t>(d) + 1, 1.0);
    for (int k = 1; k <= d; ++k)
        base_pow[static_cast<std::size_t>(k)] =
            base_pow[static_cast<std::size_t>(k - 1)] * base;
    std::vector<double> terms;
    terms.reserve(std::size_t{1} << d);
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        int p = 0;
        LatticeSpec torus;
        torus.bc = BoundaryCondition::Periodic;
        for (int i = 0; i < d; ++i) {
            if (mask & (1u << i)) {
                torus.sizes.push_back(2 * sizes[static_cast<std::size_t>(i)]);
                ++p;
            }
        }
        const double theta_p = (p == 0) ? 1.0 : discrete_theta(torus, t);
        terms.push_back(base_pow[static_cast<std::size_t>(d - p)] * theta_p);
    }
    const double rhs =
        std::ldexp(kernels::pairwise_sum(terms.data(), terms.size()), -d);
    return {lhs, rhs};
}

double expansion_g(const VolumeVector& V, int d, double t) {
    const double base = -1.0 - std::exp(-4.0 * t);
    const double B = bessel_i0_scaled(2.0 * t);
    double acc = 0.0;
    double Bp = 1.0;
    // p ascending; (d-p) descending powers of the (-1-e^{-4t}) factor.
    std::vector<double> base_pow(static_cast<std::size_t>(d) + 1, 1.0);
    for (int k = 1; k <= d; ++k)
        base_pow[static_cast<std::size_t>(k)] =
            base_pow[static_cast<std::size_t>(k - 1)] * base;
    for (int p = 1; p <= d; ++p) {
        Bp *= B;
        acc += V.v[static_cast<std::size_t>(p)] *
               base_pow[static_cast<std::size_t>(d - p)] * Bp;
    }
    return acc;
}

RemainderSplit remainder_at_zero(const LatticeSpec& spec,
                                 const CoeffTable& table,
                                 const QuadratureConfig& cfg) {
    if (spec.bc != BoundaryCondition::Dirichlet)
        throw Error("remainder_at_zero requires a Dirichlet lattice");
    if (spec.mass_squared != 0.0)
        throw MassNotSupported("remainder_at_zero is massless");
    if (spec.rescale)
        throw Error("remainder_at_zero expects an unrescaled lattice");
    const int d = static_cast<int>(spec.sizes.size());
    if (table.d != d) throw Error("coefficient table dimension mismatch");

    const VolumeVector V = volume_vector(to_doubles(spec.sizes));
    const double sign_d = sign_pm(d);

    RemainderSplit out;
    double bulk = 0.0;
    for (int i = 1; i <= d; ++i)
        bulk += V.v[static_cast<std::size_t>(i)] * table.entries.at(i).first;
    out.algebraic = logdet_exact(spec) - bulk;

    double lambda_min = 0.0;
    bool empty_axis = false;
    for (std::int64_t n : spec.sizes) {
        const auto axis = axis_eigenvalues(n, BoundaryCondition::Dirichlet);
        if (axis.empty())
            empty_axis = true;
        else
            lambda_min += axis.front();
    }
    if (empty_axis) lambda_min = std::max(lambda_min, 1.0);
    const double T = std::max(40.0, 45.0 / lambda_min);

    auto integrand = [&](double t) {
        return discrete_theta(spec, t) - expansion_g(V, d, t) -
               sign_d * std::exp(-t);
    };
    double quad_err = 0.0;
    const double numeric =
        integrate_mellin_or_throw(integrand, 1e-14, T, cfg, &quad_err);

    double tail = 0.0;
    double tail_err = 0.0;
    for (int p = 1; p <= d; ++p) {
        double last = 0.0;
        tail += V.v[static_cast<std::size_t>(p)] * sign_pm(d - p) *
                bessel_power_tail_integral(p, T, 0, &last);
        tail_err += V.v[static_cast<std::size_t>(p)] * last;
    }
    out.integral = -numeric + tail;
    out.err_estimate = quad_err + tail_err + std::exp(-40.0);
    return out;
}

double predicted_sum(const ExpansionRow& row) {
    return ((row.term_bulk + row.term_logu) + row.term_zeta) + row.term_corner;
}

std::vector<std::int64_t> sizes_for_scale(const std::vector<double>& sides,
                                          double u) {
    if (!(u > 0.0)) throw Error("scale u must be positive");
    std::vector<std::int64_t> out;
    out.reserve(sides.size());
    for (double a : sides) {
        // std::nearbyint under the default rounding mode = half-to-even.
        const double r = std::nearbyint(a * u);
        if (!(r >= 1.0) || r > 9.0e15)
            throw Error("rounded size out of range");
        out.push_back(static_cast<std::int64_t>(r));
    }
    return out;
}

ExpansionReport hypercube_expansion_report(const BoxSpec& box,
                                           const std::vector<double>& u_grid,
                                           const CoeffTable& table,
                                           const QuadratureConfig& cfg) {
    if (box.mass != 0.0)
        throw MassNotSupported("hypercube expansion is massless");
    const int d = box.dimension();
    if (table.d != d) throw Error("coefficient table dimension mismatch");
    if (u_grid.empty()) throw Error("empty u grid");

    ExpansionReport rep;
    rep.box_sides = box.sides;
    rep.mass = 0.0;
    rep.d = d;
    rep.table_fingerprint = table.fingerprint();
    rep.zeta_logdet = zeta_prime_zero_box(box, cfg).logdet_zeta;
    rep.corner_or_gamma = corner_constant(d);
    const double logu_coef = sign_pm(d + 1) * std::ldexp(1.0, 1 - d);

    for (double u : u_grid) {
        ExpansionRow row;
        row.u = u;
        row.sizes = sizes_for_scale(box.sides, u);
        LatticeSpec spec;
        spec.sizes = row.sizes;
        spec.bc = BoundaryCondition::Dirichlet;
        row.exact_logdet = logdet_exact(spec);
        const VolumeVector V = volume_vector(to_doubles(row.sizes));
        double bulk = 0.0;
        for (int i = 1; i <= d; ++i)
            bulk +=
                V.v[static_cast<std::size_t>(i)] * table.entries.at(i).first;
        row.term_bulk = bulk;
        row.term_logu = logu_coef * std::log(u);
        row.term_zeta = rep.zeta_logdet;
        row.term_corner = rep.corner_or_gamma;
        row.residual = row.exact_logdet - predicted_sum(row);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

ExpansionReport massive_torus_expansion_report(
    const BoxSpec& box, const std::vector<double>& u_grid,
    const QuadratureConfig& cfg) {
    if (!(box.mass > 0.0))
        throw ZeroMass("massive torus expansion requires mass > 0");
    const int d = box.dimension();
    if (u_grid.empty()) throw Error("empty u grid");

    ExpansionReport rep;
    rep.box_sides = box.sides;
    rep.mass = box.mass;
    rep.d = d;
    rep.table_fingerprint = "massive";
    const MassiveZetaTerms mz = zeta_prime_zero_massive_torus(box, cfg);
    rep.zeta_logdet = mz.logdet_zeta;
    rep.corner_or_gamma = mz.gamma_term;

    for (double u : u_grid) {
        ExpansionRow row;
        row.u = u;
        row.sizes = sizes_for_scale(box.sides, u);
        row.mtilde = box.mass / u;  // exact division by the scale
        LatticeSpec spec;
        spec.sizes = row.sizes;
        spec.bc = BoundaryCondition::Periodic;
        spec.mass_squared = row.mtilde * row.mtilde;
        row.exact_logdet = logdet_exact(spec);
        double volume = 1.0;
        for (std::int64_t n : row.sizes) volume *= static_cast<double>(n);
        row.term_bulk = volume * L_massive(d, row.mtilde, cfg);
        row.term_logu = 0.0;
        row.term_zeta = rep.zeta_logdet;
        row.term_corner = rep.corner_or_gamma;
        row.residual = row.exact_logdet - predicted_sum(row);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

double partie_finie_integral(int d, double lambda) {
    if (d < 1 || d > 60) throw Error("partie finie requires 1 <= d <= 60");
    if (!(lambda > 0.0)) throw Error("partie finie requires lambda > 0");
    // x = z^2 substitution: the antiderivative of x^{d-1}/(x+lambda)^d is
    //   log(x+lambda) - sum_{j=1..d-1} C(d-1,j) (-lambda)^j (x+lambda)^{-j}/j.
    // Finite part at the upper end (drop the divergent log R^2): 0.
    // Lower end x = 0: log(lambda) - sum_j C(d-1,j) (-1)^j / j.  The
    // regularized integral is -2 * (1/2) * (0 - [lower end]) = lower end.
    double acc = std::log(lambda);
    for (int j = 1; j <= d - 1; ++j)
        acc -= binomial(d - 1, j) * sign_pm(j) / j;
    return acc;
}

double h_minus_2d(int d, double z, std::int64_t n, BoundaryCondition bc) {
    if (d < 1 || d > 16) throw Error("h_minus_2d requires 1 <= d <= 16");
    if (n < 1) throw Error("h_minus_2d requires n >= 1");
    if (z == 0.0)
        throw Error("h_minus_2d requires z != 0 (unshifted term present)");
    const double z2 = z * z;
    const double n2 = 4.0 * static_cast<double>(n) * static_cast<double>(n);
    double acc = 0.0;
    switch (bc) {
        case BoundaryCondition::Free:
            for (int k = 0; k <= d; ++k)
                acc += binomial(d, k) * std::pow(z2 + n2 * k, -d);
            break;
        case BoundaryCondition::Dirichlet:
            for (int j = 0; j <= d; ++j)
                acc += sign_pm(j) * binomial(d, j) * std::pow(z2 + n2 * j, -d);
            break;
        default:
            throw Error("h_minus_2d is defined for Free and Dirichlet forms");
    }
    return std::ldexp(acc, -d);
}

double free_constant_via_partie_finie(int d) {
    if (d < 1 || d > 16)
        throw Error("free_constant_via_partie_finie requires 1 <= d <= 16");
    double acc = 0.0;
    for (int j = 1; j <= d; ++j)
        acc += sign_pm(j) * binomial(d, j) *
               partie_finie_integral(d, 4.0 * static_cast<double>(j));
    return std::ldexp(acc, -d);
}

std::pair<double, double> corner_resummation(int d) {
    const double lhs = corner_constant(d);
    double rhs = 0.0;
    for (int j = 1; j <= d; ++j)
        rhs += sign_pm(d - j) * binomial(d, j) * free_boundary_constant(j);
    return {lhs, rhs};
}

FitModel reg_limit_fit(const std::vector<std::pair<double, double>>& samples,
                       const std::vector<BasisTerm>& basis) {
    const std::size_t m = samples.size();
    const std::size_t c = basis.size();
    if (c == 0) throw Error("reg_limit_fit requires a nonempty basis");
    if (m < 2 * c)
        throw InsufficientSamples(
            "reg_limit_fit requires at least twice as many samples as basis "
            "terms");
    std::size_t idx00 = c;
    for (std::size_t j = 0; j < c; ++j)
        if (basis[j].alpha == 0.0 && basis[j].k == 0) idx00 = j;
    if (idx00 == c)
        throw Error("basis must contain the (alpha=0, k=0) term");

    // Column-major design matrix, then a copy for the final residual.
    // Everything internal runs in long double: sample values scale like
    // n^d while the sought constant is O(1), so the intercept would
    // otherwise inherit ~ cond * ulp(max |y|) of solver noise.
    std::vector<std::vector<long double>> A(c, std::vector<long double>(m));
    std::vector<long double> y(m);
    for (std::size_t r = 0; r < m; ++r) {
        const double n = samples[r].first;
        if (!(n > 1.0))
            throw Error("sample abscissae must exceed 1 (log n basis)");
        y[r] = samples[r].second;
        const long double ln = std::log(static_cast<long double>(n));
        for (std::size_t j = 0; j < c; ++j)
            A[j][r] = std::pow(static_cast<long double>(n),
                               static_cast<long double>(basis[j].alpha)) *
                      std::pow(ln, static_cast<long double>(basis[j].k));
    }
    const std::vector<std::vector<long double>> A0 = A;

    std::vector<long double> colscale(c);
    for (std::size_t j = 0; j < c; ++j) {
        long double s = 0.0L;
        for (long double v : A[j]) s += v * v;
        s = std::sqrt(s);
        if (!(s > 0.0L) || !std::isfinite(static_cast<double>(s)))
            throw IllConditioned("design matrix has a degenerate column");
        colscale[j] = s;
        for (long double& v : A[j]) v /= s;
    }

    // One-sided Jacobi SVD: orthogonalize column pairs in a fixed sweep
    // order, accumulating the right rotations into V.
    std::vector<std::vector<long double>> Vmat(
        c, std::vector<long double>(c, 0.0L));
    for (std::size_t j = 0; j < c; ++j) Vmat[j][j] = 1.0L;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < c; ++p) {
            for (std::size_t q = p + 1; q < c; ++q) {
                long double app = 0.0L, aqq = 0.0L, apq = 0.0L;
                for (std::size_t r = 0; r < m; ++r) {
                    app += A[p][r] * A[p][r];
                    aqq += A[q][r] * A[q][r];
                    apq += A[p][r] * A[q][r];
                }
                if (std::abs(apq) <= 1e-17L * std::sqrt(app * aqq)) continue;
                rotated = true;
                const long double zeta = (aqq - app) / (2.0L * apq);
                const long double tau =
                    ((zeta >= 0.0L) ? 1.0L : -1.0L) /
                    (std::abs(zeta) + std::sqrt(1.0L + zeta * zeta));
                const long double cth = 1.0L / std::sqrt(1.0L + tau * tau);
                const long double sth = cth * tau;
                for (std::size_t r = 0; r < m; ++r) {
                    const long double ap = A[p][r], aq = A[q][r];
                    A[p][r] = cth * ap - sth * aq;
                    A[q][r] = sth * ap + cth * aq;
                }
                for (std::size_t r = 0; r < c; ++r) {
                    const long double vp = Vmat[p][r], vq = Vmat[q][r];
                    Vmat[p][r] = cth * vp - sth * vq;
                    Vmat[q][r] = sth * vp + cth * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<long double> sigma(c);
    long double smax = 0.0L, smin = 0.0L;
    for (std::size_t j = 0; j < c; ++j) {
        long double s = 0.0L;
        for (long double v : A[j]) s += v * v;
        sigma[j] = std::sqrt(s);
        smax = (j == 0) ? sigma[j] : std::max(smax, sigma[j]);
        smin = (j == 0) ? sigma[j] : std::min(smin, sigma[j]);
    }
    FitModel model;
    model.basis = basis;
    model.condition =
        (smin > 0.0L) ? static_cast<double>(smax / smin)
                      : std::numeric_limits<double>::infinity();
    if (!(model.condition <= 1e12))
        throw IllConditioned("fit condition number exceeds 1e12");

    // x_scaled = sum_j V_col_j * (U_j . y) / sigma_j,  U_j = A_j / sigma_j.
    std::vector<long double> x(c, 0.0L);
    for (std::size_t j = 0; j < c; ++j) {
        long double uy = 0.0L;
        for (std::size_t r = 0; r < m; ++r) uy += A[j][r] * y[r];
        const long double w = uy / (sigma[j] * sigma[j]);
        for (std::size_t i = 0; i < c; ++i) x[i] += Vmat[j][i] * w;
    }
    std::vector<long double> coef(c);
    model.coefficients.resize(c);
    for (std::size_t j = 0; j < c; ++j) {
        coef[j] = x[j] / colscale[j];
        model.coefficients[j] = static_cast<double>(coef[j]);
    }
    model.a00 = model.coefficients[idx00];

    long double rss = 0.0L;
    for (std::size_t r = 0; r < m; ++r) {
        long double pred = 0.0L;
        for (std::size_t j = 0; j < c; ++j) pred += A0[j][r] * coef[j];
        const long double e = pred - y[r];
        rss += e * e;
    }
    model.residual_norm = static_cast<double>(std::sqrt(rss));
    return model;
}

std::vector<BasisTerm> default_cube_basis(int d) {
    if (d < 1 || d > 8) throw Error("default basis requires 1 <= d <= 8");
    std::vector<BasisTerm> basis;
    for (int a = d; a >= 1; --a) basis.push_back({static_cast<double>(a), 0});
    for (int a = d; a >= 0; --a) basis.push_back({static_cast<double>(a), 1});
    basis.push_back({0.0, 0});
    return basis;
}

RatioCheck torus_ratio_2d(std::int64_t n1, std::int64_t n2, double m_squared) {
    if (n1 < 1 || n2 < 1) throw Error("torus_ratio_2d requires n1, n2 >= 1");
    if (!(m_squared > 0.0))
        throw ZeroMass("torus_ratio_2d requires m^2 > 0 (zero mode otherwise)");

    LatticeSpec torus;
    torus.sizes = {2 * n1, 2 * n2};
    torus.bc = BoundaryCondition::Periodic;
    torus.mass_squared = m_squared;
    LatticeSpec box;
    box.sizes = {n1, n2};
    box.bc = BoundaryCondition::Dirichlet;
    box.mass_squared = m_squared;

    RatioCheck out;
    out.lhs_log = logdet_exact(torus) - 4.0 * logdet_exact(box);

    // 2 - 2cos(k pi / n) evaluated as 4 sin^2(k pi / 2n).
    double rhs = std::log(8.0 + m_squared) + 2.0 * std::log(4.0 + m_squared);
    for (std::int64_t n : {n1, n2}) {
        for (std::int64_t k = 1; k < n; ++k) {
            const double s = std::sin(0.5 * kPiConst * static_cast<double>(k) /
                                      static_cast<double>(n));
            const double c4 = 4.0 * s * s;
            rhs += 2.0 * std::log(4.0 + m_squared + c4);
            rhs += 2.0 * std::log(m_squared + c4);
        }
    }
    out.rhs_uncorrected_log = rhs;
    out.rhs_corrected_log = std::log(m_squared) + rhs;
    return out;
}

ChebyshevProducts chebyshev_product(std::int64_t n, double x) {
    if (n < 1) throw Error("chebyshev_product requires n >= 1");
    if (!(x >= 1.0)) throw Error("chebyshev_product requires x >= 1");
    ChebyshevProducts out;
    double full = 1.0;
    for (std::int64_t k = 0; k < n; ++k)
        full *= 2.0 * x - 2.0 * std::cos(2.0 * kPiConst *
                                         static_cast<double>(k) /
                                         static_cast<double>(n));
    out.product_full_cycle = full;
    double half = 1.0;
    for (std::int64_t k = 1; k < n; ++k)
        half *= 2.0 * x -
                2.0 * std::cos(kPiConst * static_cast<double>(k) /
                               static_cast<double>(n));
    out.product_half_index = half;
    const double s = std::sqrt(x * x - 1.0);
    const double plus = std::pow(x + s, static_cast<double>(n));
    const double minus = std::pow(x - s, static_cast<double>(n));
    out.rhs_closed_form = plus + minus - 2.0;
    out.half_index_u_form =
        (s > 0.0) ? (plus - minus) / (2.0 * s) : static_cast<double>(n);
    return out;
}

// ---------------------------------------------------------------------------
// Serialization.

std::string ExpansionReport::to_json() const {
    nlohmann::ordered_json j;
    j["box_sides"] = box_sides;
    j["mass"] = mass;
    j["d"] = d;
    j["table_fingerprint"] = table_fingerprint;
    j["zeta_logdet"] = zeta_logdet;
    j["corner_or_gamma"] = corner_or_gamma;
    nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
    for (const ExpansionRow& row : rows) {
        nlohmann::ordered_json r;
        r["u"] = row.u;
        r["sizes"] = row.sizes;
        r["mtilde"] = row.mtilde;
        r["exact_logdet"] = row.exact_logdet;
        r["term_bulk"] = row.term_bulk;
        r["term_logu"] = row.term_logu;
        r["term_zeta"] = row.term_zeta;
        r["term_corner"] = row.term_corner;
        r["residual"] = row.residual;
        rows_json.push_back(r);
    }
    j["rows"] = rows_json;
    return j.dump(2);
}

ExpansionReport ExpansionReport::from_json(const std::string& text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    ExpansionReport rep;
    rep.box_sides = j.at("box_sides").get<std::vector<double>>();
    rep.mass = j.at("mass").get<double>();
    rep.d = j.at("d").get<int>();
    rep.table_fingerprint = j.at("table_fingerprint").get<std::string>();
    rep.zeta_logdet = j.at("zeta_logdet").get<double>();
    rep.corner_or_gamma = j.at("corner_or_gamma").get<double>();
    for (const auto& r : j.at("rows")) {
        ExpansionRow row;
        row.u = r.at("u").get<double>();
        row.sizes = r.at("sizes").get<std::vector<std::int64_t>>();
        row.mtilde = r.at("mtilde").get<double>();
        row.exact_logdet = r.at("exact_logdet").get<double>();
        row.term_bulk = r.at("term_bulk").get<double>();
        row.term_logu = r.at("term_logu").get<double>();
        row.term_zeta = r.at("term_zeta").get<double>();
        row.term_corner = r.at("term_corner").get<double>();
        row.residual = r.at("residual").get<double>();
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string ExpansionReport::to_csv() const {
    std::string out = "u,logdet,predicted,residual\n";
    for (const ExpansionRow& row : rows) {
        out += fmt17(row.u);
        out += ',';
        out += fmt17(row.exact_logdet);
        out += ',';
        out += fmt17(predicted_sum(row));
        out += ',';
        out += fmt17(row.residual);
        out += '\n';
    }
    return out;
}

std::string FitModel::to_json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json b = nlohmann::ordered_json::array();
    for (const BasisTerm& term : basis) {
        nlohmann::ordered_json e;
        e["alpha"] = term.alpha;
        e["k"] = term.k;
        b.push_back(e);
    }
    j["basis"] = b;
    j["coefficients"] = coefficients;
    j["a00"] = a00;
    j["condition"] = condition;
    j["residual_norm"] = residual_norm;
    return j.dump(2);
}

}  // namespace lapzeta
