// quadrature.cpp -- globally adaptive Gauss-Kronrod 7/15.

#include "lapzeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "lapzeta/kernels.hpp"

namespace lapzeta {

namespace {

// Positive Kronrod-15 nodes (x >= 0; the rule is symmetric) and weights.
// Indices 0,2,4,6 are the embedded Gauss-7 nodes.
constexpr double kXK[8] = {
    0.0,
    0.2077849550078984676006894,
    0.4058451513773971669066064,
    0.5860872354676911302941448,
    0.7415311855993944398638648,
    0.8648644233597690727897128,
    0.9491079123427585245261897,
    0.9914553711208126392068547,
};
constexpr double kWK[8] = {
    0.2094821410847278280129992,
    0.2044329400752988924141620,
    0.1903505780647854099132564,
    0.1690047266392679028265834,
    0.1406532597155259187451896,
    0.1047900103222501838398763,
    0.0630920926299785532907007,
    0.0229353220105292249637320,
};
// Gauss-7 weights for nodes kXK[0], kXK[2], kXK[4], kXK[6].
constexpr double kWG[4] = {
    0.4179591836734693877551020,
    0.3818300505051189449503698,
    0.2797053914892766679014678,
    0.1294849661688696932706114,
};

struct Panel {
    double a, b;
    double value;
    double error;
};

// Evaluate K15 and G7 on [a, b]; returns (K15 value, |K15 - G7|).
Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    fv[7] = f(c);
    for (int j = 1; j < 8; ++j) {
        fv[7 - j] = f(c - h * kXK[j]);
        fv[7 + j] = f(c + h * kXK[j]);
    }
    double k15 = kWK[0] * fv[7];
    for (int j = 1; j < 8; ++j) k15 += kWK[j] * (fv[7 - j] + fv[7 + j]);
    double g7 = kWG[0] * fv[7];
    for (int j = 1; j < 4; ++j) g7 += kWG[j] * (fv[7 - 2 * j] + fv[7 + 2 * j]);
    Panel p;
    p.a = a;
    p.b = b;
    p.value = k15 * h;
    p.error = std::abs((k15 - g7) * h);
    return p;
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureConfig& cfg) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    // Worklist keyed by (error, left endpoint) -- deterministic pop order.
    std::multimap<std::pair<double, double>, Panel,
                  std::greater<std::pair<double, double>>>
        work;
    auto push = [&](const Panel& p) {
        work.emplace(std::make_pair(p.error, p.a), p);
    };
    push(eval_panel(f, a, b));
    int splits = 0;
    for (;;) {
        double total = 0.0, err = 0.0;
        for (const auto& [key, p] : work) {
            total += p.value;
            err += p.error;
        }
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
        if (err <= tol || splits >= cfg.max_subdivisions) {
            // Deterministic final reduction: panels sorted by left endpoint,
            // summed with the fixed pairwise tree.
            std::vector<Panel> panels;
            panels.reserve(work.size());
            for (const auto& [key, p] : work) panels.push_back(p);
            std::sort(panels.begin(), panels.end(),
                      [](const Panel& x, const Panel& y) { return x.a < y.a; });
            std::vector<double> vals, errs;
            vals.reserve(panels.size());
            errs.reserve(panels.size());
            for (const auto& p : panels) {
                vals.push_back(p.value);
                errs.push_back(p.error);
            }
            res.value = kernels::pairwise_sum(vals.data(), vals.size());
            res.error = kernels::pairwise_sum(errs.data(), errs.size());
            res.panels = static_cast<int>(panels.size());
            res.converged =
                res.error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
            return res;
        }
        // split the worst panel
        auto it = work.begin();
        Panel worst = it->second;
        work.erase(it);
        const double mid = 0.5 * (worst.a + worst.b);
        push(eval_panel(f, worst.a, mid));
        push(eval_panel(f, mid, worst.b));
        ++splits;
    }
}

QuadResult integrate_mellin(const std::function<double(double)>& g, double t_lo,
                            double t_hi, const QuadratureConfig& cfg) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo))
        throw Error("integrate_mellin: need 0 < t_lo < t_hi");
    auto h = [&g](double tau) { return g(std::exp(tau)); };
    return integrate(h, std::log(t_lo), std::log(t_hi), cfg);
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureConfig& cfg, double* err_out) {
    QuadResult r = integrate(f, a, b, cfg);
    if (!r.converged)
        throw QuadratureFailure("adaptive quadrature: tolerance not met within " +
                                std::to_string(cfg.max_subdivisions) +
                                " subdivisions (error " + std::to_string(r.error) +
                                ")");
    if (err_out) *err_out = r.error;
    return r.value;
}

double integrate_mellin_or_throw(const std::function<double(double)>& g,
                                 double t_lo, double t_hi,
                                 const QuadratureConfig& cfg, double* err_out) {
    QuadResult r = integrate_mellin(g, t_lo, t_hi, cfg);
    if (!r.converged)
        throw QuadratureFailure(
            "adaptive quadrature (log variable): tolerance not met within " +
            std::to_string(cfg.max_subdivisions) + " subdivisions (error " +
            std::to_string(r.error) + ")");
    if (err_out) *err_out = r.error;
    return r.value;
}

}  // namespace lapzeta
