// lapzeta command-line front end.
//
// Subcommands (stdout carries data only; stderr carries diagnostics):
//   logdet               exact lattice log-determinant
//   zeta-det             continuum zeta-regularized log-determinant
//   coeffs               expansion coefficient table L_i for a dimension
//   verify-hypercube     Dirichlet-box expansion residual report + assertions
//   verify-massive-torus massive-torus expansion residual report + assertions
//   reglim               regularized-limit fit of logdet(n^2 Delta) samples
//   ratio2d              exact 2-d torus/box determinant ratio check
//   render               re-print a stored report JSON (bit-identical table)
//
// Exit codes: 0 success; 2 flag/domain errors; 3 zero eigenvalue without the
// exclusion flag; 4 numerical failure (quadrature / conditioning); 5 a
// verification assertion failed (a machine-readable failure record is
// printed to stdout).
//
// The only environment variable consulted is LAPZETA_THREADS (positive
// integer <= 1024): it caps worker threads without changing any result
// (reductions are thread-count independent); invalid values are ignored
// with a warning on stderr.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lapzeta/coeffs.hpp"
#include "lapzeta/continuum.hpp"
#include "lapzeta/errors.hpp"
#include "lapzeta/kernels.hpp"
#include "lapzeta/spectra.hpp"
#include "lapzeta/verify.hpp"

namespace {

using namespace lapzeta;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::int64_t parse_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw FlagError("trailing characters");
        return v;
    } catch (const FlagError&) {
        throw;
    } catch (const std::exception&) {
        throw FlagError("cannot parse integer: '" + s + "'");
    }
}

double parse_real(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw FlagError("trailing characters");
        return v;
    } catch (const FlagError&) {
        throw;
    } catch (const std::exception&) {
        throw FlagError("cannot parse number: '" + s + "'");
    }
}

std::vector<std::int64_t> parse_dims(const std::string& s) {
    std::vector<std::int64_t> out;
    for (const std::string& f : split(s, ',')) out.push_back(parse_int(f));
    if (out.empty()) throw FlagError("--dims must be nonempty");
    return out;
}

std::vector<double> parse_sides(const std::string& s) {
    std::vector<double> out;
    for (const std::string& f : split(s, ',')) out.push_back(parse_real(f));
    if (out.empty()) throw FlagError("--box must be nonempty");
    return out;
}

// Grid syntax: "start:stop:geometric" (ratio 2) | "start:stop:linear"
// (step 1) | explicit comma-separated list.
std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        const std::vector<std::string> f = split(s, ':');
        if (f.size() != 3)
            throw FlagError("grid must be start:stop:geometric|linear");
        const double start = parse_real(f[0]);
        const double stop = parse_real(f[1]);
        if (!(start > 0.0) || stop < start)
            throw FlagError("grid needs 0 < start <= stop");
        if (f[2] == "geometric") {
            for (double v = start; v <= stop * (1.0 + 1e-12); v *= 2.0)
                out.push_back(v);
        } else if (f[2] == "linear") {
            for (double v = start; v <= stop + 1e-12; v += 1.0)
                out.push_back(v);
        } else {
            throw FlagError("grid kind must be 'geometric' or 'linear'");
        }
    } else {
        for (const std::string& f : split(s, ',')) out.push_back(parse_real(f));
    }
    if (out.empty() || out.size() > 200000)
        throw FlagError("grid must have between 1 and 200000 points");
    return out;
}

BoundaryCondition parse_bc(const std::string& s) {
    if (s == "dirichlet") return BoundaryCondition::Dirichlet;
    if (s == "free") return BoundaryCondition::Free;
    if (s == "periodic") return BoundaryCondition::Periodic;
    throw FlagError("--bc must be dirichlet|free|periodic");
}

void apply_backend(const std::string& s) {
    if (s == "auto")
        kernels::set_backend(kernels::Backend::Auto);
    else if (s == "scalar")
        kernels::set_backend(kernels::Backend::Scalar);
    else if (s == "avx2")
        kernels::set_backend(kernels::Backend::Avx2);
    else
        throw FlagError("--backend must be auto|scalar|avx2");
}

void warn_bad_threads_env() {
    if (const char* env = std::getenv("LAPZETA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*env == '\0' || end == nullptr || *end != '\0' || v < 1 ||
            v > 1024)
            std::fprintf(stderr,
                         "warning: ignoring invalid LAPZETA_THREADS='%s'\n",
                         env);
    }
}

std::string join_sizes(const std::vector<std::int64_t>& sizes) {
    std::string out;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (i) out += 'x';
        out += std::to_string(sizes[i]);
    }
    return out;
}

// Shared by the verify subcommands and `render`: re-printing a stored report
// must reproduce these bytes exactly (all fields round-trip through JSON,
// and `predicted` is recomputed with the fixed association order).
std::string report_table(const ExpansionReport& rep) {
    std::string out = "u sizes mtilde exact_logdet predicted residual\n";
    for (const ExpansionRow& row : rep.rows) {
        out += fmt17(row.u);
        out += ' ';
        out += join_sizes(row.sizes);
        out += ' ';
        out += fmt17(row.mtilde);
        out += ' ';
        out += fmt17(row.exact_logdet);
        out += ' ';
        out += fmt17(predicted_sum(row));
        out += ' ';
        out += fmt17(row.residual);
        out += '\n';
    }
    return out;
}

struct AssertionRecord {
    std::string name;
    bool passed = false;
    double observed = 0.0;
    double tolerance = 0.0;
};

// Cauchy-convergence assertions over the residual column: successive
// doubling differences must decrease (above a noise floor) and the final
// difference must fall below the tolerance.
std::vector<AssertionRecord> cauchy_assertions(
    const ExpansionReport& rep, double cauchy_tol, double noise_floor,
    const std::optional<double>& residual_tol) {
    std::vector<AssertionRecord> recs;
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i)
        diffs.push_back(
            std::abs(rep.rows[i + 1].residual - rep.rows[i].residual));
    if (diffs.size() >= 2) {
        bool ok = true;
        double worst_ratio = 0.0;
        for (std::size_t i = 1; i < diffs.size(); ++i) {
            const double ratio = diffs[i] / std::max(diffs[i - 1], 1e-300);
            worst_ratio = std::max(worst_ratio, ratio);
            if (diffs[i] >= noise_floor && ratio >= 1.0) ok = false;
        }
        recs.push_back({"cauchy_diffs_decreasing", ok, worst_ratio, 1.0});
    }
    if (!diffs.empty())
        recs.push_back({"final_cauchy_diff", diffs.back() <= cauchy_tol,
                        diffs.back(), cauchy_tol});
    if (residual_tol) {
        double worst = 0.0;
        for (const ExpansionRow& row : rep.rows)
            worst = std::max(worst, std::abs(row.residual));
        recs.push_back(
            {"max_abs_residual", worst <= *residual_tol, worst, *residual_tol});
    }
    return recs;
}

nlohmann::ordered_json assertions_json(
    const std::vector<AssertionRecord>& recs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const AssertionRecord& r : recs) {
        nlohmann::ordered_json e;
        e["name"] = r.name;
        e["passed"] = r.passed;
        e["observed"] = r.observed;
        e["tolerance"] = r.tolerance;
        arr.push_back(e);
    }
    return arr;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file: " + path);
    f << content;
    if (!f) throw Error("failed writing output file: " + path);
}

// Emits table or JSON, writes optional report files, returns the exit code.
int finish_verify(const ExpansionReport& rep,
                  const std::vector<AssertionRecord>& recs, bool json_mode,
                  const std::string& json_out, const std::string& csv_out) {
    bool all_passed = true;
    for (const AssertionRecord& r : recs) all_passed &= r.passed;
    std::string out;
    if (json_mode) {
        nlohmann::ordered_json j;
        j["status"] = all_passed ? "ok" : "fail";
        j["assertions"] = assertions_json(recs);
        j["report"] = nlohmann::ordered_json::parse(rep.to_json());
        out = j.dump(2) + "\n";
    } else {
        out = report_table(rep);
        for (const AssertionRecord& r : recs) {
            out += "assert ";
            out += r.name;
            out += r.passed ? ": pass" : ": FAIL";
            out += " observed=";
            out += fmt17(r.observed);
            out += " tolerance=";
            out += fmt17(r.tolerance);
            out += '\n';
        }
        if (!all_passed) {
            nlohmann::ordered_json fail;
            fail["status"] = "fail";
            fail["assertions"] = assertions_json(recs);
            out += fail.dump() + "\n";
        }
    }
    if (!json_out.empty()) write_file(json_out, rep.to_json() + "\n");
    if (!csv_out.empty()) write_file(csv_out, rep.to_csv());
    std::fputs(out.c_str(), stdout);
    return all_passed ? 0 : 5;
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ZeroEigenvalue*>(&e)) return 3;
    if (dynamic_cast<const QuadratureFailure*>(&e)) return 4;
    if (dynamic_cast<const IllConditioned*>(&e)) return 4;
    return 2;  // flag / domain errors
}

}  // namespace

int main(int argc, char** argv) {
    warn_bad_threads_env();

    CLI::App app{
        "lapzeta: exact and zeta-regularized log-determinants of lattice "
        "Laplacians"};
    app.require_subcommand(1);
    std::string backend = "auto";
    app.add_option("--backend", backend,
                   "reduction kernel backend: auto|scalar|avx2")
        ->capture_default_str();

    // ---- logdet ----
    auto* cmd_logdet = app.add_subcommand(
        "logdet", "exact log-determinant of a lattice Laplacian");
    std::string ld_dims;
    std::string ld_bc = "dirichlet";
    double ld_mass2 = 0.0;
    double ld_rescale = 0.0;
    bool ld_exclude = false;
    int ld_threads = 0;
    bool ld_json = false;
    cmd_logdet->add_option("--dims", ld_dims, "axis sizes, e.g. 8,8")
        ->required();
    cmd_logdet->add_option("--bc", ld_bc, "dirichlet|free|periodic")
        ->capture_default_str();
    cmd_logdet
        ->add_option("--mass-squared", ld_mass2,
                     "additive spectral shift (lattice mass squared)")
        ->capture_default_str();
    cmd_logdet->add_option(
        "--rescale", ld_rescale,
        "multiply eigenvalues by u^2 (0 = no rescale) [default: 0]");
    cmd_logdet->add_flag("--exclude-zero-modes", ld_exclude,
                         "drop the zero eigenvalue (det')");
    cmd_logdet
        ->add_option("--threads", ld_threads,
                     "worker threads (0 = auto; results thread-independent)")
        ->capture_default_str();
    cmd_logdet->add_flag("--json", ld_json, "emit JSON instead of a value");

    // ---- zeta-det ----
    auto* cmd_zeta = app.add_subcommand(
        "zeta-det", "zeta-regularized log-determinant of a continuum box or "
                    "torus");
    std::string zd_box;
    double zd_mass = 0.0;
    std::string zd_geometry = "auto";
    double zd_tol = 1e-12;
    bool zd_json = false;
    cmd_zeta->add_option("--box", zd_box, "side lengths, e.g. 1.0,2.0")
        ->required();
    cmd_zeta->add_option("--mass", zd_mass, "continuum mass m (torus only)")
        ->capture_default_str();
    cmd_zeta
        ->add_option("--geometry", zd_geometry,
                     "box|torus (auto: box when massless, torus when massive)")
        ->capture_default_str();
    cmd_zeta->add_option("--tol", zd_tol, "quadrature tolerance")
        ->capture_default_str();
    cmd_zeta->add_flag("--json", zd_json,
                       "emit JSON with the term decomposition");

    // ---- coeffs ----
    auto* cmd_coeffs = app.add_subcommand(
        "coeffs", "expansion coefficient table L_i for a dimension");
    int cf_d = 0;
    double cf_tol = 1e-12;
    bool cf_json = false;
    cmd_coeffs->add_option("--d", cf_d, "dimension (1..6)")->required();
    cmd_coeffs->add_option("--tol", cf_tol, "quadrature tolerance")
        ->capture_default_str();
    cmd_coeffs->add_flag("--json", cf_json, "emit JSON");

    // ---- verify-hypercube ----
    auto* cmd_vh = app.add_subcommand(
        "verify-hypercube",
        "Dirichlet-box expansion residuals over a u-grid, with Cauchy "
        "assertions");
    std::string vh_box;
    std::string vh_grid;
    double vh_tol = 1e-2;
    double vh_noise = 1e-9;
    double vh_quad_tol = 1e-12;
    double vh_residual_tol = -1.0;
    bool vh_json = false;
    std::string vh_json_out, vh_csv_out;
    cmd_vh->add_option("--box", vh_box, "side lengths, e.g. 1 or 1,2")
        ->required();
    cmd_vh
        ->add_option("--u-grid", vh_grid,
                     "scales: start:stop:geometric|linear or a comma list")
        ->required();
    cmd_vh->add_option("--tol", vh_tol, "final Cauchy-difference tolerance")
        ->capture_default_str();
    cmd_vh
        ->add_option("--noise-floor", vh_noise,
                     "differences below this skip the monotonicity check")
        ->capture_default_str();
    cmd_vh->add_option("--quad-tol", vh_quad_tol, "quadrature tolerance")
        ->capture_default_str();
    cmd_vh->add_option(
        "--residual-tol", vh_residual_tol,
        "also assert max |residual| <= this (negative = skip) [default. -1]");
    cmd_vh->add_flag("--json", vh_json, "emit JSON instead of a table");
    cmd_vh->add_option("--json-out", vh_json_out, "write report JSON here");
    cmd_vh->add_option("--csv-out", vh_csv_out, "write residual CSV here");

    // ---- verify-massive-torus ----
    auto* cmd_vm = app.add_subcommand(
        "verify-massive-torus",
        "massive-torus expansion residuals over a u-grid, with Cauchy "
        "assertions");
    std::string vm_box;
    std::string vm_grid;
    double vm_mass = 0.0;
    double vm_tol = 1e-2;
    double vm_noise = 1e-9;
    double vm_quad_tol = 1e-12;
    double vm_residual_tol = -1.0;
    bool vm_json = false;
    std::string vm_json_out, vm_csv_out;
    cmd_vm->add_option("--box", vm_box, "side lengths")->required();
    cmd_vm->add_option("--mass", vm_mass, "continuum mass m > 0")->required();
    cmd_vm
        ->add_option("--u-grid", vm_grid,
                     "scales: start:stop:geometric|linear or a comma list")
        ->required();
    cmd_vm->add_option("--tol", vm_tol, "final Cauchy-difference tolerance")
        ->capture_default_str();
    cmd_vm
        ->add_option("--noise-floor", vm_noise,
                     "differences below this skip the monotonicity check")
        ->capture_default_str();
    cmd_vm->add_option("--quad-tol", vm_quad_tol, "quadrature tolerance")
        ->capture_default_str();
    cmd_vm->add_option(
        "--residual-tol", vm_residual_tol,
        "also assert max |residual| <= this (negative = skip) [default: -1]");
    cmd_vm->add_flag("--json", vm_json, "emit JSON instead of a table");
    cmd_vm->add_option("--json-out", vm_json_out, "write report JSON here");
    cmd_vm->add_option("--csv-out", vm_csv_out, "write residual CSV here");

    // ---- reglim ----
    auto* cmd_rl = app.add_subcommand(
        "reglim",
        "regularized-limit fit of logdet(n^2 Laplacian) on the d-cube");
    int rl_d = 0;
    std::string rl_grid;
    double rl_tol = 1e-2;
    bool rl_json = false;
    cmd_rl->add_option("--d", rl_d, "dimension (1..3)")->required();
    cmd_rl->add_option(
        "--n-grid", rl_grid,
        "sizes: start:stop:geometric|linear or a comma list "
        "[default: 8:1024:geometric for d=1, 4:8192:geometric for d=2]");
    cmd_rl
        ->add_option("--tol", rl_tol,
                     "tolerance for the chain check against the continuum "
                     "zeta determinant")
        ->capture_default_str();
    cmd_rl->add_flag("--json", rl_json, "emit JSON");

    // ---- ratio2d ----
    auto* cmd_r2 = app.add_subcommand(
        "ratio2d", "exact 2-d torus/box determinant-ratio identity check");
    std::int64_t r2_n1 = 0, r2_n2 = 0;
    double r2_m2 = 0.0;
    double r2_tol = 1e-12;
    bool r2_json = false;
    cmd_r2->add_option("--n1", r2_n1, "box size n1 >= 1")->required();
    cmd_r2->add_option("--n2", r2_n2, "box size n2 >= 1")->required();
    cmd_r2->add_option("--mass-squared", r2_m2, "lattice mass squared > 0")
        ->required();
    cmd_r2->add_option("--tol", r2_tol, "relative tolerance on the logs")
        ->capture_default_str();
    cmd_r2->add_flag("--json", r2_json, "emit JSON");

    // ---- render ----
    auto* cmd_rd = app.add_subcommand(
        "render", "re-print a stored expansion-report JSON file");
    std::string rd_in;
    bool rd_csv = false, rd_json = false;
    cmd_rd->add_option("--in", rd_in, "path to a report JSON file")
        ->required();
    cmd_rd->add_flag("--csv", rd_csv, "print the residual CSV instead");
    cmd_rd->add_flag("--json", rd_json, "print canonical report JSON instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        apply_backend(backend);

        if (*cmd_logdet) {
            LatticeSpec spec;
            spec.sizes = parse_dims(ld_dims);
            spec.bc = parse_bc(ld_bc);
            spec.mass_squared = ld_mass2;
            if (ld_rescale != 0.0) spec.rescale = ld_rescale;
            LogdetOptions opts;
            opts.exclude_zero_modes = ld_exclude;
            opts.threads = ld_threads;
            const double value = logdet_exact(spec, opts);
            std::string out;
            if (ld_json) {
                const Spectrum spectrum = product_spectrum(spec);
                nlohmann::ordered_json j;
                j["logdet"] = value;
                j["dims"] = spec.sizes;
                j["bc"] = ld_bc;
                j["mass_squared"] = ld_mass2;
                j["rescale"] = ld_rescale;
                j["exclude_zero_modes"] = ld_exclude;
                j["eigenvalue_count"] =
                    spectrum.total_count() -
                    ((ld_exclude && spectrum.has_zero_mode()) ? 1 : 0);
                out = j.dump(2) + "\n";
            } else {
                out = fmt17(value) + "\n";
            }
            std::fputs(out.c_str(), stdout);
            return 0;
        }

        if (*cmd_zeta) {
            BoxSpec box;
            box.sides = parse_sides(zd_box);
            box.mass = zd_mass;
            std::string geometry = zd_geometry;
            if (geometry == "auto")
                geometry = (zd_mass == 0.0) ? "box" : "torus";
            if (geometry != "box" && geometry != "torus")
                throw FlagError("--geometry must be box|torus (or auto)");
            if (geometry == "box" && zd_mass != 0.0)
                throw FlagError("Dirichlet boxes are massless here; use "
                                "--geometry torus for massive spectra");
            QuadratureConfig cfg;
            cfg.abs_tol = cfg.rel_tol = zd_tol;
            std::string out;
            if (geometry == "box") {
                const ZetaTerms z = zeta_prime_zero_box(box, cfg);
                if (zd_json) {
                    nlohmann::ordered_json j;
                    j["geometry"] = "box";
                    j["sides"] = box.sides;
                    j["mass"] = 0.0;
                    j["logdet_zeta"] = z.logdet_zeta;
                    j["zeta_prime"] = z.zeta_prime;
                    nlohmann::ordered_json dec;
                    dec["integral_small_t"] = z.integral_small;
                    dec["integral_large_t"] = z.integral_large;
                    dec["gamma_term"] = z.gamma_term;
                    dec["volume_term"] = z.volume_term;
                    j["decomposition"] = dec;
                    j["err_estimate"] = z.err_estimate;
                    out = j.dump(2) + "\n";
                } else {
                    out = fmt17(z.logdet_zeta) + "\n";
                }
            } else {
                if (!(zd_mass > 0.0))
                    throw FlagError(
                        "torus geometry requires --mass > 0 (zero mode)");
                const MassiveZetaTerms z =
                    zeta_prime_zero_massive_torus(box, cfg);
                if (zd_json) {
                    nlohmann::ordered_json j;
                    j["geometry"] = "torus";
                    j["sides"] = box.sides;
                    j["mass"] = box.mass;
                    j["logdet_zeta"] = z.logdet_zeta;
                    j["zeta_prime"] = z.zeta_prime;
                    nlohmann::ordered_json dec;
                    dec["integral"] = z.integral;
                    dec["gamma_term"] = z.gamma_term;
                    j["decomposition"] = dec;
                    j["err_estimate"] = z.err_estimate;
                    out = j.dump(2) + "\n";
                } else {
                    out = fmt17(z.logdet_zeta) + "\n";
                }
            }
            std::fputs(out.c_str(), stdout);
            return 0;
        }

        if (*cmd_coeffs) {
            if (cf_d < 1 || cf_d > 6)
                throw FlagError("coeffs requires 1 <= d <= 6");
            QuadratureConfig cfg;
            cfg.abs_tol = cfg.rel_tol = cf_tol;
            const CoeffTable table = coeff_table(cf_d, cfg);
            std::string out;
            if (cf_json) {
                nlohmann::ordered_json j =
                    nlohmann::ordered_json::parse(table.to_json());
                j["fingerprint"] = table.fingerprint();
                out = j.dump(2) + "\n";
            } else {
                out = "i value err\n";
                for (const auto& [i, ve] : table.entries) {
                    out += std::to_string(i);
                    out += ' ';
                    out += fmt17(ve.first);
                    out += ' ';
                    out += fmt17(ve.second);
                    out += '\n';
                }
            }
            std::fputs(out.c_str(), stdout);
            return 0;
        }

        if (*cmd_vh) {
            BoxSpec box;
            box.sides = parse_sides(vh_box);
            const std::vector<double> grid = parse_grid(vh_grid);
            QuadratureConfig cfg;
            cfg.abs_tol = cfg.rel_tol = vh_quad_tol;
            const CoeffTable table =
                coeff_table(static_cast<int>(box.sides.size()), cfg);
            const ExpansionReport rep =
                hypercube_expansion_report(box, grid, table, cfg);
            std::optional<double> residual_tol;
            if (vh_residual_tol >= 0.0) residual_tol = vh_residual_tol;
            return finish_verify(rep,
                                 cauchy_assertions(rep, vh_tol, vh_noise,
                                                   residual_tol),
                                 vh_json, vh_json_out, vh_csv_out);
        }

        if (*cmd_vm) {
            BoxSpec box;
            box.sides = parse_sides(vm_box);
            box.mass = vm_mass;
            const std::vector<double> grid = parse_grid(vm_grid);
            QuadratureConfig cfg;
            cfg.abs_tol = cfg.rel_tol = vm_quad_tol;
            const ExpansionReport rep =
                massive_torus_expansion_report(box, grid, cfg);
            std::optional<double> residual_tol;
            if (vm_residual_tol >= 0.0) residual_tol = vm_residual_tol;
            return finish_verify(rep,
                                 cauchy_assertions(rep, vm_tol, vm_noise,
                                                   residual_tol),
                                 vm_json, vm_json_out, vm_csv_out);
        }

        if (*cmd_rl) {
            if (rl_d < 1 || rl_d > 3)
                throw FlagError("reglim requires 1 <= d <= 3");
            std::string gridspec = rl_grid;
            if (gridspec.empty()) {
                if (rl_d == 1)
                    gridspec = "8:1024:geometric";
                else if (rl_d == 2)
                    gridspec = "4:8192:geometric";
                else
                    throw FlagError("--n-grid is required for d >= 3");
            }
            std::vector<std::pair<double, double>> samples;
            for (double nd : parse_grid(gridspec)) {
                const std::int64_t n =
                    static_cast<std::int64_t>(std::nearbyint(nd));
                if (n < 2) throw FlagError("reglim sizes must be >= 2");
                LatticeSpec spec;
                spec.sizes.assign(static_cast<std::size_t>(rl_d), n);
                spec.bc = BoundaryCondition::Dirichlet;
                spec.rescale = static_cast<double>(n);
                samples.emplace_back(static_cast<double>(n),
                                     logdet_exact(spec));
            }
            const FitModel model =
                reg_limit_fit(samples, default_cube_basis(rl_d));
            const double corner = corner_constant(rl_d);
            const double implied = model.a00 - corner;
            BoxSpec unit;
            unit.sides.assign(static_cast<std::size_t>(rl_d), 1.0);
            QuadratureConfig cfg;
            const double reference =
                zeta_prime_zero_box(unit, cfg).logdet_zeta;
            const double diff = std::abs(implied - reference);
            const bool passed = diff <= rl_tol;
            std::string out;
            if (rl_json) {
                nlohmann::ordered_json j;
                j["status"] = passed ? "ok" : "fail";
                j["fit"] = nlohmann::ordered_json::parse(model.to_json());
                j["corner_constant"] = corner;
                j["logdet_zeta_implied"] = implied;
                j["logdet_zeta_reference"] = reference;
                j["chain_abs_diff"] = diff;
                j["tolerance"] = rl_tol;
                out = j.dump(2) + "\n";
            } else {
                out += "a00 = " + fmt17(model.a00) + "\n";
                out += "condition = " + fmt17(model.condition) + "\n";
                out += "residual_norm = " + fmt17(model.residual_norm) + "\n";
                out += "corner_constant = " + fmt17(corner) + "\n";
                out += "logdet_zeta_implied = " + fmt17(implied) + "\n";
                out +=
                    "logdet_zeta_reference = " + fmt17(reference) + "\n";
                out += "chain_abs_diff = " + fmt17(diff) + "\n";
                out += std::string("assert chain_matches_reference: ") +
                       (passed ? "pass" : "FAIL") +
                       " observed=" + fmt17(diff) +
                       " tolerance=" + fmt17(rl_tol) + "\n";
                if (!passed) {
                    nlohmann::ordered_json fail;
                    fail["status"] = "fail";
                    fail["assertion"] = "chain_matches_reference";
                    fail["observed"] = diff;
                    fail["tolerance"] = rl_tol;
                    out += fail.dump() + "\n";
                }
            }
            std::fputs(out.c_str(), stdout);
            return passed ? 0 : 5;
        }

        if (*cmd_r2) {
            const RatioCheck rc = torus_ratio_2d(r2_n1, r2_n2, r2_m2);
            const double corrected_diff =
                std::abs(rc.lhs_log - rc.rhs_corrected_log);
            const double scale = std::max(1.0, std::abs(rc.lhs_log));
            const bool passed = corrected_diff <= r2_tol * scale;
            const double mismatch =
                std::exp(rc.lhs_log - rc.rhs_uncorrected_log);
            std::string out;
            if (r2_json) {
                nlohmann::ordered_json j;
                j["status"] = passed ? "ok" : "fail";
                j["lhs_log"] = rc.lhs_log;
                j["rhs_uncorrected_log"] = rc.rhs_uncorrected_log;
                j["rhs_corrected_log"] = rc.rhs_corrected_log;
                j["corrected_abs_diff"] = corrected_diff;
                j["uncorrected_mismatch_factor"] = mismatch;
                j["mass_squared"] = r2_m2;
                j["tolerance"] = r2_tol;
                out = j.dump(2) + "\n";
            } else {
                out += "lhs_log = " + fmt17(rc.lhs_log) + "\n";
                out += "rhs_uncorrected_log = " + fmt17(rc.rhs_uncorrected_log) + "\n";
                out += "rhs_corrected_log = " + fmt17(rc.rhs_corrected_log) +
                       "\n";
                out += "corrected_abs_diff = " + fmt17(corrected_diff) + "\n";
                out += "uncorrected_mismatch_factor = " + fmt17(mismatch) +
                       " (uncorrected right side is low by exactly "
                       "mass_squared = " +
                       fmt17(r2_m2) + ")\n";
                out += std::string("assert corrected_identity: ") +
                       (passed ? "pass" : "FAIL") +
                       " observed=" + fmt17(corrected_diff) +
                       " tolerance=" + fmt17(r2_tol * scale) + "\n";
                if (!passed) {
                    nlohmann::ordered_json fail;
                    fail["status"] = "fail";
                    fail["assertion"] = "corrected_identity";
                    fail["observed"] = corrected_diff;
                    fail["tolerance"] = r2_tol * scale;
                    out += fail.dump() + "\n";
                }
            }
            std::fputs(out.c_str(), stdout);
            return passed ? 0 : 5;
        }

        if (*cmd_rd) {
            std::ifstream f(rd_in, std::ios::binary);
            if (!f) throw FlagError("cannot open report file: " + rd_in);
            std::stringstream buf;
            buf << f.rdbuf();
            const ExpansionReport rep = ExpansionReport::from_json(buf.str());
            std::string out;
            if (rd_csv)
                out = rep.to_csv();
            else if (rd_json)
                out = rep.to_json() + "\n";
            else
                out = report_table(rep);
            std::fputs(out.c_str(), stdout);
            return 0;
        }

        throw FlagError("no subcommand selected");
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
}
