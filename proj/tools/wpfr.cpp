// Command-line front end: closed-form pants geometry, SL(2,R) enumeration,
// Weil-Petersson volume evaluation, level-set densities, trace-method
// cancellation scans and the bundled verification suites.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "wpfr/densities.hpp"
#include "wpfr/io.hpp"
#include "wpfr/kernels.hpp"
#include "wpfr/pants_geom.hpp"
#include "wpfr/sl2.hpp"
#include "wpfr/suites.hpp"
#include "wpfr/wp_volumes.hpp"

namespace {

using namespace wpfr;

struct GlobalOpts {
    std::string config_path;
    std::string table_path;
    std::string output_path;
    unsigned workers = 1;
    std::uint64_t seed = 20240915;
};

std::ostream* open_output(const GlobalOpts& g, std::ofstream& file) {
    if (g.output_path.empty() || g.output_path == "-") return &std::cout;
    file.open(g.output_path);
    if (!file)
        throw domain_error("cannot open output path " + g.output_path);
    return &file;
}

VolumeTable load_table(const GlobalOpts& g) {
    VolumeTable table;
    std::string path = g.table_path;
    if (path.empty()) {
        if (auto env = env_volume_table_path()) path = *env;
    }
    if (!path.empty()) table.load_file(path);
    return table;
}

Evaluator named_evaluator(const std::string& name) {
    if (name == "one") return [](double) { return 1.0; };
    if (name == "exp-half") return [](double x) { return std::exp(-0.5 * x); };
    if (name == "poly-exp-half")
        return [](double x) { return x * std::exp(-0.5 * x); };
    throw domain_error("unknown evaluator '" + name +
                       "' (expected one|exp-half|poly-exp-half)");
}

void apply_config(GlobalOpts& g) {
    if (g.config_path.empty()) return;
    const Config cfg = Config::from_file(g.config_path);
    // file values only fill in what the flags left at defaults
    if (g.table_path.empty() && cfg.has("volume_table"))
        g.table_path = cfg.get_string("volume_table");
    if (g.output_path.empty() && cfg.has("output"))
        g.output_path = cfg.get_string("output");
    if (g.workers == 1 && cfg.has("workers"))
        g.workers = static_cast<unsigned>(cfg.get_int("workers", 1));
    if (g.seed == 20240915 && cfg.has("seed"))
        g.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 20240915));
    if (g.workers < 1) throw domain_error("config: workers must be >= 1");
}

int run_verify(const GlobalOpts& g, const std::string& suite) {
    suites::SuiteConfig cfg;
    cfg.seed = g.seed;
    cfg.workers = g.workers;
    std::string path = g.table_path;
    if (path.empty()) {
        if (auto env = env_volume_table_path()) path = *env;
    }
    cfg.volume_table_path = path;

    std::vector<std::string> names;
    if (suite == "all") {
        names = suites::all_suite_names();
    } else {
        names.push_back(suite);
    }
    bool all_ok = true;
    int criterion = 0;
    for (const auto& name : names) {
        const SuiteResult res = suites::run_suite(name, cfg);
        for (const auto& c : res.checks) {
            ++criterion;
            std::printf("[%s] %s: %s -- %s (%.2f s)\n",
                        c.passed ? "PASS" : "FAIL", name.c_str(), c.name.c_str(),
                        c.detail.c_str(), c.seconds);
            all_ok = all_ok && c.passed;
        }
    }
    return all_ok ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic pants geometry, trace-method kernels and "
                 "Weil-Petersson volume asymptotics"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "key = value configuration file");
    app.add_option("--table", g.table_path, "volume table path");
    app.add_option("--output,-o", g.output_path, "output file (default stdout)");
    app.add_option("--workers", g.workers, "worker count (>= 1)");
    app.add_option("--seed", g.seed, "seed for randomized sweeps");

    // geom ------------------------------------------------------------
    auto* geom = app.add_subcommand("geom", "closed-form pants geometry");
    geom->require_subcommand(1);

    std::vector<double> lengths;
    int j_iter = 1;
    auto* fig8 = geom->add_subcommand("fig8", "figure-eight length");
    fig8->add_option("lengths", lengths, "l1 l2 l3")->expected(3)->required();

    auto* iter = geom->add_subcommand("iter", "iterated-eight length");
    iter->add_option("-j", j_iter, "iterations (>= 1)")->required();
    iter->add_option("lengths", lengths, "l1 l2 l3")->expected(3)->required();

    auto* tocoords = geom->add_subcommand("to-coords",
                                          "boundary lengths -> (L1, L2, u)");
    tocoords->add_option("-j", j_iter, "iterations");
    tocoords->add_option("lengths", lengths, "l1 l2 l3")->expected(3)->required();

    std::vector<double> coords;
    auto* toboundary = geom->add_subcommand("to-boundary",
                                            "(L1, L2, u) -> boundary lengths");
    toboundary->add_option("-j", j_iter, "iterations");
    toboundary->add_option("coords", coords, "L1 L2 u")->expected(3)->required();

    auto* jac = geom->add_subcommand("jacobian", "coordinate-change Jacobian");
    jac->add_option("-j", j_iter, "iterations");
    jac->add_option("coords", coords, "L1 L2 u")->expected(3)->required();

    std::vector<double> lu;
    auto* params = geom->add_subcommand("params", "level-set domain data");
    params->add_option("args", lu, "ell u")->expected(2)->required();

    auto* rem = geom->add_subcommand("remainders", "expansion remainders");
    rem->add_option("args", lu, "L u")->expected(2)->required();

    auto* domain = geom->add_subcommand("domain", "E_j membership test");
    domain->add_option("-j", j_iter, "iterations");
    domain->add_option("coords", coords, "L1 L2 u")->expected(3)->required();

    std::string fill_mode = "filling";
    std::vector<double> fill_args;
    auto* fill = geom->add_subcommand("fill-check", "filling length inequality");
    fill->add_option("--mode", fill_mode, "filling|double_filling");
    fill->add_option("args", fill_args, "boundary_total geodesic_length")
        ->expected(2)
        ->required();

    int sweep_n = 0;
    std::vector<double> sweep_from, sweep_to;
    auto* sweep = geom->add_subcommand("sweep", "CSV sweep of fig8 length");
    sweep->add_option("--n", sweep_n, "points")->required();
    sweep->add_option("--from", sweep_from, "start l1 l2 l3")->expected(3)->required();
    sweep->add_option("--to", sweep_to, "end l1 l2 l3")->expected(3)->required();

    // enumerate ---------------------------------------------------------
    auto* enumerate = app.add_subcommand("enumerate",
                                         "oriented geodesic classes on a pants");
    std::vector<double> enum_lengths{2.0, 2.0, 2.0};
    double cutoff = 6.0;
    int word_cap = 12;
    bool primitive_only = false;
    enumerate->add_option("lengths", enum_lengths, "l1 l2 l3")->expected(3);
    enumerate->add_option("--cutoff", cutoff, "length cutoff");
    enumerate->add_option("--word-cap", word_cap, "maximum word length");
    enumerate->add_flag("--primitive-only", primitive_only);

    // volumes ------------------------------------------------------------
    auto* volumes = app.add_subcommand("volumes", "Weil-Petersson volumes");
    volumes->require_subcommand(1);

    int vg = 1, vn = 1;
    std::vector<double> vx;
    auto* veval = volumes->add_subcommand("eval", "evaluate V_{g,n}(x)");
    veval->add_option("-g", vg, "genus")->required();
    veval->add_option("-n", vn, "boundary count")->required();
    veval->add_option("x", vx, "boundary lengths");

    auto* vbounds = volumes->add_subcommand("bounds", "bound checks");
    vbounds->add_option("-g", vg, "genus")->required();
    vbounds->add_option("-n", vn, "boundary count")->required();

    auto* vfirst = volumes->add_subcommand("first-order",
                                           "first-order volume ratio");
    vfirst->add_option("x", vx, "boundary lengths")->required();

    int schedule_K = 0;
    auto* vsched = volumes->add_subcommand("schedule", "trace-method schedule");
    vsched->add_option("--K", schedule_K, "expansion order (0 = leading)")
        ->required();

    double tor_a = 0.1;
    double tor_g = 100.0;
    auto* vtor = volumes->add_subcommand("tor-main",
                                         "torus-expectation main term");
    vtor->add_option("-a", tor_a, "boundary cutoff")->required();
    vtor->add_option("-g", tor_g, "genus")->required();

    // density ------------------------------------------------------------
    auto* density = app.add_subcommand("density", "level-set densities");
    density->require_subcommand(1);

    double dens_lmin = 6.0, dens_lmax = 40.0;
    int dens_n = 35;
    int dens_cap = 2;
    auto* dfig8 = density->add_subcommand("fig8",
                                          "first-order figure-eight density");
    dfig8->add_option("--lmin", dens_lmin, "grid start");
    dfig8->add_option("--lmax", dens_lmax, "grid end");
    dfig8->add_option("--n", dens_n, "grid points");
    dfig8->add_option("--degree-cap", dens_cap, "principal degree cap");

    double lvl_ell = 8.0;
    int lvl_j = 1;
    std::string lvl_f1 = "one", lvl_f2 = "one", lvl_f3 = "one";
    std::string lvl_method = "both";
    auto* dlevel = density->add_subcommand("levelset", "one level-set integral");
    dlevel->add_option("--l", lvl_ell, "geodesic length")->required();
    dlevel->add_option("-j", lvl_j, "iterations");
    dlevel->add_option("--f1", lvl_f1, "one|exp-half|poly-exp-half");
    dlevel->add_option("--f2", lvl_f2, "one|exp-half|poly-exp-half");
    dlevel->add_option("--f3", lvl_f3, "one|exp-half|poly-exp-half");
    dlevel->add_option("--method", lvl_method, "boundary|conv|both");

    int tor_variant = 1;
    std::string tor_f = "one";
    auto* dtor = density->add_subcommand("tor", "constrained level-set integral");
    dtor->add_option("--variant", tor_variant, "1|2|3")->required();
    dtor->add_option("--l", lvl_ell, "geodesic length")->required();
    dtor->add_option("--f", tor_f, "one|exp-half|poly-exp-half");

    // cancel ------------------------------------------------------------
    auto* cancel = app.add_subcommand("cancel",
                                      "trace-method cancellation integrals");
    std::vector<double> cancel_L{10.0, 20.0, 30.0, 40.0};
    int cancel_m = 1;
    cancel->add_option("--L", cancel_L, "kernel scales");
    cancel->add_option("--m", cancel_m, "D-operator power");

    // verify ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify->add_option("--suite", suite, "suite name or 'all'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        apply_config(g);
        std::ofstream file;

        if (fig8->parsed()) {
            const BoundaryLengths b(lengths[0], lengths[1], lengths[2]);
            std::printf("%.10g\n", figure_eight_length(b));
        } else if (iter->parsed()) {
            const BoundaryLengths b(lengths[0], lengths[1], lengths[2]);
            std::printf("%.10g\n", iterated_length(b, j_iter));
        } else if (tocoords->parsed()) {
            const ConvCoords c = boundary_to_coords(
                BoundaryLengths(lengths[0], lengths[1], lengths[2]), j_iter);
            std::printf("L1=%.17g\nL2=%.17g\nu=%.17g\n", c.L1, c.L2, c.u);
        } else if (toboundary->parsed()) {
            const BoundaryLengths b = coords_to_boundary(
                ConvCoords(coords[0], coords[1], coords[2]), j_iter);
            std::printf("l1=%.17g\nl2=%.17g\nl3=%.17g\n", b.l1, b.l2, b.l3);
        } else if (jac->parsed()) {
            std::printf("%.17g\n",
                        jacobian(ConvCoords(coords[0], coords[1], coords[2]),
                                 j_iter));
        } else if (params->parsed()) {
            const DomainParams p = domain_params(lu[0], lu[1]);
            std::printf("u_minus=%.17g\nu_plus=%.17g\nL_minus_inf=%.17g\n"
                        "L_minus=%.17g\nin_E1=%d\n",
                        p.u_minus, p.u_plus, p.L_minus_inf, p.L_minus,
                        p.in_E1 ? 1 : 0);
        } else if (rem->parsed()) {
            const ExpansionRemainders r = expansion_remainders(lu[0], lu[1]);
            std::printf("r0=%.17g\nr=%.17g\n", r.r0, r.r);
        } else if (domain->parsed()) {
            const DomainCheck chk =
                in_domain_E(ConvCoords(coords[0], coords[1], coords[2]), j_iter);
            std::printf("inside=%d\nviolated=%s\n", chk.inside ? 1 : 0,
                        constraint_name(chk.violated));
        } else if (fill->parsed()) {
            FillMode mode;
            if (fill_mode == "filling") mode = FillMode::filling;
            else if (fill_mode == "double_filling") mode = FillMode::double_filling;
            else throw domain_error("fill-check: bad --mode " + fill_mode);
            const bool ok = double_fill_check(fill_args[0], fill_args[1], mode);
            std::printf("holds=%d\n", ok ? 1 : 0);
        } else if (sweep->parsed()) {
            if (sweep_n < 2) throw domain_error("sweep: need --n >= 2");
            std::ostream* os = open_output(g, file);
            CsvWriter csv(*os);
            csv.metadata("fig8 length sweep");
            csv.header({"l1", "l2", "l3", "length", "check_residual"});
            for (int i = 0; i < sweep_n; ++i) {
                const double t = static_cast<double>(i) / (sweep_n - 1);
                const double l1 = sweep_from[0] + t * (sweep_to[0] - sweep_from[0]);
                const double l2 = sweep_from[1] + t * (sweep_to[1] - sweep_from[1]);
                const double l3 = sweep_from[2] + t * (sweep_to[2] - sweep_from[2]);
                const BoundaryLengths b(l1, l2, l3);
                const double len = figure_eight_length(b);
                const double resid =
                    std::cosh(0.5 * len) -
                    (2.0 * std::cosh(0.5 * l1) * std::cosh(0.5 * l2) +
                     std::cosh(0.5 * l3));
                csv.row({l1, l2, l3, len, resid});
            }
        } else if (enumerate->parsed()) {
            const PantsRep rep = build_pants_rep(BoundaryLengths(
                enum_lengths[0], enum_lengths[1], enum_lengths[2]));
            EnumerateOptions opt;
            opt.primitive_only = primitive_only;
            opt.workers = g.workers;
            const auto classes =
                enumerate_geodesics(rep, word_cap, cutoff, opt);
            std::ostream* os = open_output(g, file);
            CsvWriter csv(*os);
            csv.metadata("oriented conjugacy classes, word cap " +
                         std::to_string(word_cap));
            csv.header({"word", "length", "type", "primitive"});
            for (const auto& c : classes)
                csv.mixed_row({c.word, CsvWriter::num(c.length),
                               local_type_name(c), c.primitive ? "1" : "0"});
        } else if (veval->parsed()) {
            const VolumeTable table = load_table(g);
            std::printf("%.17g\n", volume(table, vg, vn, vx));
        } else if (vbounds->parsed()) {
            const VolumeTable table = load_table(g);
            const BoundCheckReport rep = bound_checks(table, vg, vn, 200, g.seed);
            std::printf("power_bound=%s\nexp_bound=%s\n",
                        rep.power_bound_ok ? "ok" : "violated",
                        rep.exp_bound_ok ? "ok" : "violated");
            if (!rep.power_bound_ok || !rep.exp_bound_ok) return kExitCheckFailure;
        } else if (vfirst->parsed()) {
            std::printf("%.17g\n", first_order_ratio(vx));
        } else if (vsched->parsed()) {
            const Schedule s = table_values_schedule(schedule_K);
            std::printf("L_multiplier=%.17g\nalpha=%.17g\ngap=%.17g\n",
                        s.L_multiplier, s.alpha, s.gap);
        } else if (vtor->parsed()) {
            const double ratio = 1.0 / (8.0 * kPi * kPi * tor_g);
            std::printf("a0=%.17g\nmain_term=%.17g\n", tor_sandwich_a0(),
                        tor_expectation_main_term(tor_a, ratio));
        } else if (dfig8->parsed()) {
            if (dens_n < 2) throw domain_error("density fig8: need --n >= 2");
            std::vector<double> grid(static_cast<std::size_t>(dens_n));
            for (int i = 0; i < dens_n; ++i)
                grid[static_cast<std::size_t>(i)] =
                    dens_lmin + (dens_lmax - dens_lmin) * i / (dens_n - 1.0);
            const Fig8DensityResult res =
                fig8_density_order1(grid, dens_cap, g.workers);
            std::ostream* os = open_output(g, file);
            CsvWriter csv(*os);
            csv.header({"l", "value", "method", "residual"});
            for (std::size_t i = 0; i < grid.size(); ++i)
                csv.mixed_row({CsvWriter::num(grid[i]),
                               CsvWriter::num(res.curve.values[i]), "conv", "0"});
            std::istringstream kv(fr_report_keyvalue(res.report));
            std::string line;
            while (std::getline(kv, line)) csv.metadata(line);
        } else if (dlevel->parsed()) {
            const Evaluator f1 = named_evaluator(lvl_f1);
            const Evaluator f2 = named_evaluator(lvl_f2);
            const Evaluator f3 = named_evaluator(lvl_f3);
            std::ostream* os = open_output(g, file);
            CsvWriter csv(*os);
            csv.header({"l", "value", "method", "residual"});
            double vb = 0.0, vc = 0.0;
            const bool do_b = lvl_method == "boundary" || lvl_method == "both";
            const bool do_c = lvl_method == "conv" || lvl_method == "both";
            if (!do_b && !do_c)
                throw domain_error("density levelset: bad --method");
            if (do_b)
                vb = levelset_integral(f1, f2, f3, lvl_ell, lvl_j,
                                       LevelSetMethod::boundary_param);
            if (do_c)
                vc = levelset_integral(f1, f2, f3, lvl_ell, lvl_j,
                                       LevelSetMethod::conv_param);
            const double resid =
                (do_b && do_c) ? std::fabs(vb - vc) /
                                     std::max(1e-300, std::fabs(vb))
                               : 0.0;
            if (do_b)
                csv.mixed_row({CsvWriter::num(lvl_ell), CsvWriter::num(vb),
                               "boundary", CsvWriter::num(resid)});
            if (do_c)
                csv.mixed_row({CsvWriter::num(lvl_ell), CsvWriter::num(vc),
                               "conv", CsvWriter::num(resid)});
        } else if (dtor->parsed()) {
            const double v =
                levelset_tor_integral(tor_variant, named_evaluator(tor_f), lvl_ell);
            std::printf("%.17g\n", v);
        } else if (cancel->parsed()) {
            TestKernel kernel(std::max(4, cancel_m + 1));
            auto f = [](double l) { return 4.0 * std::pow(std::sinh(0.5 * l), 2); };
            std::ostream* os = open_output(g, file);
            CsvWriter csv(*os);
            csv.header({"L", "m", "value", "value_over_exp_half_L"});
            for (double L : cancel_L) {
                const ScaledKernel k(kernel, L);
                const double v = cancellation_integral(f, cancel_m, k, 1e-9);
                csv.row({L, static_cast<double>(cancel_m), v,
                         v / std::exp(0.5 * L)});
            }
        } else if (verify->parsed()) {
            return run_verify(g, suite);
        }
        return kExitOk;
    } catch (const data_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const numeric_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumericFailure;
    } catch (const capability_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInputError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumericFailure;
    }
}
