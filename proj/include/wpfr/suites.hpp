#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wpfr/densities.hpp"
#include "wpfr/finite_diff.hpp"
#include "wpfr/fr_core.hpp"
#include "wpfr/kernels.hpp"
#include "wpfr/pants_geom.hpp"
#include "wpfr/sl2.hpp"
#include "wpfr/wp_volumes.hpp"

namespace wpfr {

// Bundled verification suites. Each check corresponds to one criterion of
// the acceptance gate; `verify` in the CLI and the acceptance binary both
// run through this header.

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace suites {

struct SuiteConfig {
    std::string volume_table_path;  // empty: built-ins only
    std::uint64_t seed = 20240915;
    unsigned workers = 2;
    int enum_word_cap_low = 12;
    int enum_word_cap_high = 16;
};

namespace detail {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline CheckResult make_result(const std::string& name, bool ok,
                               const std::string& detail, double secs) {
    return CheckResult{name, ok, detail, secs};
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

// 1. figure-eight trace oracle on 1000 random boundary triples
inline CheckResult check_fig8_trace_oracle(const SuiteConfig& cfg) {
    detail::Timer t;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(0.5, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BoundaryLengths b(uni(rng), uni(rng), uni(rng));
        const PantsRep rep = build_pants_rep(b);
        const Mat2 w = rep.A * rep.B.inverse();
        const double via_trace = trace_to_length(w.trace());
        const double via_formula = figure_eight_length(b);
        worst = std::max(worst,
                         std::fabs(via_trace - via_formula) / via_formula);
    }
    const double secs = t.seconds();
    const bool ok = worst <= 1e-8 && secs < 5.0;
    return detail::make_result(
        "fig8 trace oracle",
        ok, "worst rel err " + detail::fmt(worst) + ", " + detail::fmt(secs) + " s",
        secs);
}

// 2. iterated-eight recursion + SL2 trace identity
inline CheckResult check_iterated_recursion(const SuiteConfig& cfg) {
    detail::Timer t;
    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_real_distribution<double> uni(0.5, 5.0);
    double worst_rec = 0.0;
    for (int j = 2; j <= 6; ++j) {
        for (int i = 0; i < 200; ++i) {
            const double l1 = uni(rng), l2 = uni(rng), l3 = uni(rng);
            const BoundaryLengths b(l1, l2, l3);
            const BoundaryLengths swapped(l3, l2, l1);
            const double lhs = std::cosh(0.5 * iterated_length(b, j));
            const double rhs =
                2.0 * std::cosh(0.5 * l1) * std::cosh(0.5 * j * l2) +
                std::cosh(0.5 * iterated_length(swapped, j - 1));
            worst_rec = std::max(worst_rec, std::fabs(lhs - rhs) / lhs);
        }
    }
    double worst_id = 0.0;
    std::uniform_real_distribution<double> par(2.2, 4.0);
    for (int i = 0; i < 100; ++i) {
        const EightRep e = build_eight_rep(par(rng), par(rng), par(rng));
        const double lhs = (e.A1 * e.A2).trace();
        const double rhs = e.A1.trace() * e.A2.trace() +
                           (-(e.A1 * e.A2.inverse())).trace();
        worst_id = std::max(worst_id,
                            std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
    }
    const bool ok = worst_rec <= 1e-9 && worst_id <= 1e-10;
    return detail::make_result(
        "iterated-eight recursion + SL2 identity", ok,
        "recursion rel " + detail::fmt(worst_rec) + ", identity rel " +
            detail::fmt(worst_id),
        t.seconds());
}

// 3. change of variables: round trips and Jacobian vs finite differences
inline CheckResult check_change_of_variables(const SuiteConfig& cfg) {
    detail::Timer t;
    std::mt19937_64 rng(cfg.seed + 2);
    std::uniform_real_distribution<double> uni(0.4, 5.0);
    double worst_rt = 0.0, worst_jac = 0.0;
    for (int j = 1; j <= 3; ++j) {
        for (int i = 0; i < 500; ++i) {
            const BoundaryLengths b(uni(rng), uni(rng), uni(rng));
            const ConvCoords c = boundary_to_coords(b, j);
            const BoundaryLengths back = coords_to_boundary(c, j);
            worst_rt = std::max({worst_rt, std::fabs(back.l1 - b.l1),
                                 std::fabs(back.l2 - b.l2),
                                 std::fabs(back.l3 - b.l3)});
            const ConvCoords c2 = boundary_to_coords(back, j);
            worst_rt = std::max({worst_rt, std::fabs(c2.L1 - c.L1),
                                 std::fabs(c2.L2 - c.L2), std::fabs(c2.u - c.u)});

            const double jac = jacobian(c, j);
            // differentiate the inverse map instead: it is defined on all of
            // R_+^3 and stays flat exactly where the forward map steepens,
            // so central differences keep their accuracy near the edge of E
            const double h = 2e-3;
            auto inv = [&](double l1, double l2, double l3, int k) {
                const ConvCoords cc =
                    boundary_to_coords(BoundaryLengths(l1, l2, l3), j);
                return k == 0 ? cc.L1 : k == 1 ? cc.L2 : cc.u;
            };
            double J[3][3];
            for (int k = 0; k < 3; ++k) {
                J[k][0] = fd_derivative(
                    [&](double v) { return inv(v, b.l2, b.l3, k); }, b.l1, 1, h, 5);
                J[k][1] = fd_derivative(
                    [&](double v) { return inv(b.l1, v, b.l3, k); }, b.l2, 1, h, 5);
                J[k][2] = fd_derivative(
                    [&](double v) { return inv(b.l1, b.l2, v, k); }, b.l3, 1, h, 5);
            }
            const double det_inv =
                J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
            worst_jac =
                std::max(worst_jac, std::fabs(jac * std::fabs(det_inv) - 1.0));
        }
    }
    const bool ok = worst_rt <= 1e-9 && worst_jac <= 1e-5;
    return detail::make_result(
        "change of variables", ok,
        "round trip " + detail::fmt(worst_rt) + ", jacobian vs fd " +
            detail::fmt(worst_jac),
        t.seconds());
}

// 4. level-set integral cross-validation between parametrizations
inline CheckResult check_levelset_cross(const SuiteConfig& cfg) {
    detail::Timer t;
    std::mt19937_64 rng(cfg.seed + 3);
    std::uniform_real_distribution<double> ulen(8.0, 20.0);
    std::uniform_real_distribution<double> ucoef(0.1, 2.0);
    // random elements of span{1, e^{-l/2}, l e^{-l/2}} with positive
    // coefficients, so the relative comparison stays well conditioned
    auto draw = [&]() -> Evaluator {
        const double c0 = ucoef(rng), c1 = ucoef(rng), c2 = ucoef(rng);
        return [c0, c1, c2](double x) {
            return c0 + (c1 + c2 * x) * std::exp(-0.5 * x);
        };
    };
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double ell = ulen(rng);
        const Evaluator f1 = draw();
        const Evaluator f2 = draw();
        const Evaluator f3 = draw();
        const double a =
            levelset_integral(f1, f2, f3, ell, 1, LevelSetMethod::boundary_param);
        const double c =
            levelset_integral(f1, f2, f3, ell, 1, LevelSetMethod::conv_param);
        worst = std::max(worst, std::fabs(a - c) / std::max(std::fabs(a), 1e-300));
    }
    const double secs = t.seconds();
    const bool ok = worst <= 1e-4 && secs < 60.0;
    return detail::make_result(
        "level-set cross-validation", ok,
        "worst rel " + detail::fmt(worst) + ", " + detail::fmt(secs) + " s", secs);
}

// 5. FR verification of the first-order figure-eight density
inline CheckResult check_fig8_density_fr(const SuiteConfig& cfg) {
    detail::Timer t;
    auto make_grid = [](int n) {
        std::vector<double> g(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            g[static_cast<std::size_t>(i)] = 6.0 + 34.0 * i / (n - 1.0);
        return g;
    };
    const Fig8DensityResult coarse =
        fig8_density_order1(make_grid(36), 2, cfg.workers);
    const Fig8DensityResult fine =
        fig8_density_order1(make_grid(72), 2, cfg.workers);
    const Polynomial diff = coarse.report.fitted_principal -
                            fine.report.fitted_principal;
    const double drift = diff.linf_norm() /
                         std::max(coarse.report.fitted_principal.linf_norm(), 1e-300);
    const bool ok = coarse.report.max_violation == 0.0 &&
                    coarse.report.fitted_exponent <= 4.0 &&
                    std::isfinite(coarse.report.fitted_constant) &&
                    fine.report.max_violation == 0.0 && drift <= 0.01;
    return detail::make_result(
        "figure-eight density is FR", ok,
        "exponent " + detail::fmt(coarse.report.fitted_exponent) + ", c1 " +
            detail::fmt(coarse.report.fitted_constant) + ", violation " +
            detail::fmt(coarse.report.max_violation) + ", refine drift " +
            detail::fmt(drift),
        t.seconds());
}

// 6. cancellation: m=1 bounded in L, m=0 grows like e^{L/2}
inline CheckResult check_cancellation(const SuiteConfig&) {
    detail::Timer t;
    TestKernel kernel(4);
    auto f = [](double l) { return 4.0 * std::pow(std::sinh(0.5 * l), 2); };
    std::vector<double> Ls = {10.0, 20.0, 30.0, 40.0};
    std::vector<double> v1, ratio0;
    for (double L : Ls) {
        ScaledKernel k(kernel, L);
        v1.push_back(cancellation_integral(f, 1, k, 1e-9));
        ratio0.push_back(cancellation_integral(f, 0, k, 1e-9) /
                         std::exp(0.5 * L));
    }
    double m1_max = 0.0;
    for (double v : v1) m1_max = std::max(m1_max, std::fabs(v));
    // exponential growth rates in L: ~0 for m=1 versus ~1/2 for m=0 (the
    // smooth cutoff shaves an e^{-c sqrt(L)} factor off the m=0 leading
    // term, so the rate sits slightly below 1/2 at finite L)
    const double rate1 =
        (std::log(std::fabs(v1.back())) - std::log(std::fabs(v1.front()))) /
        (Ls.back() - Ls.front());
    const double rate0 =
        (std::log(ratio0[3] * std::exp(0.5 * Ls[3])) -
         std::log(ratio0[2] * std::exp(0.5 * Ls[2]))) /
        (Ls[3] - Ls[2]);
    const bool ok = std::fabs(rate1) <= 0.05 && m1_max < 100.0 &&
                    ratio0.back() > 0.0 && rate0 >= 0.3 && rate0 <= 0.55;
    std::ostringstream os;
    os << "m=1 |values| <= " << detail::fmt(m1_max) << " (growth rate "
       << detail::fmt(rate1) << "), m=0 growth rate " << detail::fmt(rate0)
       << " with value/e^(L/2) = " << detail::fmt(ratio0.back()) << " at L=40";
    return detail::make_result("cancellation mechanism", ok, os.str(),
                               t.seconds());
}

// 7. D-annihilation, symbolic and finite-difference paths
inline CheckResult check_d_annihilation(const SuiteConfig&) {
    detail::Timer t;
    double worst_sym = 0.0, worst_fd = 0.0;
    for (int d = 0; d <= 2; ++d) {
        const Polynomial q = Polynomial::monomial(d);
        const Polynomial im = apply_D_exp_half(q, d + 1);
        auto f = [d](double l) { return std::pow(l, d) * std::exp(0.5 * l); };
        for (int i = 0; i < 50; ++i) {
            const double ell = 0.5 + 19.5 * i / 49.0;
            const double scale = (1.0 + std::pow(ell, d)) * std::exp(0.5 * ell);
            worst_sym = std::max(
                worst_sym, std::fabs(im(ell) * std::exp(0.5 * ell)) / scale);
            const double fd = apply_D_power_fd(f, d + 1, ell);
            worst_fd = std::max(worst_fd, std::fabs(fd) / scale);
        }
    }
    const bool ok = worst_sym <= 1e-10 && worst_fd <= 1e-5;
    return detail::make_result(
        "D-annihilation", ok,
        "symbolic " + detail::fmt(worst_sym) + ", finite-difference " +
            detail::fmt(worst_fd),
        t.seconds());
}

// 8. counting bound with cap stability
inline CheckResult check_counting_bound(const SuiteConfig& cfg) {
    detail::Timer t;
    const PantsRep rep = build_pants_rep(BoundaryLengths(2, 2, 2));
    auto count_primitives = [&](int cap) {
        EnumerateOptions opt;
        opt.workers = cfg.workers;
        const auto classes = enumerate_geodesics(rep, cap, 6.0, opt);
        std::size_t n = 0;
        for (const auto& g : classes)
            if (g.primitive) ++n;
        return n;
    };
    const std::size_t low = count_primitives(cfg.enum_word_cap_low);
    const std::size_t high = count_primitives(cfg.enum_word_cap_high);
    const double bound = 205.0 * std::exp(6.0);
    const bool ok = static_cast<double>(high) <= bound && low == high;
    return detail::make_result(
        "geodesic counting bound", ok,
        "count " + std::to_string(high) + " (cap " +
            std::to_string(cfg.enum_word_cap_low) + ": " + std::to_string(low) +
            ") <= " + detail::fmt(bound),
        t.seconds());
}

// 9. realisation enumeration vs brute force
inline CheckResult check_realisations(const SuiteConfig&) {
    detail::Timer t;
    bool ok = true;
    std::string note;
    for (int g = 3; g <= 8 && ok; ++g) {
        const auto rs = enumerate_realisations(FillingType(0, 2), g);
        if (static_cast<int>(rs.size()) != g) {
            ok = false;
            note = "|R_g((0,2))| = " + std::to_string(rs.size()) + " at g=" +
                   std::to_string(g);
        }
    }
    // independent brute force: label assignments i -> block, canonicalized
    // by first occurrence, crossed with all genus vectors in [0, g]^q
    auto brute_count = [](const FillingType& S, int g) {
        std::set<std::string> seen;
        const int n = S.n_S;
        std::vector<int> label(static_cast<std::size_t>(n), 0);
        std::size_t count = 0;
        for (;;) {
            // canonical? labels must appear in first-occurrence order 0,1,2,...
            int next_new = 0;
            bool canonical = true;
            for (int i = 0; i < n && canonical; ++i) {
                if (label[static_cast<std::size_t>(i)] > next_new) canonical = false;
                else if (label[static_cast<std::size_t>(i)] == next_new) ++next_new;
            }
            if (canonical) {
                const int q = next_new;
                std::vector<int> block_sizes(static_cast<std::size_t>(q), 0);
                for (int i = 0; i < n; ++i)
                    ++block_sizes[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])];
                const int total = g - S.g_S - S.n_S + q;
                if (total >= 0) {
                    std::vector<int> gv(static_cast<std::size_t>(q), 0);
                    for (;;) {
                        int sum = 0;
                        bool good = true;
                        for (int j = 0; j < q; ++j) {
                            sum += gv[static_cast<std::size_t>(j)];
                            good = good &&
                                   2 - 2 * gv[static_cast<std::size_t>(j)] -
                                           block_sizes[static_cast<std::size_t>(j)] <= 0;
                        }
                        if (good && sum == total) {
                            std::string key;
                            for (int i = 0; i < n; ++i)
                                key += static_cast<char>('0' + label[static_cast<std::size_t>(i)]);
                            key += '|';
                            for (int j = 0; j < q; ++j)
                                key += std::to_string(gv[static_cast<std::size_t>(j)]) + ",";
                            if (seen.insert(key).second) ++count;
                        }
                        int k = q - 1;
                        while (k >= 0 && gv[static_cast<std::size_t>(k)] == total) {
                            gv[static_cast<std::size_t>(k)] = 0;
                            --k;
                        }
                        if (k < 0) break;
                        ++gv[static_cast<std::size_t>(k)];
                    }
                }
            }
            int i = n - 1;
            while (i >= 0 && label[static_cast<std::size_t>(i)] == n - 1) {
                label[static_cast<std::size_t>(i)] = 0;
                --i;
            }
            if (i < 0) break;
            ++label[static_cast<std::size_t>(i)];
        }
        return count;
    };

    const std::vector<FillingType> types = {FillingType(0, 2), FillingType(0, 3),
                                            FillingType(1, 1)};
    for (const auto& S : types) {
        for (int g = S.g_S + S.n_S; g <= 8 && ok; ++g) {
            const auto rs = enumerate_realisations(S, g);
            const std::size_t brute = brute_count(S, g);
            if (brute != rs.size()) {
                ok = false;
                note = "brute force mismatch for (" + std::to_string(S.g_S) + "," +
                       std::to_string(S.n_S) + "), g=" + std::to_string(g);
                break;
            }
            for (const auto& r : rs) {
                if (realisation_rank(r, S) < -S.chi()) {
                    ok = false;
                    note = "rank below |chi_S|";
                    break;
                }
            }
            if (!rs[0].connected() ||
                realisation_rank(rs[0], S) != -S.chi()) {
                ok = false;
                note = "connected realisation not first or wrong rank";
            }
        }
    }
    if (ok) note = "counts match brute force; ranks >= |chi_S|";
    return detail::make_result("realisation enumeration", ok, note, t.seconds());
}

// 10. volume bounds for every tabulated signature
inline CheckResult check_volume_bounds(const SuiteConfig& cfg) {
    detail::Timer t;
    VolumeTable table;
    if (!cfg.volume_table_path.empty()) table.load_file(cfg.volume_table_path);
    bool ok = true;
    std::string note;
    std::size_t checked = 0;
    for (const auto& sig : table.signatures()) {
        const BoundCheckReport rep =
            bound_checks(table, sig.first, sig.second, 200, cfg.seed + 10);
        ++checked;
        if (!rep.power_bound_ok || !rep.exp_bound_ok) {
            ok = false;
            note = "violated at V_{" + std::to_string(sig.first) + "," +
                   std::to_string(sig.second) + "}";
            break;
        }
    }
    if (ok)
        note = std::to_string(checked) + " signatures x 200 samples, both bounds";
    return detail::make_result("volume bound suite", ok, note, t.seconds());
}

// 11. schedule table rows
inline CheckResult check_schedule(const SuiteConfig&) {
    detail::Timer t;
    const Schedule s0 = table_values_schedule(0);
    const Schedule s1 = table_values_schedule(1);
    const bool ok = s0.L_multiplier == 4.0 && s0.alpha == 0.25 &&
                    std::fabs(s0.gap - 3.0 / 16.0) < 1e-15 &&
                    s1.L_multiplier == 6.0 &&
                    std::fabs(s1.alpha - 1.0 / 6.0) < 1e-16 &&
                    std::fabs(s1.gap - 2.0 / 9.0) < 1e-15;
    return detail::make_result(
        "parameter schedule", ok,
        "K=0 -> (4, 1/4, 3/16); K=1 -> (6, 1/6, 2/9)", t.seconds());
}

// 12. torus-expectation sandwich and main-term scaling
inline CheckResult check_torus_expectation(const SuiteConfig&) {
    detail::Timer t;
    const double a0 = tor_sandwich_a0();
    bool sandwich = a0 > 0.0;
    for (int i = 1; i <= 400 && sandwich; ++i) {
        const double x = a0 * i / 400.0;
        const double mid = tor_expectation_integrand(x);
        sandwich = 0.5 * x <= mid * (1.0 + 1e-12) && mid <= x * (1.0 + 1e-12);
    }
    const double g = 100.0;
    const double ratio = 1.0 / (8.0 * kPi * kPi * g);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 40; ++i) {
        const double a = 0.01 + (a0 - 0.01) * i / 40.0;
        const double val = tor_expectation_main_term(a, ratio) / (a * a / g);
        lo = std::min(lo, val);
        hi = std::max(hi, val);
    }
    const double c1 = 1.0 / (32.0 * kPi * kPi);
    const double c2 = 1.0 / (16.0 * kPi * kPi);
    const bool ok = sandwich && lo >= c1 * (1.0 - 1e-9) && hi <= c2 * (1.0 + 1e-9) &&
                    lo > 0.0;
    return detail::make_result(
        "torus-expectation sandwich", ok,
        "a0 = " + detail::fmt(a0) + ", value/(a^2/g) in [" + detail::fmt(lo) +
            ", " + detail::fmt(hi) + "] within [" + detail::fmt(c1) + ", " +
            detail::fmt(c2) + "]",
        t.seconds());
}

inline SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
    SuiteResult res;
    res.suite = name;
    if (name == "trace-identities") {
        res.checks.push_back(check_fig8_trace_oracle(cfg));
        res.checks.push_back(check_iterated_recursion(cfg));
    } else if (name == "geometry") {
        res.checks.push_back(check_change_of_variables(cfg));
    } else if (name == "levelset") {
        res.checks.push_back(check_levelset_cross(cfg));
    } else if (name == "density-fr") {
        res.checks.push_back(check_fig8_density_fr(cfg));
    } else if (name == "cancellation") {
        res.checks.push_back(check_cancellation(cfg));
        res.checks.push_back(check_d_annihilation(cfg));
    } else if (name == "counting") {
        res.checks.push_back(check_counting_bound(cfg));
    } else if (name == "realisations") {
        res.checks.push_back(check_realisations(cfg));
    } else if (name == "volume-bounds") {
        res.checks.push_back(check_volume_bounds(cfg));
    } else if (name == "schedule") {
        res.checks.push_back(check_schedule(cfg));
    } else if (name == "torus") {
        res.checks.push_back(check_torus_expectation(cfg));
    } else {
        throw domain_error("unknown suite: " + name);
    }
    return res;
}

inline std::vector<std::string> all_suite_names() {
    return {"trace-identities", "geometry",     "levelset",      "density-fr",
            "cancellation",     "counting",     "realisations",  "volume-bounds",
            "schedule",         "torus"};
}

}  // namespace suites
}  // namespace wpfr
