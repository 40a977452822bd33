#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wpfr/errors.hpp"
#include "wpfr/fr_core.hpp"
#include "wpfr/pants_geom.hpp"
#include "wpfr/parallel.hpp"
#include "wpfr/quadrature.hpp"
#include "wpfr/wp_volumes.hpp"

namespace wpfr {

// ---------------------------------------------------------------------------
// Realisations: ways of gluing complementary pieces onto the boundary of a
// filled subsurface of signature (g_S, n_S) inside genus g.

struct FillingType {
    int g_S, n_S;

    FillingType(int g, int n) : g_S(g), n_S(n) {
        if (g < 0 || n < 0 || 2 * g - 2 + n < 0)
            throw domain_error("FillingType: need 2g-2+n >= 0");
    }
    int chi() const { return 2 - 2 * g_S - n_S; }
};

struct Realisation {
    // partition of {0..n_S-1}, blocks ordered by minimum element
    std::vector<std::vector<int>> partition;
    std::vector<int> genera;

    int block_count() const { return static_cast<int>(partition.size()); }
    bool connected() const { return partition.size() == 1; }
};

namespace detail {

// all set partitions of {0..n-1}, blocks ordered by min element
inline void set_partitions_rec(int n, int next,
                               std::vector<std::vector<int>>& cur,
                               std::vector<std::vector<std::vector<int>>>& out) {
    if (next == n) {
        out.push_back(cur);
        return;
    }
    // index-based: the recursion grows `cur`, which invalidates references
    const std::size_t blocks = cur.size();
    for (std::size_t bi = 0; bi < blocks; ++bi) {
        cur[bi].push_back(next);
        set_partitions_rec(n, next + 1, cur, out);
        cur[bi].pop_back();
    }
    cur.push_back({next});
    set_partitions_rec(n, next + 1, cur, out);
    cur.pop_back();
}

inline std::vector<std::vector<std::vector<int>>> set_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::vector<int>> cur;
    set_partitions_rec(n, 0, cur, out);
    return out;
}

// compositions of total into q nonnegative parts
inline void compositions_rec(int total, int parts, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur.push_back(v);
        compositions_rec(total - v, parts - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

// Complete enumeration of R_g(S); the connected realisation comes first.
// Constraints: chi_j = 2 - 2 g_j - n_j <= 0 for every block and
// sum g_j + g_S + n_S - q = g.
inline std::vector<Realisation> enumerate_realisations(const FillingType& S,
                                                       int g) {
    if (g < S.g_S + S.n_S)
        throw domain_error("enumerate_realisations: g too small for connected "
                           "realisation");
    std::vector<Realisation> out;
    Realisation connected;
    connected.partition.push_back({});
    for (int i = 0; i < S.n_S; ++i) connected.partition[0].push_back(i);
    connected.genera.push_back(g - S.g_S - S.n_S + 1);
    out.push_back(connected);

    for (const auto& part : detail::set_partitions(S.n_S)) {
        const int q = static_cast<int>(part.size());
        if (q == 1) continue;  // connected handled above
        const int genus_total = g - S.g_S - S.n_S + q;
        if (genus_total < 0) continue;
        std::vector<std::vector<int>> gvecs;
        std::vector<int> cur;
        detail::compositions_rec(genus_total, q, cur, gvecs);
        for (const auto& gv : gvecs) {
            bool ok = true;
            for (int j = 0; j < q && ok; ++j) {
                const int nj = static_cast<int>(part[static_cast<std::size_t>(j)].size());
                ok = 2 - 2 * gv[static_cast<std::size_t>(j)] - nj <= 0;
            }
            if (!ok) continue;
            Realisation r;
            r.partition = part;
            r.genera = gv;
            out.push_back(std::move(r));
        }
    }
    return out;
}

// rank = |chi_S| + sum_{j != j+} |chi_j| with j+ of maximal |chi_j|
// (lowest index on ties)
inline int realisation_rank(const Realisation& r, const FillingType& S) {
    int best = -1, best_idx = 0;
    std::vector<int> abschi(r.partition.size());
    for (std::size_t j = 0; j < r.partition.size(); ++j) {
        const int nj = static_cast<int>(r.partition[j].size());
        const int chi = 2 - 2 * r.genera[j] - nj;
        abschi[j] = -chi;
        if (abschi[j] > best) {
            best = abschi[j];
            best_idx = static_cast<int>(j);
        }
    }
    int rank = -S.chi();
    for (std::size_t j = 0; j < abschi.size(); ++j)
        if (static_cast<int>(j) != best_idx) rank += abschi[j];
    return rank;
}

// ---------------------------------------------------------------------------
// Densities

// phi_g^{(0,2)} on the diagonal:
//   (x / V_g) [ V_{g-1,2}(x,x) + sum_{i=1}^{g-1} V_{i,1}(x) V_{g-i,1}(x) ]
inline double phi_simple(double x, int g, const VolumeTable& table) {
    if (!(x >= 0.0)) throw domain_error("phi_simple: x must be >= 0");
    std::vector<std::string> missing;
    auto need = [&](int gg, int nn) {
        if (!table.contains(gg, nn))
            missing.push_back("V_{" + std::to_string(gg) + "," +
                              std::to_string(nn) + "}");
    };
    need(g, 0);
    need(g - 1, 2);
    for (int i = 1; i <= g - 1; ++i) {
        need(i, 1);
        need(g - i, 1);
    }
    if (!missing.empty()) {
        std::string msg = "phi_simple: missing volume entries:";
        for (const auto& s : missing) msg += " " + s;
        throw data_error(msg);
    }
    const double vg = table.get(g, 0)({});
    double acc = table.get(g - 1, 2)({x, x});
    for (int i = 1; i <= g - 1; ++i)
        acc += table.get(i, 1)({x}) * table.get(g - i, 1)({x});
    return x * acc / vg;
}

// large-g limit of g * (connected-realisation pants density):
//   (1/(8 pi^2)) prod_i 2 sinh(x_i/2)
inline double leading_density_pants(double x1, double x2, double x3) {
    if (!(x1 > 0.0 && x2 > 0.0 && x3 > 0.0))
        throw domain_error("leading_density_pants: lengths must be positive");
    return (2.0 * std::sinh(0.5 * x1)) * (2.0 * std::sinh(0.5 * x2)) *
           (2.0 * std::sinh(0.5 * x3)) / (8.0 * kPi * kPi);
}

// ---------------------------------------------------------------------------
// Level-set integrals
//   I[f1,f2,f3](l) = iint_{L_j(l1,l2,l3)=l} prod f_i(l_i) sinh(l_i/2)
//                    dl1 dl2 dl3 / dl
// via two independent parametrizations (mutual oracles).

enum class LevelSetMethod { boundary_param, conv_param };

struct LevelSetOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-11;
    int j = 1;
};

using Evaluator = std::function<double(double)>;

namespace detail {

// boundary parametrization, j = 1: solving l3 from the level condition
// cancels the sinh(l3/2) factor,
//   I = sinh(l/2) iint_D f1 f2 f3(l3) sinh(l1/2) sinh(l2/2) dl1 dl2,
//   D = { 2 cosh(l1/2) cosh(l2/2) + 1 < cosh(l/2) }.
inline double levelset_boundary_j1(const Evaluator& f1, const Evaluator& f2,
                                   const Evaluator& f3, double ell,
                                   const LevelSetOptions& opt) {
    const double chl = std::cosh(0.5 * ell);
    const double l1_max = 2.0 * std::acosh(0.5 * (chl - 1.0));
    QuadOptions outer;
    outer.rel_tol = opt.rel_tol;
    outer.abs_tol = opt.abs_tol;
    QuadOptions inner;
    inner.rel_tol = opt.rel_tol * 0.1;
    inner.abs_tol = opt.abs_tol * 0.1;
    const double val = integrate_or_throw(
        [&](double l1) {
            const double c1 = std::cosh(0.5 * l1);
            const double cap = (chl - 1.0) / (2.0 * c1);
            if (cap <= 1.0) return 0.0;
            const double l2_max = 2.0 * std::acosh(cap);
            return integrate_or_throw(
                       [&](double l2) {
                           const double arg =
                               chl - 2.0 * c1 * std::cosh(0.5 * l2);
                           if (arg <= 1.0) return 0.0;
                           const double l3 = 2.0 * std::acosh(arg);
                           return f1(l1) * f2(l2) * f3(l3) *
                                  std::sinh(0.5 * l1) * std::sinh(0.5 * l2);
                       },
                       0.0, l2_max, inner, "level-set inner") ;
        },
        0.0, l1_max, outer, "level-set outer");
    return std::sinh(0.5 * ell) * val;
}

// boundary parametrization, j >= 2: the level condition is
//   cosh(l/2) sinh(l2/2) = cosh(l1/2) sinh((j+1)l2/2) + cosh(l3/2) sinh(j l2/2)
// and dl3/dl carries the extra factor sinh(l2/2)/sinh(j l2/2).
inline double levelset_boundary_jge2(const Evaluator& f1, const Evaluator& f2,
                                     const Evaluator& f3, double ell, int j,
                                     const LevelSetOptions& opt) {
    const double chl = std::cosh(0.5 * ell);
    // l2 range: cosh(l/2) sinh(l2/2) > sinh((j+1)l2/2) + sinh(j l2/2)
    auto l2_ok = [&](double l2) {
        return chl * std::sinh(0.5 * l2) >
               std::sinh(0.5 * (j + 1.0) * l2) + std::sinh(0.5 * j * l2);
    };
    if (!l2_ok(1e-8)) return 0.0;
    double lo = 1e-8, hi = ell / j + 1.0;
    while (l2_ok(hi)) hi += 1.0;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (l2_ok(mid) ? lo : hi) = mid;
    }
    const double l2_max = lo;
    QuadOptions outer;
    outer.rel_tol = opt.rel_tol;
    outer.abs_tol = opt.abs_tol;
    QuadOptions inner;
    inner.rel_tol = opt.rel_tol * 0.1;
    inner.abs_tol = opt.abs_tol * 0.1;
    const double val = integrate_or_throw(
        [&](double l2) {
            const double s2 = std::sinh(0.5 * l2);
            const double sj = std::sinh(0.5 * j * l2);
            const double sj1 = std::sinh(0.5 * (j + 1.0) * l2);
            const double cap = (chl * s2 - sj) / sj1;
            if (cap <= 1.0) return 0.0;
            const double l1_max = 2.0 * std::acosh(cap);
            const double inner_val = integrate_or_throw(
                [&](double l1) {
                    const double arg =
                        (chl * s2 - std::cosh(0.5 * l1) * sj1) / sj;
                    if (arg <= 1.0) return 0.0;
                    const double l3 = 2.0 * std::acosh(arg);
                    return f1(l1) * f3(l3) * std::sinh(0.5 * l1);
                },
                0.0, l1_max, inner, "level-set inner");
            return f2(l2) * s2 * (s2 / sj) * inner_val;
        },
        1e-8, l2_max, outer, "level-set outer");
    return std::sinh(0.5 * ell) * val;
}

// Endpoint-avoiding reparametrization of an interval: a smoothstep map
// whose derivative vanishes at both ends tames the integrable sqrt/log
// behaviour of the integrand at the boundary of E.
template <class F>
double integrate_smoothstep(const F& f, double a, double b,
                            const QuadOptions& q, const char* what) {
    const double span = b - a;
    return integrate_or_throw(
        [&](double t) {
            const double w = t * t * (3.0 - 2.0 * t);
            return f(a + span * w) * span * 6.0 * t * (1.0 - t);
        },
        0.0, 1.0, q, what);
}

// convolution parametrization:
//   I = sinh^2(l/2) int_u int_L prod f_i(l_i(L, l-L, u)) s_j(l2) dL du
// with s_1 = 1 and s_j = sinh^2(l2/2)/(j sinh^2(j l2/2)).
inline double levelset_conv(const Evaluator& f1, const Evaluator& f2,
                            const Evaluator& f3, double ell, int j,
                            const LevelSetOptions& opt) {
    if (ell <= length_floor()) return 0.0;
    const double um = u_minus_of(ell), up = u_plus_of(ell);
    QuadOptions outer;
    outer.rel_tol = opt.rel_tol;
    outer.abs_tol = opt.abs_tol;
    outer.min_depth = 5;  // boundary layers hide from coarse estimates
    QuadOptions inner;
    inner.rel_tol = opt.rel_tol * 0.1;
    inner.abs_tol = opt.abs_tol * 0.1;
    inner.min_depth = 3;

    auto integrand_L = [&](double L, double u) {
        const ConvCoords c(L, ell - L, u);
        if (!in_domain_E(c, j).inside) return 0.0;
        const double su = std::sqrt(u);
        const double l1 = 2.0 * std::acosh(su * std::cosh(0.5 * c.L1));
        const double l2 = 2.0 / j * std::acosh(su * std::cosh(0.5 * c.L2));
        const double ch3 = cosh_half_l3(c, j);
        if (ch3 <= 1.0) return 0.0;
        const double l3 = 2.0 * std::acosh(ch3);
        double scale = 1.0;
        if (j >= 2) {
            const double s = std::sinh(0.5 * l2) / std::sinh(0.5 * j * l2);
            scale = s * s / j;
        }
        return f1(l1) * f2(l2) * f3(l3) * scale;
    };

    const double val = integrate_smoothstep(
        [&](double u) {
            // admissible L interval at this u
            double L_lo, L_hi;
            if (j == 1) {
                const DomainParams p = domain_params(ell, u);
                if (std::isnan(p.L_minus) || !p.in_E1) return 0.0;
                L_lo = p.L_minus;
                L_hi = ell - p.L_minus;
            } else {
                // locate the interval numerically from the domain test
                auto inside = [&](double L) {
                    if (L <= 0.0 || L >= ell) return false;
                    return in_domain_E(ConvCoords(L, ell - L, u), j).inside;
                };
                const double mid = 0.5 * ell;
                double probe = mid;
                if (!inside(probe)) {
                    // scan for an inside point
                    bool found = false;
                    for (int k = 1; k < 64 && !found; ++k) {
                        probe = ell * k / 64.0;
                        found = inside(probe);
                    }
                    if (!found) return 0.0;
                }
                double a = 0.0, bnd = probe;
                for (int i = 0; i < 80; ++i) {
                    const double m = 0.5 * (a + bnd);
                    (inside(m) ? bnd : a) = m;
                }
                L_lo = bnd;
                a = probe;
                bnd = ell;
                for (int i = 0; i < 80; ++i) {
                    const double m = 0.5 * (a + bnd);
                    (inside(m) ? a : bnd) = m;
                }
                L_hi = a;
            }
            if (!(L_hi > L_lo)) return 0.0;
            return integrate_smoothstep(
                [&](double L) { return integrand_L(L, u); }, L_lo, L_hi, inner,
                "conv inner");
        },
        um, up, outer, "conv outer");
    const double sh = std::sinh(0.5 * ell);
    return sh * sh * val;
}

}  // namespace detail

inline double levelset_integral(const Evaluator& f1, const Evaluator& f2,
                                const Evaluator& f3, double ell, int j,
                                LevelSetMethod method,
                                const LevelSetOptions& opt_in = {}) {
    if (j < 1) throw domain_error("levelset_integral: j must be >= 1");
    LevelSetOptions opt = opt_in;
    opt.j = j;
    if (ell <= length_floor()) return 0.0;  // empty level set
    if (method == LevelSetMethod::conv_param)
        return detail::levelset_conv(f1, f2, f3, ell, j, opt);
    if (j == 1) return detail::levelset_boundary_j1(f1, f2, f3, ell, opt);
    return detail::levelset_boundary_jge2(f1, f2, f3, ell, j, opt);
}

// One-dimensional constrained level-set integrals (the Dirac V_{0,2}
// convention collapses one variable analytically before quadrature):
//   1:  l2 = l3,  cosh(l/2) = cosh(l2/2)(2 cosh(l1/2) + 1), integrate f(l1)
//   2:  l1 = l3,  cosh(l/2) = cosh(l3/2)(2 cosh(l2/2) + 1), integrate f(l2)
//   3:  l1 = l2,  cosh(l/2) = 2 cosh^2(l1/2) + cosh(l3/2),  integrate f(l3)
inline double levelset_tor_integral(int variant, const Evaluator& f,
                                    double ell,
                                    const LevelSetOptions& opt_in = {}) {
    if (variant < 1 || variant > 3)
        throw domain_error("levelset_tor_integral: variant must be 1, 2 or 3");
    if (ell <= length_floor()) return 0.0;
    QuadOptions q;
    q.rel_tol = opt_in.rel_tol;
    q.abs_tol = opt_in.abs_tol;
    const double chl = std::cosh(0.5 * ell);
    const double sh = std::sinh(0.5 * ell);

    if (variant == 1) {
        // parametrize by l2; dl1/dl = sinh(l/2)/(2 sinh(l1/2) cosh(l2/2))
        if (chl <= 3.0) return 0.0;
        const double l2_max = 2.0 * std::acosh(chl / 3.0);
        return integrate_or_throw(
            [&](double l2) {
                const double c2 = std::cosh(0.5 * l2);
                const double arg = 0.5 * (chl / c2 - 1.0);
                if (arg <= 1.0) return 0.0;
                const double l1 = 2.0 * std::acosh(arg);
                return f(l1) * l2 * sh / (2.0 * c2);
            },
            0.0, l2_max, q, "tor variant 1");
    }
    if (variant == 2) {
        // parametrize by l3; dl2/dl = sinh(l/2)/(2 cosh(l3/2) sinh(l2/2))
        if (chl <= 3.0) return 0.0;
        const double l3_max = 2.0 * std::acosh(chl / 3.0);
        return integrate_or_throw(
            [&](double l3) {
                const double c3 = std::cosh(0.5 * l3);
                const double arg = 0.5 * (chl / c3 - 1.0);
                if (arg <= 1.0) return 0.0;
                const double l2 = 2.0 * std::acosh(arg);
                return f(l2) * l3 * sh / (2.0 * c3);
            },
            0.0, l3_max, q, "tor variant 2");
    }
    // variant 3: parametrize by l1; dl3/dl = sinh(l/2)/sinh(l3/2),
    // the sinh(l3/2) cancels against the measure factor
    if (chl <= 3.0) return 0.0;
    const double l1_max = 2.0 * std::acosh(std::sqrt(0.5 * (chl - 1.0)));
    return integrate_or_throw(
        [&](double l1) {
            const double c1 = std::cosh(0.5 * l1);
            const double arg = chl - 2.0 * c1 * c1;
            if (arg <= 1.0) return 0.0;
            const double l3 = 2.0 * std::acosh(arg);
            return f(l3) * l1 * sh;
        },
        0.0, l1_max, q, "tor variant 3");
}

// ---------------------------------------------------------------------------
// First-order figure-eight density: the level-set integral of the leading
// pants density divided by the type multiplicity (1 for the figure-eight,
// supplied as data rather than computed),
//   f1_eight(l) = (1/(m pi^2)) I[1,1,1](l),
// computed in the convolution parametrization and then FR-fitted.
struct DensityCurve {
    std::vector<double> grid;
    std::vector<double> values;
    std::string order_tag = "order1";
};

struct Fig8DensityResult {
    DensityCurve curve;
    FRReport report;
};

inline Fig8DensityResult fig8_density_order1(const std::vector<double>& grid,
                                             int principal_degree_cap = 2,
                                             unsigned workers = 1,
                                             const LevelSetOptions& opt = {},
                                             double multiplicity = 1.0) {
    if (!(multiplicity > 0.0))
        throw domain_error("fig8_density_order1: multiplicity must be positive");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= length_floor() || grid[i] > 60.0)
            throw domain_error(
                "fig8_density_order1: grid must lie in (2 acosh(3), 60]");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw domain_error("fig8_density_order1: grid must increase");
    }
    auto one = [](double) { return 1.0; };
    const std::vector<double> values = parallel_map<double>(
        grid.size(), workers, [&](std::size_t i) {
            return levelset_integral(one, one, one, grid[i], 1,
                                     LevelSetMethod::conv_param, opt) /
                   (multiplicity * kPi * kPi);
        });
    Fig8DensityResult out;
    out.curve.grid = grid;
    out.curve.values = values;
    std::vector<std::pair<double, double>> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        samples[i] = {grid[i], values[i]};
    out.report = fr_fit(samples, principal_degree_cap);
    return out;
}

}  // namespace wpfr
