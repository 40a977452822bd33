#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "wpfr/errors.hpp"

namespace wpfr {

// Adaptive Gauss-Kronrod (G7/K15) quadrature.
//
// All integrals in the library go through integrate(); tolerances are an
// (absolute, relative) pair and the error estimate of every panel is the
// usual |G7-K15| heuristic.

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_depth = 48;
    int min_depth = 0;  // panels above this depth may stop on the estimate
    std::size_t max_panels = 200000;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
    bool converged = true;
    double worst_panel_lo = 0.0;  // bounds of the least converged panel
    double worst_panel_hi = 0.0;
};

namespace detail {

// G7/K15 nodes and weights on [-1,1]; column 0 = node, 1 = Gauss weight,
// 2 = Kronrod weight.
inline constexpr double kGK15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.000000000000000, 0.204432940075298},
    {0.586087235467691, 0.000000000000000, 0.169004726639267},
    {0.864864423359769, 0.000000000000000, 0.104790010322250},
    {0.991455371120813, 0.000000000000000, 0.022935322010529},
};

template <class F>
inline void gk15_panel(const F& f, double a, double b, double& k15,
                       double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = kGK15[0][1] * f0;
    double k = kGK15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGK15[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += kGK15[i][1] * fi;
        k += kGK15[i][2] * fi;
    }
    g7 *= half;
    k *= half;
    k15 = k;
    const double diff = std::fabs(g7 - k);
    err = diff * std::sqrt(std::max(diff * 200.0, 0.0));
    if (!std::isfinite(err)) err = std::fabs(g7 - k);
}

}  // namespace detail

template <class F>
QuadResult integrate(const F& f, double a, double b,
                     const QuadOptions& opt = {}) {
    QuadResult res;
    if (a == b) return res;

    struct Panel {
        double a, b, value, error;
        int depth;
    };
    std::vector<Panel> stack;
    double v0, e0;
    detail::gk15_panel(f, a, b, v0, e0);
    stack.push_back({a, b, v0, e0, 0});

    double total = 0.0, total_err = 0.0;
    double worst_err = -1.0;
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        ++res.panels;
        const bool ok = p.depth >= opt.min_depth &&
                        (p.error <= opt.abs_tol ||
                         p.error <= opt.rel_tol * std::fabs(p.value));
        if (ok || p.depth >= opt.max_depth ||
            res.panels >= opt.max_panels) {
            total += p.value;
            total_err += p.error;
            if (!ok) {
                res.converged = false;
                if (p.error > worst_err) {
                    worst_err = p.error;
                    res.worst_panel_lo = p.a;
                    res.worst_panel_hi = p.b;
                }
            }
            continue;
        }
        const double mid = 0.5 * (p.a + p.b);
        double vl, el, vr, er;
        detail::gk15_panel(f, p.a, mid, vl, el);
        detail::gk15_panel(f, mid, p.b, vr, er);
        stack.push_back({p.a, mid, vl, el, p.depth + 1});
        stack.push_back({mid, p.b, vr, er, p.depth + 1});
    }
    res.value = total;
    res.error_estimate = total_err;
    return res;
}

// Throwing wrapper for call sites that have no use for a partial result.
template <class F>
double integrate_or_throw(const F& f, double a, double b,
                          const QuadOptions& opt = {},
                          const char* what = "integral") {
    const QuadResult r = integrate(f, a, b, opt);
    if (!r.converged) {
        throw numeric_error(std::string(what) +
                            ": quadrature did not converge, achieved error " +
                            std::to_string(r.error_estimate) +
                            ", worst panel [" +
                            std::to_string(r.worst_panel_lo) + ", " +
                            std::to_string(r.worst_panel_hi) + "]");
    }
    return r.value;
}

}  // namespace wpfr
