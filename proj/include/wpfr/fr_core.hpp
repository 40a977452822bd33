#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wpfr/errors.hpp"
#include "wpfr/polynomial.hpp"
#include "wpfr/quadrature.hpp"

namespace wpfr {

// A function f(l) = p(l) e^l + r(l) with |r(l)| <= c1 (l+1)^{c2} e^{l/2}.
// The remainder is carried as an evaluator; the bound constants are
// certified numerically on a sample grid, not proved.
struct FRFunction {
    Polynomial principal;
    double constant = 0.0;   // c1 > 0 once certified
    double exponent = 0.0;   // c2 >= 0
    std::optional<std::function<double(double)>> remainder;

    bool has_remainder() const { return remainder.has_value(); }

    static FRFunction exact(Polynomial p) {
        FRFunction f;
        f.principal = std::move(p);
        f.constant = 0.0;
        f.exponent = 0.0;
        f.remainder = [](double) { return 0.0; };
        return f;
    }
};

struct FREvalResult {
    double value;
    bool principal_only;  // set when no remainder evaluator is attached
};

inline FREvalResult fr_eval(const FRFunction& f, double ell) {
    if (!(ell > 0.0)) throw domain_error("fr_eval: requires ell > 0");
    const double main = f.principal(ell) * std::exp(ell);
    if (!f.has_remainder()) return {main, true};
    return {main + (*f.remainder)(ell), false};
}

// ||f||_F := max |coefficient of p|; zero exactly on the remainder class.
inline double fr_seminorm(const FRFunction& f) { return f.principal.linf_norm(); }

inline std::vector<double> log_spaced_grid(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    const double a = std::log(lo), b = std::log(hi);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        g[i] = std::exp(a + (b - a) * t);
    }
    return g;
}

inline std::vector<double> default_certification_grid() {
    return log_spaced_grid(1.0, 60.0, 400);
}

// Given an exponent c2, the smallest c1 with |r| <= c1 (l+1)^{c2} e^{l/2}
// on the grid (plus a little headroom so nearby off-grid points stay
// covered).
inline double covering_constant(const std::function<double(double)>& r,
                                double c2, const std::vector<double>& grid,
                                double headroom = 1.05) {
    double c1 = 0.0;
    for (double ell : grid) {
        const double denom = std::pow(ell + 1.0, c2) * std::exp(0.5 * ell);
        c1 = std::max(c1, std::fabs(r(ell)) / denom);
    }
    return c1 * headroom;
}

inline FRFunction fr_linear_combination(double a, const FRFunction& f,
                                        double b, const FRFunction& g) {
    FRFunction out;
    out.principal = f.principal * a + g.principal * b;
    out.exponent = std::max(f.exponent, g.exponent);
    out.constant = std::fabs(a) * f.constant + std::fabs(b) * g.constant;
    if (f.has_remainder() && g.has_remainder()) {
        auto rf = *f.remainder;
        auto rg = *g.remainder;
        out.remainder = [a, b, rf, rg](double ell) {
            return a * rf(ell) + b * rg(ell);
        };
    }
    return out;
}

// f1 * f2 (l) = int_0^l f1(t) f2(l-t) dt.
//
// Decomposed as in the closure-under-convolution argument:
//   (p1 e)*(p2 e)          = (p1 . p2)(l) e^l              (exact)
//   (p1 e)* r2             = q12(l) e^l + rho12(l)
//   (p2 e)* r1             = q21(l) e^l + rho21(l)
//   r1 * r2                                     (plain quadrature)
// with q12_k = sum_a c_a binom(a,k)(-1)^{a-k} M_{a-k}[r2],
//      M_j[r] = int_0^inf t^j r(t) e^{-t} dt,
//      rho12(l) = -int_0^inf p1(-s) r2(l+s) e^{-s} ds.
// Computing the remainder from these pieces avoids the catastrophic
// cancellation of subtracting P(l)e^l from the full convolution at large l.
struct FRConvolveOptions {
    double quadrature_tol = 1e-10;
    double moment_cutoff = 80.0;  // integrands decay like e^{-t/2}
    std::vector<double> certification_grid = default_certification_grid();
};

namespace detail {

inline Polynomial crossed_polynomial(const Polynomial& p,
                                     const std::function<double(double)>& r,
                                     const FRConvolveOptions& opt,
                                     double* tail_bound) {
    if (p.is_zero()) return Polynomial();
    const int deg = *p.degree();
    // moments M_j = int_0^T t^j r(t) e^{-t} dt
    std::vector<double> moments(static_cast<std::size_t>(deg) + 1, 0.0);
    QuadOptions q;
    q.abs_tol = opt.quadrature_tol;
    q.rel_tol = opt.quadrature_tol;
    for (int j = 0; j <= deg; ++j) {
        moments[static_cast<std::size_t>(j)] = integrate_or_throw(
            [&](double t) { return std::pow(t, j) * r(t) * std::exp(-t); },
            0.0, opt.moment_cutoff, q, "convolve moment");
    }
    if (tail_bound) {
        // |r(t)| <= c (t+1)^c e^{t/2} makes the tail ~ T^deg e^{-T/2}
        *tail_bound = std::pow(opt.moment_cutoff, deg) *
                      std::exp(-0.5 * opt.moment_cutoff);
    }
    std::vector<double> out(static_cast<std::size_t>(deg) + 1, 0.0);
    const auto& c = p.coefficients();
    for (int k = 0; k <= deg; ++k) {
        double acc = 0.0;
        for (int a = k; a <= deg; ++a) {
            double binom = 1.0;
            for (int i = 0; i < k; ++i)
                binom *= static_cast<double>(a - i) / static_cast<double>(k - i);
            const int j = a - k;
            const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
            acc += c[static_cast<std::size_t>(a)] * binom * sgn *
                   moments[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(k)] = acc;
    }
    return Polynomial(std::move(out));
}

}  // namespace detail

inline FRFunction fr_convolve(const FRFunction& f1, const FRFunction& f2,
                              const FRConvolveOptions& opt = {}) {
    if (!f1.has_remainder() || !f2.has_remainder())
        throw domain_error("fr_convolve: both operands need a remainder evaluator");
    auto r1 = *f1.remainder;
    auto r2 = *f2.remainder;
    const Polynomial p1 = f1.principal;
    const Polynomial p2 = f2.principal;

    double tail = 0.0;
    const Polynomial q12 = detail::crossed_polynomial(p1, r2, opt, &tail);
    const Polynomial q21 = detail::crossed_polynomial(p2, r1, opt, nullptr);
    FRFunction out;
    out.principal = poly_convolve(p1, p2) + q12 + q21;

    QuadOptions q;
    q.abs_tol = opt.quadrature_tol;
    q.rel_tol = 1e-8;
    const double cutoff = opt.moment_cutoff;
    out.remainder = [p1, p2, r1, r2, q, cutoff](double ell) {
        // rho12 + rho21 + r1*r2, each O(poly * e^{l/2})
        double acc = 0.0;
        if (!p1.is_zero()) {
            acc -= integrate_or_throw(
                [&](double s) { return p1(-s) * r2(ell + s) * std::exp(-s); },
                0.0, cutoff, q, "convolve rho12");
        }
        if (!p2.is_zero()) {
            acc -= integrate_or_throw(
                [&](double s) { return p2(-s) * r1(ell + s) * std::exp(-s); },
                0.0, cutoff, q, "convolve rho21");
        }
        acc += integrate_or_throw(
            [&](double t) { return r1(t) * r2(ell - t); }, 0.0, ell, q,
            "convolve r1*r2");
        return acc;
    };
    // certified bound: exponent from the proof, constant measured on the grid
    out.exponent = f1.exponent + f2.exponent + 1.0;
    out.constant =
        covering_constant(*out.remainder, out.exponent, opt.certification_grid);
    return out;
}

// ---------------------------------------------------------------------------
// Empirical verification: fit samples of an unknown function to the
// p(l) e^l + c1 (l+1)^{c2} e^{l/2} shape.

struct FRReport {
    Polynomial fitted_principal;
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;
    double max_violation = 0.0;
    std::vector<double> grid;
};

struct FRFitOptions {
    double condition_limit = 1e12;
    // keep slope regression points with |residual| e^{-l/2} above this
    double residual_floor = 1e-280;
};

namespace detail {

// Least squares via normal equations with column equilibration; returns
// the solution and a crude condition estimate of the equilibrated system.
inline std::vector<double> solve_least_squares(
    const std::vector<std::vector<double>>& A, const std::vector<double>& b,
    double* condition) {
    const std::size_t rows = A.size();
    const std::size_t cols = rows ? A[0].size() : 0;
    std::vector<double> scale(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s = std::max(s, std::fabs(A[i][j]));
        scale[j] = s > 0.0 ? s : 1.0;
    }
    // N = (A D)^T (A D), rhs = (A D)^T b with D = diag(1/scale)
    std::vector<std::vector<double>> N(cols, std::vector<double>(cols, 0.0));
    std::vector<double> rhs(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const double aij = A[i][j] / scale[j];
            rhs[j] += aij * b[i];
            for (std::size_t k = j; k < cols; ++k)
                N[j][k] += aij * A[i][k] / scale[k];
        }
    }
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t k = 0; k < j; ++k) N[j][k] = N[k][j];

    // Gaussian elimination with partial pivoting; track pivot ratio.
    std::vector<std::vector<double>> M = N;
    std::vector<double> x = rhs;
    double piv_max = 0.0, piv_min = std::numeric_limits<double>::infinity();
    for (std::size_t col = 0; col < cols; ++col) {
        std::size_t p = col;
        for (std::size_t i = col + 1; i < cols; ++i)
            if (std::fabs(M[i][col]) > std::fabs(M[p][col])) p = i;
        std::swap(M[p], M[col]);
        std::swap(x[p], x[col]);
        const double d = M[col][col];
        piv_max = std::max(piv_max, std::fabs(d));
        piv_min = std::min(piv_min, std::fabs(d));
        if (d == 0.0) {
            if (condition) *condition = std::numeric_limits<double>::infinity();
            throw numeric_error("least squares: singular normal equations");
        }
        for (std::size_t i = col + 1; i < cols; ++i) {
            const double f = M[i][col] / d;
            for (std::size_t k = col; k < cols; ++k) M[i][k] -= f * M[col][k];
            x[i] -= f * x[col];
        }
    }
    for (std::size_t col = cols; col-- > 0;) {
        for (std::size_t k = col + 1; k < cols; ++k) x[col] -= M[col][k] * x[k];
        x[col] /= M[col][col];
    }
    if (condition) *condition = piv_min > 0.0 ? piv_max / piv_min
                                              : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cols; ++j) x[j] /= scale[j];
    return x;
}

}  // namespace detail

// Fit value ~ p(l) e^l + remainder from samples.
//  * principal: weighted least squares on the upper half of the grid,
//    rows (value - p(l) e^l) e^{-l/2}, i.e. weight e^{-l/2}. The degree is
//    selected as the smallest one (including the zero polynomial) whose
//    objective is within a fixed factor of the best over all degrees up to
//    the cap; otherwise pure-remainder data leaks into the principal.
//  * exponent/constant: log-log regression of |residual| e^{-l/2}
//    against (l+1), then the constant is raised to the smallest value
//    covering every grid point (so max_violation is 0 whenever the data
//    is consistent with the fitted exponent).
inline FRReport fr_fit(const std::vector<std::pair<double, double>>& samples,
                       int principal_degree_cap, const FRFitOptions& opt = {}) {
    const std::size_t n = samples.size();
    if (principal_degree_cap < 0)
        throw domain_error("fr_fit: negative degree cap");
    if (n < 2 * static_cast<std::size_t>(principal_degree_cap + 2))
        throw domain_error("fr_fit: need at least 2*(cap+2) samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(samples[i].first > samples[i - 1].first))
            throw domain_error("fr_fit: abscissae must be strictly increasing");
    if (samples.back().first - samples.front().first < 5.0)
        throw domain_error("fr_fit: grid must span at least 5 length units");

    const std::size_t lo = n / 2;  // principal fit uses the upper half
    const std::size_t rows = n - lo;
    std::vector<double> b(rows);
    std::vector<double> ells(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        ells[i] = samples[lo + i].first;
        b[i] = samples[lo + i].second * std::exp(-0.5 * ells[i]);
    }

    auto fit_degree = [&](int deg, double* sse, double* cond) {
        std::vector<double> coeffs;
        if (deg < 0) {
            double s = 0.0;
            for (double v : b) s += v * v;
            *sse = s;
            *cond = 1.0;
            return coeffs;
        }
        const std::size_t cols = static_cast<std::size_t>(deg) + 1;
        std::vector<std::vector<double>> A(rows, std::vector<double>(cols));
        for (std::size_t i = 0; i < rows; ++i) {
            const double w = std::exp(0.5 * ells[i]);  // l^k e^l times e^{-l/2}
            double pw = 1.0;
            for (std::size_t k = 0; k < cols; ++k) {
                A[i][k] = pw * w;
                pw *= ells[i];
            }
        }
        coeffs = detail::solve_least_squares(A, b, cond);
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double pred = 0.0;
            for (std::size_t k = 0; k < cols; ++k) pred += coeffs[k] * A[i][k];
            const double resid = b[i] - pred;
            s += resid * resid;
        }
        *sse = s;
        return coeffs;
    };

    // Degree selection: smallest degree whose objective is within a fixed
    // factor of the cap fit. A genuine principal term changes the objective
    // by e^l-sized factors; remainder-chasing never does.
    constexpr double kSelectFactor = 100.0;
    std::vector<double> sses(static_cast<std::size_t>(principal_degree_cap) + 2);
    std::vector<std::vector<double>> fits(sses.size());
    std::vector<double> conds(sses.size(), 1.0);
    for (int deg = -1; deg <= principal_degree_cap; ++deg) {
        const std::size_t idx = static_cast<std::size_t>(deg + 1);
        try {
            fits[idx] = fit_degree(deg, &sses[idx], &conds[idx]);
        } catch (const numeric_error&) {
            sses[idx] = std::numeric_limits<double>::infinity();
            conds[idx] = std::numeric_limits<double>::infinity();
        }
    }
    const double cap_sse = sses.back();
    std::size_t chosen = sses.size() - 1;
    for (std::size_t idx = 0; idx < sses.size(); ++idx) {
        if (sses[idx] <= kSelectFactor * cap_sse + 1e-300) {
            chosen = idx;
            break;
        }
    }
    if (!std::isfinite(conds[chosen]) || conds[chosen] > opt.condition_limit)
        throw numeric_error("fr_fit: ill-conditioned normal equations, condition ~ " +
                            std::to_string(conds[chosen]));

    FRReport rep;
    rep.fitted_principal = Polynomial(fits[chosen]);
    rep.grid.reserve(n);
    for (const auto& s : samples) rep.grid.push_back(s.first);

    // scaled residuals over the full grid
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ell = samples[i].first;
        const double resid =
            samples[i].second - rep.fitted_principal(ell) * std::exp(ell);
        scaled[i] = std::fabs(resid) * std::exp(-0.5 * ell);
    }
    // Exponent from the held-out lower half only: inside the fit window the
    // least-squares projection suppresses the residual, outside it the
    // remainder dominates and the slope is clean.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < lo; ++i) {
        if (scaled[i] < opt.residual_floor) continue;
        const double x = std::log(samples[i].first + 1.0);
        const double y = std::log(scaled[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    if (m >= 2 && sxx * m - sx * sx > 1e-12) {
        rep.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    } else {
        rep.fitted_exponent = 0.0;
    }
    double c1 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        c1 = std::max(c1, scaled[i] /
                              std::pow(samples[i].first + 1.0, rep.fitted_exponent));
    // a hair of headroom so the recomputed bound covers its own argmax
    rep.fitted_constant = c1 * (1.0 + 1e-12);
    double viol = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double bound = rep.fitted_constant *
                             std::pow(samples[i].first + 1.0, rep.fitted_exponent) *
                             std::exp(0.5 * samples[i].first);
        const double resid = scaled[i] * std::exp(0.5 * samples[i].first);
        viol = std::max(viol, std::max(0.0, resid - bound));
    }
    rep.max_violation = viol;
    return rep;
}

// Weak-sense check: grid-integrated violation
//   int |f - p e^l| / ((l+1)^{c2} e^{l/2}) dl <= c1  (trapezoid on the grid)
inline bool fr_weak_check(const std::vector<std::pair<double, double>>& samples,
                          const Polynomial& p, double c1, double c2,
                          double* integral_out = nullptr) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        auto g = [&](std::size_t k) {
            const double ell = samples[k].first;
            return std::fabs(samples[k].second - p(ell) * std::exp(ell)) /
                   (std::pow(ell + 1.0, c2) * std::exp(0.5 * ell));
        };
        acc += 0.5 * (g(i) + g(i + 1)) *
               (samples[i + 1].first - samples[i].first);
    }
    if (integral_out) *integral_out = acc;
    return acc <= c1;
}

// ---------------------------------------------------------------------------
// Serialization (key=value block and one CSV row)

inline std::string fr_report_keyvalue(const FRReport& r) {
    std::ostringstream os;
    os.precision(17);
    const auto& c = r.fitted_principal.coefficients();
    os << "deg=" << (c.empty() ? -1 : static_cast<int>(c.size()) - 1) << "\n";
    for (std::size_t i = 0; i < c.size(); ++i)
        os << "coeff" << i << "=" << c[i] << "\n";
    os << "c1=" << r.fitted_constant << "\n";
    os << "c2=" << r.fitted_exponent << "\n";
    os << "max_violation=" << r.max_violation << "\n";
    os << "grid_points=" << r.grid.size() << "\n";
    if (!r.grid.empty())
        os << "grid_min=" << r.grid.front() << "\n"
           << "grid_max=" << r.grid.back() << "\n";
    return os.str();
}

inline std::string fr_report_csv_row(const FRReport& r) {
    std::ostringstream os;
    os.precision(17);
    const auto& c = r.fitted_principal.coefficients();
    os << (c.empty() ? -1 : static_cast<int>(c.size()) - 1);
    for (double x : c) os << "," << x;
    os << "," << r.fitted_constant << "," << r.fitted_exponent << ","
       << r.max_violation;
    return os.str();
}

}  // namespace wpfr
