#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "wpfr/errors.hpp"
#include "wpfr/finite_diff.hpp"
#include "wpfr/polynomial.hpp"
#include "wpfr/quadrature.hpp"

namespace wpfr {

// Smooth bump H(x) = exp(-1/(1-4x^2)) on (-1/2,1/2), zero elsewhere.
// Derivatives are exact: H^(k)(x) = P_k(x)/(1-4x^2)^{2k} * H(x) with the
// P_k generated by the recurrence
//   P_{k+1} = (1-4x^2) [ (1-4x^2) P_k' + 16 k x P_k ] - 8 x P_k.
class BumpKernel {
public:
    BumpKernel() {
        prefactors_.push_back(Polynomial::constant(1.0));
        QuadOptions q;
        q.abs_tol = 1e-14;
        q.rel_tol = 1e-12;
        normalization_ = integrate_or_throw(
            [this](double x) { return value(x); }, -0.5, 0.5, q, "bump mass");
    }

    double half_support() const { return 0.5; }
    double normalization() const { return normalization_; }

    double value(double x) const {
        const double s = 1.0 - 4.0 * x * x;
        if (s <= 0.0) return 0.0;
        return std::exp(-1.0 / s);
    }

    double derivative(double x, int order) const {
        if (order < 0) throw domain_error("BumpKernel: negative order");
        if (order == 0) return value(x);
        const double s = 1.0 - 4.0 * x * x;
        if (s <= 0.0) return 0.0;
        ensure_order(order);
        const double pk = prefactors_[static_cast<std::size_t>(order)](x);
        return pk * std::exp(-1.0 / s) / std::pow(s, 2 * order);
    }

private:
    void ensure_order(int order) const {
        const Polynomial one_minus(std::vector<double>{1.0, 0.0, -4.0});
        while (prefactors_.size() <= static_cast<std::size_t>(order)) {
            const int k = static_cast<int>(prefactors_.size()) - 1;
            const Polynomial& pk = prefactors_.back();
            Polynomial next =
                one_minus * (one_minus * pk.derivative() +
                             Polynomial({0.0, 16.0 * k}) * pk) -
                Polynomial({0.0, 8.0}) * pk;
            prefactors_.push_back(std::move(next));
        }
    }
    mutable std::vector<Polynomial> prefactors_;
    double normalization_ = 0.0;
};

inline BumpKernel make_bump() { return BumpKernel(); }

// h = H * H: smooth, even, >= 0, support exactly [-1,1], and
// h-hat = (H-hat)^2 >= 0 on R and on i[-1/2,1/2].
// Derivatives differentiate one convolution factor: h^(k) = H^(k) * H.
class TestKernel {
public:
    explicit TestKernel(int derivative_order_cap = 8)
        : cap_(derivative_order_cap) {
        if (cap_ < 1) throw domain_error("TestKernel: cap must be >= 1");
    }

    const BumpKernel& base() const { return bump_; }
    int derivative_order_cap() const { return cap_; }

    double value(double t) const { return derivative(t, 0); }

    double derivative(double t, int order) const {
        if (order < 0) throw domain_error("TestKernel: negative order");
        if (order > 2 * cap_)
            throw capability_error("TestKernel: derivative order " +
                                   std::to_string(order) + " over cap " +
                                   std::to_string(2 * cap_));
        if (std::fabs(t) >= 1.0) return 0.0;
        const double lo = std::max(-0.5, t - 0.5);
        const double hi = std::min(0.5, t + 0.5);
        if (lo >= hi) return 0.0;
        QuadOptions q;
        q.abs_tol = 1e-13;
        q.rel_tol = 1e-11;
        return integrate_or_throw(
            [&](double x) { return bump_.derivative(x, order) * bump_.value(t - x); },
            lo, hi, q, "kernel convolution");
    }

private:
    BumpKernel bump_;
    int cap_;
};

// h_L(l) = h(l / L), support [-L, L].
struct ScaledKernel {
    const TestKernel* kernel;
    double L;

    ScaledKernel(const TestKernel& k, double scale) : kernel(&k), L(scale) {
        if (!(scale >= 1.0)) throw domain_error("ScaledKernel: L must be >= 1");
    }

    double value(double ell) const { return kernel->value(ell / L); }
};

// k-th derivative of h_L: L^{-k} h^(k)(l/L).
inline double eval_hL_derivative(const ScaledKernel& k, double ell, int order) {
    return k.kernel->derivative(ell / k.L, order) / std::pow(k.L, order);
}

// (1/4 - d^2)^m h_L(l), binomial expansion over even derivatives.
inline double apply_D_power(const ScaledKernel& k, int m, double ell) {
    if (m < 0) throw domain_error("apply_D_power: m must be >= 0");
    if (m > k.kernel->derivative_order_cap())
        throw capability_error("apply_D_power: m over derivative cap");
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        acc += binom * std::pow(0.25, m - i) * sign *
               eval_hL_derivative(k, ell, 2 * i);
        binom *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    }
    return acc;
}

// Generic D^m on an arbitrary evaluator, via central finite differences.
// Order-2i derivatives use Fornberg stencils with 6 extra nodes.
inline double apply_D_power_fd(const std::function<double(double)>& f, int m,
                               double ell, double step = 0.1) {
    double acc = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= m; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        const double d = i == 0 ? f(ell)
                                : fd_derivative(f, ell, 2 * i, step, 2 * i + 7);
        acc += binom * std::pow(0.25, m - i) * sign * d;
        binom *= static_cast<double>(m - i) / static_cast<double>(i + 1);
    }
    return acc;
}

// Symbolic D on q(l) e^{l/2}:  D[q e^{l/2}] = -(q' + q'') e^{l/2}.
// Iterating m times annihilates polynomials of degree < m.
inline Polynomial apply_D_exp_half(const Polynomial& q, int m) {
    Polynomial cur = q;
    for (int i = 0; i < m; ++i) {
        const Polynomial d1 = cur.derivative();
        cur = (d1 + d1.derivative()) * -1.0;
    }
    return cur;
}

// h_L-hat(r) = 2L int_0^1 h(s) cos(r L s) ds, analytic in r; real on the
// real axis and on i[-1/2,1/2] since h is even.
inline std::complex<double> fourier_complex(const ScaledKernel& k,
                                            std::complex<double> r) {
    if (std::fabs(r.imag()) > 0.5 + 1e-12)
        throw domain_error("fourier: Im r must lie in [-1/2, 1/2]");
    QuadOptions q;
    q.abs_tol = 1e-12;
    q.rel_tol = 1e-10;
    const std::complex<double> arg = r * k.L;
    const double re = integrate_or_throw(
        [&](double s) {
            return k.kernel->value(s) * std::real(std::cos(arg * s));
        },
        0.0, 1.0, q, "fourier");
    const double im = integrate_or_throw(
        [&](double s) {
            return k.kernel->value(s) * std::imag(std::cos(arg * s));
        },
        0.0, 1.0, q, "fourier");
    return 2.0 * k.L * std::complex<double>(re, im);
}

inline double fourier(const ScaledKernel& k, std::complex<double> r) {
    return fourier_complex(k, r).real();
}

// C_{alpha,eps} = 2 int_a^1 h, a = (alpha+eps)/sqrt(alpha^2+eps), together
// with the check h_L-hat(i sqrt(alpha^2+eps)) >= C e^{(alpha+eps)L}.
struct GrowthBoundResult {
    double constant = 0.0;
    bool verified = false;
    std::vector<double> tested_L;
    std::vector<double> margins;  // lhs / (C e^{(alpha+eps)L})
};

inline GrowthBoundResult growth_bound_check(
    const TestKernel& kernel, double alpha, double eps,
    const std::vector<double>& test_L = {5.0, 10.0, 20.0, 40.0}) {
    if (!(alpha > 0.0 && alpha < 0.5))
        throw domain_error("growth_bound_check: alpha must be in (0,1/2)");
    if (!(eps > 0.0 && eps < 0.25 - alpha * alpha))
        throw domain_error("growth_bound_check: eps must be in (0, 1/4-alpha^2)");
    const double a = (alpha + eps) / std::sqrt(alpha * alpha + eps);
    QuadOptions q;
    q.abs_tol = 1e-12;
    q.rel_tol = 1e-10;
    GrowthBoundResult out;
    out.constant = 2.0 * integrate_or_throw(
                             [&](double s) { return kernel.value(s); }, a, 1.0,
                             q, "growth constant");
    out.verified = true;
    const double rate = std::sqrt(alpha * alpha + eps);
    for (double L : test_L) {
        ScaledKernel k(kernel, L);
        const double lhs = fourier(k, std::complex<double>(0.0, rate));
        const double rhs = out.constant * std::exp((alpha + eps) * L);
        out.tested_L.push_back(L);
        out.margins.push_back(lhs / rhs);
        if (!(lhs >= rhs)) out.verified = false;
    }
    return out;
}

// int_0^L f(l) e^{-l/2} D^m h_L(l) dl
inline double cancellation_integral(const std::function<double(double)>& f,
                                    int m, const ScaledKernel& k, double tol) {
    if (!(tol > 0.0)) throw domain_error("cancellation_integral: tol must be > 0");
    QuadOptions q;
    q.abs_tol = tol;
    q.rel_tol = tol;
    q.max_depth = 30;
    return integrate_or_throw(
        [&](double ell) {
            return f(ell) * std::exp(-0.5 * ell) * apply_D_power(k, m, ell);
        },
        0.0, k.L, q, "cancellation integral");
}

// Discrepancy of the integration-by-parts identity
//   int_0^L H1 D h_L = int_0^L (D H1) h_L - H1'(0) h_L(0) + H1(0) h_L'(0)
struct TwiceDifferentiable {
    std::function<double(double)> f, df, d2f;
};

inline double ibp_identity_check(const TwiceDifferentiable& H1,
                                 const ScaledKernel& k) {
    QuadOptions q;
    q.abs_tol = 1e-11;
    q.rel_tol = 1e-9;
    const double L = k.L;
    const double lhs = integrate_or_throw(
        [&](double ell) { return H1.f(ell) * apply_D_power(k, 1, ell); }, 0.0,
        L, q, "ibp lhs");
    const double rhs_int = integrate_or_throw(
        [&](double ell) {
            return (0.25 * H1.f(ell) - H1.d2f(ell)) * k.value(ell);
        },
        0.0, L, q, "ibp rhs");
    const double rhs =
        rhs_int - H1.df(0.0) * k.value(0.0) + H1.f(0.0) * eval_hL_derivative(k, 0.0, 1);
    return std::fabs(lhs - rhs);
}

}  // namespace wpfr
