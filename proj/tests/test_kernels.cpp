#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wpfr/finite_diff.hpp"
#include "wpfr/kernels.hpp"

using namespace wpfr;

namespace {
// shared across the file: kernel construction does a few quadratures
const TestKernel& shared_kernel() {
    static TestKernel k(4);
    return k;
}
}  // namespace

TEST_CASE("bump values and mass") {
    const BumpKernel& H = shared_kernel().base();
    CHECK(H.value(0.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(H.value(0.5) == 0.0);
    CHECK(H.value(-0.5) == 0.0);
    CHECK(H.value(0.7) == 0.0);
    // frozen: adaptive quadrature of exp(-1/(1-4x^2)) over (-1/2,1/2)
    CHECK(H.normalization() == Catch::Approx(0.22199690808403972).epsilon(1e-10));
}

TEST_CASE("bump derivatives match finite differences") {
    const BumpKernel& H = shared_kernel().base();
    for (int order : {1, 2, 3, 4}) {
        for (double x : {-0.31, 0.0, 0.17, 0.42}) {
            const double exact = H.derivative(x, order);
            const double fd = fd_derivative(
                [&](double t) { return H.value(t); }, x, order, 2e-3, order + 7);
            CHECK(exact == Catch::Approx(fd).margin(1e-5 * (1.0 + std::fabs(exact))));
        }
    }
    // smooth vanishing at the support edge
    CHECK(H.derivative(0.5, 3) == 0.0);
}

TEST_CASE("h_L support and symmetry") {
    const ScaledKernel k(shared_kernel(), 10.0);
    CHECK(eval_hL_derivative(k, 10.5, 0) == 0.0);
    CHECK(eval_hL_derivative(k, -11.0, 0) == 0.0);
    CHECK(eval_hL_derivative(k, 0.0, 1) == Catch::Approx(0.0).margin(1e-12));
    CHECK(k.value(3.0) == Catch::Approx(k.value(-3.0)).epsilon(1e-12));
    CHECK(k.value(3.0) > 0.0);
    CHECK_THROWS_AS(ScaledKernel(shared_kernel(), 0.5), domain_error);
}

TEST_CASE("kernel derivatives against finite differences") {
    const ScaledKernel k(shared_kernel(), 10.0);
    const double exact = eval_hL_derivative(k, 5.0, 2);
    const double fd = fd_derivative(
        [&](double t) { return k.value(t); }, 5.0, 2, 1e-3, 9);
    CHECK(exact == Catch::Approx(fd).epsilon(1e-6));
    CHECK_THROWS_AS(eval_hL_derivative(k, 1.0, 100), capability_error);
}

TEST_CASE("apply_D_power basics and finite-difference agreement") {
    const ScaledKernel k(shared_kernel(), 10.0);
    CHECK(apply_D_power(k, 0, 3.0) == Catch::Approx(k.value(3.0)).epsilon(1e-12));
    CHECK(apply_D_power(k, 1, 11.0) == 0.0);
    CHECK(apply_D_power(k, 1, -12.0) == 0.0);

    const double exact = apply_D_power(k, 2, 3.0);
    const double fd = apply_D_power_fd([&](double t) { return k.value(t); }, 2,
                                       3.0, 0.02);
    CHECK(exact == Catch::Approx(fd).epsilon(1e-5));
    CHECK_THROWS_AS(apply_D_power(k, 50, 1.0), capability_error);
}

TEST_CASE("symbolic D annihilates low-degree exponential polynomials") {
    for (int d = 0; d <= 2; ++d) {
        const Polynomial out = apply_D_exp_half(Polynomial::monomial(d), d + 1);
        CHECK(out.linf_norm() <= 1e-12);
        // one power less is NOT annihilated
        if (d > 0) {
            const Polynomial partial =
                apply_D_exp_half(Polynomial::monomial(d), d);
            CHECK(partial.linf_norm() > 1e-6);
        }
    }
}

TEST_CASE("fourier transform values and scaling") {
    const TestKernel& kernel = shared_kernel();
    const ScaledKernel k5(kernel, 5.0);
    const ScaledKernel k1(kernel, 1.0);

    // r = 0: mass of h_L = L * (int H)^2
    const double mass = fourier(k5, {0.0, 0.0});
    const double hint = kernel.base().normalization();
    CHECK(mass == Catch::Approx(5.0 * hint * hint).epsilon(1e-8));

    // scaling law h_L-hat(r) = L h-hat(rL) at random r; the imaginary part
    // stays within strip for both sides of the identity (|Im rL| <= 1/2)
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ur(-3.0, 3.0);
    std::uniform_real_distribution<double> ui(-0.099, 0.099);
    for (int i = 0; i < 20; ++i) {
        const std::complex<double> r(ur(rng), ui(rng));
        const std::complex<double> lhs = fourier_complex(k5, r);
        const std::complex<double> rhs = 5.0 * fourier_complex(k1, r * 5.0);
        CHECK(std::abs(lhs - rhs) <=
              1e-8 * std::max(1.0, std::abs(lhs)));
    }

    // purely imaginary argument: positive, equals 2L int h cosh
    const double v = fourier(k5, {0.0, 0.3});
    QuadOptions q;
    q.abs_tol = 1e-12;
    const double direct = 2.0 * 5.0 *
        integrate_or_throw([&](double s) {
            return kernel.value(s) * std::cosh(0.3 * 5.0 * s);
        }, 0.0, 1.0, q);
    CHECK(v == Catch::Approx(direct).epsilon(1e-9));
    CHECK(v > 0.0);

    CHECK_THROWS_AS(fourier(k5, {0.0, 0.7}), domain_error);
}

TEST_CASE("fourier positivity on the axes") {
    const ScaledKernel k(shared_kernel(), 7.0);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ur(-50.0, 50.0);
    std::uniform_real_distribution<double> ui(-0.5, 0.5);
    for (int i = 0; i < 100; ++i) {
        CHECK(fourier(k, {ur(rng), 0.0}) >= -1e-10);
        CHECK(fourier(k, {0.0, ui(rng)}) >= -1e-10);
    }
}

TEST_CASE("growth bound") {
    const TestKernel& kernel = shared_kernel();
    SECTION("alpha = 1/4") {
        const GrowthBoundResult r = growth_bound_check(kernel, 0.25, 0.01);
        CHECK(r.constant > 0.0);
        CHECK(r.verified);
    }
    SECTION("the 2/9 regime alpha = 1/6") {
        const GrowthBoundResult r =
            growth_bound_check(kernel, 1.0 / 6.0, 0.005);
        CHECK(r.constant > 0.0);
        CHECK(r.verified);
    }
    SECTION("parameter validation") {
        CHECK_THROWS_AS(growth_bound_check(kernel, 0.6, 0.01), domain_error);
        CHECK_THROWS_AS(growth_bound_check(kernel, 0.25, 0.3), domain_error);
    }
}

TEST_CASE("cancellation integral simple cases") {
    const TestKernel& kernel = shared_kernel();
    const ScaledKernel k(kernel, 10.0);
    auto zero = [](double) { return 0.0; };
    CHECK(cancellation_integral(zero, 1, k, 1e-10) == 0.0);
    CHECK_THROWS_AS(cancellation_integral(zero, 1, k, -1.0), domain_error);

    // deg p < m: after integration by parts only boundary terms survive;
    // for f = e^l (p = 1), m = 1 the value is -(1/2) h_L(0) + remainder work
    auto exp_l = [](double l) { return std::exp(l); };
    const double v = cancellation_integral(exp_l, 1, k, 1e-10);
    CHECK(v == Catch::Approx(-0.5 * k.value(0.0)).epsilon(1e-7));
}

TEST_CASE("integration by parts identity") {
    const TestKernel& kernel = shared_kernel();
    SECTION("H1 = e^{l/2}, L = 10") {
        TwiceDifferentiable h1{[](double l) { return std::exp(0.5 * l); },
                               [](double l) { return 0.5 * std::exp(0.5 * l); },
                               [](double l) { return 0.25 * std::exp(0.5 * l); }};
        CHECK(ibp_identity_check(h1, ScaledKernel(kernel, 10.0)) <= 1e-8);
    }
    SECTION("H1 = 1") {
        TwiceDifferentiable h1{[](double) { return 1.0; },
                               [](double) { return 0.0; },
                               [](double) { return 0.0; }};
        CHECK(ibp_identity_check(h1, ScaledKernel(kernel, 6.0)) <= 1e-8);
    }
    SECTION("H1 = l, L = 20") {
        TwiceDifferentiable h1{[](double l) { return l; },
                               [](double) { return 1.0; },
                               [](double) { return 0.0; }};
        CHECK(ibp_identity_check(h1, ScaledKernel(kernel, 20.0)) <= 1e-8);
    }
}

TEST_CASE("cancellation growth law over certified FR inputs") {
    // |integral| <= C_m (||f|| + c1 (L+1)^{c2+1}) with one fitted C_m
    const TestKernel& kernel = shared_kernel();
    auto f = [](double l) { return 4.0 * std::pow(std::sinh(0.5 * l), 2); };
    const double norm = 1.0, c1 = 2.0, c2 = 0.0;
    double cm = 0.0;
    std::vector<double> margins;
    for (double L : {10.0, 20.0, 30.0, 40.0}) {
        const ScaledKernel k(kernel, L);
        const double v = std::fabs(cancellation_integral(f, 1, k, 1e-9));
        margins.push_back(v / (norm + c1 * (L + 1.0)));
        cm = std::max(cm, margins.back());
    }
    CHECK(cm < 1.0);  // a single modest constant works across all L
}
