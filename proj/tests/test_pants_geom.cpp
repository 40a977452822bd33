#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "wpfr/pants_geom.hpp"

using namespace wpfr;

TEST_CASE("figure-eight length closed form") {
    // frozen: 2 acosh(2 cosh(1)^2 + cosh(1))
    CHECK(figure_eight_length(BoundaryLengths(2, 2, 2)) ==
          Catch::Approx(5.0563710812901065).epsilon(1e-12));
    // degenerate limit approaches 2 acosh(3)
    CHECK(figure_eight_length(BoundaryLengths(1e-9, 1e-9, 1e-9)) ==
          Catch::Approx(3.5254943480781721).epsilon(1e-8));
    // symmetric in l1 <-> l2
    CHECK(figure_eight_length(BoundaryLengths(1.3, 2.6, 0.8)) ==
          Catch::Approx(figure_eight_length(BoundaryLengths(2.6, 1.3, 0.8))));
    CHECK_THROWS_AS(BoundaryLengths(0.0, 1.0, 1.0), domain_error);
}

TEST_CASE("length floor constants coincide") {
    CHECK(ell0() == Catch::Approx(length_floor()).epsilon(1e-15));
}

TEST_CASE("iterated length") {
    const BoundaryLengths b(1, 1, 1);
    CHECK(iterated_length(b, 1) ==
          Catch::Approx(figure_eight_length(b)).epsilon(1e-13));
    // frozen direct evaluation
    CHECK(iterated_length(b, 2) ==
          Catch::Approx(5.3108757653424987).epsilon(1e-12));
    CHECK_THROWS_AS(iterated_length(b, 0), domain_error);

    SECTION("recursion identity at (2, 1.5, 2.5), j = 3") {
        const BoundaryLengths bb(2, 1.5, 2.5);
        const BoundaryLengths swapped(2.5, 1.5, 2.0);
        const double lhs = std::cosh(0.5 * iterated_length(bb, 3));
        const double rhs = 2.0 * std::cosh(1.0) * std::cosh(0.5 * 3 * 1.5) +
                           std::cosh(0.5 * iterated_length(swapped, 2));
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));
    }

    SECTION("log-domain path agrees with direct evaluation") {
        const BoundaryLengths big(2.0, 120.0, 2.0);  // j*l2 = 600 > 500
        const double log_path = iterated_length(big, 5);
        // direct path still representable at this size
        const double jd = 5.0;
        const double arg =
            (std::cosh(1.0) * std::sinh(0.5 * (jd + 1.0) * 120.0) +
             std::cosh(1.0) * std::sinh(0.5 * jd * 120.0)) /
            std::sinh(60.0);
        CHECK(log_path == Catch::Approx(2.0 * std::acosh(arg)).epsilon(1e-12));
        // far beyond double overflow for the direct formula
        const BoundaryLengths huge(2.0, 400.0, 2.0);
        CHECK(std::isfinite(iterated_length(huge, 5)));
        CHECK(iterated_length(huge, 5) > 1000.0);
    }
}

TEST_CASE("length ordering along the level set") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> uni(0.2, 6.0);
    for (int i = 0; i < 300; ++i) {
        const BoundaryLengths b(uni(rng), uni(rng), uni(rng));
        const double L = figure_eight_length(b);
        CHECK(b.l1 + b.l2 <= L + 1e-12);
        CHECK(b.l3 <= L + 1e-12);
    }
}

TEST_CASE("figure-eight infimum approaches 2 acosh(3) monotonically") {
    double prev = 1e300;
    for (double corner : {0.5, 0.25, 0.125, 0.0625}) {
        double inf = 1e300;
        for (int i = 1; i <= 8; ++i)
            for (int j = 1; j <= 8; ++j)
                for (int k = 1; k <= 8; ++k)
                    inf = std::min(inf, figure_eight_length(BoundaryLengths(
                                            corner * i / 8, corner * j / 8,
                                            corner * k / 8)));
        CHECK(inf > length_floor());
        CHECK(inf < prev);
        prev = inf;
    }
    CHECK(prev - length_floor() < 0.01);
}

TEST_CASE("domain membership tags") {
    CHECK(in_domain_E(ConvCoords(10, 10, 0.5), 1).inside);
    const DomainCheck first = in_domain_E(
        ConvCoords(2.0, 10.0, 1.0 / std::pow(std::cosh(1.0), 2) * 0.999), 1);
    CHECK_FALSE(first.inside);
    CHECK(first.violated == DomainConstraint::first_cuff);
    const DomainCheck third = in_domain_E(ConvCoords(1, 1, 0.999), 1);
    CHECK_FALSE(third.inside);
    CHECK(third.violated == DomainConstraint::third_boundary);
    CHECK_THROWS_AS(ConvCoords(1, 1, 1.2), domain_error);
}

TEST_CASE("coords of a boundary triple and back") {
    const BoundaryLengths b(2, 3, 4);
    for (int j : {1, 2, 3}) {
        const ConvCoords c = boundary_to_coords(b, j);
        CHECK(c.u > 0.0);
        CHECK(c.u < 1.0);
        CHECK(c.L1 + c.L2 ==
              Catch::Approx(iterated_length(b, j)).epsilon(1e-12));
        const BoundaryLengths back = coords_to_boundary(c, j);
        CHECK(back.l1 == Catch::Approx(2.0).margin(1e-9));
        CHECK(back.l2 == Catch::Approx(3.0).margin(1e-9));
        CHECK(back.l3 == Catch::Approx(4.0).margin(1e-9));
    }
    // symmetric input gives symmetric arcs
    const ConvCoords sym = boundary_to_coords(BoundaryLengths(2, 2, 3), 1);
    CHECK(sym.L1 == Catch::Approx(sym.L2).epsilon(1e-12));
    // u -> 1 limit: l_i -> L_i for i = 1,2 (arcs long enough to stay in E)
    const BoundaryLengths lim =
        coords_to_boundary(ConvCoords(22.0, 22.0, 1.0 - 1e-8), 1);
    CHECK(lim.l1 == Catch::Approx(22.0).margin(1e-6));
    CHECK(lim.l2 == Catch::Approx(22.0).margin(1e-6));
}

TEST_CASE("level-set consistency of the forward map") {
    std::mt19937_64 rng(866);
    std::uniform_real_distribution<double> uni(0.4, 5.0);
    for (int i = 0; i < 100; ++i) {
        const BoundaryLengths b(uni(rng), uni(rng), uni(rng));
        const ConvCoords c = boundary_to_coords(b, 1);
        const BoundaryLengths back = coords_to_boundary(c, 1);
        CHECK(figure_eight_length(back) ==
              Catch::Approx(c.L1 + c.L2).epsilon(1e-9));
    }
    CHECK_THROWS_AS(coords_to_boundary(ConvCoords(1, 1, 0.999), 1), domain_error);
}

TEST_CASE("jacobian closed form") {
    // frozen 50-digit evaluation at (4, 5, 0.5), j = 1
    CHECK(jacobian(ConvCoords(4, 5, 0.5), 1) ==
          Catch::Approx(8.8827340385133263).epsilon(1e-12));
    SECTION("finite differences, j = 2 at (4, 5, 0.4)") {
        const ConvCoords c(4, 5, 0.4);
        const double jac = jacobian(c, 2);
        const double h = 1e-5;
        auto comp = [&](double L1, double L2, double u, int k) {
            const BoundaryLengths bl = coords_to_boundary(ConvCoords(L1, L2, u), 2);
            return k == 0 ? bl.l1 : k == 1 ? bl.l2 : bl.l3;
        };
        double J[3][3];
        for (int k = 0; k < 3; ++k) {
            J[k][0] = (comp(c.L1 + h, c.L2, c.u, k) - comp(c.L1 - h, c.L2, c.u, k)) / (2 * h);
            J[k][1] = (comp(c.L1, c.L2 + h, c.u, k) - comp(c.L1, c.L2 - h, c.u, k)) / (2 * h);
            J[k][2] = (comp(c.L1, c.L2, c.u + h, k) - comp(c.L1, c.L2, c.u - h, k)) / (2 * h);
        }
        const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                           J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                           J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        CHECK(jac == Catch::Approx(std::fabs(det)).epsilon(1e-5));
        CHECK(jac > 0.0);
    }
}

TEST_CASE("domain parameters") {
    SECTION("pinch point at ell0") {
        const DomainParams p = domain_params(ell0(), 0.5);
        CHECK(p.u_minus == Catch::Approx(0.5).epsilon(1e-12));
        CHECK(p.u_plus == Catch::Approx(0.5).epsilon(1e-12));
        CHECK_FALSE(p.in_E1);
    }
    SECTION("frozen values") {
        CHECK(u_minus_of(8.0) == Catch::Approx(0.070650824853164466).epsilon(1e-12));
        CHECK(L_minus_inf_of(0.5) ==
              Catch::Approx(1.7627471740390861).epsilon(1e-12));
    }
    SECTION("L_minus dominates L_minus_inf on E_1, gap within the bound") {
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> uell(4.0, 40.0), uu(0.0, 1.0);
        double fitted = 0.0;
        int used = 0;
        for (int i = 0; i < 2000; ++i) {
            const double ell = uell(rng);
            const DomainParams lim = domain_params(ell, 0.5);
            const double u =
                lim.u_minus + (lim.u_plus - lim.u_minus) * uu(rng);
            const DomainParams p = domain_params(ell, u);
            if (!p.in_E1 || std::isnan(p.L_minus)) continue;
            CHECK(p.L_minus >= p.L_minus_inf - 1e-12);
            fitted = std::max(fitted, delta_Lmin_ratio(ell, u));
            ++used;
        }
        CHECK(used > 1500);
        CHECK(fitted < 10.0);  // one modest constant covers the sweep
    }
    SECTION("u above u_plus leaves no admissible L") {
        const DomainParams p = domain_params(8.0, 0.99);
        CHECK(std::isnan(p.L_minus));
        CHECK_FALSE(p.in_E1);
    }
}

TEST_CASE("expansion remainders") {
    SECTION("frozen value r(2, 0.5) = log(1 - e^-2)") {
        const ExpansionRemainders r = expansion_remainders(2.0, 0.5);
        CHECK(r.r == Catch::Approx(-0.14541345786885906).epsilon(1e-12));
    }
    SECTION("u -> 0 limit (L above L_minus_inf)") {
        const ExpansionRemainders r = expansion_remainders(25.0, 1e-8);
        CHECK(std::fabs(r.r) < 1e-15);
    }
    SECTION("domain errors") {
        CHECK_THROWS_AS(expansion_remainders(0.1, 0.999), domain_error);
    }
    SECTION("bound |r0| + |r| <= C l e^{-L} / (u (1-u)) on a sweep") {
        std::mt19937_64 rng(123);
        std::uniform_real_distribution<double> uell(4.0, 30.0), uu(0.0, 1.0);
        double fitted = 0.0;
        for (int i = 0; i < 2000; ++i) {
            const double ell = uell(rng);
            const DomainParams lim = domain_params(ell, 0.5);
            const double u = lim.u_minus + (lim.u_plus - lim.u_minus) * uu(rng);
            const DomainParams p = domain_params(ell, u);
            if (!p.in_E1 || std::isnan(p.L_minus)) continue;
            const double L = p.L_minus_inf + 0.3 + 0.5 * (0.5 * ell - p.L_minus_inf);
            if (L <= p.L_minus_inf || L >= 0.5 * ell) continue;
            const ExpansionRemainders r = expansion_remainders(L, u);
            const double scale = ell * std::exp(-L) / (u * (1.0 - u));
            fitted = std::max(fitted, (std::fabs(r.r0) + std::fabs(r.r)) / scale);
        }
        CHECK(fitted < 20.0);
    }
}

TEST_CASE("l3 expansion with remainder functions") {
    // |l3 - (L1 + L2 + 2 log(1-u) + r(L1,u) + r(L2,u))| <= C (L1+L2) e^{-l3/2}
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> uni(0.4, 6.0);
    double fitted = 0.0;
    int used = 0;
    for (int i = 0; i < 1000; ++i) {
        const BoundaryLengths b(uni(rng), uni(rng), uni(rng));
        const ConvCoords c = boundary_to_coords(b, 1);
        const ExpansionRemainders r1 = expansion_remainders(c.L1, c.u);
        const ExpansionRemainders r2 = expansion_remainders(c.L2, c.u);
        const double approx =
            c.L1 + c.L2 + 2.0 * std::log1p(-c.u) + r1.r + r2.r;
        const double err = std::fabs(b.l3 - approx);
        fitted = std::max(
            fitted, err / ((c.L1 + c.L2) * std::exp(-0.5 * b.l3)));
        ++used;
    }
    CHECK(used == 1000);
    CHECK(fitted < 30.0);
}

TEST_CASE("filling length inequalities") {
    const BoundaryLengths b(2, 2, 2);
    const double len = figure_eight_length(b);
    CHECK(double_fill_check(6.0, len, FillMode::filling));
    // the figure-eight is not double-filling: boundary exceeds length
    CHECK_FALSE(double_fill_check(6.0, len, FillMode::double_filling));
    CHECK(double_fill_check(1e-9, 3.5255, FillMode::filling));
    CHECK_THROWS_AS(double_fill_check(-1.0, 1.0, FillMode::filling), domain_error);
}

TEST_CASE("diffeomorphism property over random samples") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> uni(0.4, 5.0);
    for (int j : {1, 2, 3}) {
        double worst = 0.0;
        for (int i = 0; i < 200; ++i) {
            const BoundaryLengths b(uni(rng), uni(rng), uni(rng));
            const ConvCoords c = boundary_to_coords(b, j);
            const BoundaryLengths back = coords_to_boundary(c, j);
            worst = std::max({worst, std::fabs(back.l1 - b.l1),
                              std::fabs(back.l2 - b.l2), std::fabs(back.l3 - b.l3)});
        }
        CHECK(worst <= 1e-9);
    }
}
