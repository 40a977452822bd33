#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "wpfr/wp_volumes.hpp"

using namespace wpfr;

namespace {
std::string data_path(const std::string& name) {
    return std::string(WPFR_DATA_DIR) + "/" + name;
}

const VolumeTable& full_table() {
    static VolumeTable table = [] {
        VolumeTable t;
        t.load_file(data_path("volumes.txt"));
        return t;
    }();
    return table;
}
}  // namespace

TEST_CASE("built-in volumes") {
    VolumeTable table;
    CHECK(volume(table, 0, 3, {1.0, 2.0, 3.0}) == 1.0);
    CHECK(volume(table, 1, 1, {0.0}) ==
          Catch::Approx(kPi * kPi / 12.0).epsilon(1e-14));
    CHECK(volume(table, 1, 1, {2.0}) ==
          Catch::Approx(kPi * kPi / 12.0 + 4.0 / 48.0).epsilon(1e-14));
    CHECK_THROWS_AS(volume(table, 5, 1, {1.0}), data_error);
    CHECK_THROWS_AS(volume(table, 1, 1, {-1.0}), domain_error);
    CHECK_THROWS_AS(volume(table, 1, 1, {1.0, 2.0}), domain_error);
}

TEST_CASE("table ingestion") {
    const VolumeTable& table = full_table();
    // cross-entry consistency: V_{0,4}(0) = 2 pi^2, V_{1,2}(0,0) = pi^4/4
    CHECK(volume(table, 0, 4, {0, 0, 0, 0}) ==
          Catch::Approx(2.0 * kPi * kPi).epsilon(1e-12));
    CHECK(volume(table, 1, 2, {0, 0}) ==
          Catch::Approx(std::pow(kPi, 4) / 4.0).epsilon(1e-12));
    // V_{1,2} closed form (4pi^2+s)(12pi^2+s)/192 with s = x^2+y^2
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> uni(0.0, 4.0);
    for (int i = 0; i < 50; ++i) {
        const double x = uni(rng), y = uni(rng);
        const double s = x * x + y * y;
        CHECK(volume(table, 1, 2, {x, y}) ==
              Catch::Approx((4 * kPi * kPi + s) * (12 * kPi * kPi + s) / 192.0)
                  .epsilon(1e-12));
    }
    // closed surfaces ingested as 0-variable entries
    CHECK(volume(table, 2, 0, {}) ==
          Catch::Approx(43.0 * std::pow(kPi, 6) / 2160.0).epsilon(1e-12));

    SECTION("evenness in every variable is part of the loader contract") {
        for (const auto& sig : table.signatures()) {
            const VolumePolynomial& v = table.get(sig.first, sig.second);
            for (const auto& t : v.terms())
                for (int e : t.exponents) CHECK(e % 2 == 0);
            CHECK(v.at_zero() > 0.0);
        }
    }

    SECTION("bad files are rejected with line info") {
        const std::string tmp = "bad_volumes_test.txt";
        {
            std::ofstream out(tmp);
            out << "1 2 : 1,0=3.0\n";  // odd exponent
        }
        VolumeTable t;
        CHECK_THROWS_AS(t.load_file(tmp), data_error);
        std::remove(tmp.c_str());
        {
            std::ofstream out(tmp);
            out << "1 1 : 0=0.9\n";  // built-in override
        }
        VolumeTable t2;
        CHECK_THROWS_AS(t2.load_file(tmp), data_error);
        std::remove(tmp.c_str());
        CHECK_THROWS_AS(t2.load_file("does_not_exist.txt"), data_error);
    }

    SECTION("rational coefficients parse") {
        const std::string tmp = "rat_volumes_test.txt";
        {
            std::ofstream out(tmp);
            out << "9 1 : 0=1/3 ; 2=2/24\n";
        }
        VolumeTable t;
        t.load_file(tmp);
        CHECK(volume(t, 9, 1, {2.0}) ==
              Catch::Approx(1.0 / 3.0 + 4.0 * 2.0 / 24.0).epsilon(1e-14));
        std::remove(tmp.c_str());
    }
}

TEST_CASE("volume evenness under sign flips") {
    const VolumeTable& table = full_table();
    const VolumePolynomial& v = table.get(1, 2);
    CHECK(v({2.0, 3.0}) == v({2.0, 3.0}));
    // evaluating the polynomial at negated coordinates is identical
    double direct = v({2.0, 3.0});
    double flipped = 0.0;
    for (const auto& t : v.terms()) {
        double m = t.coefficient;
        m *= std::pow(-2.0, t.exponents[0]);
        m *= std::pow(3.0, t.exponents[1]);
        flipped += m;
    }
    CHECK(flipped == Catch::Approx(direct).epsilon(1e-13));
}

TEST_CASE("first-order ratio") {
    CHECK(first_order_ratio({0.0, 0.0}) == 1.0);
    CHECK(first_order_ratio({2.0}) ==
          Catch::Approx(std::sinh(1.0)).epsilon(1e-14));
    // monotone increasing in each coordinate
    double prev = 0.0;
    for (double x : {0.5, 1.0, 2.0, 4.0}) {
        const double v = first_order_ratio({x, 1.0});
        CHECK(v > prev);
        prev = v;
    }
    // smooth across the series/direct switch
    CHECK(first_order_ratio({1e-4 * 0.999}) ==
          Catch::Approx(first_order_ratio({1e-4 * 1.001})).epsilon(1e-10));
}

TEST_CASE("second-order expansion helpers") {
    CHECK(vol_f1(2.0) == Catch::Approx(2.3504023872876029).epsilon(1e-12));
    CHECK(vol_f2(2.0) == Catch::Approx(9.4016095491504116).epsilon(1e-12));
    CHECK(vol_f3(2.0) == Catch::Approx(3.0861612696304874).epsilon(1e-12));
    CHECK(vol_f4(2.0) == 2.0);
}

TEST_CASE("second-order expansion") {
    CHECK_THROWS_AS(second_order_expansion(2, 0, {}, 1.0, 1.0), domain_error);

    SECTION("x -> 0 limit is finite") {
        const double v =
            second_order_expansion(2, 2, {1e-9, 1e-9}, 1.0 / (8 * kPi * kPi), 0.1);
        CHECK(std::isfinite(v));
        CHECK(v == Catch::Approx(1.0).epsilon(1e-6));
    }

    SECTION("improves on first order for the (1,1) table entry") {
        const VolumeTable& table = full_table();
        const double v11 = volume(table, 1, 1, {0.0});
        // ratios as asymptotic data
        const double r1 = 1.0 / (8.0 * kPi * kPi);
        double c_first = 0.0, c_second = 0.0;
        for (int i = 1; i <= 24; ++i) {
            const double x = 6.0 * i / 24.0;
            const double exact = volume(table, 1, 1, {x}) / v11;
            const double first = first_order_ratio({x});
            const double second = second_order_expansion(1, 1, {x}, r1, 0.0);
            const double envelope = std::pow(1.0 + x, 3) / 4.0;  // (g+1)^2 = 4
            c_first = std::max(c_first, std::fabs(first - exact) / envelope);
            c_second = std::max(c_second, std::fabs(second - exact) / envelope);
        }
        CHECK(std::isfinite(c_second));
        CHECK(c_second < c_first);
    }
}

TEST_CASE("bound checks on tabulated signatures") {
    const VolumeTable& table = full_table();
    for (const auto& sig : {std::pair<int, int>{1, 1}, {0, 3}, {2, 1}}) {
        const BoundCheckReport rep = bound_checks(table, sig.first, sig.second);
        CHECK(rep.power_bound_ok);
        CHECK(rep.exp_bound_ok);
    }
}

TEST_CASE("parameter schedule") {
    const Schedule s0 = table_values_schedule(0);
    CHECK(s0.L_multiplier == 4.0);
    CHECK(s0.alpha == 0.25);
    CHECK(s0.gap == Catch::Approx(3.0 / 16.0).margin(1e-15));
    const Schedule s1 = table_values_schedule(1);
    CHECK(s1.L_multiplier == 6.0);
    CHECK(s1.alpha == Catch::Approx(1.0 / 6.0).margin(1e-16));
    CHECK(s1.gap == Catch::Approx(2.0 / 9.0).margin(1e-15));
    // gap increases to 1/4
    double prev = 0.0;
    for (int K = 0; K < 40; ++K) {
        const Schedule s = table_values_schedule(K);
        CHECK(s.gap > prev);
        prev = s.gap;
    }
    CHECK(prev < 0.25);
    CHECK(table_values_schedule(1000).gap == Catch::Approx(0.25).margin(1e-6));
    CHECK_THROWS_AS(table_values_schedule(-1), domain_error);
}

TEST_CASE("torus expectation main term") {
    CHECK(tor_expectation_main_term(0.0, 1.0) == 0.0);
    const double a0 = tor_sandwich_a0();
    CHECK(a0 == Catch::Approx(1.4822019348711478).epsilon(1e-9));
    // sandwich on (0, a0]
    for (int i = 1; i <= 200; ++i) {
        const double x = a0 * i / 200.0;
        const double mid = tor_expectation_integrand(x);
        CHECK(0.5 * x <= mid * (1.0 + 1e-12));
        CHECK(mid <= x * (1.0 + 1e-12));
    }
    // small-a asymptote: value ~ a^2 / (192 g) with ratio = 1/(8 pi^2 g)
    const double g = 50.0;
    const double ratio = 1.0 / (8.0 * kPi * kPi * g);
    for (double a : {0.02, 0.05, 0.1}) {
        const double v = tor_expectation_main_term(a, ratio);
        CHECK(v == Catch::Approx(a * a / (192.0 * g)).epsilon(0.02));
    }
}
