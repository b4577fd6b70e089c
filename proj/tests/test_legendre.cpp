#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "berglab/berglab.hpp"
#include "test_helpers.hpp"

using namespace berglab;

TEST_CASE("legendre recurrence matches closed forms") {
    const double s = 0.37;
    const auto p = legendre_values(s, 4);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == s);
    CHECK_THAT(p[2], Catch::Matchers::WithinAbs(0.5 * (3 * s * s - 1), 1e-15));
    CHECK_THAT(p[3], Catch::Matchers::WithinAbs(0.5 * (5 * s * s * s - 3 * s), 1e-15));
    CHECK_THAT(p[4], Catch::Matchers::WithinAbs((35 * s * s * s * s - 30 * s * s + 3) / 8.0, 1e-15));
}

TEST_CASE("gauss rule on (0,1)") {
    const MomentGrid grid(48);

    SECTION("nodes strictly inside and increasing, weights positive") {
        double prev = 0.0;
        for (int j = 0; j < grid.node_count(); ++j) {
            CHECK(grid.nodes()[j] > prev);
            CHECK(grid.nodes()[j] < 1.0);
            CHECK(grid.weights()[j] > 0.0);
            prev = grid.nodes()[j];
        }
    }

    SECTION("integrates constants exactly") {
        std::vector<double> ones(grid.node_count(), 1.0);
        CHECK_THAT(grid.integrate(ones), Catch::Matchers::WithinAbs(1.0, 1e-14));
    }

    SECTION("exact for polynomials up to degree 2n-1") {
        // int_0^1 x^d dx = 1/(d+1); d = 2*48-1 is the hardest case
        for (int d : {1, 7, 40, 95}) {
            std::vector<double> values(grid.node_count());
            for (int j = 0; j < grid.node_count(); ++j) values[j] = std::pow(grid.nodes()[j], d);
            CHECK_THAT(grid.integrate(values),
                       Catch::Matchers::WithinAbs(1.0 / (d + 1), 1e-14));
        }
    }

    SECTION("legendre projection inverts evaluation") {
        InvariantFunction f({0.3, -0.2, 0.5, 0.0, 0.1});
        const auto coeffs = grid.project_legendre(f.sample(grid), 8);
        for (int k = 0; k <= 8; ++k)
            CHECK_THAT(coeffs[k], Catch::Matchers::WithinAbs(f.coefficient(k), 1e-13));
    }
}

TEST_CASE("moment grid sizing rule") {
    CHECK(MomentGrid::node_count_for_power(8) == 256);
    CHECK(MomentGrid::node_count_for_power(64) == 576);
    CHECK(MomentGrid::for_max_power(64).resolves_power(64));
    CHECK_FALSE(MomentGrid::for_max_power(8).resolves_power(100));
}

TEST_CASE("grid mismatch is rejected") {
    const MomentGrid grid(32);
    std::vector<double> wrong(7, 1.0);
    CHECK_THROWS_AS(grid.integrate(wrong), grid_mismatch_error);
}

TEST_CASE("invariant function evaluation and flux") {
    InvariantFunction f({1.0, 2.0, -0.5});

    SECTION("pointwise values") {
        const double x = 0.3;
        const double s = 2 * x - 1;
        const double expected = 1.0 + 2.0 * s - 0.5 * 0.5 * (3 * s * s - 1);
        CHECK_THAT(f(x), Catch::Matchers::WithinAbs(expected, 1e-15));
    }

    SECTION("mean is the constant coefficient") {
        const MomentGrid grid(64);
        CHECK_THAT(grid.integrate(f.sample(grid)), Catch::Matchers::WithinAbs(1.0, 1e-14));
    }

    SECTION("flux vanishes at both endpoints") {
        CHECK(f.flux(0.0) == 0.0);
        CHECK(f.flux(1.0) == 0.0);
    }

    SECTION("flux against finite differences") {
        const double x = 0.42, h = 1e-6;
        const double fd = x * (1 - x) * (f(x + h) - f(x - h)) / (2 * h);
        CHECK_THAT(f.flux(x), Catch::Matchers::WithinAbs(fd, 1e-8));
    }
}
