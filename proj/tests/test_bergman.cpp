#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "berglab/berglab.hpp"
#include "test_helpers.hpp"

using namespace berglab;
using berglab::test::sup_abs;

namespace {
const MomentGrid& shared_grid() {
    static const MomentGrid grid = MomentGrid::for_max_power(64);
    return grid;
}
const InvariantMetric& fs_metric() {
    static const InvariantMetric fs = InvariantMetric::fubini_study(shared_grid());
    return fs;
}
} // namespace

TEST_CASE("gram closed forms at the reference metric") {
    // beta integrals: G_i = i! (m-i)! / (m+1)!
    const SectionGram g2 = gram(2, fs_metric());
    REQUIRE(g2.diag.size() == 3);
    CHECK_THAT(g2.diag[0], Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
    CHECK_THAT(g2.diag[1], Catch::Matchers::WithinAbs(1.0 / 6.0, 1e-12));
    CHECK_THAT(g2.diag[2], Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));

    const SectionGram g1 = gram(1, fs_metric());
    REQUIRE(g1.diag.size() == 2);
    CHECK_THAT(g1.diag[0], Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(g1.diag[1], Catch::Matchers::WithinAbs(0.5, 1e-12));
}

TEST_CASE("gram symmetry for symmetric potentials") {
    const SectionGram g3 = gram(3, fs_metric());
    CHECK_THAT(g3.diag[0] - g3.diag[3], Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(g3.diag[1] - g3.diag[2], Catch::Matchers::WithinAbs(0.0, 1e-15));

    // P_2(2x-1) is symmetric about x = 1/2
    const InvariantMetric g(InvariantFunction::basis(2, 0.1), shared_grid());
    const SectionGram g7 = gram(7, g);
    for (int i = 0; i <= 7; ++i)
        CHECK_THAT(g7.diag[i] - g7.diag[7 - i], Catch::Matchers::WithinAbs(0.0, 1e-14));
}

TEST_CASE("gram positivity and resolution") {
    const InvariantMetric g(random_potential(17), shared_grid());
    const SectionGram gr = gram(23, g);
    for (double v : gr.diag) CHECK(v > 0.0);

    SECTION("doubling the node count moves nothing") {
        const MomentGrid fine(2 * shared_grid().node_count());
        const InvariantMetric gf(g.potential(), fine);
        const SectionGram refined = gram(23, gf);
        for (int i = 0; i <= 23; ++i)
            CHECK_THAT(gr.diag[i] - refined.diag[i], Catch::Matchers::WithinAbs(0.0, 1e-10));
    }

    SECTION("underresolved powers are flagged") {
        CHECK_FALSE(gr.underresolved);
        const MomentGrid small(64);
        const InvariantMetric gs(InvariantFunction(), small);
        CHECK(gram(40, gs).underresolved);
    }
}

TEST_CASE("density at the reference metric is the constant (m+1)/m") {
    for (int m : {1, 2, 8, 32, 64}) {
        const DensityProfile profile = density(m, fs_metric());
        const double cq = c_q(m).to_double();
        for (double v : profile.values) CHECK_THAT(v, Catch::Matchers::WithinAbs(cq, 1e-12));
    }
}

TEST_CASE("density mean identity") {
    // int (K - C_q) dA = 0 because each normalized section has unit norm
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const InvariantMetric g(random_potential(seed), shared_grid());
        for (int m : {8, 32}) {
            const DensityProfile profile = density(m, g);
            std::vector<double> dev(profile.values);
            const double cq = c_q(m).to_double();
            for (double& v : dev) v -= cq;
            CHECK_THAT(integrate(dev, g), Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("perturbed metrics are strictly non-balanced") {
    const InvariantMetric g(InvariantFunction::basis(2, 0.1), shared_grid());
    const DensityProfile profile = density(32, g);
    const double cq = c_q(32).to_double();
    double sup = 0.0;
    for (double v : profile.values) sup = std::max(sup, std::fabs(v - cq));
    CHECK(sup > 1e-4);
}

TEST_CASE("density scale invariance") {
    // h -> c h adds a constant to the potential; K and gram ratios are unmoved
    InvariantFunction shifted = InvariantFunction::basis(2, 0.1);
    shifted.set_coefficient(0, 1.7);
    const InvariantMetric g0(InvariantFunction::basis(2, 0.1), shared_grid());
    const InvariantMetric g1(shifted, shared_grid());
    const DensityProfile d0 = density(16, g0);
    const DensityProfile d1 = density(16, g1);
    CHECK(berglab::test::sup_difference(d0.values, d1.values) < 1e-10);

    const SectionGram a = gram(16, g0);
    const SectionGram b = gram(16, g1);
    for (int i = 1; i <= 16; ++i)
        CHECK_THAT(a.diag[i] / a.diag[0] - b.diag[i] / b.diag[0],
                   Catch::Matchers::WithinAbs(0.0, 1e-11));
}

TEST_CASE("topological constant") {
    CHECK(c_q(4) == Rational(5, 4));
    CHECK(c_q(1) == Rational(2, 1));
    double prev = c_q(1).to_double();
    for (int m = 2; m <= 64; m *= 2) {
        const double cur = c_q(m).to_double();
        CHECK(cur < prev);
        CHECK(cur > 1.0);
        prev = cur;
    }
    CHECK_THROWS_AS(c_q(0), precondition_error);
}

TEST_CASE("parseval: sum of normalized section masses") {
    // (1/m) sum_i int |tau_i|^2 dA = C_q * vol exactly
    const InvariantMetric g(random_potential(8), shared_grid());
    for (int m : {4, 16}) {
        const SectionGram gr = gram(m, g);
        const DensityProfile profile = density(gr, g);
        CHECK_THAT(integrate(profile.values, g),
                   Catch::Matchers::WithinAbs(c_q(m).to_double() * g.volume(), 1e-12));
    }
}

TEST_CASE("fs pullback") {
    SECTION("the reference metric is a fixed point") {
        for (int m : {1, 4, 16, 64}) {
            const InvariantMetric hm = fs_pullback(m, fs_metric());
            CHECK(hm.potential().sup_norm(shared_grid()) < 1e-10);
        }
    }

    SECTION("pullbacks are admissible and mean-zero") {
        const InvariantMetric g(random_potential(21), shared_grid());
        const InvariantMetric hm = fs_pullback(12, g);
        CHECK(hm.potential().coefficient(0) == 0.0);
        for (double v : hm.density_factor()) CHECK(v > 0.0);
    }

    SECTION("pullback converges to the input at rate 1/m") {
        const InvariantMetric g(InvariantFunction::basis(2, 0.1), shared_grid());
        std::vector<double> errs;
        for (int m : {16, 32, 64}) {
            const InvariantMetric hm = fs_pullback(m, g);
            std::vector<double> diff(hm.density_factor());
            for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= g.density_factor()[j];
            errs.push_back(sup_abs(diff));
        }
        CHECK(errs[1] < errs[0]);
        CHECK(errs[2] < errs[1]);
        const double slope = std::log(errs[0] / errs[2]) / std::log(4.0);
        CHECK_THAT(slope, Catch::Matchers::WithinAbs(1.0, 0.35));
    }

    SECTION("balance characterization: fixed point iff constant density") {
        // at the reference: both; at the perturbed metric: neither
        const InvariantMetric g(InvariantFunction::basis(2, 0.1), shared_grid());
        const InvariantMetric hm = fs_pullback(32, g);
        std::vector<double> diff(hm.density_factor());
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= g.density_factor()[j];
        CHECK(sup_abs(diff) > 1e-4);
    }
}
