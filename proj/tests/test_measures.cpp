#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphonlab/measures.hpp"
#include "test_support.hpp"

using namespace graphonlab;

TEST_CASE("total mass") {
    DiscreteMeasure mu(1, {1.0, 2.0}, {0.3, 0.7});
    CHECK(mu.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    DiscreteMeasure empty(1, {}, {});
    CHECK(empty.total_mass() == 0.0);
    DiscreteMeasure three(1, {0.0, 0.0, 0.0}, {0.5, 0.5, 0.5});
    CHECK(three.total_mass() == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("normalize") {
    DiscreteMeasure mu(1, {1.0, 4.0}, {2.0, 2.0});
    const auto bar = normalize(mu);
    CHECK(bar.weights() == std::vector<double>{0.5, 0.5});
    CHECK(bar.coords() == mu.coords());
    CHECK(std::abs(bar.total_mass() - 1.0) <= 1e-12);

    DiscreteMeasure empty(1, {}, {});
    const auto dirac = normalize(empty);
    REQUIRE(dirac.size() == 1);
    CHECK(dirac.atom(0)[0] == 0.0);
    CHECK(dirac.weight(0) == 1.0);

    DiscreteMeasure prob(1, {2.5}, {1.0});
    const auto same = normalize(prob);
    CHECK(same.weights() == prob.weights());
    CHECK(same.coords() == prob.coords());
}

TEST_CASE("normalize is idempotent atom-for-atom") {
    std::mt19937 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto mu = testsupport::random_measure(rng, 2, 8, 3.0);
        const auto once = normalize(mu);
        const auto twice = normalize(once);
        CHECK(once.coords() == twice.coords());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(std::abs(once.weight(i) - twice.weight(i)) <= 1e-15);
        }
    }
}

TEST_CASE("second moment") {
    const auto x0 = ReferencePoint::zero(1);
    DiscreteMeasure mu(1, {2.0}, {1.0});
    CHECK(second_moment(mu, x0) == doctest::Approx(4.0).epsilon(1e-15));

    const auto ref = ReferencePoint::at({1.5, -2.0});
    DiscreteMeasure at_ref(2, {1.5, -2.0, 1.5, -2.0}, {0.4, 2.2});
    CHECK(second_moment(at_ref, ref) == 0.0);

    // path atom [(0),(3)] on grid {0,1}, weight 2 -> 2 * sup(0, 9) = 18
    PathMeasure pm(1, {0.0, 1.0}, {0.0, 3.0}, {2.0});
    CHECK(second_moment(pm, ReferencePoint::zero(1)) == doctest::Approx(18.0).epsilon(1e-15));
}

TEST_CASE("scale pushforward") {
    const auto x0 = ReferencePoint::at({1.0});
    DiscreteMeasure mu(1, {3.0}, {0.7});
    const auto same = scale_pushforward(mu, 1.0, x0);
    CHECK(same.coords() == mu.coords());
    const auto collapsed = scale_pushforward(mu, 0.0, x0);
    CHECK(collapsed.atom(0)[0] == 1.0);
    const auto stretched = scale_pushforward(mu, 2.0, x0);
    CHECK(stretched.atom(0)[0] == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(stretched.weights() == mu.weights());
}

TEST_CASE("scale pushforward invariants") {
    std::mt19937 rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        const auto mu = testsupport::random_measure(rng, 3, 10, 3.0);
        const auto x0 = ReferencePoint::zero(3);
        std::uniform_real_distribution<double> scale(0.0, 4.0);
        const double a = scale(rng);
        const auto pushed = scale_pushforward(mu, a, x0);
        CHECK(pushed.total_mass() == mu.total_mass());  // weights untouched
        const double lhs = second_moment(pushed, x0);
        const double rhs = a * a * second_moment(mu, x0);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("graphon weighted empirical") {
    std::vector<double> atoms{0.0, 4.0};
    SUBCASE("all ones gives the uniform empirical measure exactly") {
        std::vector<double> g{1.0, 1.0};
        const auto mu = graphon_weighted_empirical(1, atoms, g);
        CHECK(mu.weights() == std::vector<double>{0.5, 0.5});
        CHECK(mu.total_mass() == 1.0);
    }
    SUBCASE("all zeros gives the zero measure") {
        std::vector<double> g{0.0, 0.0};
        const auto mu = graphon_weighted_empirical(1, atoms, g);
        CHECK(mu.total_mass() == 0.0);
    }
    SUBCASE("mixed weights") {
        std::vector<double> g{1.0, 0.5};
        const auto mu = graphon_weighted_empirical(1, atoms, g);
        CHECK(mu.weights() == std::vector<double>{0.5, 0.25});
        CHECK(mu.total_mass() == doctest::Approx(0.75).epsilon(1e-15));
    }
    SUBCASE("weight outside the unit interval is rejected") {
        std::vector<double> g{1.2, 0.0};
        CHECK_THROWS_AS(graphon_weighted_empirical(1, atoms, g), std::invalid_argument);
    }
}

TEST_CASE("path measure structure") {
    PathMeasure pm(1, {0.0, 0.5, 1.0}, {0.0, 1.0, 2.0, 5.0, 5.0, 5.0}, {0.25, 0.75});
    CHECK(pm.grid_size() == 3);
    CHECK(pm.point(0, 2)[0] == 2.0);
    const auto marginal = pm.restrict_to_index(1);
    CHECK(marginal.atom(0)[0] == 1.0);
    CHECK(marginal.atom(1)[0] == 5.0);
    CHECK(marginal.weights() == pm.weights());
    CHECK(pm.grid_index_of(0.5) == 1);
    CHECK_THROWS_AS(pm.grid_index_of(0.3), std::invalid_argument);
}

TEST_CASE("restriction second moment never exceeds the path second moment") {
    std::mt19937 rng(23);
    for (int rep = 0; rep < 40; ++rep) {
        const auto pm = testsupport::random_path_measure(rng, 2, 6, 4, 3.0);
        const auto x0 = ReferencePoint::zero(2);
        const double path_m = second_moment(pm, x0);
        for (std::size_t k = 0; k < pm.grid_size(); ++k) {
            CHECK(second_moment(pm.restrict_to_index(k), x0) <= path_m + 1e-12);
        }
    }
}

TEST_CASE("measure equality ignores zero-weight atoms and order") {
    DiscreteMeasure a(1, {1.0, 2.0, 9.0}, {0.5, 0.5, 0.0});
    DiscreteMeasure b(1, {2.0, 1.0}, {0.5, 0.5});
    CHECK(measures_equal(a, b));
    DiscreteMeasure c(1, {2.0, 1.0}, {0.5, 0.6});
    CHECK(!measures_equal(a, c));
}

TEST_CASE("resample interpolates linearly onto a refined grid") {
    PathMeasure pm(1, {0.0, 1.0}, {0.0, 2.0}, {1.0});
    const auto fine = pm.resample({0.0, 0.5, 1.0});
    CHECK(fine.point(0, 1)[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fine.point(0, 2)[0] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("invariant violations throw") {
    CHECK_THROWS_AS(DiscreteMeasure(1, {0.0}, {-0.1}), std::invalid_argument);
    CHECK_THROWS_AS(DiscreteMeasure(1, {0.0, 1.0}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(PathMeasure(1, {0.0, 0.0}, {0.0, 0.0}, {1.0}), std::invalid_argument);
    const double nan = std::nan("");
    CHECK_THROWS_AS(DiscreteMeasure(1, {nan}, {1.0}), std::invalid_argument);
}
