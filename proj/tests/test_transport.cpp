#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphonlab/measures.hpp"
#include "graphonlab/transport.hpp"
#include "test_support.hpp"

using namespace graphonlab;

namespace {

DiscreteMeasure dirac(double x, double mass) { return DiscreteMeasure(1, {x}, {mass}); }

}  // namespace

TEST_CASE("w2 basics") {
    DiscreteMeasure mu(1, {0.0, 1.0}, {0.5, 0.5});
    CHECK(w2_exact(mu, mu).distance == doctest::Approx(0.0).epsilon(1e-15));

    // uniform on {0,1} vs uniform on {2,3}: sorted matching, distance 2
    DiscreteMeasure nu(1, {2.0, 3.0}, {0.5, 0.5});
    const auto r = w2_exact(mu, nu);
    CHECK(r.distance == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.plan.max_marginal_residual() <= 1e-9);

    CHECK(w2_exact(dirac(0.0, 1.0), dirac(3.0, 1.0)).distance ==
          doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(w2_exact(dirac(0.0, 1.0), dirac(1.0, 2.0)), std::invalid_argument);
    CHECK_THROWS_AS(w2_exact(DiscreteMeasure(1, {}, {}), dirac(0.0, 1.0)), std::invalid_argument);
}

TEST_CASE("brute force oracle basics") {
    std::mt19937 rng(5);
    const auto mu = testsupport::uniform_measure(rng, 1, 1);
    const auto nu = testsupport::uniform_measure(rng, 1, 1);
    CHECK(w2_bruteforce(mu, nu) ==
          doctest::Approx(std::abs(mu.atom(0)[0] - nu.atom(0)[0])).epsilon(1e-12));
    CHECK(w2_bruteforce(mu, mu) == 0.0);
    const auto big = testsupport::uniform_measure(rng, 1, 9);
    CHECK_THROWS_AS(w2_bruteforce(big, big), std::invalid_argument);
}

TEST_CASE("exact solver equals the brute-force oracle on uniform instances") {
    std::mt19937 rng(17);
    for (int rep = 0; rep < 120; ++rep) {
        const int d = 1 + (rep % 2);
        std::uniform_int_distribution<int> size(1, 6);
        const int n = size(rng);
        const auto mu = testsupport::uniform_measure(rng, d, n);
        const auto nu = testsupport::uniform_measure(rng, d, n);
        const double exact = w2_exact(mu, nu).distance;
        const double oracle = w2_bruteforce(mu, nu);
        CHECK(std::abs(exact - oracle) <= 1e-10);
    }
}

TEST_CASE("network simplex agrees with successive shortest paths on generic instances") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> size(1, 14);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 120; ++rep) {
        const int nr = size(rng);
        const int nc = size(rng);
        std::vector<double> cost(static_cast<std::size_t>(nr) * nc);
        for (double& c : cost) c = 10.0 * unit(rng);
        std::vector<double> a(static_cast<std::size_t>(nr)), b(static_cast<std::size_t>(nc));
        double sa = 0.0, sb = 0.0;
        for (double& x : a) {
            x = unit(rng) + 1e-3;
            sa += x;
        }
        for (double& x : b) {
            x = unit(rng) + 1e-3;
            sb += x;
        }
        for (double& x : b) x *= sa / sb;
        const auto ns = solve_transport(nr, nc, cost, a, b);
        const auto ssp = solve_transport_ssp(nr, nc, cost, a, b);
        CHECK(std::abs(ns.cost - ssp.cost) <= 1e-9 * std::max(1.0, ns.cost));
        CHECK(ns.max_marginal_residual() <= 1e-9);
        CHECK(ssp.max_marginal_residual() <= 1e-9);
    }
}

TEST_CASE("wop2 on diracs at the reference point is the mass gap") {
    const auto x0 = ReferencePoint::at({0.7});
    const auto r = wop2(dirac(0.7, 2.5), dirac(0.7, 1.0), x0);
    CHECK(r.value == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(r.w2_term == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wop2 equals w2 on probability measures") {
    std::mt19937 rng(41);
    const auto x0 = ReferencePoint::zero(2);
    for (int rep = 0; rep < 30; ++rep) {
        const auto mu = normalize(testsupport::random_measure(rng, 2, 8, 2.0, false));
        const auto nu = normalize(testsupport::random_measure(rng, 2, 8, 2.0, false));
        const auto r = wop2(mu, nu, x0);
        const auto w = w2_exact(mu, nu);
        CHECK(std::abs(r.value - w.distance) <= 1e-9 * std::max(1.0, w.distance));
        CHECK(std::abs(r.mass_gap) <= 1e-12);
    }
}

TEST_CASE("wop2 equal-mass identity: m * W2 of the normalizations") {
    std::mt19937 rng(43);
    const auto x0 = ReferencePoint::zero(1);
    for (int rep = 0; rep < 40; ++rep) {
        auto mu = testsupport::random_measure(rng, 1, 8, 3.0, false);
        auto nu = testsupport::random_measure(rng, 1, 8, 3.0, false);
        // force equal masses
        const double m = mu.total_mass();
        std::vector<double> w = nu.weights();
        const double s = m / nu.total_mass();
        for (double& x : w) x *= s;
        nu = DiscreteMeasure(1, nu.coords(), std::move(w));
        const auto r = wop2(mu, nu, x0);
        const double expected = m * w2_exact(normalize(mu), normalize(nu)).distance;
        CHECK(std::abs(r.value - expected) <= 1e-10 * std::max(1.0, expected));
    }
}

TEST_CASE("wop2 closed form identity on state space") {
    const auto x0 = ReferencePoint::zero(1);
    // 2*delta_1 vs 1*delta_1: closed form gives sqrt(2)
    const double v = wop2_closed_form(dirac(1.0, 2.0), dirac(1.0, 1.0), x0);
    CHECK(v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    const auto direct = wop2(dirac(1.0, 2.0), dirac(1.0, 1.0), x0);
    CHECK(direct.value == doctest::Approx(v).epsilon(1e-12));
    CHECK(direct.mass_gap == doctest::Approx(1.0));
    CHECK(direct.w2_term == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(wop2_closed_form(dirac(1.0, 2.0), dirac(1.0, 2.0), x0) == 0.0);
}

TEST_CASE("wop2 matches closed form on random state-space pairs incl zero mass") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 150; ++rep) {
        const int d = 1 + (rep % 3);
        const auto x0 = (rep % 4 == 0) ? ReferencePoint::at(std::vector<double>(
                                             static_cast<std::size_t>(d), 0.5))
                                       : ReferencePoint::zero(d);
        auto mu = testsupport::random_measure(rng, d, 10, 3.0);
        auto nu = testsupport::random_measure(rng, d, 10, 3.0);
        if (rep % 7 == 0) {  // zero-mass corner
            std::vector<double> w(mu.size(), 0.0);
            mu = DiscreteMeasure(d, mu.coords(), std::move(w));
        }
        const double closed = wop2_closed_form(mu, nu, x0);
        const double definition = wop2(mu, nu, x0).value;
        CHECK(std::abs(closed - definition) <=
              1e-9 * std::max({1e-3, closed, definition}));
    }
}

TEST_CASE("closed form on path measures signals misuse") {
    PathMeasure a(1, {0.0, 1.0}, {0.0, 1.0}, {1.0});
    CHECK_THROWS_AS(wop2_closed_form(a, a, ReferencePoint::zero(1)), std::invalid_argument);
}

TEST_CASE("path-space upper bound") {
    std::mt19937 rng(53);
    const auto x0 = ReferencePoint::zero(2);
    int hits = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto mu = testsupport::random_path_measure(rng, 2, 6, 3, 3.0);
        const auto nu = testsupport::random_path_measure(rng, 2, 6, 3, 3.0);
        const double bound = wop2_path_upper_bound(mu, nu, x0);
        const double value = wop2(mu, nu, x0).value;
        CHECK(value <= bound + 1e-9);
        if (std::abs(mu.total_mass() - nu.total_mass()) > 1e-3) ++hits;
    }
    CHECK(hits > 100);  // the loop really exercises unequal masses

    // equal masses: the bound collapses to the metric
    for (int rep = 0; rep < 30; ++rep) {
        auto mu = testsupport::random_path_measure(rng, 2, 6, 3, 3.0);
        auto nu = testsupport::random_path_measure(rng, 2, 6, 3, 3.0);
        std::vector<double> w = nu.weights();
        const double s = mu.total_mass() / nu.total_mass();
        for (double& x : w) x *= s;
        nu = PathMeasure(2, nu.time_grid(), nu.coords(), std::move(w));
        const double bound = wop2_path_upper_bound(mu, nu, x0);
        const double value = wop2(mu, nu, x0).value;
        CHECK(std::abs(bound - value) <= 1e-9 * std::max(1.0, value));
    }
}

TEST_CASE("marginal restriction W2 is dominated by the path distance") {
    std::mt19937 rng(59);
    for (int rep = 0; rep < 40; ++rep) {
        auto mu = testsupport::random_path_measure(rng, 1, 6, 3, 2.0);
        auto nu = testsupport::random_path_measure(rng, 1, 6, 3, 2.0);
        std::vector<double> w = nu.weights();
        const double s = mu.total_mass() / nu.total_mass();
        for (double& x : w) x *= s;
        nu = PathMeasure(1, nu.time_grid(), nu.coords(), std::move(w));
        const double path = w2_exact(mu, nu).distance;
        for (double t : mu.time_grid()) {
            CHECK(marginal_restriction_w2(mu, nu, t) <= path + 1e-10);
        }
    }
    PathMeasure single(1, {0.0}, {1.0, 4.0}, {0.5, 0.5});
    PathMeasure single2(1, {0.0}, {0.0, 2.0}, {0.5, 0.5});
    CHECK(marginal_restriction_w2(single, single2, 0.0) ==
          doctest::Approx(w2_exact(single, single2).distance).epsilon(1e-14));
    CHECK(marginal_restriction_w2(single, single, 0.0) == 0.0);
}

TEST_CASE("metric axioms hold on random triples") {
    std::mt19937 rng(61);
    for (int rep = 0; rep < 120; ++rep) {
        const int d = 1 + (rep % 3);
        const auto x0 = ReferencePoint::zero(d);
        const auto a = testsupport::random_measure(rng, d, 12, 3.0);
        const auto b = testsupport::random_measure(rng, d, 12, 3.0);
        const auto c = testsupport::random_measure(rng, d, 12, 3.0);
        const double ab = wop2(a, b, x0).value;
        const double ba = wop2(b, a, x0).value;
        CHECK(ab == ba);  // bit-exact symmetry
        CHECK(wop2(a, a, x0).value == 0.0);
        const double ac = wop2(a, c, x0).value;
        const double cb = wop2(c, b, x0).value;
        CHECK(ab <= ac + cb + 1e-9);
    }
}

TEST_CASE("wop2 zero distance implies equality up to zero atoms") {
    // same measure stored with permuted atoms and a zero-weight extra
    DiscreteMeasure a(1, {1.0, 2.0}, {0.25, 0.5});
    DiscreteMeasure b(1, {2.0, 7.0, 1.0}, {0.5, 0.0, 0.25});
    const auto r = wop2(a, b, ReferencePoint::zero(1));
    CHECK(r.value <= 1e-12);
    CHECK(measures_equal(a, b));
    DiscreteMeasure c(1, {2.0, 1.0}, {0.5, 0.3});
    CHECK(wop2(a, c, ReferencePoint::zero(1)).value > 1e-6);
}

TEST_CASE("wop2 result satisfies its own algebra") {
    std::mt19937 rng(67);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = testsupport::random_measure(rng, 2, 9, 3.0);
        const auto b = testsupport::random_measure(rng, 2, 9, 3.0);
        const auto r = wop2(a, b, ReferencePoint::zero(2));
        const double lhs = r.value * r.value;
        const double rhs = r.mass_gap * r.mass_gap + r.w2_term * r.w2_term;
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, rhs));
        CHECK(r.plan.max_marginal_residual() <= 1e-9);
    }
}

TEST_CASE("power-cost coupling reduces to the squared solver at p = 2") {
    std::mt19937 rng(71);
    for (int rep = 0; rep < 20; ++rep) {
        const auto a = normalize(testsupport::random_measure(rng, 1, 6, 2.0, false));
        const auto b = normalize(testsupport::random_measure(rng, 1, 6, 2.0, false));
        const double c2 = wasserstein_power_cost(a, b, 2.0);
        const auto w = w2_exact(a, b);
        CHECK(std::abs(c2 - w.plan.cost) <= 1e-9 * std::max(1.0, w.plan.cost));
    }
}
