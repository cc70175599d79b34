#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "graphonlab/graphon.hpp"

using namespace graphonlab;

namespace {

// independent oracle: enumerate every (S, T) pair
double cut_norm_oracle(const SquareMatrix& d) {
    const int n = d.n;
    double best = 0.0;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        for (std::uint32_t t = 0; t < (1u << n); ++t) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                if (!((s >> i) & 1u)) continue;
                for (int j = 0; j < n; ++j) {
                    if ((t >> j) & 1u) acc += d.at(i, j);
                }
            }
            best = std::max(best, std::abs(acc));
        }
    }
    return best / (static_cast<double>(n) * n);
}

SquareMatrix random_symmetric(std::mt19937& rng, int n, double lo, double hi) {
    std::uniform_real_distribution<double> val(lo, hi);
    SquareMatrix m{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double x = val(rng);
            m.values[static_cast<std::size_t>(i) * n + j] = x;
            m.values[static_cast<std::size_t>(j) * n + i] = x;
        }
    }
    return m;
}

}  // namespace

TEST_CASE("graphon construction and evaluation") {
    const auto c = Graphon::constant(0.3);
    CHECK(c(0.2, 0.9) == 0.3);
    const auto p = Graphon::product();
    CHECK(p(0.5, 0.5) == 0.25);
    const auto m = Graphon::min_uv();
    CHECK(m(0.25, 0.75) == 0.25);
    const auto e = Graphon::exp_kernel(2.0);
    CHECK(e(0.5, 0.5) == 1.0);
    CHECK(e(0.0, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));

    CHECK_THROWS_AS(Graphon::constant(1.5), std::invalid_argument);
    // asymmetric step graphon is rejected by the probe
    CHECK_THROWS_AS(Graphon::step({0.0, 0.5, 1.0}, {0.1, 0.9, 0.2, 0.1}), std::invalid_argument);
}

TEST_CASE("discretize by cell averaging") {
    const auto c = discretize_average(Graphon::constant(0.4), 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(c.at(i, j) == doctest::Approx(0.4).epsilon(1e-14));
    }

    // product graphon: exact cell average is the midpoint product
    const auto p = discretize_average(Graphon::product(), 2);
    CHECK(p.at(0, 0) == doctest::Approx(0.0625).epsilon(1e-12));
    CHECK(p.at(0, 1) == doctest::Approx(0.25 * 0.75).epsilon(1e-12));
    CHECK(p.at(1, 1) == doctest::Approx(0.75 * 0.75).epsilon(1e-12));

    // step graphon aligned with the grid is reproduced exactly
    const auto s = Graphon::step({0.0, 0.5, 1.0}, {0.2, 0.6, 0.6, 0.9});
    const auto sd = discretize_average(s, 2);
    CHECK(sd.at(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(sd.at(0, 1) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(sd.at(1, 1) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("discretize by sampling") {
    const auto c = discretize_sample(Graphon::constant(0.4), 5);
    CHECK(c.at(2, 4) == 0.4);

    const auto m = discretize_sample(Graphon::min_uv(), 2);
    CHECK(m.at(0, 0) == 0.5);
    CHECK(m.at(0, 1) == 0.5);
    CHECK(m.at(1, 0) == 0.5);
    CHECK(m.at(1, 1) == 1.0);

    const auto p = discretize_sample(Graphon::product(), 2);
    CHECK(p.at(0, 0) == 0.25);
    CHECK(p.at(0, 1) == 0.5);
    CHECK(p.at(1, 1) == 1.0);
}

TEST_CASE("cut norm exact on closed-form instances") {
    // constant graphon: the full rectangle is optimal
    SquareMatrix c{2, {0.3, 0.3, 0.3, 0.3}};
    const auto rc = cut_norm_exact(c);
    CHECK(rc.value == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(rc.row_set.size() == 2);
    CHECK(rc.col_set.size() == 2);

    // difference of constants
    SquareMatrix d{3, std::vector<double>(9, 0.7 - 0.2)};
    CHECK(cut_norm_exact(d).value == doctest::Approx(0.5).epsilon(1e-14));

    // signed 2x2 example: optimum 0.125 at S = {0}, T = {0}
    SquareMatrix signed2{2, {0.5, -0.5, -0.5, 0.5}};
    const auto rs = cut_norm_exact(signed2);
    CHECK(rs.value == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(rs.row_set.size() == 1);
    CHECK(rs.col_set.size() == 1);

    SquareMatrix big{21, std::vector<double>(21 * 21, 0.0)};
    CHECK_THROWS_AS(cut_norm_exact(big), std::invalid_argument);
}

TEST_CASE("cut norm exact equals the full (S,T) oracle") {
    std::mt19937 rng(101);
    for (int rep = 0; rep < 60; ++rep) {
        const int n = 2 + (rep % 6);
        const auto m = random_symmetric(rng, n, -0.5, 0.5);
        CHECK(cut_norm_exact(m).value == doctest::Approx(cut_norm_oracle(m)).epsilon(1e-12));
    }
}

TEST_CASE("cut norm exact is thread-count independent") {
    std::mt19937 rng(103);
    const auto m = random_symmetric(rng, 9, -1.0, 1.0);
    const auto serial = cut_norm_exact(m, 1);
    const auto parallel = cut_norm_exact(m, 4);
    CHECK(serial.value == parallel.value);
    CHECK(serial.row_set == parallel.row_set);
    CHECK(serial.col_set == parallel.col_set);
}

TEST_CASE("cut norm heuristic is a sharp lower bound") {
    std::mt19937 rng(107);
    int exact_hits = 0;
    const int cases = 60;
    for (int rep = 0; rep < cases; ++rep) {
        const auto m = random_symmetric(rng, 8, -0.5, 0.5);
        const double exact = cut_norm_exact(m).value;
        const double heur = cut_norm_heuristic(m, 40, static_cast<std::uint64_t>(rep)).value;
        CHECK(heur <= exact + 1e-12);
        if (std::abs(heur - exact) <= 1e-9) ++exact_hits;
    }
    CHECK(exact_hits >= cases * 95 / 100);

    SquareMatrix c{4, std::vector<double>(16, 0.25)};
    CHECK(cut_norm_heuristic(c, 4).value == doctest::Approx(0.25).epsilon(1e-14));
    SquareMatrix zero{4, std::vector<double>(16, 0.0)};
    CHECK(cut_norm_heuristic(zero, 4).value == 0.0);
}

TEST_CASE("inf-to-one norm") {
    SquareMatrix zero{3, std::vector<double>(9, 0.0)};
    CHECK(inf_to_one_norm(zero).value == 0.0);
    SquareMatrix c{3, std::vector<double>(9, 0.6)};
    CHECK(inf_to_one_norm(c).value == doctest::Approx(0.6).epsilon(1e-14));

    std::mt19937 rng(109);
    for (int rep = 0; rep < 40; ++rep) {
        const int n = 2 + (rep % 6);
        const auto m = random_symmetric(rng, n, -0.8, 0.8);
        const double cut = cut_norm_exact(m).value;
        const double one = inf_to_one_norm(m).value;
        CHECK(cut <= one + 1e-12);
        CHECK(one <= 4.0 * cut + 1e-12);
    }
}

TEST_CASE("cut norm is a pseudometric on step graphons") {
    std::mt19937 rng(113);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 4 + (rep % 4);
        const auto a = random_symmetric(rng, n, 0.0, 1.0);
        const auto b = random_symmetric(rng, n, 0.0, 1.0);
        const auto c = random_symmetric(rng, n, 0.0, 1.0);
        const double ab = cut_norm_exact(matrix_difference(a, b)).value;
        const double ac = cut_norm_exact(matrix_difference(a, c)).value;
        const double cb = cut_norm_exact(matrix_difference(c, b)).value;
        CHECK(ab <= ac + cb + 1e-12);
        CHECK(cut_norm_exact(matrix_difference(a, a)).value == 0.0);
    }
}

TEST_CASE("averaged and sampled discretizations converge to each other") {
    for (const auto& g : {Graphon::product(), Graphon::min_uv(), Graphon::exp_kernel(1.0)}) {
        double prev = 1e9;
        for (int n : {4, 8, 16}) {
            const auto avg = discretize_average(g, n);
            const auto smp = discretize_sample(g, n);
            const double dist = cut_norm_exact(matrix_difference(avg.matrix(), smp.matrix())).value;
            CHECK(dist < prev);
            prev = dist;
        }
    }
}

TEST_CASE("discretization refinement shrinks in cut norm") {
    for (const auto& g : {Graphon::product(), Graphon::min_uv(), Graphon::exp_kernel(1.0)}) {
        double prev = 1e9;
        for (int n : {4, 8}) {
            const auto coarse = block_expand(discretize_sample(g, n).matrix(), 2);
            const auto fine = discretize_sample(g, 2 * n).matrix();
            const double dist = cut_norm_exact(matrix_difference(coarse, fine)).value;
            CHECK(dist < prev);
            prev = dist;
        }
    }
}

TEST_CASE("graphon Lipschitz probe") {
    const auto rc = validate_graphon_lipschitz(Graphon::constant(0.5));
    for (double s : rc.slope_v) CHECK(s == 0.0);

    const auto rp = validate_graphon_lipschitz(Graphon::product());
    CHECK(rp.integral_L == doctest::Approx(0.5).epsilon(1e-3));
    for (std::size_t k = 0; k < rp.probe_v.size(); ++k) {
        CHECK(rp.slope_v[k] == doctest::Approx(rp.probe_v[k]).epsilon(1e-9));
    }

    const auto rm = validate_graphon_lipschitz(Graphon::min_uv());
    for (double s : rm.slope_v) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    const auto rs = validate_graphon_lipschitz(Graphon::step({0.0, 0.5, 1.0}, {0.1, 0.2, 0.2, 0.4}));
    CHECK(!rs.smooth_kind);
}

TEST_CASE("row means") {
    const auto d = discretize_sample(Graphon::product(), 4);
    // row i has entries (i+1)/4 * (j+1)/4
    const double expected = (1.0 / 4.0) * (1.0 + 2.0 + 3.0 + 4.0) / 16.0;
    CHECK(d.row_mean(0) == doctest::Approx(expected).epsilon(1e-14));
}
