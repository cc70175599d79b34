#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "graphonlab/noise.hpp"
#include "graphonlab/numeric.hpp"
#include "graphonlab/philox.hpp"
#include "graphonlab/sde.hpp"

using namespace graphonlab;

namespace {

SystemConfig base_config() {
    SystemConfig cfg;
    cfg.d = 1;
    cfg.m = 1;
    cfg.m_tilde = 1;
    cfg.horizon = 0.5;
    cfg.dt = 0.125;
    cfg.n = 4;
    cfg.coefficients.family = "zero";
    cfg.initial_law.mean = {0.0, 0.0};
    cfg.initial_law.stddev = {0.5, 0.0};
    cfg.lipschitz_L = 1.0;
    cfg.moment_K = 4.0;
    cfg.moment_eps = 1.0;
    cfg.graphon = Graphon::constant(1.0);
    return cfg;
}

}  // namespace

TEST_CASE("noise generation is deterministic and label-keyed") {
    std::vector<double> labels{0.25, 0.5, 0.75, 1.0};
    std::vector<std::uint32_t> reps(4, 0);
    const auto a = generate_noise(99, labels, reps, 8, 1, 1, 0.125);
    const auto b = generate_noise(99, labels, reps, 8, 1, 1, 0.125);
    CHECK(a.common == b.common);
    CHECK(a.idio == b.idio);

    // disjoint label sets share the common path but not the idio streams
    std::vector<double> other{0.1, 0.3};
    std::vector<std::uint32_t> reps2(2, 0);
    const auto c = generate_noise(99, other, reps2, 8, 1, 1, 0.125);
    CHECK(c.common == a.common);

    // a shared label reproduces its stream inside a different system
    std::vector<double> mixed{0.5, 0.9};
    const auto d = generate_noise(99, mixed, reps2, 8, 1, 1, 0.125);
    for (int s = 0; s < 8; ++s) {
        CHECK(d.idio_increment(0, s)[0] == a.idio_increment(1, s)[0]);
    }

    CHECK_THROWS_AS(generate_noise(99, std::vector<double>{0.5, 0.5},
                                   std::vector<std::uint32_t>{0, 0}, 4, 1, 1, 0.1),
                    std::invalid_argument);
}

TEST_CASE("increment variance matches dt") {
    std::vector<double> labels{0.5};
    std::vector<std::uint32_t> reps{0};
    const int steps = 100000;
    const double dt = 0.01;
    const auto noise = generate_noise(7, labels, reps, steps, 1, 1, dt);
    std::vector<double> sq(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        const double x = noise.idio_increment(0, s)[0];
        sq[static_cast<std::size_t>(s)] = x * x;
    }
    const double var = pairwise_mean(sq);
    // chi-square 3-sigma band around dt
    const double band = 3.0 * dt * std::sqrt(2.0 / (steps - 1.0));
    CHECK(std::abs(var - dt) <= band);
}

TEST_CASE("step with zero coefficients leaves states unchanged") {
    auto cfg = base_config();
    const auto gn = discretize_sample(cfg.graphon, 4);
    const auto ens = simulate_finite(cfg, gn, 3, 1);
    for (std::size_t p = 0; p < ens.size(); ++p) {
        const auto first = ens.state(p, 0);
        for (std::size_t k = 1; k < ens.time_grid.size(); ++k) {
            CHECK(ens.state(p, k)[0] == first[0]);
        }
    }
}

TEST_CASE("explicit Euler update") {
    auto cfg = base_config();
    cfg.coefficients.family = "mean_revert_tanh";
    cfg.coefficients.revert_rate = 1.0;
    const auto fam = CoefficientFamily::from_config(cfg);

    // one particle at x = 1 with an empty interaction (mean falls back to 0):
    // next state must be x + dt * (-tanh(x))
    const std::vector<double> snapshot{1.0};
    const std::vector<double> weights{0.0};
    const std::vector<std::size_t> order{0};
    const std::vector<double> idio{0.0};
    const std::vector<double> common{0.0};
    std::vector<double> next(1);
    step_euler(fam, 0.1, 1, snapshot, weights, order, idio, common, next, 1);
    CHECK(next[0] == doctest::Approx(1.0 - 0.1 * std::tanh(1.0)).epsilon(1e-15));
}

TEST_CASE("single particle with full self-interaction reduces to a noise integral") {
    auto cfg = base_config();
    cfg.coefficients.family = "linear_tanh";
    cfg.coefficients.drift_scale = 1.0;  // tanh(x - x) = 0, so the drift cancels
    cfg.coefficients.idio_scale = 0.4;
    cfg.coefficients.common_scale = 0.2;
    cfg.n = 1;
    const auto gn = DiscretizedGraphon(1, {1.0});
    const auto ens = simulate_finite(cfg, gn, 12345, 1);

    std::vector<double> labels{1.0};
    std::vector<std::uint32_t> reps{0};
    const auto noise = generate_noise(12345, labels, reps, cfg.steps(), 1, 1, cfg.dt);
    double x = ens.state(0, 0)[0];
    for (int s = 0; s < cfg.steps(); ++s) {
        // interaction measure is delta_{x} with mass 1, so the diffusion
        // coefficients are the scales themselves
        x += 0.4 * noise.idio_increment(0, s)[0] + 0.2 * noise.common_increment(s)[0];
        CHECK(ens.state(0, static_cast<std::size_t>(s) + 1)[0] ==
              doctest::Approx(x).epsilon(1e-15));
    }
}

TEST_CASE("two-particle linear kernel agrees with a hand-rolled scalar update") {
    auto cfg = base_config();
    cfg.coefficients.family = "linear_tanh";
    cfg.coefficients.drift_scale = 0.8;
    cfg.coefficients.idio_scale = 0.3;
    cfg.coefficients.common_scale = 0.1;
    cfg.n = 2;
    const auto gn = discretize_sample(Graphon::product(), 2);
    const std::uint64_t seed = 777;
    const auto ens = simulate_finite(cfg, gn, seed, 1);

    std::vector<double> labels{0.5, 1.0};
    std::vector<std::uint32_t> reps{0, 0};
    const auto noise = generate_noise(seed, labels, reps, cfg.steps(), 1, 1, cfg.dt);
    double x0 = draw_initial_state(seed, 0.5, 0, 1, cfg.initial_law)[0];
    double x1 = draw_initial_state(seed, 1.0, 0, 1, cfg.initial_law)[0];
    CHECK(ens.state(0, 0)[0] == x0);
    CHECK(ens.state(1, 0)[0] == x1);
    for (int s = 0; s < cfg.steps(); ++s) {
        const double w00 = gn.at(0, 0) / 2, w01 = gn.at(0, 1) / 2;
        const double w10 = gn.at(1, 0) / 2, w11 = gn.at(1, 1) / 2;
        const double mass0 = w00 + w01, mass1 = w10 + w11;
        const double drift0 = 0.8 * (w00 * std::tanh(x0 - x0) + w01 * std::tanh(x1 - x0));
        const double drift1 = 0.8 * (w10 * std::tanh(x0 - x1) + w11 * std::tanh(x1 - x1));
        const double n0 = noise.idio_increment(0, s)[0];
        const double n1 = noise.idio_increment(1, s)[0];
        const double w = noise.common_increment(s)[0];
        const double nx0 = x0 + drift0 * cfg.dt + 0.3 * mass0 * n0 + 0.1 * mass0 * w;
        const double nx1 = x1 + drift1 * cfg.dt + 0.3 * mass1 * n1 + 0.1 * mass1 * w;
        x0 = nx0;
        x1 = nx1;
        CHECK(ens.state(0, static_cast<std::size_t>(s) + 1)[0] == doctest::Approx(x0).epsilon(1e-14));
        CHECK(ens.state(1, static_cast<std::size_t>(s) + 1)[0] == doctest::Approx(x1).epsilon(1e-14));
    }
}

TEST_CASE("same seed reproduces the ensemble bit-exactly") {
    auto cfg = base_config();
    cfg.coefficients.family = "linear_tanh";
    cfg.coefficients.drift_scale = 1.0;
    cfg.coefficients.idio_scale = 0.3;
    const auto gn = discretize_sample(Graphon::exp_kernel(1.0), 4);
    const auto a = simulate_finite(cfg, gn, 2024, 1);
    const auto b = simulate_finite(cfg, gn, 2024, 2);
    CHECK(a.states == b.states);  // thread count must not matter
    const auto c = simulate_finite(cfg, gn, 2025, 1);
    CHECK(a.states != c.states);
}

TEST_CASE("permuting particles permutes trajectories bit-exactly") {
    auto cfg = base_config();
    cfg.coefficients.family = "linear_tanh";
    cfg.coefficients.drift_scale = 1.0;
    cfg.coefficients.idio_scale = 0.25;
    cfg.coefficients.common_scale = 0.25;

    const int n = 3;
    std::vector<double> labels{1.0 / 3, 2.0 / 3, 1.0};
    std::vector<std::uint32_t> reps(n, 0);
    const auto gn = discretize_sample(Graphon::min_uv(), n);
    const auto wmat = finite_weight_matrix(gn);
    const auto noise = generate_noise(5, labels, reps, cfg.steps(), 1, 1, cfg.dt);
    const auto direct = simulate_interacting(cfg, labels, reps, wmat, noise, 1);

    const std::vector<std::size_t> perm{2, 0, 1};
    std::vector<double> plabels(n);
    std::vector<double> pw(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        plabels[static_cast<std::size_t>(i)] = labels[perm[static_cast<std::size_t>(i)]];
        for (int j = 0; j < n; ++j) {
            pw[static_cast<std::size_t>(i) * n + j] =
                wmat[perm[static_cast<std::size_t>(i)] * n + perm[static_cast<std::size_t>(j)]];
        }
    }
    const auto pnoise = generate_noise(5, plabels, reps, cfg.steps(), 1, 1, cfg.dt);
    const auto permuted = simulate_interacting(cfg, plabels, reps, pw, pnoise, 1);

    for (int i = 0; i < n; ++i) {
        const auto a = permuted.trajectory(static_cast<std::size_t>(i));
        const auto b = direct.trajectory(perm[static_cast<std::size_t>(i)]);
        CHECK(a == b);
    }
}

TEST_CASE("without common noise and interaction, particles decorrelate") {
    auto cfg = base_config();
    cfg.coefficients.family = "mean_revert_tanh";
    cfg.coefficients.revert_rate = 1.0;
    cfg.coefficients.idio_scale = 0.5;
    cfg.coefficients.common_scale = 0.0;
    cfg.horizon = 0.2;
    cfg.dt = 0.1;
    cfg.n = 2;
    const auto gn = DiscretizedGraphon(2, {0.0, 0.0, 0.0, 0.0});

    const int reps = 10000;
    std::vector<double> prod(reps), xs(reps), ys(reps);
    for (int r = 0; r < reps; ++r) {
        const auto ens = simulate_finite(cfg, gn, derive_seed(42, static_cast<std::uint64_t>(r)), 1);
        const double x = ens.state(0, ens.time_grid.size() - 1)[0];
        const double y = ens.state(1, ens.time_grid.size() - 1)[0];
        xs[static_cast<std::size_t>(r)] = x;
        ys[static_cast<std::size_t>(r)] = y;
        prod[static_cast<std::size_t>(r)] = x * y;
    }
    const double ex = pairwise_mean(xs), ey = pairwise_mean(ys);
    const double cov = pairwise_mean(prod) - ex * ey;
    std::vector<double> sx(xs), sy(ys);
    for (auto& v : sx) v = (v - ex) * (v - ex);
    for (auto& v : sy) v = (v - ey) * (v - ey);
    const double corr = cov / std::sqrt(pairwise_mean(sx) * pairwise_mean(sy));
    CHECK(std::abs(corr) <= 3.0 / std::sqrt(static_cast<double>(reps)));
}

TEST_CASE("bounded coefficients keep the run finite") {
    auto cfg = base_config();
    cfg.coefficients.family = "linear_tanh";
    cfg.coefficients.drift_scale = 1.0;
    cfg.coefficients.idio_scale = 0.5;
    cfg.coefficients.common_scale = 0.5;
    cfg.horizon = 1.0;
    cfg.dt = 0.0625;
    const auto gn = discretize_sample(Graphon::constant(1.0), 8);
    const auto ens = simulate_finite(cfg, gn, 31, 2);
    double sup = 0.0;
    for (double x : ens.states) sup = std::max(sup, std::abs(x));
    // |x0| + bound * (T + 4 sqrt(T)) is a generous envelope for this config
    CHECK(sup < 10.0);
}

TEST_CASE("dt halving self-check reports a small strong error") {
    auto cfg = base_config();
    cfg.coefficients.family = "linear_tanh";
    cfg.coefficients.drift_scale = 1.0;
    cfg.coefficients.idio_scale = 0.4;
    cfg.horizon = 0.5;
    cfg.dt = 0.0625;
    const auto gn = discretize_sample(Graphon::constant(1.0), 4);
    const double err = euler_refinement_error(cfg, gn, 9, 1);
    CHECK(err >= 0.0);
    CHECK(err < 0.25);
}
