#include "graphonlab/validate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "graphonlab/coefficients.hpp"
#include "graphonlab/measures.hpp"
#include "graphonlab/noise.hpp"
#include "graphonlab/numeric.hpp"
#include "graphonlab/transport.hpp"

namespace graphonlab {

bool ValidationReport::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass) return false;
    }
    return true;
}

namespace {

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

// random measure constrained to M_{2,K}: M_0(mu) <= K * m_mu
DiscreteMeasure random_m2k_measure(std::mt19937& rng, int d, int max_atoms, double max_mass,
                                   double K) {
    std::uniform_int_distribution<int> n_atoms(1, max_atoms);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = n_atoms(rng);
    std::vector<double> coords(static_cast<std::size_t>(n) * d);
    for (double& c : coords) c = coord(rng);
    std::vector<double> weights(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& w : weights) {
        w = unit(rng);
        total += w;
    }
    const double target = std::max(1e-6, max_mass * unit(rng));
    for (double& w : weights) w *= target / total;
    DiscreteMeasure mu(d, std::move(coords), std::move(weights));
    const auto x0 = ReferencePoint::zero(d);
    const double mom = second_moment(mu, x0);
    const double cap = K * mu.total_mass();
    if (mom > cap && mom > 0.0) {
        mu = scale_pushforward(mu, 0.999 * std::sqrt(cap / mom), x0);
    }
    return mu;
}

CheckResult check_coefficient_bound(const SystemConfig& cfg) {
    CheckResult res;
    res.name = "coefficient_bound";
    const auto fam = CoefficientFamily::from_config(cfg);
    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double probed = 0.0;
    double max_mass = 0.0;
    std::vector<double> x(static_cast<std::size_t>(cfg.d));
    std::vector<double> drift(static_cast<std::size_t>(cfg.d));
    std::vector<double> idio(static_cast<std::size_t>(cfg.d) * cfg.m);
    std::vector<double> common(static_cast<std::size_t>(cfg.d) * cfg.m_tilde);
    for (int probe = 0; probe < 256; ++probe) {
        const auto mu = random_m2k_measure(rng, cfg.d, 8, 1.5, cfg.moment_K);
        for (double& c : x) c = coord(rng);
        const WeightedCloud cloud{cfg.d, mu.coords(), mu.weights(), {}};
        fam.drift(x, cloud, drift);
        fam.idio_diffusion(x, cloud, idio);
        fam.common_diffusion(x, cloud, common);
        double norm = 0.0;
        for (double v : drift) norm += v * v;
        probed = std::max(probed, std::sqrt(norm));
        norm = 0.0;
        for (double v : idio) norm += v * v;
        probed = std::max(probed, std::sqrt(norm));
        norm = 0.0;
        for (double v : common) norm += v * v;
        probed = std::max(probed, std::sqrt(norm));
        max_mass = std::max(max_mass, mu.total_mass());
    }
    const double envelope = cfg.lipschitz_L * std::max(1.0, max_mass) *
                            std::sqrt(static_cast<double>(cfg.d));
    res.pass = probed <= envelope * 1.05 && fam.kernel_bound() <= cfg.lipschitz_L *
                                                std::sqrt(static_cast<double>(cfg.d)) * 1.05;
    res.detail = "sup|phi| probed " + fmt(probed) + ", declared envelope " + fmt(envelope) +
                 ", family kernel bound " + fmt(fam.kernel_bound());
    return res;
}

CheckResult check_coefficient_lipschitz(const SystemConfig& cfg) {
    CheckResult res;
    res.name = "coefficient_lipschitz";
    const auto fam = CoefficientFamily::from_config(cfg);
    const auto x0 = ReferencePoint::zero(cfg.d);
    std::mt19937 rng(2027);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    // the kernel-family constant sqrt(max{4L^2, 4L^2K + 2L^2}) dominates the
    // measure part, the mass-scaled |x1 - x2| part carries plain L
    const double L_eff =
        cfg.lipschitz_L * std::max(1.0, std::sqrt(4.0 * cfg.moment_K + 2.0));
    double worst = 0.0;
    std::string witness;
    std::vector<double> x1(static_cast<std::size_t>(cfg.d)), x2(static_cast<std::size_t>(cfg.d));
    std::vector<double> out1(static_cast<std::size_t>(cfg.d)), out2(static_cast<std::size_t>(cfg.d));
    for (int probe = 0; probe < 200; ++probe) {
        const auto mu = random_m2k_measure(rng, cfg.d, 8, 1.5, cfg.moment_K);
        const auto nu = random_m2k_measure(rng, cfg.d, 8, 1.5, cfg.moment_K);
        for (double& c : x1) c = coord(rng);
        for (double& c : x2) c = coord(rng);
        const WeightedCloud c1{cfg.d, mu.coords(), mu.weights(), {}};
        const WeightedCloud c2{cfg.d, nu.coords(), nu.weights(), {}};
        fam.drift(x1, c1, out1);
        fam.drift(x2, c2, out2);
        double diff = 0.0, xdiff = 0.0;
        for (int c = 0; c < cfg.d; ++c) {
            diff += (out1[static_cast<std::size_t>(c)] - out2[static_cast<std::size_t>(c)]) *
                    (out1[static_cast<std::size_t>(c)] - out2[static_cast<std::size_t>(c)]);
            xdiff += (x1[static_cast<std::size_t>(c)] - x2[static_cast<std::size_t>(c)]) *
                     (x1[static_cast<std::size_t>(c)] - x2[static_cast<std::size_t>(c)]);
        }
        const double mass_factor = std::max({mu.total_mass(), nu.total_mass(), 1.0});
        const double denom =
            mass_factor * std::sqrt(xdiff) + wop2(mu, nu, x0).value;
        if (denom <= 1e-12) continue;
        const double ratio = std::sqrt(diff) / denom;
        if (ratio > worst) {
            worst = ratio;
            std::ostringstream w;
            w << "x1=" << x1[0] << " x2=" << x2[0] << " m1=" << mu.total_mass()
              << " m2=" << nu.total_mass();
            witness = w.str();
        }
    }
    res.pass = worst <= L_eff * 1.05;
    res.detail = "sup ratio " + fmt(worst) + " vs L_eff " + fmt(L_eff) +
                 (res.pass ? "" : " witness: " + witness);
    return res;
}

CheckResult check_initial_moment(const SystemConfig& cfg) {
    CheckResult res;
    res.name = "initial_moment";
    const double p = 2.0 + cfg.moment_eps;
    double sup_p = 0.0, sup_2 = 0.0;
    for (int ui = 1; ui <= 10; ++ui) {
        const double u = ui / 10.0;
        std::vector<double> vp(4096), v2(4096);
        for (int k = 0; k < 4096; ++k) {
            const auto x = draw_initial_state(777, u, static_cast<std::uint32_t>(k), cfg.d,
                                              cfg.initial_law);
            double norm = 0.0;
            for (double c : x) norm += c * c;
            v2[static_cast<std::size_t>(k)] = norm;
            vp[static_cast<std::size_t>(k)] = std::pow(norm, p / 2.0);
        }
        sup_p = std::max(sup_p, pairwise_mean(vp));
        sup_2 = std::max(sup_2, pairwise_mean(v2));
    }
    res.pass = std::isfinite(sup_p) && sup_2 <= cfg.moment_K;
    res.detail = "sup_u E|X(0)|^(2+eps) ~ " + fmt(sup_p) + ", sup_u E|X(0)|^2 ~ " + fmt(sup_2) +
                 " vs K " + fmt(cfg.moment_K);
    return res;
}

CheckResult check_initial_continuity(const SystemConfig& cfg) {
    CheckResult res;
    res.name = "initial_w2eps_continuity";
    const double p = 2.0 + cfg.moment_eps;
    const int samples = 64, draws = 8;
    auto empirical = [&](double u, std::uint64_t salt) {
        std::vector<double> coords(static_cast<std::size_t>(samples) * cfg.d);
        for (int k = 0; k < samples; ++k) {
            const auto x = draw_initial_state(9000 + salt, u,
                                              static_cast<std::uint32_t>(k), cfg.d,
                                              cfg.initial_law);
            std::copy(x.begin(), x.end(),
                      coords.begin() + static_cast<std::size_t>(k) * cfg.d);
        }
        std::vector<double> w(static_cast<std::size_t>(samples),
                              1.0 / static_cast<double>(samples));
        return DiscreteMeasure(cfg.d, std::move(coords), std::move(w));
    };
    auto estimate = [&](double u1, double u2) {
        std::vector<double> vals(draws);
        for (int r = 0; r < draws; ++r) {
            const auto a = empirical(u1, static_cast<std::uint64_t>(2 * r));
            const auto b = empirical(u2, static_cast<std::uint64_t>(2 * r + 1));
            vals[static_cast<std::size_t>(r)] = wasserstein_power_cost(a, b, p);
        }
        return pairwise_mean(vals);
    };
    const double floor = estimate(0.5, 0.5);  // same-label sampling noise
    std::ostringstream detail;
    detail << "sampling floor " << fmt(floor);
    bool finite = std::isfinite(floor);
    for (double gap : {0.5, 0.25, 0.125}) {
        const double raw = estimate(0.25, 0.25 + gap);
        const double excess = std::max(0.0, raw - floor);
        const double kappa = excess / std::pow(gap, 1.0 + cfg.moment_eps / 2.0);
        finite = finite && std::isfinite(kappa);
        detail << ", gap " << fmt(gap) << ": kappa~" << fmt(kappa);
    }
    res.pass = finite;
    res.detail = detail.str();
    return res;
}

CheckResult check_graphon_lipschitz(const SystemConfig& cfg) {
    CheckResult res;
    res.name = "graphon_lipschitz";
    const auto report = validate_graphon_lipschitz(cfg.graphon, 64);
    res.pass = report.smooth_kind;
    res.detail = "int L_v dv ~ " + fmt(report.integral_L) + ", int L_v^2 dv ~ " +
                 fmt(report.integral_L2) +
                 (report.smooth_kind ? "" : " (step/sampled kind: Lipschitz assumption flagged)");
    return res;
}

CheckResult check_cutnorm_refinement(const SystemConfig& cfg, int threads) {
    CheckResult res;
    res.name = "graphon_cutnorm_refinement";
    auto gap = [&](int n) {
        const auto coarse = block_expand(discretize_sample(cfg.graphon, n).matrix(), 2);
        const auto fine = discretize_sample(cfg.graphon, 2 * n).matrix();
        return cut_norm_exact(matrix_difference(coarse, fine), threads).value;
    };
    const double r5 = gap(5);
    const double r10 = gap(10);
    res.pass = r10 <= r5 + 1e-12;
    res.detail = "cut norm G^n vs G^2n: n=5 " + fmt(r5) + ", n=10 " + fmt(r10);
    return res;
}

}  // namespace

ValidationReport validate_config(const SystemConfig& cfg, int threads) {
    cfg.check();  // schema-level violations throw before probe checks run
    ValidationReport report;
    report.checks.push_back(check_coefficient_bound(cfg));
    report.checks.push_back(check_coefficient_lipschitz(cfg));
    report.checks.push_back(check_initial_moment(cfg));
    report.checks.push_back(check_initial_continuity(cfg));
    report.checks.push_back(check_graphon_lipschitz(cfg));
    report.checks.push_back(check_cutnorm_refinement(cfg, threads));
    return report;
}

double linear_family_bound_violation(const SystemConfig& cfg, int probes, std::uint64_t seed) {
    if (cfg.coefficients.family != "linear_tanh") {
        throw std::invalid_argument("the kernel bound probe applies to the linear family");
    }
    const auto fam = CoefficientFamily::from_config(cfg);
    const auto x0 = ReferencePoint::zero(cfg.d);
    const double L = cfg.lipschitz_L;
    const double K = cfg.moment_K;
    const double constant = std::max(4.0 * L * L, 4.0 * L * L * K + 2.0 * L * L);

    std::mt19937 rng(static_cast<unsigned>(seed));
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    double worst = -std::numeric_limits<double>::infinity();
    std::vector<double> x(static_cast<std::size_t>(cfg.d));
    std::vector<double> out1(static_cast<std::size_t>(cfg.d));
    std::vector<double> out2(static_cast<std::size_t>(cfg.d));
    std::vector<double> m1(static_cast<std::size_t>(cfg.d) * cfg.m);
    std::vector<double> m2(static_cast<std::size_t>(cfg.d) * cfg.m);
    std::vector<double> w1(static_cast<std::size_t>(cfg.d) * cfg.m_tilde);
    std::vector<double> w2(static_cast<std::size_t>(cfg.d) * cfg.m_tilde);
    for (int probe = 0; probe < probes; ++probe) {
        const auto mu = random_m2k_measure(rng, cfg.d, 8, 1.5, K);
        const auto nu = random_m2k_measure(rng, cfg.d, 8, 1.5, K);
        for (double& c : x) c = coord(rng);
        const auto dist = wop2(mu, nu, x0);
        const double rhs = constant * (dist.mass_gap * dist.mass_gap + dist.plan.cost);
        const WeightedCloud c1{cfg.d, mu.coords(), mu.weights(), {}};
        const WeightedCloud c2{cfg.d, nu.coords(), nu.weights(), {}};
        // alpha = p
        fam.drift(x, c1, out1);
        fam.drift(x, c2, out2);
        double lhs = 0.0;
        for (int c = 0; c < cfg.d; ++c) {
            const double dd = out1[static_cast<std::size_t>(c)] - out2[static_cast<std::size_t>(c)];
            lhs += dd * dd;
        }
        worst = std::max(worst, lhs - rhs);
        // alpha = b
        fam.idio_diffusion(x, c1, m1);
        fam.idio_diffusion(x, c2, m2);
        lhs = 0.0;
        for (std::size_t k = 0; k < m1.size(); ++k) lhs += (m1[k] - m2[k]) * (m1[k] - m2[k]);
        worst = std::max(worst, lhs - rhs);
        // alpha = w
        fam.common_diffusion(x, c1, w1);
        fam.common_diffusion(x, c2, w2);
        lhs = 0.0;
        for (std::size_t k = 0; k < w1.size(); ++k) lhs += (w1[k] - w2[k]) * (w1[k] - w2[k]);
        worst = std::max(worst, lhs - rhs);
    }
    return worst;
}

}  // namespace graphonlab
