#include "graphonlab/sde.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "graphonlab/numeric.hpp"
#include "graphonlab/philox.hpp"

namespace graphonlab {

std::vector<double> TrajectoryEnsemble::snapshot(std::size_t k) const {
    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<double> out(size() * d);
    for (std::size_t p = 0; p < size(); ++p) {
        const auto s = state(p, k);
        std::copy(s.begin(), s.end(), out.begin() + p * d);
    }
    return out;
}

std::vector<double> TrajectoryEnsemble::trajectory(std::size_t particle) const {
    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t len = time_grid.size() * d;
    std::vector<double> out(len);
    std::copy(states.begin() + static_cast<std::ptrdiff_t>(particle * len),
              states.begin() + static_cast<std::ptrdiff_t>((particle + 1) * len), out.begin());
    return out;
}

PathMeasure TrajectoryEnsemble::uniform_path_measure() const {
    std::vector<double> w(size(), 1.0 / static_cast<double>(size()));
    return PathMeasure(dim, time_grid, states, std::move(w));
}

PathMeasure TrajectoryEnsemble::weighted_path_measure(std::span<const double> weights) const {
    return PathMeasure(dim, time_grid, states,
                       std::vector<double>(weights.begin(), weights.end()));
}

PathMeasure TrajectoryEnsemble::subset_uniform_path_measure(
    std::span<const std::size_t> particles) const {
    const std::size_t d = static_cast<std::size_t>(dim);
    const std::size_t len = time_grid.size() * d;
    std::vector<double> coords(particles.size() * len);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        std::copy(states.begin() + static_cast<std::ptrdiff_t>(particles[i] * len),
                  states.begin() + static_cast<std::ptrdiff_t>((particles[i] + 1) * len),
                  coords.begin() + static_cast<std::ptrdiff_t>(i * len));
    }
    std::vector<double> w(particles.size(), 1.0 / static_cast<double>(particles.size()));
    return PathMeasure(dim, time_grid, std::move(coords), std::move(w));
}

DiscreteMeasure TrajectoryEnsemble::empirical_at(std::size_t k) const {
    const std::size_t d = static_cast<std::size_t>(dim);
    std::vector<double> coords(size() * d);
    for (std::size_t p = 0; p < size(); ++p) {
        const auto s = state(p, k);
        std::copy(s.begin(), s.end(), coords.begin() + p * d);
    }
    std::vector<double> w(size(), 1.0 / static_cast<double>(size()));
    return DiscreteMeasure(dim, std::move(coords), std::move(w));
}

std::size_t TrajectoryEnsemble::index_of_label(double label) const {
    for (std::size_t p = 0; p < size(); ++p) {
        if (labels[p] == label && replicas[p] == 0) return p;
    }
    throw std::invalid_argument("label not present in ensemble (coupling broken)");
}

namespace {

thread_local std::vector<double> tl_drift, tl_idio, tl_common;

}  // namespace

void step_euler(const CoefficientFamily& fam, double dt, int dim,
                std::span<const double> snapshot, std::span<const double> weight_matrix,
                std::span<const std::size_t> order, std::span<const double> idio_increments,
                std::span<const double> common_increment, std::span<double> next_states,
                int threads) {
    const std::size_t n = order.size();
    const std::size_t d = static_cast<std::size_t>(dim);
    const int m = fam.m();
    const int mt = fam.m_tilde();

    parallel_for(n, threads, [&](std::size_t p) {
        const WeightedCloud cloud{dim, snapshot,
                                  weight_matrix.subspan(p * n, n), order};
        const std::span<const double> x = snapshot.subspan(p * d, d);

        tl_drift.resize(d);
        tl_idio.resize(d * static_cast<std::size_t>(m));
        tl_common.resize(d * static_cast<std::size_t>(mt));
        fam.drift(x, cloud, tl_drift);
        fam.idio_diffusion(x, cloud, tl_idio);
        fam.common_diffusion(x, cloud, tl_common);

        const std::span<const double> db = idio_increments.subspan(p * static_cast<std::size_t>(m),
                                                                   static_cast<std::size_t>(m));
        double* out = next_states.data() + p * d;
        for (std::size_t c = 0; c < d; ++c) {
            double dx = tl_drift[c] * dt;
            for (int k = 0; k < m; ++k) {
                dx += tl_idio[c * static_cast<std::size_t>(m) + static_cast<std::size_t>(k)] *
                      db[static_cast<std::size_t>(k)];
            }
            for (int k = 0; k < mt; ++k) {
                dx += tl_common[c * static_cast<std::size_t>(mt) + static_cast<std::size_t>(k)] *
                      common_increment[static_cast<std::size_t>(k)];
            }
            out[c] = x[c] + dx;
        }
    });
}

TrajectoryEnsemble simulate_interacting(const SystemConfig& cfg, std::span<const double> labels,
                                        std::span<const std::uint32_t> replicas,
                                        const std::vector<double>& weight_matrix,
                                        const NoiseBundle& noise, int threads) {
    cfg.check();
    const std::size_t n = labels.size();
    if (n == 0) throw std::invalid_argument("simulate: no particles");
    if (weight_matrix.size() != n * n) {
        throw std::invalid_argument("simulate: weight matrix shape mismatch");
    }
    if (noise.labels.size() != n || noise.m != cfg.m || noise.m_tilde != cfg.m_tilde) {
        throw std::invalid_argument("simulate: noise bundle does not match the system");
    }
    const int steps = cfg.steps();
    if (noise.steps < steps) throw std::invalid_argument("simulate: noise bundle too short");
    for (double w : weight_matrix) {
        if (!(w >= 0.0)) throw std::invalid_argument("simulate: negative interaction weight");
    }

    const CoefficientFamily fam = CoefficientFamily::from_config(cfg);
    const std::size_t d = static_cast<std::size_t>(cfg.d);

    TrajectoryEnsemble ens;
    ens.dim = cfg.d;
    ens.labels.assign(labels.begin(), labels.end());
    ens.replicas.assign(replicas.begin(), replicas.end());
    ens.time_grid = cfg.time_grid();
    ens.config_hash = config_hash(cfg);
    ens.seed = noise.master_seed;
    ens.states.resize(n * ens.time_grid.size() * d);

    // canonical atom order: ascending (label, replica)
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (labels[a] != labels[b]) return labels[a] < labels[b];
        return replicas[a] < replicas[b];
    });

    std::vector<double> snapshot(n * d);
    for (std::size_t p = 0; p < n; ++p) {
        const auto x0 = draw_initial_state(noise.master_seed, labels[p], replicas[p], cfg.d,
                                           cfg.initial_law);
        std::copy(x0.begin(), x0.end(), snapshot.begin() + p * d);
    }

    std::vector<double> idio_step(n * static_cast<std::size_t>(cfg.m));
    std::vector<double> next(n * d);
    const std::size_t grid = ens.time_grid.size();
    auto store = [&](std::size_t k, const std::vector<double>& states) {
        for (std::size_t p = 0; p < n; ++p) {
            std::copy(states.begin() + static_cast<std::ptrdiff_t>(p * d),
                      states.begin() + static_cast<std::ptrdiff_t>((p + 1) * d),
                      ens.states.begin() + static_cast<std::ptrdiff_t>((p * grid + k) * d));
        }
    };
    store(0, snapshot);

    for (int s = 0; s < steps; ++s) {
        for (std::size_t p = 0; p < n; ++p) {
            const auto inc = noise.idio_increment(p, s);
            std::copy(inc.begin(), inc.end(),
                      idio_step.begin() + static_cast<std::ptrdiff_t>(
                                              p * static_cast<std::size_t>(cfg.m)));
        }
        step_euler(fam, cfg.dt, cfg.d, snapshot, weight_matrix, order, idio_step,
                   noise.common_increment(s), next, threads);
        for (double x : next) {
            if (!std::isfinite(x)) {
                throw std::runtime_error("simulate: state blew up at step " + std::to_string(s + 1));
            }
        }
        snapshot.swap(next);
        store(static_cast<std::size_t>(s) + 1, snapshot);
    }
    return ens;
}

std::vector<double> finite_weight_matrix(const DiscretizedGraphon& gn) {
    const int n = gn.n();
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            w[static_cast<std::size_t>(i) * n + j] = gn.at(i, j) / n;
        }
    }
    return w;
}

TrajectoryEnsemble simulate_finite(const SystemConfig& cfg, const DiscretizedGraphon& gn,
                                   std::uint64_t seed, int threads) {
    const int n = gn.n();
    std::vector<double> labels(static_cast<std::size_t>(n));
    std::vector<std::uint32_t> replicas(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / n;
    }
    const NoiseBundle noise =
        generate_noise(seed, labels, replicas, cfg.steps(), cfg.m, cfg.m_tilde, cfg.dt);
    return simulate_interacting(cfg, labels, replicas, finite_weight_matrix(gn), noise, threads);
}

double euler_refinement_error(const SystemConfig& cfg, const DiscretizedGraphon& gn,
                              std::uint64_t seed, int threads) {
    const int n = gn.n();
    std::vector<double> labels(static_cast<std::size_t>(n));
    std::vector<std::uint32_t> replicas(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / n;
    }
    SystemConfig fine = cfg;
    fine.dt = cfg.dt / 2.0;
    const int steps = cfg.steps();
    const NoiseBundle fine_noise =
        generate_noise(seed, labels, replicas, 2 * steps, cfg.m, cfg.m_tilde, fine.dt);

    // coarse increments are sums of consecutive fine ones, so both runs see
    // the same Brownian paths
    NoiseBundle coarse = fine_noise;
    coarse.steps = steps;
    coarse.dt = cfg.dt;
    coarse.common.assign(static_cast<std::size_t>(steps) * cfg.m_tilde, 0.0);
    for (int s = 0; s < steps; ++s) {
        for (int c = 0; c < cfg.m_tilde; ++c) {
            coarse.common[static_cast<std::size_t>(s) * cfg.m_tilde + c] =
                fine_noise.common[static_cast<std::size_t>(2 * s) * cfg.m_tilde + c] +
                fine_noise.common[static_cast<std::size_t>(2 * s + 1) * cfg.m_tilde + c];
        }
    }
    coarse.idio.assign(labels.size() * static_cast<std::size_t>(steps) * cfg.m, 0.0);
    for (std::size_t p = 0; p < labels.size(); ++p) {
        for (int s = 0; s < steps; ++s) {
            for (int c = 0; c < cfg.m; ++c) {
                coarse.idio[(p * static_cast<std::size_t>(steps) + static_cast<std::size_t>(s)) *
                                static_cast<std::size_t>(cfg.m) +
                            static_cast<std::size_t>(c)] =
                    fine_noise.idio_increment(p, 2 * s)[static_cast<std::size_t>(c)] +
                    fine_noise.idio_increment(p, 2 * s + 1)[static_cast<std::size_t>(c)];
            }
        }
    }

    const auto w = finite_weight_matrix(gn);
    const auto coarse_run = simulate_interacting(cfg, labels, replicas, w, coarse, threads);
    const auto fine_run = simulate_interacting(fine, labels, replicas, w, fine_noise, threads);

    std::vector<double> per_particle(labels.size());
    for (std::size_t p = 0; p < labels.size(); ++p) {
        double sup = 0.0;
        for (int k = 0; k <= steps; ++k) {
            const auto a = coarse_run.state(p, static_cast<std::size_t>(k));
            const auto b = fine_run.state(p, static_cast<std::size_t>(2 * k));
            sup = std::max(sup, state_dist2(a, b));
        }
        per_particle[p] = sup;
    }
    return std::sqrt(pairwise_mean(per_particle));
}

}  // namespace graphonlab
