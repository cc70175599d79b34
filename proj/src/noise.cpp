#include "graphonlab/noise.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "graphonlab/philox.hpp"

namespace graphonlab {

NoiseBundle generate_noise(std::uint64_t seed, std::span<const double> labels,
                           std::span<const std::uint32_t> replicas, int steps, int m, int m_tilde,
                           double dt) {
    if (labels.size() != replicas.size()) {
        throw std::invalid_argument("noise: labels/replicas length mismatch");
    }
    if (steps < 0 || m < 1 || m_tilde < 1 || !(dt > 0.0)) {
        throw std::invalid_argument("noise: bad parameters");
    }
    {
        std::set<std::pair<double, std::uint32_t>> seen;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (!seen.insert({labels[i], replicas[i]}).second) {
                throw std::invalid_argument("noise: duplicate (label, replica) stream");
            }
        }
    }

    NoiseBundle bundle;
    bundle.master_seed = seed;
    bundle.steps = steps;
    bundle.m = m;
    bundle.m_tilde = m_tilde;
    bundle.dt = dt;
    bundle.labels.assign(labels.begin(), labels.end());
    bundle.replicas.assign(replicas.begin(), replicas.end());

    const double scale = std::sqrt(dt);
    bundle.common.resize(static_cast<std::size_t>(steps) * m_tilde);
    for (int s = 0; s < steps; ++s) {
        GaussianStream stream(seed, kCommonNoiseLabel, 0, static_cast<std::uint32_t>(s));
        for (int c = 0; c < m_tilde; ++c) {
            bundle.common[static_cast<std::size_t>(s) * m_tilde + c] =
                scale * stream.normal(static_cast<std::uint32_t>(c));
        }
    }

    bundle.idio.resize(labels.size() * static_cast<std::size_t>(steps) * m);
    for (std::size_t p = 0; p < labels.size(); ++p) {
        const std::uint64_t bits = label_to_bits(labels[p]);
        for (int s = 0; s < steps; ++s) {
            GaussianStream stream(seed, bits, replicas[p], static_cast<std::uint32_t>(s));
            double* out = bundle.idio.data() +
                          (p * static_cast<std::size_t>(steps) + static_cast<std::size_t>(s)) *
                              static_cast<std::size_t>(m);
            for (int c = 0; c < m; ++c) out[c] = scale * stream.normal(static_cast<std::uint32_t>(c));
        }
    }
    return bundle;
}

std::vector<double> draw_initial_state(std::uint64_t seed, double label, std::uint32_t replica,
                                       int d, const InitialLaw& law) {
    GaussianStream stream(seed, label_to_bits(label), replica, kInitialDrawStep);
    const double mean = law.mean(label);
    const double sd = law.stddev(label);
    if (!(sd >= 0.0)) throw std::invalid_argument("initial law stddev must be nonnegative");
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) {
        x[static_cast<std::size_t>(c)] = mean + sd * stream.normal(static_cast<std::uint32_t>(c));
    }
    return x;
}

}  // namespace graphonlab
