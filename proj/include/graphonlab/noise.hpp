#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphonlab/config.hpp"

namespace graphonlab {

// Pregenerated Brownian increments with variance dt per component. Streams
// are keyed on (master_seed, label, replica, step), so the same label always
// reproduces the same idiosyncratic path no matter which system asks, and
// the common path depends on the seed alone. Replica 0 is the canonical
// stream used for coupling across systems.
struct NoiseBundle {
    std::uint64_t master_seed = 0;
    int steps = 0;
    int m = 0;
    int m_tilde = 0;
    double dt = 0.0;
    std::vector<double> labels;
    std::vector<std::uint32_t> replicas;
    std::vector<double> common;  // steps x m_tilde
    std::vector<double> idio;    // particle x steps x m

    std::span<const double> common_increment(int step) const {
        return {common.data() + static_cast<std::size_t>(step) * m_tilde,
                static_cast<std::size_t>(m_tilde)};
    }
    std::span<const double> idio_increment(std::size_t particle, int step) const {
        return {idio.data() +
                    (particle * static_cast<std::size_t>(steps) + static_cast<std::size_t>(step)) *
                        static_cast<std::size_t>(m),
                static_cast<std::size_t>(m)};
    }
};

// labels paired with replicas must be distinct
NoiseBundle generate_noise(std::uint64_t seed, std::span<const double> labels,
                           std::span<const std::uint32_t> replicas, int steps, int m, int m_tilde,
                           double dt);

// initial state draw for one particle under the per-label Gaussian law
std::vector<double> draw_initial_state(std::uint64_t seed, double label, std::uint32_t replica,
                                       int d, const InitialLaw& law);

}  // namespace graphonlab
