#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphonlab/coefficients.hpp"
#include "graphonlab/config.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/measures.hpp"
#include "graphonlab/noise.hpp"

namespace graphonlab {

struct TrajectoryEnsemble {
    int dim = 0;
    std::vector<double> labels;
    std::vector<std::uint32_t> replicas;
    std::vector<double> time_grid;  // steps + 1 points
    std::vector<double> states;     // particle x time x dim
    std::string config_hash;
    std::uint64_t seed = 0;

    std::size_t size() const { return labels.size(); }
    std::size_t steps() const { return time_grid.size() - 1; }
    std::span<const double> state(std::size_t particle, std::size_t k) const {
        const std::size_t d = static_cast<std::size_t>(dim);
        return {states.data() + (particle * time_grid.size() + k) * d, d};
    }
    // snapshot of all particles at grid index k, particle-major
    std::vector<double> snapshot(std::size_t k) const;
    // trajectory of one particle flattened time-major
    std::vector<double> trajectory(std::size_t particle) const;

    PathMeasure uniform_path_measure() const;
    PathMeasure weighted_path_measure(std::span<const double> weights) const;
    PathMeasure subset_uniform_path_measure(std::span<const std::size_t> particles) const;
    DiscreteMeasure empirical_at(std::size_t k) const;  // uniform marginal

    // index of the particle carrying (label, replica 0); throws when absent
    std::size_t index_of_label(double label) const;
};

// One explicit Euler-Maruyama step. All particles read the same state
// snapshot; particle i's interaction measure is row i of weight_matrix over
// the snapshot atoms, visited in `order` (label-sorted) so summation order
// is canonical under particle permutations.
void step_euler(const CoefficientFamily& fam, double dt, int dim,
                std::span<const double> snapshot, std::span<const double> weight_matrix,
                std::span<const std::size_t> order, std::span<const double> idio_increments,
                std::span<const double> common_increment, std::span<double> next_states,
                int threads);

// General coupled system: arbitrary labels/replicas and a dense interaction
// weight matrix. Finite systems and the continuum reference surrogate both
// run through this engine so their noise coupling is bit-exact by keying.
TrajectoryEnsemble simulate_interacting(const SystemConfig& cfg, std::span<const double> labels,
                                        std::span<const std::uint32_t> replicas,
                                        const std::vector<double>& weight_matrix,
                                        const NoiseBundle& noise, int threads);

// n-particle system with labels {i/n} and weights G^n_{ij}/n
TrajectoryEnsemble simulate_finite(const SystemConfig& cfg, const DiscretizedGraphon& gn,
                                   std::uint64_t seed, int threads);

// interaction weight matrix of the finite system (row i, col j) = G^n_{ij}/n
std::vector<double> finite_weight_matrix(const DiscretizedGraphon& gn);

// dt-halving self-check: strong error estimate between a run at cfg.dt and
// the same noise realization at dt/2 (coarse increments are sums of fine)
double euler_refinement_error(const SystemConfig& cfg, const DiscretizedGraphon& gn,
                              std::uint64_t seed, int threads);

}  // namespace graphonlab
