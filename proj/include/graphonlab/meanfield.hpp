#pragma once

#include <cstdint>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/measures.hpp"
#include "graphonlab/sde.hpp"

namespace graphonlab {

// Fine surrogate of the continuum system: labels {i/n_ref} each carrying a
// cloud of M particles driven by one shared common path. Replica 0 of each
// cloud is the canonical particle coupled to finite systems at the same
// label.
class ConditionalLawGrid {
  public:
    ConditionalLawGrid(TrajectoryEnsemble ensemble, int n_ref, int cloud_size);

    int n_ref() const { return n_ref_; }
    int cloud_size() const { return cloud_size_; }
    const TrajectoryEnsemble& ensemble() const { return ensemble_; }
    const std::vector<double>& u_grid() const { return u_grid_; }
    const std::vector<double>& time_grid() const { return ensemble_.time_grid; }

    std::size_t label_index(double u) const;       // throws when u not on grid
    std::size_t particle_index(std::size_t label_idx, int member) const {
        return label_idx * static_cast<std::size_t>(cloud_size_) + static_cast<std::size_t>(member);
    }

    // uniform empirical law of the cloud at label u (mass 1)
    DiscreteMeasure conditional_law(double u, double t) const;
    PathMeasure conditional_law_paths(double u) const;

    // graphon-weighted union over all clouds: atom from cloud v has weight
    // G(u, v) / (n_ref * M); total mass = (1/n_ref) sum_v G(u, v)
    DiscreteMeasure interaction_measure(const Graphon& g, double u, double t) const;
    PathMeasure interaction_measure_paths(const Graphon& g, double u) const;
    std::vector<double> interaction_weights(const Graphon& g, double u) const;

    // uniform mixture over labels of the conditional laws (mass 1)
    DiscreteMeasure averaged_law(double t) const;
    PathMeasure averaged_law_paths() const;

  private:
    TrajectoryEnsemble ensemble_;
    int n_ref_;
    int cloud_size_;
    std::vector<double> u_grid_;
};

ConditionalLawGrid simulate_reference(const SystemConfig& cfg, const Graphon& g, int n_ref,
                                      int cloud_size, std::uint64_t seed, int threads);

}  // namespace graphonlab
