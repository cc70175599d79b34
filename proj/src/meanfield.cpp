#include "graphonlab/meanfield.hpp"

#include <cmath>
#include <stdexcept>

#include "graphonlab/numeric.hpp"

namespace graphonlab {

ConditionalLawGrid::ConditionalLawGrid(TrajectoryEnsemble ensemble, int n_ref, int cloud_size)
    : ensemble_(std::move(ensemble)), n_ref_(n_ref), cloud_size_(cloud_size) {
    if (n_ref_ < 1 || cloud_size_ < 1) throw std::invalid_argument("reference grid: bad shape");
    if (ensemble_.size() != static_cast<std::size_t>(n_ref_) * cloud_size_) {
        throw std::invalid_argument("reference grid: ensemble size mismatch");
    }
    u_grid_.resize(static_cast<std::size_t>(n_ref_));
    for (int i = 0; i < n_ref_; ++i) {
        u_grid_[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / n_ref_;
    }
}

std::size_t ConditionalLawGrid::label_index(double u) const {
    for (std::size_t i = 0; i < u_grid_.size(); ++i) {
        if (u_grid_[i] == u) return i;
    }
    throw std::invalid_argument("label not on the reference grid");
}

DiscreteMeasure ConditionalLawGrid::conditional_law(double u, double t) const {
    const std::size_t li = label_index(u);
    const std::size_t k = [&] {
        for (std::size_t kk = 0; kk < time_grid().size(); ++kk) {
            if (std::abs(time_grid()[kk] - t) <= 1e-12) return kk;
        }
        throw std::invalid_argument("time not on the reference grid");
    }();
    const std::size_t d = static_cast<std::size_t>(ensemble_.dim);
    std::vector<double> coords(static_cast<std::size_t>(cloud_size_) * d);
    for (int mbr = 0; mbr < cloud_size_; ++mbr) {
        const auto s = ensemble_.state(particle_index(li, mbr), k);
        std::copy(s.begin(), s.end(), coords.begin() + static_cast<std::size_t>(mbr) * d);
    }
    std::vector<double> w(static_cast<std::size_t>(cloud_size_),
                          1.0 / static_cast<double>(cloud_size_));
    return DiscreteMeasure(ensemble_.dim, std::move(coords), std::move(w));
}

PathMeasure ConditionalLawGrid::conditional_law_paths(double u) const {
    const std::size_t li = label_index(u);
    std::vector<std::size_t> particles(static_cast<std::size_t>(cloud_size_));
    for (int mbr = 0; mbr < cloud_size_; ++mbr) {
        particles[static_cast<std::size_t>(mbr)] = particle_index(li, mbr);
    }
    return ensemble_.subset_uniform_path_measure(particles);
}

std::vector<double> ConditionalLawGrid::interaction_weights(const Graphon& g, double u) const {
    std::vector<double> w(ensemble_.size());
    const double cell = 1.0 / (static_cast<double>(n_ref_) * cloud_size_);
    for (std::size_t li = 0; li < u_grid_.size(); ++li) {
        const double guv = g(u, u_grid_[li]);
        for (int mbr = 0; mbr < cloud_size_; ++mbr) {
            w[particle_index(li, mbr)] = guv * cell;
        }
    }
    return w;
}

DiscreteMeasure ConditionalLawGrid::interaction_measure(const Graphon& g, double u,
                                                        double t) const {
    const std::size_t k = [&] {
        for (std::size_t kk = 0; kk < time_grid().size(); ++kk) {
            if (std::abs(time_grid()[kk] - t) <= 1e-12) return kk;
        }
        throw std::invalid_argument("time not on the reference grid");
    }();
    const auto w = interaction_weights(g, u);
    const auto coords = ensemble_.snapshot(k);
    return DiscreteMeasure(ensemble_.dim, coords, w);
}

PathMeasure ConditionalLawGrid::interaction_measure_paths(const Graphon& g, double u) const {
    return ensemble_.weighted_path_measure(interaction_weights(g, u));
}

DiscreteMeasure ConditionalLawGrid::averaged_law(double t) const {
    const std::size_t k = [&] {
        for (std::size_t kk = 0; kk < time_grid().size(); ++kk) {
            if (std::abs(time_grid()[kk] - t) <= 1e-12) return kk;
        }
        throw std::invalid_argument("time not on the reference grid");
    }();
    return ensemble_.empirical_at(k);
}

PathMeasure ConditionalLawGrid::averaged_law_paths() const {
    return ensemble_.uniform_path_measure();
}

ConditionalLawGrid simulate_reference(const SystemConfig& cfg, const Graphon& g, int n_ref,
                                      int cloud_size, std::uint64_t seed, int threads) {
    if (n_ref < 1 || cloud_size < 1) throw std::invalid_argument("reference: bad shape");
    const std::size_t total = static_cast<std::size_t>(n_ref) * cloud_size;
    std::vector<double> labels(total);
    std::vector<std::uint32_t> replicas(total);
    for (int i = 0; i < n_ref; ++i) {
        for (int mbr = 0; mbr < cloud_size; ++mbr) {
            const std::size_t p =
                static_cast<std::size_t>(i) * cloud_size + static_cast<std::size_t>(mbr);
            labels[p] = static_cast<double>(i + 1) / n_ref;
            replicas[p] = static_cast<std::uint32_t>(mbr);
        }
    }

    // left-endpoint quadrature over v with weight G(u, v)/(n_ref * M)
    std::vector<double> weight_matrix(total * total);
    const double cell = 1.0 / (static_cast<double>(n_ref) * cloud_size);
    for (std::size_t p = 0; p < total; ++p) {
        for (std::size_t q = 0; q < total; ++q) {
            weight_matrix[p * total + q] = g(labels[p], labels[q]) * cell;
        }
    }

    const NoiseBundle noise =
        generate_noise(seed, labels, replicas, cfg.steps(), cfg.m, cfg.m_tilde, cfg.dt);
    TrajectoryEnsemble ens = simulate_interacting(cfg, labels, replicas, weight_matrix, noise,
                                                  threads);
    return ConditionalLawGrid(std::move(ens), n_ref, cloud_size);
}

}  // namespace graphonlab
