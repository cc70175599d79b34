#pragma once

#include <random>
#include <vector>

#include "graphonlab/measures.hpp"

namespace testsupport {

inline graphonlab::DiscreteMeasure random_measure(std::mt19937& rng, int dim, int max_atoms,
                                                  double max_mass, bool allow_zero_weights = true) {
    std::uniform_int_distribution<int> n_atoms(1, max_atoms);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = n_atoms(rng);
    std::vector<double> coords(static_cast<std::size_t>(n) * dim);
    for (double& c : coords) c = coord(rng);
    std::vector<double> weights(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& w : weights) {
        w = unit(rng);
        if (allow_zero_weights && unit(rng) < 0.1) w = 0.0;
        total += w;
    }
    const double target = max_mass * unit(rng);
    if (total > 0.0) {
        for (double& w : weights) w *= target / total;
    }
    return graphonlab::DiscreteMeasure(dim, std::move(coords), std::move(weights));
}

inline graphonlab::PathMeasure random_path_measure(std::mt19937& rng, int dim, int max_atoms,
                                                   int grid_points, double max_mass) {
    std::uniform_int_distribution<int> n_atoms(1, max_atoms);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = n_atoms(rng);
    std::vector<double> grid(static_cast<std::size_t>(grid_points));
    for (int k = 0; k < grid_points; ++k) grid[static_cast<std::size_t>(k)] = k * 0.25;
    std::vector<double> coords(static_cast<std::size_t>(n) * grid_points * dim);
    for (double& c : coords) c = coord(rng);
    std::vector<double> weights(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& w : weights) {
        w = unit(rng);
        total += w;
    }
    const double target = max_mass * unit(rng);
    if (total > 0.0) {
        for (double& w : weights) w *= target / total;
    }
    return graphonlab::PathMeasure(dim, std::move(grid), std::move(coords), std::move(weights));
}

inline graphonlab::DiscreteMeasure uniform_measure(std::mt19937& rng, int dim, int atoms) {
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::vector<double> coords(static_cast<std::size_t>(atoms) * dim);
    for (double& c : coords) c = coord(rng);
    std::vector<double> weights(static_cast<std::size_t>(atoms),
                                1.0 / static_cast<double>(atoms));
    return graphonlab::DiscreteMeasure(dim, std::move(coords), std::move(weights));
}

}  // namespace testsupport
