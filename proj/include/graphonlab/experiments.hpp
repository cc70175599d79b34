#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/graphon.hpp"

namespace graphonlab {

struct RateParams {
    int d = 1;
    double eps = 1.0;
};

// Fournier-Guillin style empirical convergence rate; the excluded parameter
// combinations throw.
double rate_m_n(int n, const RateParams& params);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
};

// ordinary least squares on (log n, log estimate); needs >= 3 positive points
SlopeFit fit_loglog_slope(std::span<const int> ns, std::span<const double> estimates);

struct EstimateRow {
    int n = 0;  // sweep parameter; for spatial rows this is round(1/gap)
    double mean = 0.0;
    double stderr_ = 0.0;
    double nref_delta = 0.0;
};

struct QuantitySeries {
    std::string quantity;
    std::vector<EstimateRow> rows;
    bool has_slope = false;
    SlopeFit slope;
};

struct ExperimentReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string gn_mode;
    int n_ref = 0;
    int cloud = 1;
    int reps = 0;
    std::vector<QuantitySeries> series;

    const QuantitySeries& find(const std::string& quantity) const;
};

struct SweepOptions {
    std::vector<int> n_list;
    int n_ref = 512;
    int reps = 8;
    int delta_reps = 4;             // replications used for the n_ref-doubling delta
    std::string gn_mode = "sample";  // sample | average
    int threads = 1;
};

// Theorem "empirical measures": per replication, W2^2 between the finite
// empirical path measure and the reference averaged law, plus the
// graphon-system variant built from reference particles at labels {i/n}.
ExperimentReport estimate_empirical_lln(const SystemConfig& cfg, const SweepOptions& opt,
                                        std::uint64_t seed);

// Weighted variant: (1/n) sum_i WOP2^2 between the graphon-weighted
// empirical path measure (reference-particle and finite-particle forms) and
// the reference interaction measure field.
ExperimentReport estimate_weighted_lln(const SystemConfig& cfg, const SweepOptions& opt,
                                       std::uint64_t seed);

// Pathwise coupling error against the reference particles at shared labels;
// the discretized graphon is always the sampled one here.
ExperimentReport estimate_coupling_error(const SystemConfig& cfg, const SweepOptions& opt,
                                         std::uint64_t seed);

struct SpatialOptions {
    std::vector<double> gaps{0.0625, 0.125, 0.25, 0.5};
    double base_u = 0.5;
    int n_ref = 16;
    int cloud = 16;
    int reps = 16;
    int delta_reps = 4;
    int threads = 1;
};

// W2^2 between cloud empirical path laws at labels (base_u, base_u + gap)
// under one shared common path per replication.
ExperimentReport estimate_spatial_continuity(const SystemConfig& cfg, const SpatialOptions& opt,
                                             std::uint64_t seed);

}  // namespace graphonlab
