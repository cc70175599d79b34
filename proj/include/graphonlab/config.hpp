#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphonlab/graphon.hpp"

namespace graphonlab {

// value(u) = intercept + slope * u
struct AffineInU {
    double intercept = 0.0;
    double slope = 0.0;
    double operator()(double u) const { return intercept + slope * u; }
};

// Gaussian per component: N(mean(u), std(u)^2)
struct InitialLaw {
    AffineInU mean;
    AffineInU stddev;
};

struct CoefficientSpec {
    std::string family;  // zero | linear_tanh | mean_revert_tanh
    double drift_scale = 0.0;
    double idio_scale = 0.0;
    double common_scale = 0.0;
    double revert_rate = 0.0;
};

struct SystemConfig {
    int schema_version = 1;
    int d = 1;
    int m = 1;
    int m_tilde = 1;
    double horizon = 1.0;
    double dt = 0.1;
    int n = 1;
    CoefficientSpec coefficients;
    InitialLaw initial_law;
    double lipschitz_L = 1.0;
    double moment_K = 1.0;
    double moment_eps = 1.0;
    Graphon graphon = Graphon::constant(1.0);

    int steps() const;  // horizon/dt, validated integral within 1e-9
    std::vector<double> time_grid() const;
    void check() const;  // throws on invariant violations
};

// strict parse: unknown fields are fatal, schema_version required
SystemConfig parse_config(const std::string& json_text);
SystemConfig load_config(const std::string& path);
std::string config_to_json(const SystemConfig& cfg);

// stable content hash over the canonical JSON form
std::string config_hash(const SystemConfig& cfg);
std::uint64_t fnv1a64(const std::string& text);

Graphon parse_graphon_spec(const std::string& json_text);

}  // namespace graphonlab
