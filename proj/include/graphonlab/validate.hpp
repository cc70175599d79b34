#pragma once

#include <string>
#include <vector>

#include "graphonlab/config.hpp"

namespace graphonlab {

struct CheckResult {
    std::string name;
    bool pass = true;  // WARN otherwise; schema errors throw before this point
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

// Probe-based assumption checks: coefficient bound/Lipschitz sampling,
// initial-law moments and label continuity, graphon Lipschitz estimates, and
// the cut-norm refinement surrogate. WARNs never block a run.
ValidationReport validate_config(const SystemConfig& cfg, int threads = 1);

// Appendix-style kernel-family bound: max violation of
//   |phi(x,mu) - phi(x,nu)|^2 <= max{4L^2, 4L^2 K + 2L^2} * wop2^2(mu,nu)
// over `probes` random probe tuples drawn inside M_{2,K}. Returns the worst
// (lhs - rhs) seen, negative when the bound holds everywhere.
double linear_family_bound_violation(const SystemConfig& cfg, int probes, std::uint64_t seed);

}  // namespace graphonlab
