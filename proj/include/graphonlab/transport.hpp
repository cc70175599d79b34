#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "graphonlab/measures.hpp"

namespace graphonlab {

// Feasible coupling between two weight vectors together with its transport
// cost for the declared ground cost.
struct TransportPlan {
    std::vector<double> row_masses;
    std::vector<double> col_masses;
    std::vector<std::tuple<int, int, double>> flow;  // (row, col, amount), amount > 0
    double cost = 0.0;

    double max_marginal_residual() const;
};

// Exact minimum-cost transportation on a dense cost matrix. Row and column
// masses must balance within 1e-9. Primary engine is a transportation
// network simplex whose result is certified (marginals, dual feasibility,
// duality gap); on certificate failure the instance is re-solved with
// successive shortest paths.
TransportPlan solve_transport(int n_rows, int n_cols, std::span<const double> cost,
                              std::span<const double> row_mass, std::span<const double> col_mass);

// Successive-shortest-path engine, exposed for cross-checking.
TransportPlan solve_transport_ssp(int n_rows, int n_cols, std::span<const double> cost,
                                  std::span<const double> row_mass,
                                  std::span<const double> col_mass);

struct W2Result {
    double distance = 0.0;
    TransportPlan plan;
};

// Exact 2-Wasserstein between equal-mass measures: sqrt of the minimal
// unnormalized Kantorovich cost with squared ground distance. Uniform
// equal-cardinality inputs route through an assignment solver.
W2Result w2_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
W2Result w2_exact(const PathMeasure& mu, const PathMeasure& nu);

// Exhaustive oracle: uniform weights, equal cardinality, at most 8 atoms.
double w2_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu);
double w2_bruteforce(const PathMeasure& mu, const PathMeasure& nu);

struct Wop2Result {
    double value = 0.0;
    double mass_gap = 0.0;  // m_mu - m_nu
    double w2_term = 0.0;
    TransportPlan plan;
};

// WOP2 by definition: sqrt(gap^2 + W2^2 between the mass-scaled
// normalizations), with the Dirac-at-zero convention for zero mass.
Wop2Result wop2(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ReferencePoint& x0);
Wop2Result wop2(const PathMeasure& mu, const PathMeasure& nu, const ReferencePoint& x0);

// Closed-form identity valid on state space only; calling it through the
// path-measure overload signals misuse.
double wop2_closed_form(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        const ReferencePoint& x0);
double wop2_closed_form(const PathMeasure& mu, const PathMeasure& nu, const ReferencePoint& x0);

// Right side of the path-space inequality; an upper bound for wop2 that
// collapses to it when the masses agree.
double wop2_path_upper_bound(const PathMeasure& mu, const PathMeasure& nu,
                             const ReferencePoint& x0);

// W2 between the time-t marginals of two equal-mass path measures.
double marginal_restriction_w2(const PathMeasure& mu, const PathMeasure& nu, double t);

// Minimal coupling cost with |x-y|^p ground cost (internal use by the
// initial-law validator; not part of the metric API).
double wasserstein_power_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

}  // namespace graphonlab
