#include "graphonlab/transport.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "graphonlab/numeric.hpp"

namespace graphonlab {

namespace {

constexpr double kMassTol = 1e-9;

double vec_sum(std::span<const double> x) { return pairwise_sum(x); }

bool is_uniform(std::span<const double> w) {
    for (double x : w) {
        if (x != w[0]) return false;
    }
    return !w.empty() && w[0] > 0.0;
}

// ---------------------------------------------------------------------------
// Assignment fast path (Jonker-Volgenant style shortest augmenting paths).
// Returns for each column the assigned row.
// ---------------------------------------------------------------------------
std::vector<int> solve_assignment(int n, std::span<const double> cost) {
    const double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);    // p[j]: row matched to col j
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);  // alternating-path trace
    std::vector<double> minv(static_cast<std::size_t>(n) + 1);
    std::vector<char> used(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), char{0});
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = kInf;
            const double* row = cost.data() + static_cast<std::size_t>(i0 - 1) * n;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = row[j - 1] - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_of_col(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) row_of_col[static_cast<std::size_t>(j - 1)] = p[static_cast<std::size_t>(j)] - 1;
    return row_of_col;
}

// ---------------------------------------------------------------------------
// Transportation network simplex on the complete bipartite graph.
// Nodes: sources 0..nr-1, sinks nr..nr+nc-1. Basis is a spanning tree.
// ---------------------------------------------------------------------------
class NetworkSimplex {
  public:
    NetworkSimplex(int nr, int nc, std::span<const double> cost, std::span<const double> a,
                   std::span<const double> b)
        : nr_(nr), nc_(nc), n_nodes_(nr + nc), cost_(cost) {
        flow_.assign(static_cast<std::size_t>(nr_) * nc_, 0.0);
        adj_.assign(static_cast<std::size_t>(n_nodes_), {});
        parent_.assign(static_cast<std::size_t>(n_nodes_), -1);
        pot_.assign(static_cast<std::size_t>(n_nodes_), 0.0);
        init_northwest(a, b);
        rebuild_tree();
        double cmax = 0.0;
        for (double c : cost_) cmax = std::max(cmax, std::abs(c));
        enter_tol_ = 64.0 * DBL_EPSILON * (cmax + 1.0);
    }

    // false when the pivot cap was hit (caller falls back to SSP)
    bool run() {
        const std::size_t cells = static_cast<std::size_t>(nr_) * nc_;
        const std::size_t block = std::max<std::size_t>(64, cells / 128);
        const long max_pivots = 64L * n_nodes_ + static_cast<long>(cells);
        std::size_t scan = 0;
        long pivots = 0;
        while (true) {
            // block search: first block containing an improving cell wins,
            // take its most negative entry
            int best_i = -1, best_j = -1;
            double best_rc = -enter_tol_;
            std::size_t seen = 0;
            while (seen < cells) {
                const std::size_t stop = std::min(cells, seen + block);
                for (; seen < stop; ++seen) {
                    const std::size_t cell = (scan + seen) % cells;
                    const int i = static_cast<int>(cell / static_cast<std::size_t>(nc_));
                    const int j = static_cast<int>(cell % static_cast<std::size_t>(nc_));
                    const double rc = cost_[cell] - pot_[static_cast<std::size_t>(i)] -
                                      pot_[static_cast<std::size_t>(nr_ + j)];
                    if (rc < best_rc) {
                        best_rc = rc;
                        best_i = i;
                        best_j = j;
                    }
                }
                if (best_i >= 0) break;
            }
            scan = (scan + seen) % cells;
            if (best_i < 0) return true;  // dual feasible: optimal
            pivot(best_i, nr_ + best_j);
            if (++pivots > max_pivots) return false;
        }
    }

    double flow(int i, int j) const { return flow_[static_cast<std::size_t>(i) * nc_ + j]; }
    double potential(int node) const { return pot_[static_cast<std::size_t>(node)]; }
    double min_reduced_cost() const {
        double worst = 0.0;
        for (int i = 0; i < nr_; ++i) {
            for (int j = 0; j < nc_; ++j) {
                const double rc = cost_[static_cast<std::size_t>(i) * nc_ + j] -
                                  pot_[static_cast<std::size_t>(i)] -
                                  pot_[static_cast<std::size_t>(nr_ + j)];
                worst = std::min(worst, rc);
            }
        }
        return worst;
    }

  private:
    void add_edge(int u, int v) {
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }

    void remove_edge(int u, int v) {
        auto& au = adj_[static_cast<std::size_t>(u)];
        au.erase(std::find(au.begin(), au.end(), v));
        auto& av = adj_[static_cast<std::size_t>(v)];
        av.erase(std::find(av.begin(), av.end(), u));
    }

    // staircase basis: exactly nr+nc-1 basic cells forming a spanning tree
    void init_northwest(std::span<const double> a, std::span<const double> b) {
        int i = 0, j = 0;
        double ra = a[0], rb = b[0];
        while (true) {
            if (i + 1 < nr_ && (ra < rb || j + 1 == nc_)) {
                flow_[static_cast<std::size_t>(i) * nc_ + j] = ra;
                add_edge(i, nr_ + j);
                rb -= ra;
                ++i;
                ra = a[static_cast<std::size_t>(i)];
            } else if (j + 1 < nc_) {
                flow_[static_cast<std::size_t>(i) * nc_ + j] = rb;
                add_edge(i, nr_ + j);
                ra -= rb;
                ++j;
                rb = b[static_cast<std::size_t>(j)];
            } else {
                flow_[static_cast<std::size_t>(i) * nc_ + j] = std::min(ra, rb);
                add_edge(i, nr_ + j);
                break;
            }
        }
    }

    void rebuild_tree() {
        std::fill(parent_.begin(), parent_.end(), -2);
        bfs_order_.clear();
        bfs_order_.push_back(0);
        parent_[0] = -1;
        for (std::size_t head = 0; head < bfs_order_.size(); ++head) {
            const int v = bfs_order_[head];
            for (int w : adj_[static_cast<std::size_t>(v)]) {
                if (parent_[static_cast<std::size_t>(w)] == -2) {
                    parent_[static_cast<std::size_t>(w)] = v;
                    bfs_order_.push_back(w);
                }
            }
        }
        pot_[0] = 0.0;
        for (std::size_t k = 1; k < bfs_order_.size(); ++k) {
            const int v = bfs_order_[k];
            const int p = parent_[static_cast<std::size_t>(v)];
            const double c = arc_cost(v, p);
            pot_[static_cast<std::size_t>(v)] = c - pot_[static_cast<std::size_t>(p)];
        }
    }

    double arc_cost(int u, int v) const {
        const int src = u < nr_ ? u : v;
        const int snk = u < nr_ ? v : u;
        return cost_[static_cast<std::size_t>(src) * nc_ + (snk - nr_)];
    }

    double& arc_flow(int u, int v) {
        const int src = u < nr_ ? u : v;
        const int snk = u < nr_ ? v : u;
        return flow_[static_cast<std::size_t>(src) * nc_ + (snk - nr_)];
    }

    // push theta around the unique cycle closed by arc (ei -> ej_node)
    void pivot(int ei, int ej_node) {
        // path ei -> root, marked; then walk ej up to the first marked node
        static thread_local std::vector<int> stamp;
        static thread_local int stamp_gen = 0;
        if (stamp.size() != static_cast<std::size_t>(n_nodes_)) {
            stamp.assign(static_cast<std::size_t>(n_nodes_), 0);
            stamp_gen = 0;
        }
        ++stamp_gen;
        for (int v = ei; v != -1; v = parent_[static_cast<std::size_t>(v)]) {
            stamp[static_cast<std::size_t>(v)] = stamp_gen;
        }
        int lca = ej_node;
        while (stamp[static_cast<std::size_t>(lca)] != stamp_gen) {
            lca = parent_[static_cast<std::size_t>(lca)];
        }

        // cycle node sequence from ei up to lca, then lca down to ej_node
        path_up_.clear();
        for (int v = ei; v != lca; v = parent_[static_cast<std::size_t>(v)]) path_up_.push_back(v);
        path_down_.clear();
        for (int v = ej_node; v != lca; v = parent_[static_cast<std::size_t>(v)]) {
            path_down_.push_back(v);
        }

        // Arc t steps away from ei along the tree path carries -theta when t
        // is even, +theta when odd (alternating marginal balance).
        double theta = std::numeric_limits<double>::infinity();
        int leave_u = -1, leave_v = -1;
        const std::size_t up_len = path_up_.size();
        const std::size_t total = up_len + path_down_.size();
        auto arc_at = [&](std::size_t t, int& u, int& v) {
            if (t < up_len) {
                u = path_up_[t];
                v = parent_[static_cast<std::size_t>(u)];
            } else {
                // positions counted from the ej end of the down path
                const std::size_t r = total - 1 - t;
                u = path_down_[r];
                v = parent_[static_cast<std::size_t>(u)];
            }
        };
        for (std::size_t t = 0; t < total; t += 2) {  // decreasing arcs
            int u, v;
            arc_at(t, u, v);
            const double f = arc_flow(u, v);
            if (f < theta) {
                theta = f;
                leave_u = u;
                leave_v = v;
            }
        }
        for (std::size_t t = 0; t < total; ++t) {
            int u, v;
            arc_at(t, u, v);
            arc_flow(u, v) += (t % 2 == 0) ? -theta : theta;
        }
        arc_flow(ei, ej_node) += theta;
        arc_flow(leave_u, leave_v) = 0.0;  // clamp fp dust on the leaving arc

        remove_edge(leave_u, leave_v);
        add_edge(ei, ej_node);
        rebuild_tree();
    }

    int nr_, nc_, n_nodes_;
    std::span<const double> cost_;
    std::vector<double> flow_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_;
    std::vector<int> bfs_order_;
    std::vector<double> pot_;
    std::vector<int> path_up_, path_down_;
    double enter_tol_ = 0.0;
};

void check_balance(std::span<const double> a, std::span<const double> b) {
    const double sa = vec_sum(a);
    const double sb = vec_sum(b);
    if (std::abs(sa - sb) > kMassTol * std::max(1.0, std::max(sa, sb))) {
        throw std::invalid_argument("transport: row/column masses do not balance");
    }
    if (!(sa > 0.0) || !(sb > 0.0)) {
        throw std::invalid_argument("transport: zero total mass");
    }
}

TransportPlan plan_from_dense(int nr, int nc, std::span<const double> cost,
                              std::span<const double> a, std::span<const double> b,
                              const std::vector<double>& flow) {
    TransportPlan plan;
    plan.row_masses.assign(a.begin(), a.end());
    plan.col_masses.assign(b.begin(), b.end());
    std::vector<double> terms;
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nc; ++j) {
            const double f = flow[static_cast<std::size_t>(i) * nc + j];
            if (f > 0.0) {
                plan.flow.emplace_back(i, j, f);
                terms.push_back(f * cost[static_cast<std::size_t>(i) * nc + j]);
            }
        }
    }
    plan.cost = pairwise_sum(terms);
    return plan;
}

}  // namespace

double TransportPlan::max_marginal_residual() const {
    std::vector<double> row(row_masses.size(), 0.0), col(col_masses.size(), 0.0);
    for (const auto& [i, j, f] : flow) {
        row[static_cast<std::size_t>(i)] += f;
        col[static_cast<std::size_t>(j)] += f;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        worst = std::max(worst, std::abs(row[i] - row_masses[i]));
    }
    for (std::size_t j = 0; j < col.size(); ++j) {
        worst = std::max(worst, std::abs(col[j] - col_masses[j]));
    }
    return worst;
}

TransportPlan solve_transport_ssp(int nr, int nc, std::span<const double> cost,
                                  std::span<const double> a, std::span<const double> b) {
    check_balance(a, b);
    const double kInf = std::numeric_limits<double>::infinity();
    const int n_nodes = nr + nc;
    std::vector<double> flow(static_cast<std::size_t>(nr) * nc, 0.0);
    std::vector<double> ra(a.begin(), a.end());
    std::vector<double> rb(b.begin(), b.end());
    // rescale columns so the totals match exactly up to fp dust
    {
        const double scale = vec_sum(a) / vec_sum(b);
        for (double& x : rb) x *= scale;
    }
    std::vector<double> pot(static_cast<std::size_t>(n_nodes), 0.0);
    std::vector<double> dist(static_cast<std::size_t>(n_nodes));
    std::vector<int> pred(static_cast<std::size_t>(n_nodes));
    std::vector<char> done(static_cast<std::size_t>(n_nodes));

    const double total = vec_sum(a);
    const double stop_tol = 1e-15 * std::max(1.0, total);
    long iterations = 0;
    const long cap = 10L * n_nodes + 100;
    while (true) {
        double remaining = 0.0;
        for (double x : ra) remaining += x;
        if (remaining <= stop_tol) break;
        if (++iterations > cap) {
            throw std::runtime_error("transport: successive-shortest-path iteration cap");
        }

        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(done.begin(), done.end(), char{0});
        std::fill(pred.begin(), pred.end(), -1);
        for (int i = 0; i < nr; ++i) {
            if (ra[static_cast<std::size_t>(i)] > 0.0) dist[static_cast<std::size_t>(i)] = 0.0;
        }
        int target = -1;
        while (true) {
            int v = -1;
            double dv = kInf;
            for (int u = 0; u < n_nodes; ++u) {
                if (!done[static_cast<std::size_t>(u)] && dist[static_cast<std::size_t>(u)] < dv) {
                    dv = dist[static_cast<std::size_t>(u)];
                    v = u;
                }
            }
            if (v < 0) break;
            done[static_cast<std::size_t>(v)] = 1;
            if (v >= nr && rb[static_cast<std::size_t>(v - nr)] > 0.0) {
                target = v;
                break;
            }
            if (v < nr) {
                const double* row = cost.data() + static_cast<std::size_t>(v) * nc;
                for (int j = 0; j < nc; ++j) {
                    const int w = nr + j;
                    if (done[static_cast<std::size_t>(w)]) continue;
                    const double rc = row[j] + pot[static_cast<std::size_t>(v)] -
                                      pot[static_cast<std::size_t>(w)];
                    const double nd = dv + rc;
                    if (nd < dist[static_cast<std::size_t>(w)]) {
                        dist[static_cast<std::size_t>(w)] = nd;
                        pred[static_cast<std::size_t>(w)] = v;
                    }
                }
            } else {
                const int j = v - nr;
                for (int i = 0; i < nr; ++i) {
                    if (done[static_cast<std::size_t>(i)]) continue;
                    if (flow[static_cast<std::size_t>(i) * nc + j] <= 0.0) continue;
                    const double rc = -cost[static_cast<std::size_t>(i) * nc + j] +
                                      pot[static_cast<std::size_t>(v)] -
                                      pot[static_cast<std::size_t>(i)];
                    const double nd = dv + rc;
                    if (nd < dist[static_cast<std::size_t>(i)]) {
                        dist[static_cast<std::size_t>(i)] = nd;
                        pred[static_cast<std::size_t>(i)] = v;
                    }
                }
            }
        }
        if (target < 0) {
            throw std::runtime_error("transport: no augmenting path (unbalanced instance)");
        }
        const double dt = dist[static_cast<std::size_t>(target)];
        for (int u = 0; u < n_nodes; ++u) {
            pot[static_cast<std::size_t>(u)] += std::min(dist[static_cast<std::size_t>(u)], dt);
        }
        // bottleneck along the predecessor chain
        double theta = rb[static_cast<std::size_t>(target - nr)];
        for (int v = target; pred[static_cast<std::size_t>(v)] != -1;
             v = pred[static_cast<std::size_t>(v)]) {
            const int u = pred[static_cast<std::size_t>(v)];
            if (u >= nr) {  // backward arc v(source) <- u(sink)
                theta = std::min(theta, flow[static_cast<std::size_t>(v) * nc + (u - nr)]);
            }
        }
        {
            int head = target;
            while (pred[static_cast<std::size_t>(head)] != -1) {
                head = pred[static_cast<std::size_t>(head)];
            }
            theta = std::min(theta, ra[static_cast<std::size_t>(head)]);
            ra[static_cast<std::size_t>(head)] -= theta;
            if (ra[static_cast<std::size_t>(head)] < 0.0) ra[static_cast<std::size_t>(head)] = 0.0;
        }
        rb[static_cast<std::size_t>(target - nr)] -= theta;
        if (rb[static_cast<std::size_t>(target - nr)] < 0.0) {
            rb[static_cast<std::size_t>(target - nr)] = 0.0;
        }
        for (int v = target; pred[static_cast<std::size_t>(v)] != -1;
             v = pred[static_cast<std::size_t>(v)]) {
            const int u = pred[static_cast<std::size_t>(v)];
            if (u < nr) {
                flow[static_cast<std::size_t>(u) * nc + (v - nr)] += theta;
            } else {
                flow[static_cast<std::size_t>(v) * nc + (u - nr)] -= theta;
            }
        }
    }
    return plan_from_dense(nr, nc, cost, a, b, flow);
}

TransportPlan solve_transport(int nr, int nc, std::span<const double> cost,
                              std::span<const double> a, std::span<const double> b) {
    if (nr < 1 || nc < 1) throw std::invalid_argument("transport: empty side");
    if (cost.size() != static_cast<std::size_t>(nr) * nc || a.size() != static_cast<std::size_t>(nr) ||
        b.size() != static_cast<std::size_t>(nc)) {
        throw std::invalid_argument("transport: shape mismatch");
    }
    check_balance(a, b);

    if (nr == 1 || nc == 1) {
        std::vector<double> flow(static_cast<std::size_t>(nr) * nc, 0.0);
        if (nr == 1) {
            for (int j = 0; j < nc; ++j) flow[static_cast<std::size_t>(j)] = b[static_cast<std::size_t>(j)];
        } else {
            for (int i = 0; i < nr; ++i) flow[static_cast<std::size_t>(i) * nc] = a[static_cast<std::size_t>(i)];
        }
        return plan_from_dense(nr, nc, cost, a, b, flow);
    }

    // exact balance for the simplex; plan feasibility is still reported
    // against the caller's masses
    std::vector<double> b_scaled(b.begin(), b.end());
    {
        const double scale = vec_sum(a) / vec_sum(b);
        for (double& x : b_scaled) x *= scale;
    }

    NetworkSimplex ns(nr, nc, cost, a, b_scaled);
    bool ok = ns.run();
    TransportPlan plan;
    if (ok) {
        std::vector<double> flow(static_cast<std::size_t>(nr) * nc);
        for (int i = 0; i < nr; ++i) {
            for (int j = 0; j < nc; ++j) flow[static_cast<std::size_t>(i) * nc + j] = ns.flow(i, j);
        }
        plan = plan_from_dense(nr, nc, cost, a, b, flow);
        // certificate: feasibility, dual feasibility, and zero duality gap
        double cmax = 0.0;
        for (double c : cost) cmax = std::max(cmax, std::abs(c));
        const double mass = vec_sum(a);
        std::vector<double> dual_terms;
        dual_terms.reserve(a.size() + b.size());
        for (int i = 0; i < nr; ++i) dual_terms.push_back(a[static_cast<std::size_t>(i)] * ns.potential(i));
        for (int j = 0; j < nc; ++j) {
            dual_terms.push_back(b_scaled[static_cast<std::size_t>(j)] * ns.potential(nr + j));
        }
        const double dual = pairwise_sum(dual_terms);
        const double gap_tol = 1e-8 * (1.0 + std::abs(plan.cost) + cmax * mass);
        ok = plan.max_marginal_residual() <= 5e-9 && ns.min_reduced_cost() >= -1e-8 * (cmax + 1.0) &&
             std::abs(plan.cost - dual) <= gap_tol;
    }
    if (!ok) plan = solve_transport_ssp(nr, nc, cost, a, b);
    return plan;
}

namespace {

// ---------------------------------------------------------------------------
// W2 plumbing shared between state and path space
// ---------------------------------------------------------------------------

std::vector<double> cost_matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> c(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto ai = mu.atom(i);
        for (std::size_t j = 0; j < nu.size(); ++j) {
            c[i * nu.size() + j] = state_dist2(ai, nu.atom(j));
        }
    }
    return c;
}

std::vector<double> cost_matrix(const PathMeasure& mu, const PathMeasure& nu) {
    std::vector<double> c(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) {
            c[i * nu.size() + j] = path_sup_dist2(mu, i, nu, j);
        }
    }
    return c;
}

template <class Measure>
void check_w2_inputs(const Measure& mu, const Measure& nu) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("w2: dimension mismatch");
    if (mu.size() == 0 || nu.size() == 0) throw std::invalid_argument("w2: empty support");
    const double ma = mu.total_mass();
    const double mb = nu.total_mass();
    if (!(ma > 0.0) || !(mb > 0.0)) throw std::invalid_argument("w2: empty support");
    if (std::abs(ma - mb) > kMassTol * std::max(1.0, std::max(ma, mb))) {
        throw std::invalid_argument("w2: mass mismatch");
    }
}

template <class Measure>
W2Result w2_impl(const Measure& mu, const Measure& nu) {
    check_w2_inputs(mu, nu);
    const auto cost = cost_matrix(mu, nu);
    const int nr = static_cast<int>(mu.size());
    const int nc = static_cast<int>(nu.size());

    if (nr == nc && is_uniform(mu.weights()) && is_uniform(nu.weights())) {
        const auto row_of_col = solve_assignment(nr, cost);
        TransportPlan plan;
        plan.row_masses = mu.weights();
        plan.col_masses = nu.weights();
        const double w = mu.weights()[0];
        for (int j = 0; j < nc; ++j) {
            plan.flow.emplace_back(row_of_col[static_cast<std::size_t>(j)], j, w);
        }
        // canonical term order for reproducible summation
        std::sort(plan.flow.begin(), plan.flow.end());
        std::vector<double> terms(plan.flow.size());
        for (std::size_t k = 0; k < plan.flow.size(); ++k) {
            const auto& [i, j, f] = plan.flow[k];
            terms[k] = f * cost[static_cast<std::size_t>(i) * nc + j];
        }
        plan.cost = pairwise_sum(terms);
        return {std::sqrt(std::max(plan.cost, 0.0)), std::move(plan)};
    }

    TransportPlan plan = solve_transport(nr, nc, cost, mu.weights(), nu.weights());
    return {std::sqrt(std::max(plan.cost, 0.0)), std::move(plan)};
}

template <class Measure>
double bruteforce_impl(const Measure& mu, const Measure& nu, const std::vector<double>& cost) {
    if (mu.size() != nu.size()) throw std::invalid_argument("bruteforce: unequal cardinality");
    if (mu.size() > 8) throw std::invalid_argument("bruteforce: more than 8 atoms");
    if (!is_uniform(mu.weights()) || !is_uniform(nu.weights())) {
        throw std::invalid_argument("bruteforce: weights must be uniform");
    }
    check_w2_inputs(mu, nu);
    const std::size_t n = mu.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) total += cost[i * n + perm[i]];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::sqrt(mu.weights()[0] * best);
}

template <class Measure>
int compare_measures(const Measure& a, const Measure& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    if (a.weights() != b.weights()) return a.weights() < b.weights() ? -1 : 1;
    if (a.coords() != b.coords()) return a.coords() < b.coords() ? -1 : 1;
    return 0;
}

template <class Measure>
bool identical_storage(const Measure& a, const Measure& b) {
    return a.dim() == b.dim() && a.weights() == b.weights() && a.coords() == b.coords();
}

template <class Measure>
Wop2Result wop2_impl(const Measure& mu, const Measure& nu, const ReferencePoint& x0) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("wop2: dimension mismatch");
    if (x0.dim() != mu.dim()) throw std::invalid_argument("wop2: reference point mismatch");
    if constexpr (std::is_same_v<Measure, PathMeasure>) {
        if (!mu.same_grid(nu)) throw std::invalid_argument("wop2: time grid mismatch");
    }
    const double ma = mu.total_mass();
    const double mb = nu.total_mass();

    Wop2Result out;
    out.mass_gap = ma - mb;
    if (identical_storage(mu, nu)) {
        out.plan.row_masses = mu.weights();
        out.plan.col_masses = nu.weights();
        for (std::size_t i = 0; i < mu.size(); ++i) {
            if (mu.weight(i) > 0.0) {
                out.plan.flow.emplace_back(static_cast<int>(i), static_cast<int>(i), mu.weight(i));
            }
        }
        return out;  // value, gap, w2_term all zero
    }

    // canonical orientation keeps the metric bit-exactly symmetric
    const bool swapped = compare_measures(mu, nu) > 0;
    const Measure& first = swapped ? nu : mu;
    const Measure& second = swapped ? mu : nu;
    const Measure scaled_first =
        scale_pushforward(normalize(first), first.total_mass(), x0);
    const Measure scaled_second =
        scale_pushforward(normalize(second), second.total_mass(), x0);
    W2Result w2 = w2_exact(scaled_first, scaled_second);

    out.w2_term = w2.distance;
    out.value = std::hypot(out.mass_gap, out.w2_term);
    out.plan = std::move(w2.plan);
    if (swapped) {
        std::swap(out.plan.row_masses, out.plan.col_masses);
        for (auto& [i, j, f] : out.plan.flow) std::swap(i, j);
        std::sort(out.plan.flow.begin(), out.plan.flow.end());
    }
    return out;
}

template <class Measure>
double normalized_w2(const Measure& mu, const Measure& nu) {
    if (identical_storage(mu, nu)) return 0.0;
    const bool swapped = compare_measures(mu, nu) > 0;
    const Measure& first = swapped ? nu : mu;
    const Measure& second = swapped ? mu : nu;
    return w2_exact(normalize(first), normalize(second)).distance;
}

// state-space identity: gap^2 + gap*(M(mu) - M(nu)) + m_mu m_nu W2^2(norms)
double closed_form_sq(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      const ReferencePoint& x0) {
    const double ma = mu.total_mass();
    const double mb = nu.total_mass();
    const double gap = ma - mb;
    const double mom = second_moment(mu, x0) - second_moment(nu, x0);
    const double w2bar = (ma > 0.0 && mb > 0.0) ? normalized_w2(mu, nu) : 0.0;
    const double sq = gap * gap + gap * mom + ma * mb * w2bar * w2bar;
    return std::max(sq, 0.0);
}

// Path-space upper bound. The sup-norm cost expansion
//   |a(x-x0) - b(y-x0)|^2 = a(a-b)|x-x0|^2 + b(b-a)|y-x0|^2 + ab|x-y|^2
// has exactly one nonpositive term once a != b; dropping it and bounding the
// rest by coefficient * sup gives gap^2 + |gap| * M(heavier) + ab * W2^2,
// which collapses to the metric when the masses agree.
double path_bound_sq(const PathMeasure& mu, const PathMeasure& nu, const ReferencePoint& x0) {
    const double ma = mu.total_mass();
    const double mb = nu.total_mass();
    const double gap = ma - mb;
    const double heavy_mom = gap >= 0.0 ? second_moment(mu, x0) : second_moment(nu, x0);
    const double w2bar = (ma > 0.0 && mb > 0.0) ? normalized_w2(mu, nu) : 0.0;
    const double sq = gap * gap + std::abs(gap) * heavy_mom + ma * mb * w2bar * w2bar;
    return std::max(sq, 0.0);
}

}  // namespace

W2Result w2_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu) { return w2_impl(mu, nu); }

W2Result w2_exact(const PathMeasure& mu, const PathMeasure& nu) {
    if (!mu.same_grid(nu)) throw std::invalid_argument("w2: time grid mismatch");
    return w2_impl(mu, nu);
}

double w2_bruteforce(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    return bruteforce_impl(mu, nu, cost_matrix(mu, nu));
}

double w2_bruteforce(const PathMeasure& mu, const PathMeasure& nu) {
    if (!mu.same_grid(nu)) throw std::invalid_argument("bruteforce: time grid mismatch");
    return bruteforce_impl(mu, nu, cost_matrix(mu, nu));
}

Wop2Result wop2(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const ReferencePoint& x0) {
    return wop2_impl(mu, nu, x0);
}

Wop2Result wop2(const PathMeasure& mu, const PathMeasure& nu, const ReferencePoint& x0) {
    return wop2_impl(mu, nu, x0);
}

double wop2_closed_form(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        const ReferencePoint& x0) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("wop2: dimension mismatch");
    if (x0.dim() != mu.dim()) throw std::invalid_argument("wop2: reference point mismatch");
    return std::sqrt(closed_form_sq(mu, nu, x0));
}

double wop2_closed_form(const PathMeasure&, const PathMeasure&, const ReferencePoint&) {
    throw std::invalid_argument(
        "wop2_closed_form holds on state space only; use wop2_path_upper_bound for paths");
}

double wop2_path_upper_bound(const PathMeasure& mu, const PathMeasure& nu,
                             const ReferencePoint& x0) {
    if (mu.dim() != nu.dim()) throw std::invalid_argument("wop2: dimension mismatch");
    if (!mu.same_grid(nu)) throw std::invalid_argument("wop2: time grid mismatch");
    if (x0.dim() != mu.dim()) throw std::invalid_argument("wop2: reference point mismatch");
    return std::sqrt(path_bound_sq(mu, nu, x0));
}

double marginal_restriction_w2(const PathMeasure& mu, const PathMeasure& nu, double t) {
    if (!mu.same_grid(nu)) throw std::invalid_argument("w2: time grid mismatch");
    const std::size_t k = mu.grid_index_of(t);
    return w2_exact(mu.restrict_to_index(k), nu.restrict_to_index(k)).distance;
}

double wasserstein_power_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
    check_w2_inputs(mu, nu);
    if (!(p > 0.0)) throw std::invalid_argument("power cost exponent must be positive");
    std::vector<double> c(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto ai = mu.atom(i);
        for (std::size_t j = 0; j < nu.size(); ++j) {
            c[i * nu.size() + j] = std::pow(std::sqrt(state_dist2(ai, nu.atom(j))), p);
        }
    }
    return solve_transport(static_cast<int>(mu.size()), static_cast<int>(nu.size()), c,
                           mu.weights(), nu.weights())
        .cost;
}

}  // namespace graphonlab
