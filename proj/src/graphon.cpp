#include "graphonlab/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "graphonlab/numeric.hpp"
#include "graphonlab/philox.hpp"

namespace graphonlab {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] (Newton on the Legendre recurrence)
void gauss_legendre(int k, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(static_cast<std::size_t>(k));
    weights.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (k + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= k; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = k * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[static_cast<std::size_t>(i)] = x;
        weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

int block_index(double u, int blocks) {
    // cell convention ceil(n*u), clamped; u = 0 falls into the first cell
    int idx = static_cast<int>(std::ceil(u * blocks));
    return std::clamp(idx, 1, blocks) - 1;
}

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

Graphon Graphon::constant(double c) {
    Graphon g;
    g.kind_ = Kind::constant;
    g.param_ = c;
    g.probe_check();
    return g;
}

Graphon Graphon::product() {
    Graphon g;
    g.kind_ = Kind::product;
    g.probe_check();
    return g;
}

Graphon Graphon::min_uv() {
    Graphon g;
    g.kind_ = Kind::min_uv;
    g.probe_check();
    return g;
}

Graphon Graphon::exp_kernel(double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("exp kernel rate must be nonnegative");
    Graphon g;
    g.kind_ = Kind::exp_kernel;
    g.param_ = alpha;
    g.probe_check();
    return g;
}

Graphon Graphon::step(std::vector<double> boundaries, std::vector<double> block_values) {
    if (boundaries.size() < 2 || boundaries.front() != 0.0 || boundaries.back() != 1.0) {
        throw std::invalid_argument("step boundaries must run from 0 to 1");
    }
    for (std::size_t i = 1; i < boundaries.size(); ++i) {
        if (!(boundaries[i] > boundaries[i - 1])) {
            throw std::invalid_argument("step boundaries must be increasing");
        }
    }
    const int k = static_cast<int>(boundaries.size()) - 1;
    if (block_values.size() != static_cast<std::size_t>(k) * k) {
        throw std::invalid_argument("step block matrix size mismatch");
    }
    Graphon g;
    g.kind_ = Kind::step;
    g.boundaries_ = std::move(boundaries);
    g.values_ = std::move(block_values);
    g.blocks_ = k;
    g.probe_check();
    return g;
}

Graphon Graphon::sampled(int n, std::vector<double> values) {
    if (n < 1 || values.size() != static_cast<std::size_t>(n) * n) {
        throw std::invalid_argument("sampled graphon size mismatch");
    }
    Graphon g;
    g.kind_ = Kind::sampled;
    g.values_ = std::move(values);
    g.blocks_ = n;
    g.probe_check();
    return g;
}

double Graphon::operator()(double u, double v) const {
    switch (kind_) {
        case Kind::constant:
            return param_;
        case Kind::product:
            return u * v;
        case Kind::min_uv:
            return std::min(u, v);
        case Kind::exp_kernel:
            return std::exp(-param_ * std::abs(u - v));
        case Kind::step: {
            const auto cell = [&](double x) {
                for (std::size_t i = 1; i < boundaries_.size(); ++i) {
                    if (x <= boundaries_[i]) return static_cast<int>(i) - 1;
                }
                return blocks_ - 1;
            };
            return values_[static_cast<std::size_t>(cell(u)) * blocks_ + cell(v)];
        }
        case Kind::sampled:
            return values_[static_cast<std::size_t>(block_index(u, blocks_)) * blocks_ +
                           block_index(v, blocks_)];
    }
    return 0.0;
}

void Graphon::probe_check() const {
    const int probe = 64;
    for (int a = 0; a < probe; ++a) {
        for (int b = a; b < probe; ++b) {
            const double u = (a + 0.5) / probe;
            const double v = (b + 0.5) / probe;
            const double guv = (*this)(u, v);
            const double gvu = (*this)(v, u);
            if (std::abs(guv - gvu) > 1e-12) {
                throw std::invalid_argument("graphon is not symmetric");
            }
            if (!(guv >= 0.0 && guv <= 1.0)) {
                throw std::invalid_argument("graphon values must lie in [0, 1]");
            }
        }
    }
}

std::string Graphon::describe() const {
    std::ostringstream out;
    switch (kind_) {
        case Kind::constant:
            out << "constant(" << param_ << ")";
            break;
        case Kind::product:
            out << "product";
            break;
        case Kind::min_uv:
            out << "min";
            break;
        case Kind::exp_kernel:
            out << "exp(" << param_ << ")";
            break;
        case Kind::step:
            out << "step[" << blocks_ << "]";
            break;
        case Kind::sampled:
            out << "sampled[" << blocks_ << "]";
            break;
    }
    return out.str();
}

SquareMatrix matrix_difference(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.n != b.n) throw std::invalid_argument("matrix size mismatch");
    SquareMatrix d{a.n, a.values};
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
    return d;
}

DiscretizedGraphon::DiscretizedGraphon(int n, std::vector<double> values)
    : n_(n), values_(std::move(values)) {
    if (n_ < 1 || values_.size() != static_cast<std::size_t>(n_) * n_) {
        throw std::invalid_argument("discretized graphon size mismatch");
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            const double x = at(i, j);
            if (!(x >= 0.0 && x <= 1.0)) {
                throw std::invalid_argument("discretized graphon entries must lie in [0, 1]");
            }
            if (std::abs(x - at(j, i)) > 1e-12) {
                throw std::invalid_argument("discretized graphon must be symmetric");
            }
        }
    }
}

double DiscretizedGraphon::row_mean(int i) const {
    return pairwise_sum({values_.data() + static_cast<std::size_t>(i) * n_,
                         static_cast<std::size_t>(n_)}) /
           n_;
}

DiscretizedGraphon discretize_average(const Graphon& g, int n, int quad_points) {
    if (n < 1 || quad_points < 1) throw std::invalid_argument("bad discretization parameters");
    std::vector<double> nodes, weights;
    gauss_legendre(quad_points, nodes, weights);
    const double h = 1.0 / n;
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < quad_points; ++a) {
                const double u = (i + 0.5 * (1.0 + nodes[static_cast<std::size_t>(a)])) * h;
                for (int b = 0; b < quad_points; ++b) {
                    const double v = (j + 0.5 * (1.0 + nodes[static_cast<std::size_t>(b)])) * h;
                    acc += weights[static_cast<std::size_t>(a)] *
                           weights[static_cast<std::size_t>(b)] * g(u, v);
                }
            }
            const double avg = std::clamp(acc / 4.0, 0.0, 1.0);  // GL weights sum to 2 per axis
            m[static_cast<std::size_t>(i) * n + j] = avg;
            m[static_cast<std::size_t>(j) * n + i] = avg;
        }
    }
    return DiscretizedGraphon(n, std::move(m));
}

DiscretizedGraphon discretize_sample(const Graphon& g, int n) {
    if (n < 1) throw std::invalid_argument("bad discretization parameters");
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m[static_cast<std::size_t>(i) * n + j] =
                g(static_cast<double>(i + 1) / n, static_cast<double>(j + 1) / n);
        }
    }
    return DiscretizedGraphon(n, std::move(m));
}

SquareMatrix block_expand(const SquareMatrix& m, int factor) {
    if (factor < 1) throw std::invalid_argument("expand factor must be positive");
    const int n = m.n * factor;
    SquareMatrix out{n, std::vector<double>(static_cast<std::size_t>(n) * n)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            out.values[static_cast<std::size_t>(i) * n + j] = m.at(i / factor, j / factor);
        }
    }
    return out;
}

namespace {

// best |sum over chosen columns| for fixed column sums; fills T when asked
double best_column_choice(const std::vector<double>& colsum, std::vector<int>* t_out) {
    double pos = 0.0, neg = 0.0;
    for (double c : colsum) {
        if (c > 0.0) pos += c;
        if (c < 0.0) neg -= c;
    }
    if (t_out != nullptr) {
        t_out->clear();
        const bool take_pos = pos >= neg;
        for (std::size_t j = 0; j < colsum.size(); ++j) {
            if ((take_pos && colsum[j] > 0.0) || (!take_pos && colsum[j] < 0.0)) {
                t_out->push_back(static_cast<int>(j));
            }
        }
    }
    return std::max(pos, neg);
}

}  // namespace

CutNormResult cut_norm_exact(const SquareMatrix& d, int threads) {
    const int n = d.n;
    if (n < 1) throw std::invalid_argument("cut norm: empty matrix");
    if (n > 20) throw std::invalid_argument("cut norm: exact mode guarded at n <= 20");
    const std::uint64_t total = 1ull << n;
    const int workers = std::max(1, std::min<int>(threads, 8));
    const std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) / workers;

    std::vector<double> best_val(static_cast<std::size_t>(workers), 0.0);
    std::vector<std::uint64_t> best_mask(static_cast<std::size_t>(workers), 0);

    parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
        const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
        const std::uint64_t hi = std::min(total, lo + chunk);
        if (lo >= hi) return;
        std::vector<double> colsum(static_cast<std::size_t>(n), 0.0);
        std::uint64_t gray = lo ^ (lo >> 1);
        for (int i = 0; i < n; ++i) {
            if ((gray >> i) & 1ull) {
                for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] += d.at(i, j);
            }
        }
        double local_best = -1.0;
        std::uint64_t local_mask = 0;
        for (std::uint64_t k = lo;; ++k) {
            const double v = best_column_choice(colsum, nullptr);
            if (v > local_best) {
                local_best = v;
                local_mask = gray;
            }
            if (k + 1 >= hi) break;
            const std::uint64_t next_gray = (k + 1) ^ ((k + 1) >> 1);
            const std::uint64_t flipped = gray ^ next_gray;
            int bit = 0;
            while (((flipped >> bit) & 1ull) == 0) ++bit;
            const double sign = (next_gray >> bit) & 1ull ? 1.0 : -1.0;
            for (int j = 0; j < n; ++j) {
                colsum[static_cast<std::size_t>(j)] += sign * d.at(bit, j);
            }
            gray = next_gray;
        }
        best_val[w] = local_best;
        best_mask[w] = local_mask;
    });

    double value = -1.0;
    std::uint64_t mask = 0;
    for (int w = 0; w < workers; ++w) {
        const std::size_t sw = static_cast<std::size_t>(w);
        if (best_val[sw] > value ||
            (best_val[sw] == value && best_mask[sw] < mask)) {
            value = best_val[sw];
            mask = best_mask[sw];
        }
    }

    CutNormResult out;
    std::vector<double> colsum(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        if ((mask >> i) & 1ull) {
            out.row_set.push_back(i);
            for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] += d.at(i, j);
        }
    }
    out.value = best_column_choice(colsum, &out.col_set) / (static_cast<double>(n) * n);
    return out;
}

CutNormResult cut_norm_heuristic(const SquareMatrix& d, int restarts, std::uint64_t seed) {
    const int n = d.n;
    if (n < 1) throw std::invalid_argument("cut norm: empty matrix");
    restarts = std::max(restarts, 1);

    CutNormResult best;  // empty S, T achieve value zero
    best.value = 0.0;
    std::vector<char> s(static_cast<std::size_t>(n)), t(static_cast<std::size_t>(n));
    std::vector<double> colsum(static_cast<std::size_t>(n)), rowsum(static_cast<std::size_t>(n));
    const double scale = static_cast<double>(n) * n;
    auto save = [&](double unnorm) {
        best.value = unnorm / scale;
        best.row_set.clear();
        best.col_set.clear();
        for (int i = 0; i < n; ++i) {
            if (s[static_cast<std::size_t>(i)]) best.row_set.push_back(i);
        }
        for (int j = 0; j < n; ++j) {
            if (t[static_cast<std::size_t>(j)]) best.col_set.push_back(j);
        }
    };
    for (int r = 0; r < restarts; ++r) {
        for (int sign = 0; sign < 2; ++sign) {
            const double orient = sign == 0 ? 1.0 : -1.0;
            std::uint64_t state = derive_seed(seed, static_cast<std::uint64_t>(r) * 2 + sign);
            for (int i = 0; i < n; ++i) {
                s[static_cast<std::size_t>(i)] = splitmix(state) & 1ull ? 1 : 0;
            }
            double prev = -1.0;
            for (int sweep = 0; sweep < 64; ++sweep) {
                // best T given S
                std::fill(colsum.begin(), colsum.end(), 0.0);
                for (int i = 0; i < n; ++i) {
                    if (!s[static_cast<std::size_t>(i)]) continue;
                    for (int j = 0; j < n; ++j) colsum[static_cast<std::size_t>(j)] += d.at(i, j);
                }
                for (int j = 0; j < n; ++j) {
                    t[static_cast<std::size_t>(j)] =
                        orient * colsum[static_cast<std::size_t>(j)] > 0.0;
                }
                // best S given T; obj is the value of the updated (S, T) pair
                std::fill(rowsum.begin(), rowsum.end(), 0.0);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        if (t[static_cast<std::size_t>(j)]) {
                            rowsum[static_cast<std::size_t>(i)] += d.at(i, j);
                        }
                    }
                }
                double obj = 0.0;
                for (int i = 0; i < n; ++i) {
                    s[static_cast<std::size_t>(i)] =
                        orient * rowsum[static_cast<std::size_t>(i)] > 0.0;
                    if (s[static_cast<std::size_t>(i)]) {
                        obj += orient * rowsum[static_cast<std::size_t>(i)];
                    }
                }
                if (obj > best.value * scale) save(obj);
                if (obj <= prev) break;
                prev = obj;
            }
        }
    }
    return best;
}

InfToOneResult inf_to_one_norm(const SquareMatrix& d, int threads, int restarts,
                               std::uint64_t seed) {
    const int n = d.n;
    if (n < 1) throw std::invalid_argument("inf->1 norm: empty matrix");

    if (n <= 20) {
        const std::uint64_t total = 1ull << n;
        const int workers = std::max(1, std::min<int>(threads, 8));
        const std::uint64_t chunk = (total + static_cast<std::uint64_t>(workers) - 1) / workers;
        std::vector<double> best_val(static_cast<std::size_t>(workers), -1.0);
        std::vector<std::uint64_t> best_mask(static_cast<std::size_t>(workers), 0);

        parallel_for(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
            const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t hi = std::min(total, lo + chunk);
            if (lo >= hi) return;
            // mask bit j set -> g_j = +1, else -1
            std::vector<double> rowsum(static_cast<std::size_t>(n), 0.0);
            std::uint64_t gray = lo ^ (lo >> 1);
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) {
                    acc += ((gray >> j) & 1ull) ? d.at(i, j) : -d.at(i, j);
                }
                rowsum[static_cast<std::size_t>(i)] = acc;
            }
            double local_best = -1.0;
            std::uint64_t local_mask = 0;
            for (std::uint64_t k = lo;; ++k) {
                double v = 0.0;
                for (int i = 0; i < n; ++i) v += std::abs(rowsum[static_cast<std::size_t>(i)]);
                if (v > local_best) {
                    local_best = v;
                    local_mask = gray;
                }
                if (k + 1 >= hi) break;
                const std::uint64_t next_gray = (k + 1) ^ ((k + 1) >> 1);
                int bit = 0;
                while ((((gray ^ next_gray) >> bit) & 1ull) == 0) ++bit;
                const double sign = (next_gray >> bit) & 1ull ? 2.0 : -2.0;
                for (int i = 0; i < n; ++i) {
                    rowsum[static_cast<std::size_t>(i)] += sign * d.at(i, bit);
                }
                gray = next_gray;
            }
            best_val[w] = local_best;
            best_mask[w] = local_mask;
        });

        double value = -1.0;
        std::uint64_t mask = 0;
        for (int w = 0; w < workers; ++w) {
            const std::size_t sw = static_cast<std::size_t>(w);
            if (best_val[sw] > value || (best_val[sw] == value && best_mask[sw] < mask)) {
                value = best_val[sw];
                mask = best_mask[sw];
            }
        }
        InfToOneResult out;
        out.value = value / (static_cast<double>(n) * n);
        out.col_signs.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            out.col_signs[static_cast<std::size_t>(j)] = ((mask >> j) & 1ull) ? 1 : -1;
        }
        return out;
    }

    // alternating heuristic: f_i = sign(row sums), then g_j = sign of the
    // f-weighted column sums
    InfToOneResult best;
    best.value = -1.0;
    std::vector<int> g(static_cast<std::size_t>(n)), f(static_cast<std::size_t>(n));
    for (int r = 0; r < std::max(1, restarts); ++r) {
        std::uint64_t state = derive_seed(seed, static_cast<std::uint64_t>(r));
        for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = splitmix(state) & 1ull ? 1 : -1;
        double prev = -1.0;
        for (int sweep = 0; sweep < 64; ++sweep) {
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += d.at(i, j) * g[static_cast<std::size_t>(j)];
                f[static_cast<std::size_t>(i)] = acc >= 0.0 ? 1 : -1;
            }
            double obj = 0.0;
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int i = 0; i < n; ++i) acc += d.at(i, j) * f[static_cast<std::size_t>(i)];
                g[static_cast<std::size_t>(j)] = acc >= 0.0 ? 1 : -1;
                obj += std::abs(acc);
            }
            if (obj <= prev) break;
            prev = obj;
        }
        if (prev > best.value * (static_cast<double>(n) * n)) {
            best.value = prev / (static_cast<double>(n) * n);
            best.col_signs.assign(g.begin(), g.end());
        }
    }
    return best;
}

GraphonLipschitzReport validate_graphon_lipschitz(const Graphon& g, int resolution) {
    if (resolution < 2) throw std::invalid_argument("probe resolution too small");
    GraphonLipschitzReport report;
    report.smooth_kind = g.analytic();
    const int res = resolution;
    const int fine = 8 * res;  // difference quotients on a finer u-grid than the probes
    report.probe_v.resize(static_cast<std::size_t>(res));
    report.slope_v.resize(static_cast<std::size_t>(res));
    for (int k = 0; k < res; ++k) {
        const double v = (k + 0.5) / res;
        double slope = 0.0;
        for (int a = 0; a + 1 <= fine; ++a) {
            const double u1 = static_cast<double>(a) / fine;
            const double u2 = static_cast<double>(a + 1) / fine;
            slope = std::max(slope, std::abs(g(u2, v) - g(u1, v)) * fine);
        }
        report.probe_v[static_cast<std::size_t>(k)] = v;
        report.slope_v[static_cast<std::size_t>(k)] = slope;
    }
    std::vector<double> sq(report.slope_v.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = report.slope_v[i] * report.slope_v[i];
    report.integral_L = pairwise_mean(report.slope_v);
    report.integral_L2 = pairwise_mean(sq);
    return report;
}

}  // namespace graphonlab
