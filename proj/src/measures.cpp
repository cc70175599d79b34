#include "graphonlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "graphonlab/numeric.hpp"

namespace graphonlab {

namespace {

void check_finite(const std::vector<double>& xs, const char* what) {
    for (double x : xs) {
        if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

void check_weights(const std::vector<double>& ws) {
    for (double w : ws) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("weights must be finite and nonnegative");
        }
    }
}

}  // namespace

ReferencePoint::ReferencePoint(int dim, std::size_t rows, std::vector<double> data)
    : dim_(dim), rows_(rows), data_(std::move(data)) {}

ReferencePoint ReferencePoint::zero(int dim) {
    if (dim < 1) throw std::invalid_argument("reference point dim must be positive");
    return ReferencePoint(dim, 1, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
}

ReferencePoint ReferencePoint::at(std::vector<double> point) {
    if (point.empty()) throw std::invalid_argument("reference point must be non-empty");
    check_finite(point, "reference point");
    const int dim = static_cast<int>(point.size());
    return ReferencePoint(dim, 1, std::move(point));
}

ReferencePoint ReferencePoint::along_path(int dim, std::vector<double> rows) {
    if (dim < 1 || rows.empty() || rows.size() % static_cast<std::size_t>(dim) != 0) {
        throw std::invalid_argument("reference path must hold whole rows");
    }
    check_finite(rows, "reference path");
    const std::size_t count = rows.size() / static_cast<std::size_t>(dim);
    return ReferencePoint(dim, count, std::move(rows));
}

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<double> coords, std::vector<double> weights)
    : dim_(dim), coords_(std::move(coords)), weights_(std::move(weights)) {
    if (dim_ < 1) throw std::invalid_argument("measure dim must be positive");
    if (coords_.size() != weights_.size() * static_cast<std::size_t>(dim_)) {
        throw std::invalid_argument("atom/weight lengths disagree");
    }
    check_finite(coords_, "atoms");
    check_weights(weights_);
}

DiscreteMeasure DiscreteMeasure::dirac_zero(int dim) {
    return DiscreteMeasure(dim, std::vector<double>(static_cast<std::size_t>(dim), 0.0), {1.0});
}

double DiscreteMeasure::total_mass() const { return pairwise_sum(weights_); }

PathMeasure::PathMeasure(int dim, std::vector<double> time_grid, std::vector<double> coords,
                         std::vector<double> weights)
    : dim_(dim),
      time_grid_(std::move(time_grid)),
      coords_(std::move(coords)),
      weights_(std::move(weights)) {
    if (dim_ < 1) throw std::invalid_argument("measure dim must be positive");
    if (time_grid_.empty()) throw std::invalid_argument("time grid must be non-empty");
    for (std::size_t k = 1; k < time_grid_.size(); ++k) {
        if (!(time_grid_[k] > time_grid_[k - 1])) {
            throw std::invalid_argument("time grid must be strictly increasing");
        }
    }
    if (coords_.size() !=
        weights_.size() * time_grid_.size() * static_cast<std::size_t>(dim_)) {
        throw std::invalid_argument("trajectory storage size disagrees with grid");
    }
    check_finite(coords_, "trajectories");
    check_weights(weights_);
}

PathMeasure PathMeasure::dirac_zero(int dim, std::vector<double> time_grid) {
    const std::size_t len = time_grid.size() * static_cast<std::size_t>(dim);
    return PathMeasure(dim, std::move(time_grid), std::vector<double>(len, 0.0), {1.0});
}

double PathMeasure::total_mass() const { return pairwise_sum(weights_); }

bool PathMeasure::same_grid(const PathMeasure& other, double tol) const {
    if (time_grid_.size() != other.time_grid_.size()) return false;
    for (std::size_t k = 0; k < time_grid_.size(); ++k) {
        if (std::abs(time_grid_[k] - other.time_grid_[k]) > tol) return false;
    }
    return true;
}

DiscreteMeasure PathMeasure::restrict_to_index(std::size_t k) const {
    if (k >= time_grid_.size()) throw std::out_of_range("grid index out of range");
    const std::size_t d = static_cast<std::size_t>(dim_);
    std::vector<double> coords(size() * d);
    for (std::size_t i = 0; i < size(); ++i) {
        const auto p = point(i, k);
        std::copy(p.begin(), p.end(), coords.begin() + i * d);
    }
    return DiscreteMeasure(dim_, std::move(coords), weights_);
}

std::size_t PathMeasure::grid_index_of(double t) const {
    for (std::size_t k = 0; k < time_grid_.size(); ++k) {
        if (std::abs(time_grid_[k] - t) <= 1e-12) return k;
    }
    throw std::invalid_argument("time not on the measure grid");
}

PathMeasure PathMeasure::resample(const std::vector<double>& new_grid) const {
    const std::size_t d = static_cast<std::size_t>(dim_);
    std::vector<double> coords(size() * new_grid.size() * d);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t k = 0; k < new_grid.size(); ++k) {
            const double t = new_grid[k];
            // clamp outside the original span, interpolate inside
            std::size_t hi = 0;
            while (hi + 1 < time_grid_.size() && time_grid_[hi] < t) ++hi;
            const std::size_t lo = hi == 0 ? 0 : hi - 1;
            double* out = coords.data() + (i * new_grid.size() + k) * d;
            if (hi == 0 || time_grid_[hi] <= t || lo == hi) {
                const std::size_t src = (t <= time_grid_.front()) ? 0 : hi;
                const auto p = point(i, src);
                std::copy(p.begin(), p.end(), out);
            } else {
                const double t0 = time_grid_[lo], t1 = time_grid_[hi];
                const double w = (t - t0) / (t1 - t0);
                const auto p0 = point(i, lo);
                const auto p1 = point(i, hi);
                for (std::size_t c = 0; c < d; ++c) out[c] = (1.0 - w) * p0[c] + w * p1[c];
            }
        }
    }
    return PathMeasure(dim_, new_grid, std::move(coords), weights_);
}

double total_mass(const DiscreteMeasure& mu) { return mu.total_mass(); }
double total_mass(const PathMeasure& mu) { return mu.total_mass(); }

DiscreteMeasure normalize(const DiscreteMeasure& mu) {
    const double m = mu.total_mass();
    if (m <= 0.0) return DiscreteMeasure::dirac_zero(mu.dim());
    std::vector<double> w = mu.weights();
    for (double& x : w) x /= m;
    return DiscreteMeasure(mu.dim(), mu.coords(), std::move(w));
}

PathMeasure normalize(const PathMeasure& mu) {
    const double m = mu.total_mass();
    if (m <= 0.0) return PathMeasure::dirac_zero(mu.dim(), mu.time_grid());
    std::vector<double> w = mu.weights();
    for (double& x : w) x /= m;
    return PathMeasure(mu.dim(), mu.time_grid(), mu.coords(), std::move(w));
}

namespace {

void check_dim(int measure_dim, const ReferencePoint& x0) {
    if (x0.dim() != measure_dim) throw std::invalid_argument("reference point dimension mismatch");
}

}  // namespace

double second_moment(const DiscreteMeasure& mu, const ReferencePoint& x0) {
    check_dim(mu.dim(), x0);
    std::vector<double> terms(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto a = mu.atom(i);
        double d2 = 0.0;
        for (int c = 0; c < mu.dim(); ++c) {
            const double diff = a[static_cast<std::size_t>(c)] - x0.coord(0, c);
            d2 += diff * diff;
        }
        terms[i] = mu.weight(i) * d2;
    }
    return pairwise_sum(terms);
}

double second_moment(const PathMeasure& mu, const ReferencePoint& x0) {
    check_dim(mu.dim(), x0);
    if (!x0.constant_in_time() && x0.rows() != mu.grid_size()) {
        throw std::invalid_argument("reference path grid mismatch");
    }
    std::vector<double> terms(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double sup = 0.0;
        for (std::size_t k = 0; k < mu.grid_size(); ++k) {
            const auto p = mu.point(i, k);
            double d2 = 0.0;
            for (int c = 0; c < mu.dim(); ++c) {
                const double diff = p[static_cast<std::size_t>(c)] - x0.coord(k, c);
                d2 += diff * diff;
            }
            sup = std::max(sup, d2);
        }
        terms[i] = mu.weight(i) * sup;
    }
    return pairwise_sum(terms);
}

DiscreteMeasure scale_pushforward(const DiscreteMeasure& mu, double a, const ReferencePoint& x0) {
    if (!(a >= 0.0)) throw std::invalid_argument("scaling factor must be nonnegative");
    check_dim(mu.dim(), x0);
    std::vector<double> coords = mu.coords();
    const std::size_t d = static_cast<std::size_t>(mu.dim());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t c = 0; c < d; ++c) {
            const double ref = x0.coord(0, static_cast<int>(c));
            coords[i * d + c] = a * (coords[i * d + c] - ref) + ref;
        }
    }
    return DiscreteMeasure(mu.dim(), std::move(coords), mu.weights());
}

PathMeasure scale_pushforward(const PathMeasure& mu, double a, const ReferencePoint& x0) {
    if (!(a >= 0.0)) throw std::invalid_argument("scaling factor must be nonnegative");
    check_dim(mu.dim(), x0);
    if (!x0.constant_in_time() && x0.rows() != mu.grid_size()) {
        throw std::invalid_argument("reference path grid mismatch");
    }
    std::vector<double> coords = mu.coords();
    const std::size_t d = static_cast<std::size_t>(mu.dim());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t k = 0; k < mu.grid_size(); ++k) {
            for (std::size_t c = 0; c < d; ++c) {
                const double ref = x0.coord(k, static_cast<int>(c));
                double& x = coords[(i * mu.grid_size() + k) * d + c];
                x = a * (x - ref) + ref;
            }
        }
    }
    return PathMeasure(mu.dim(), mu.time_grid(), std::move(coords), mu.weights());
}

namespace {

std::vector<double> graphon_weights(std::span<const double> g) {
    const double n = static_cast<double>(g.size());
    std::vector<double> w(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!(g[j] >= 0.0 && g[j] <= 1.0)) {
            throw std::invalid_argument("graphon weight outside [0, 1]");
        }
        w[j] = g[j] / n;
    }
    return w;
}

}  // namespace

DiscreteMeasure graphon_weighted_empirical(int dim, std::span<const double> coords,
                                           std::span<const double> g) {
    if (coords.size() != g.size() * static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("atom/weight lengths disagree");
    }
    return DiscreteMeasure(dim, std::vector<double>(coords.begin(), coords.end()),
                           graphon_weights(g));
}

PathMeasure graphon_weighted_empirical(int dim, std::vector<double> time_grid,
                                       std::span<const double> coords,
                                       std::span<const double> g) {
    if (coords.size() != g.size() * time_grid.size() * static_cast<std::size_t>(dim)) {
        throw std::invalid_argument("trajectory/weight lengths disagree");
    }
    return PathMeasure(dim, std::move(time_grid),
                       std::vector<double>(coords.begin(), coords.end()), graphon_weights(g));
}

namespace {

// canonical form: positive-weight atoms sorted lexicographically, duplicates merged
std::vector<std::pair<std::vector<double>, double>> canonical_atoms(
    const std::vector<double>& coords, const std::vector<double>& weights, std::size_t stride) {
    std::vector<std::pair<std::vector<double>, double>> items;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        items.emplace_back(
            std::vector<double>(coords.begin() + static_cast<std::ptrdiff_t>(i * stride),
                                coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride)),
            weights[i]);
    }
    std::sort(items.begin(), items.end());
    std::vector<std::pair<std::vector<double>, double>> merged;
    for (auto& it : items) {
        if (!merged.empty() && merged.back().first == it.first) {
            merged.back().second += it.second;
        } else {
            merged.push_back(std::move(it));
        }
    }
    return merged;
}

bool canonical_equal(const std::vector<std::pair<std::vector<double>, double>>& a,
                     const std::vector<std::pair<std::vector<double>, double>>& b, double tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].second - b[i].second) > tol) return false;
        for (std::size_t c = 0; c < a[i].first.size(); ++c) {
            if (std::abs(a[i].first[c] - b[i].first[c]) > tol) return false;
        }
    }
    return true;
}

}  // namespace

bool measures_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
    if (a.dim() != b.dim()) return false;
    return canonical_equal(
        canonical_atoms(a.coords(), a.weights(), static_cast<std::size_t>(a.dim())),
        canonical_atoms(b.coords(), b.weights(), static_cast<std::size_t>(b.dim())), tol);
}

bool measures_equal(const PathMeasure& a, const PathMeasure& b, double tol) {
    if (a.dim() != b.dim() || !a.same_grid(b)) return false;
    const std::size_t stride = a.grid_size() * static_cast<std::size_t>(a.dim());
    return canonical_equal(canonical_atoms(a.coords(), a.weights(), stride),
                           canonical_atoms(b.coords(), b.weights(), stride), tol);
}

double state_dist2(std::span<const double> a, std::span<const double> b) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        d2 += diff * diff;
    }
    return d2;
}

double path_sup_dist2(const PathMeasure& mu, std::size_t i, const PathMeasure& nu,
                      std::size_t j) {
    double sup = 0.0;
    for (std::size_t k = 0; k < mu.grid_size(); ++k) {
        sup = std::max(sup, state_dist2(mu.point(i, k), nu.point(j, k)));
    }
    return sup;
}

}  // namespace graphonlab
