#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace graphonlab {

// Reference point x0 for second moments and the scaling map
// T_a(x) = a*(x - x0) + x0. For path measures the point may vary along the
// grid; a single point is treated as constant in time.
class ReferencePoint {
  public:
    static ReferencePoint zero(int dim);
    static ReferencePoint at(std::vector<double> point);
    // one row of length `dim` per grid time
    static ReferencePoint along_path(int dim, std::vector<double> rows);

    int dim() const { return dim_; }
    bool constant_in_time() const { return rows_ == 1; }
    std::size_t rows() const { return rows_; }
    double coord(std::size_t grid_index, int c) const {
        return rows_ == 1 ? data_[static_cast<std::size_t>(c)]
                          : data_[grid_index * static_cast<std::size_t>(dim_) +
                                  static_cast<std::size_t>(c)];
    }

  private:
    ReferencePoint(int dim, std::size_t rows, std::vector<double> data);
    int dim_ = 0;
    std::size_t rows_ = 1;
    std::vector<double> data_;
};

// Finite positive measure on R^d: weighted atoms. Immutable after
// construction; zero-weight atoms are legal and kept in storage.
class DiscreteMeasure {
  public:
    DiscreteMeasure(int dim, std::vector<double> coords, std::vector<double> weights);
    static DiscreteMeasure dirac_zero(int dim);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    std::span<const double> atom(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const;

  private:
    int dim_;
    std::vector<double> coords_;   // atom i occupies [i*dim, (i+1)*dim)
    std::vector<double> weights_;
};

// Finite positive measure on time-discretized path space. Atom i is a
// trajectory sampled on the shared grid; the path norm is the max over grid
// times of the Euclidean norm.
class PathMeasure {
  public:
    PathMeasure(int dim, std::vector<double> time_grid, std::vector<double> coords,
                std::vector<double> weights);
    static PathMeasure dirac_zero(int dim, std::vector<double> time_grid);

    int dim() const { return dim_; }
    std::size_t size() const { return weights_.size(); }
    std::size_t grid_size() const { return time_grid_.size(); }
    const std::vector<double>& time_grid() const { return time_grid_; }
    // state of atom i at grid index k
    std::span<const double> point(std::size_t i, std::size_t k) const {
        const std::size_t d = static_cast<std::size_t>(dim_);
        return {coords_.data() + (i * time_grid_.size() + k) * d, d};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& coords() const { return coords_; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const;
    bool same_grid(const PathMeasure& other, double tol = 1e-12) const;

    // marginal at a grid time (atoms keep their weights)
    DiscreteMeasure restrict_to_index(std::size_t k) const;
    std::size_t grid_index_of(double t) const;  // throws when t is not on the grid

    // linear interpolation onto a new grid (flagged by callers in reports)
    PathMeasure resample(const std::vector<double>& new_grid) const;

  private:
    int dim_;
    std::vector<double> time_grid_;
    std::vector<double> coords_;  // [atom][grid][component]
    std::vector<double> weights_;
};

double total_mass(const DiscreteMeasure& mu);
double total_mass(const PathMeasure& mu);

// mu / m if m > 0, Dirac at zero otherwise
DiscreteMeasure normalize(const DiscreteMeasure& mu);
PathMeasure normalize(const PathMeasure& mu);

double second_moment(const DiscreteMeasure& mu, const ReferencePoint& x0);
double second_moment(const PathMeasure& mu, const ReferencePoint& x0);

DiscreteMeasure scale_pushforward(const DiscreteMeasure& mu, double a, const ReferencePoint& x0);
PathMeasure scale_pushforward(const PathMeasure& mu, double a, const ReferencePoint& x0);

// (1/n) sum_j g_j delta_{atom_j}; every g_j must lie in [0, 1]
DiscreteMeasure graphon_weighted_empirical(int dim, std::span<const double> coords,
                                           std::span<const double> g);
PathMeasure graphon_weighted_empirical(int dim, std::vector<double> time_grid,
                                       std::span<const double> coords, std::span<const double> g);

// equality up to zero-weight atoms and atom permutation
bool measures_equal(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol = 1e-12);
bool measures_equal(const PathMeasure& a, const PathMeasure& b, double tol = 1e-12);

// squared ground distances used by the transport layer
double state_dist2(std::span<const double> a, std::span<const double> b);
double path_sup_dist2(const PathMeasure& mu, std::size_t i, const PathMeasure& nu, std::size_t j);

}  // namespace graphonlab
