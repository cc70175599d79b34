#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace graphonlab {

// Symmetric kernel on [0,1]^2 with values in [0,1]. Analytic kinds plus step
// functions; construction probes a 64x64 grid for symmetry and range.
class Graphon {
  public:
    enum class Kind { constant, product, min_uv, exp_kernel, step, sampled };

    static Graphon constant(double c);
    static Graphon product();
    static Graphon min_uv();
    static Graphon exp_kernel(double alpha);
    // block values on the partition given by boundaries 0 = b0 < ... < bk = 1
    static Graphon step(std::vector<double> boundaries, std::vector<double> block_values);
    // step graphon on the uniform n-grid
    static Graphon sampled(int n, std::vector<double> values);

    Kind kind() const { return kind_; }
    bool analytic() const { return kind_ != Kind::step && kind_ != Kind::sampled; }
    double param() const { return param_; }
    const std::vector<double>& boundaries() const { return boundaries_; }
    const std::vector<double>& values() const { return values_; }

    double operator()(double u, double v) const;

    std::string describe() const;

  private:
    Graphon() = default;
    void probe_check() const;

    Kind kind_ = Kind::constant;
    double param_ = 0.0;               // constant value or exp rate
    std::vector<double> boundaries_;   // step kind
    std::vector<double> values_;       // step/sampled block matrix, row-major
    int blocks_ = 0;
};

// Plain dense square matrix; cut norms operate on these so that graphon
// differences (entries in [-1,1]) are first-class inputs.
struct SquareMatrix {
    int n = 0;
    std::vector<double> values;  // row-major n*n

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

SquareMatrix matrix_difference(const SquareMatrix& a, const SquareMatrix& b);

// n x n discretization with entries in [0,1]; symmetric.
class DiscretizedGraphon {
  public:
    DiscretizedGraphon(int n, std::vector<double> values);

    int n() const { return n_; }
    double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& values() const { return values_; }
    double row_mean(int i) const;
    SquareMatrix matrix() const { return {n_, values_}; }

  private:
    int n_;
    std::vector<double> values_;
};

// cell averages over the uniform n-grid via tensor Gauss-Legendre quadrature
DiscretizedGraphon discretize_average(const Graphon& g, int n, int quad_points = 4);
// point samples G(i/n, j/n)
DiscretizedGraphon discretize_sample(const Graphon& g, int n);
// duplicates each entry into factor x factor blocks (same step graphon on a finer grid)
SquareMatrix block_expand(const SquareMatrix& m, int factor);

struct CutNormResult {
    double value = 0.0;
    std::vector<int> row_set;  // S
    std::vector<int> col_set;  // T achieving |sum_{S x T}|
};

// max over S, T of |sum_{S x T} D_ij| / n^2, exact by exhaustive row-set
// enumeration with the column choice solved exactly per sign. Guarded at
// n <= 20; enumeration parallelizes over subset ranges.
CutNormResult cut_norm_exact(const SquareMatrix& d, int threads = 1);

// alternating-maximization lower bound from seeded random restarts
CutNormResult cut_norm_heuristic(const SquareMatrix& d, int restarts, std::uint64_t seed = 0);

struct InfToOneResult {
    double value = 0.0;
    std::vector<int> col_signs;  // g in {-1, +1}^n
};

// max over g in {-1,1}^n of sum_i |sum_j D_ij g_j| / n^2; exact for n <= 20,
// alternating heuristic above.
InfToOneResult inf_to_one_norm(const SquareMatrix& d, int threads = 1, int restarts = 32,
                               std::uint64_t seed = 0);

struct GraphonLipschitzReport {
    std::vector<double> probe_v;
    std::vector<double> slope_v;  // per-probe Lipschitz estimate L_v
    double integral_L = 0.0;      // approx of the mean of L_v
    double integral_L2 = 0.0;
    bool smooth_kind = true;  // step/sampled kinds are flagged, not rejected
};

GraphonLipschitzReport validate_graphon_lipschitz(const Graphon& g, int resolution = 64);

}  // namespace graphonlab
