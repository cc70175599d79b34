#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphonlab/config.hpp"
#include "graphonlab/measures.hpp"

namespace graphonlab {

// Non-owning view of an interaction measure built on a state snapshot.
// Atoms are visited through `order` so that summation order is canonical
// (label-sorted) no matter how particles are indexed.
struct WeightedCloud {
    int dim = 0;
    std::span<const double> coords;           // atom-major, dim stride
    std::span<const double> weights;
    std::span<const std::size_t> order;       // iteration order over atoms

    std::size_t size() const { return weights.size(); }
    double mass() const;
    DiscreteMeasure to_measure() const;
};

// Built-in coefficient evaluators phi_p, phi_b, phi_w.
//   zero             : all coefficients vanish
//   linear_tanh      : kernel-integral family; drift kernel tanh(y - x)
//                      componentwise, constant diffusion kernels (so the
//                      diffusion scales with the interaction mass)
//   mean_revert_tanh : drift -rate * tanh(x - weighted_mean(mu)), constant
//                      diffusion matrices
class CoefficientFamily {
  public:
    enum class Kind { zero, linear_tanh, mean_revert_tanh };

    CoefficientFamily(Kind kind, const CoefficientSpec& spec, int d, int m, int m_tilde);
    static CoefficientFamily from_config(const SystemConfig& cfg);

    Kind kind() const { return kind_; }
    int d() const { return d_; }
    int m() const { return m_; }
    int m_tilde() const { return m_tilde_; }

    void drift(std::span<const double> x, const WeightedCloud& mu, std::span<double> out) const;
    // row-major d x m
    void idio_diffusion(std::span<const double> x, const WeightedCloud& mu,
                        std::span<double> out) const;
    // row-major d x m_tilde
    void common_diffusion(std::span<const double> x, const WeightedCloud& mu,
                          std::span<double> out) const;

    // evaluations on a DiscreteMeasure (atom order = storage order)
    std::vector<double> drift(std::span<const double> x, const DiscreteMeasure& mu) const;

    // exact kernel constants of this family (bound and Lipschitz), used by
    // the assumption validator against the declared L
    double kernel_bound() const;
    double kernel_lipschitz() const;

  private:
    Kind kind_;
    double drift_scale_, idio_scale_, common_scale_, revert_rate_;
    int d_, m_, m_tilde_;
};

}  // namespace graphonlab
