#include "graphonlab/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphonlab/numeric.hpp"

namespace graphonlab {

namespace {

thread_local std::vector<double> scratch_terms;

// identity pattern scaled by s: out[c][k] = s * (c == k)
void diagonal_matrix(double s, int rows, int cols, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const int k = std::min(rows, cols);
    for (int c = 0; c < k; ++c) out[static_cast<std::size_t>(c) * cols + c] = s;
}

}  // namespace

double WeightedCloud::mass() const { return pairwise_sum(weights); }

DiscreteMeasure WeightedCloud::to_measure() const {
    std::vector<double> c(coords.begin(), coords.end());
    std::vector<double> w(weights.begin(), weights.end());
    return DiscreteMeasure(dim, std::move(c), std::move(w));
}

CoefficientFamily::CoefficientFamily(Kind kind, const CoefficientSpec& spec, int d, int m,
                                     int m_tilde)
    : kind_(kind),
      drift_scale_(spec.drift_scale),
      idio_scale_(spec.idio_scale),
      common_scale_(spec.common_scale),
      revert_rate_(spec.revert_rate),
      d_(d),
      m_(m),
      m_tilde_(m_tilde) {}

CoefficientFamily CoefficientFamily::from_config(const SystemConfig& cfg) {
    const std::string& f = cfg.coefficients.family;
    Kind kind = Kind::zero;
    if (f == "linear_tanh") {
        kind = Kind::linear_tanh;
    } else if (f == "mean_revert_tanh") {
        kind = Kind::mean_revert_tanh;
    } else if (f != "zero") {
        throw std::invalid_argument("unknown coefficient family '" + f + "'");
    }
    return CoefficientFamily(kind, cfg.coefficients, cfg.d, cfg.m, cfg.m_tilde);
}

void CoefficientFamily::drift(std::span<const double> x, const WeightedCloud& mu,
                              std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    switch (kind_) {
        case Kind::zero:
            return;
        case Kind::linear_tanh: {
            // phi_p(x, mu) = scale * sum_j w_j tanh.(y_j - x), summed pairwise
            // in the cloud's canonical order
            const std::size_t n = mu.size();
            auto& terms = scratch_terms;
            terms.resize(n);
            for (int c = 0; c < d_; ++c) {
                const double xc = x[static_cast<std::size_t>(c)];
                for (std::size_t k = 0; k < n; ++k) {
                    const std::size_t j = mu.order.empty() ? k : mu.order[k];
                    terms[k] = mu.weights[j] *
                               std::tanh(mu.coords[j * static_cast<std::size_t>(d_) +
                                                   static_cast<std::size_t>(c)] -
                                         xc);
                }
                out[static_cast<std::size_t>(c)] = drift_scale_ * pairwise_sum(terms);
            }
            return;
        }
        case Kind::mean_revert_tanh: {
            const std::size_t n = mu.size();
            auto& terms = scratch_terms;
            terms.resize(n);
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t j = mu.order.empty() ? k : mu.order[k];
                terms[k] = mu.weights[j];
            }
            const double mass = pairwise_sum(terms);
            for (int c = 0; c < d_; ++c) {
                double mean = 0.0;
                if (mass > 0.0) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const std::size_t j = mu.order.empty() ? k : mu.order[k];
                        terms[k] = mu.weights[j] *
                                   mu.coords[j * static_cast<std::size_t>(d_) +
                                             static_cast<std::size_t>(c)];
                    }
                    mean = pairwise_sum(terms) / mass;
                }
                out[static_cast<std::size_t>(c)] =
                    -revert_rate_ * std::tanh(x[static_cast<std::size_t>(c)] - mean);
            }
            return;
        }
    }
}

void CoefficientFamily::idio_diffusion(std::span<const double>, const WeightedCloud& mu,
                                       std::span<double> out) const {
    switch (kind_) {
        case Kind::zero:
            std::fill(out.begin(), out.end(), 0.0);
            return;
        case Kind::linear_tanh:
            // constant kernel: phi_b(x, mu) = scale * m_mu * I
            diagonal_matrix(idio_scale_ * mu.mass(), d_, m_, out);
            return;
        case Kind::mean_revert_tanh:
            diagonal_matrix(idio_scale_, d_, m_, out);
            return;
    }
}

void CoefficientFamily::common_diffusion(std::span<const double>, const WeightedCloud& mu,
                                         std::span<double> out) const {
    switch (kind_) {
        case Kind::zero:
            std::fill(out.begin(), out.end(), 0.0);
            return;
        case Kind::linear_tanh:
            diagonal_matrix(common_scale_ * mu.mass(), d_, m_tilde_, out);
            return;
        case Kind::mean_revert_tanh:
            diagonal_matrix(common_scale_, d_, m_tilde_, out);
            return;
    }
}

std::vector<double> CoefficientFamily::drift(std::span<const double> x,
                                             const DiscreteMeasure& mu) const {
    WeightedCloud cloud{mu.dim(), mu.coords(), mu.weights(), {}};
    std::vector<double> out(static_cast<std::size_t>(d_));
    drift(x, cloud, out);
    return out;
}

double CoefficientFamily::kernel_bound() const {
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::linear_tanh:
            return std::max({drift_scale_ * std::sqrt(static_cast<double>(d_)),
                             idio_scale_ * std::sqrt(static_cast<double>(std::min(d_, m_))),
                             common_scale_ * std::sqrt(static_cast<double>(std::min(d_, m_tilde_)))});
        case Kind::mean_revert_tanh:
            return std::max({revert_rate_ * std::sqrt(static_cast<double>(d_)),
                             idio_scale_ * std::sqrt(static_cast<double>(std::min(d_, m_))),
                             common_scale_ * std::sqrt(static_cast<double>(std::min(d_, m_tilde_)))});
    }
    return 0.0;
}

double CoefficientFamily::kernel_lipschitz() const {
    switch (kind_) {
        case Kind::zero:
            return 0.0;
        case Kind::linear_tanh:
            return drift_scale_;  // tanh kernel is 1-Lipschitz, diffusion kernels constant
        case Kind::mean_revert_tanh:
            return revert_rate_;
    }
    return 0.0;
}

}  // namespace graphonlab
