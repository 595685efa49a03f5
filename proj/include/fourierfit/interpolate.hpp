#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fourierfit/spectra.hpp"

namespace fourierfit {

/// Nonnegative Fourier-mode weights ν_k. Zero-valued entries are permitted in
/// the input map but dropped from the stored support; at() reads absent
/// frequencies as zero.
class WeightProfile {
 public:
  WeightProfile() = default;

  explicit WeightProfile(const std::map<std::int64_t, double>& weights) {
    for (const auto& [k, nu] : weights) {
      require(std::isfinite(nu) && nu >= 0.0,
              "weight at frequency " + std::to_string(k) +
                  " must be finite and nonnegative");
      if (nu > 0.0) weights_.emplace(k, nu);
    }
    require(!weights_.empty(), "weight profile must have nonempty support");
  }

  double at(std::int64_t k) const {
    auto it = weights_.find(k);
    return it == weights_.end() ? 0.0 : it->second;
  }

  bool contains(std::int64_t k) const { return weights_.count(k) != 0; }

  const std::map<std::int64_t, double>& entries() const { return weights_; }

  std::vector<std::int64_t> support() const {
    std::vector<std::int64_t> keys;
    keys.reserve(weights_.size());
    for (const auto& [k, nu] : weights_) keys.push_back(k);
    return keys;
  }

  std::int64_t support_size() const {
    return static_cast<std::int64_t>(weights_.size());
  }

  double total() const {
    double t = 0.0;
    for (const auto& [k, nu] : weights_) t += nu;
    return t;
  }

  std::int64_t max_frequency() const {
    std::int64_t mx = 0;
    for (const auto& [k, nu] : weights_) mx = std::max<std::int64_t>(mx, std::llabs(k));
    return mx;
  }

 private:
  std::map<std::int64_t, double> weights_;
};

/// One alias class: the support frequencies congruent to `residue` mod n.
struct AliasCohort {
  std::int64_t residue = 0;
  std::vector<std::int64_t> frequencies;  // ascending
  double weight_sum = 0.0;                // Σ_{l∈S(k)} ν_l
  double weight_sq_sum = 0.0;             // Σ_{l∈S(k)} ν_l²
};

/// Partition of the weight support into alias classes modulo n, keyed by the
/// symmetric residue.
inline std::map<std::int64_t, AliasCohort> alias_cohorts(
    const WeightProfile& weights, std::int64_t n) {
  require_odd(n, "n");
  std::map<std::int64_t, AliasCohort> cohorts;
  for (const auto& [k, nu] : weights.entries()) {
    const std::int64_t r = symmetric_residue(k, n);
    AliasCohort& cohort = cohorts[r];
    cohort.residue = r;
    cohort.frequencies.push_back(k);  // map iteration is ascending in k
    cohort.weight_sum += nu;
    cohort.weight_sq_sum += nu * nu;
  }
  return cohorts;
}

/// Minimum-norm interpolant in the weighted Fourier feature basis:
/// f(x) = Σ_k α_k √ν_k e^{i 2π k x} with coefficients over the weight support.
class TrainedModel {
 public:
  TrainedModel(std::map<std::int64_t, Complex> coefficients,
               WeightProfile weights, std::int64_t grid_size)
      : coefficients_(std::move(coefficients)),
        weights_(std::move(weights)),
        grid_size_(grid_size) {
    for (const auto& [k, alpha] : coefficients_) {
      series_.set(k, alpha * std::sqrt(weights_.at(k)));
    }
  }

  const std::map<std::int64_t, Complex>& coefficients() const {
    return coefficients_;
  }
  const WeightProfile& weights() const { return weights_; }
  std::int64_t grid_size() const { return grid_size_; }

  /// Fourier series of the fitted model (coefficient at k is α_k √ν_k).
  const FourierSeries& series() const { return series_; }

  Complex evaluate(double x) const { return series_.evaluate(x); }

  /// Real part of f(x); the magnitude of the discarded imaginary part is
  /// reported through `imag_magnitude` when requested.
  double evaluate_real(double x, double* imag_magnitude = nullptr) const {
    const Complex value = evaluate(x);
    if (imag_magnitude != nullptr) *imag_magnitude = std::abs(value.imag());
    return value.real();
  }

  double coefficient_norm_sq() const {
    double norm_sq = 0.0;
    for (const auto& [k, alpha] : coefficients_) norm_sq += std::norm(alpha);
    return norm_sq;
  }

 private:
  std::map<std::int64_t, Complex> coefficients_;
  WeightProfile weights_;
  std::int64_t grid_size_ = 0;
  FourierSeries series_;
};

namespace detail {
/// Threshold below which a DFT coefficient counts as zero when deciding
/// whether an uncovered residue makes the problem non-interpolable.
inline double interpolation_scale(const SampleSet& samples) {
  double scale = 1.0;
  for (const Complex& y : samples.values) scale = std::max(scale, std::abs(y));
  return scale;
}
inline constexpr double kZeroModeTol = 1e-12;
}  // namespace detail

/// Minimum-ℓ2-norm interpolating fit. Within each alias class the solution
/// puts α_l = ŷ_k √ν_l / Σ_{j∈S(k)} ν_j, which both interpolates every sample
/// and minimizes ‖α‖₂ among interpolants.
inline TrainedModel min_norm_fit(const SampleSet& samples,
                                 const WeightProfile& weights) {
  const std::int64_t n = samples.grid_size();
  require_odd(n, "sample count");
  const FourierSeries y_hat = dft(samples);
  const auto cohorts = alias_cohorts(weights, n);
  const double zero_tol =
      detail::kZeroModeTol * detail::interpolation_scale(samples);

  std::map<std::int64_t, Complex> alpha;
  const std::int64_t half = (n - 1) / 2;
  for (std::int64_t k = -half; k <= half; ++k) {
    const Complex target = y_hat.at(k);
    auto it = cohorts.find(k);
    if (it == cohorts.end() || it->second.weight_sum <= 0.0) {
      if (std::abs(target) > zero_tol) {
        throw NonInterpolable(
            k, "mode " + std::to_string(k) +
                   " has nonzero sample content but zero alias weight");
      }
      continue;
    }
    const AliasCohort& cohort = it->second;
    const Complex ratio = target / cohort.weight_sum;
    for (std::int64_t freq : cohort.frequencies) {
      alpha[freq] = ratio * std::sqrt(weights.at(freq));
    }
  }
  // Support frequencies in residue classes outside any populated cohort keep
  // coefficient zero; leaving them out of the map means they contribute
  // nothing to evaluation, matching α = 0.
  return TrainedModel(std::move(alpha), weights, n);
}

/// Aliased design system: rows indexed by the DFT residues k ∈ Ω_n, columns by
/// the weight support, X_{kl} = √ν_l·1[l ≡ k (mod n)], and right-hand side
/// ŷ_k. XXᵀ is diagonal with entries Σ_{l∈S(k)} ν_l.
struct LinearSystem {
  Eigen::MatrixXcd features;            // n × d
  Eigen::VectorXcd target_coefficients; // ŷ over row residues
  std::vector<std::int64_t> row_residues;       // ascending, size n
  std::vector<std::int64_t> column_frequencies; // ascending, size d
};

inline LinearSystem build_linear_system(const SampleSet& samples,
                                        const WeightProfile& weights) {
  const std::int64_t n = samples.grid_size();
  require_odd(n, "sample count");
  const FourierSeries y_hat = dft(samples);

  LinearSystem system;
  system.column_frequencies = weights.support();
  const std::int64_t half = (n - 1) / 2;
  for (std::int64_t k = -half; k <= half; ++k) system.row_residues.push_back(k);

  const auto rows = static_cast<Eigen::Index>(system.row_residues.size());
  const auto cols = static_cast<Eigen::Index>(system.column_frequencies.size());
  system.features = Eigen::MatrixXcd::Zero(rows, cols);
  system.target_coefficients = Eigen::VectorXcd::Zero(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    system.target_coefficients(i) = y_hat.at(system.row_residues[static_cast<std::size_t>(i)]);
  }
  for (Eigen::Index j = 0; j < cols; ++j) {
    const std::int64_t freq = system.column_frequencies[static_cast<std::size_t>(j)];
    const std::int64_t r = symmetric_residue(freq, n);
    const Eigen::Index i = static_cast<Eigen::Index>(r + half);
    system.features(i, j) = Complex(std::sqrt(weights.at(freq)), 0.0);
  }
  return system;
}

}  // namespace fourierfit
