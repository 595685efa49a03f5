#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fourierfit/common.hpp"
#include "fourierfit/generalization.hpp"
#include "fourierfit/interpolate.hpp"
#include "fourierfit/quantum.hpp"
#include "fourierfit/rng.hpp"
#include "fourierfit/spectra.hpp"

namespace fourierfit {

/// Pseudoinverse solution of the aliased design system:
/// α = Xᵀ (X Xᵀ)⁻¹ ŷ, exploiting that X Xᵀ is diagonal (rows of X address
/// disjoint column sets). This path never touches the cohort-based
/// interpolator and exists to cross-check it.
inline std::map<std::int64_t, Complex> pinv_min_norm(
    const SampleSet& samples, const WeightProfile& weights) {
  const LinearSystem system = build_linear_system(samples, weights);
  const double zero_tol =
      detail::kZeroModeTol * detail::interpolation_scale(samples);

  const Eigen::Index rows = system.features.rows();
  Eigen::VectorXcd scaled = Eigen::VectorXcd::Zero(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double diagonal = system.features.row(i).squaredNorm();
    const Complex target = system.target_coefficients(i);
    if (diagonal <= 0.0) {
      if (std::abs(target) > zero_tol) {
        const std::int64_t residue =
            system.row_residues[static_cast<std::size_t>(i)];
        throw NonInterpolable(
            residue, "mode " + std::to_string(residue) +
                         " has nonzero sample content but a singular design "
                         "row (zero alias weight)");
      }
      continue;
    }
    scaled(i) = target / diagonal;
  }
  const Eigen::VectorXcd alpha = system.features.adjoint() * scaled;

  std::map<std::int64_t, Complex> out;
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    out[system.column_frequencies[static_cast<std::size_t>(j)]] = alpha(j);
  }
  return out;
}

/// How evaluation points are drawn when estimating E_x.
enum class XSampling { random, grid };

/// Monte Carlo estimation settings. Trials below 100 are rejected: estimates
/// from fewer trials carry standard errors too wide to act on.
struct McConfig {
  std::int64_t trials = 200;
  std::int64_t eval_points = 64;
  std::uint64_t seed = 0;
  NoiseKind noise_kind = NoiseKind::gaussian;
  XSampling x_sampling = XSampling::random;
  std::int64_t grid_points = 0;  // required when x_sampling == grid
};

inline void validate(const McConfig& cfg) {
  require(cfg.trials >= 100, "McConfig.trials must be at least 100");
  require(cfg.eval_points >= 1, "McConfig.eval_points must be positive");
  if (cfg.x_sampling == XSampling::grid) {
    require(cfg.grid_points >= 1,
            "McConfig.grid_points must be positive for grid sampling");
  }
}

struct McResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::int64_t trials = 0;
};

/// Generalization error of a refitted model, estimated over fresh noise draws:
/// per trial, sample y_j = g(x_j) + ε_j, fit, and average |f(x) − g(x)|² over
/// evaluation points. Trial t uses the dedicated stream (seed, t), so results
/// are reproducible and independent of any outer parallelism; the reduction
/// runs in trial order.
template <class FitFactory>
McResult monte_carlo_error(FitFactory&& fit, const TargetSpec& target,
                           std::int64_t n, double sigma, const McConfig& cfg) {
  validate(cfg);
  require_odd(n, "n");
  require(sigma >= 0.0, "sigma must be nonnegative");

  std::vector<double> estimates;
  estimates.reserve(static_cast<std::size_t>(cfg.trials));
  for (std::int64_t trial = 0; trial < cfg.trials; ++trial) {
    std::mt19937_64 engine =
        make_stream(cfg.seed, static_cast<std::uint64_t>(trial));
    const SampleSet samples =
        sample_target(target, n, sigma, engine, cfg.noise_kind);
    const auto model = fit(samples);

    double error = 0.0;
    if (cfg.x_sampling == XSampling::random) {
      for (std::int64_t e = 0; e < cfg.eval_points; ++e) {
        const double x = uniform_unit(engine);
        error += std::norm(model.evaluate(x) - target.series.evaluate(x));
      }
      error /= static_cast<double>(cfg.eval_points);
    } else {
      for (std::int64_t j = 0; j < cfg.grid_points; ++j) {
        const double x =
            static_cast<double>(j) / static_cast<double>(cfg.grid_points);
        error += std::norm(model.evaluate(x) - target.series.evaluate(x));
      }
      error /= static_cast<double>(cfg.grid_points);
    }
    estimates.push_back(error);
  }

  double mean = 0.0;
  for (double e : estimates) mean += e;
  mean /= static_cast<double>(cfg.trials);
  double var = 0.0;
  for (double e : estimates) var += (e - mean) * (e - mean);
  var /= static_cast<double>(cfg.trials - 1);

  McResult result;
  result.estimate = mean;
  result.standard_error = std::sqrt(var / static_cast<double>(cfg.trials));
  result.trials = cfg.trials;
  return result;
}

/// Physical-path evaluation ⟨Γ| diag(e^{−i2πλ_j x}) M diag(e^{i2πλ_j x}) |Γ⟩,
/// bypassing the Fourier-series representation entirely. The imaginary part
/// (zero for Hermitian M up to rounding) is reported when requested.
inline double statevector_expectation(const EncodingStrategy& encoding,
                                      const InputState& state,
                                      const Observable& observable, double x,
                                      double* imag_residue = nullptr) {
  const std::int64_t d = encoding.dimension();
  require(state.dimension() == d && observable.dimension() == d,
          "state, observable, and encoding dimensions must agree");
  Eigen::VectorXcd phased(static_cast<Eigen::Index>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    const double angle =
        kTwoPi * encoding.eigenvalues[static_cast<std::size_t>(j)] * x;
    phased(static_cast<Eigen::Index>(j)) =
        std::polar(1.0, angle) * state.amplitude(j);
  }
  const Complex value = phased.dot(observable.matrix() * phased);
  if (imag_residue != nullptr) *imag_residue = std::abs(value.imag());
  return value.real();
}

/// Haar-random state: a vector of independent standard complex Gaussians,
/// normalized. The moduli (all that the weight map sees) are distributed
/// uniformly on the d-simplex in |γ_j|².
inline InputState haar_state_sample(std::int64_t d, std::mt19937_64& engine) {
  require(d >= 1, "dimension must be positive");
  Eigen::VectorXcd g(static_cast<Eigen::Index>(d));
  double norm_sq = 0.0;
  do {
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      g(j) = standard_complex_gaussian(engine);
      norm_sq += std::norm(g(j));
    }
  } while (norm_sq == 0.0);
  g /= std::sqrt(norm_sq);
  return InputState(std::move(g));
}

struct HaarWeightSummary {
  std::int64_t frequency = 0;
  std::int64_t degeneracy = 0;
  double mean = 0.0;
  double mean_std_error = 0.0;
  double variance = 0.0;
  double variance_std_error = 0.0;
};

/// Empirical per-frequency moments of ν_k over Haar states. Sample i uses
/// stream (seed, i); accumulation is one-pass (central moments up to order 4,
/// needed for the standard error of the variance).
inline std::vector<HaarWeightSummary> haar_weight_stats(
    const EncodingStrategy& encoding, std::int64_t samples_count,
    std::uint64_t seed) {
  require(samples_count >= 1000,
          "haar_weight_stats needs at least 1000 samples");
  const auto analysis = spectrum_and_degeneracy(encoding);
  const std::int64_t d = encoding.dimension();

  struct Accumulator {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
  };
  const auto& groups = analysis.degeneracies.all();
  std::vector<Accumulator> acc(groups.size());

  std::vector<double> p(static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < samples_count; ++i) {
    std::mt19937_64 engine =
        make_stream(seed, static_cast<std::uint64_t>(i));
    const InputState state = haar_state_sample(d, engine);
    for (std::int64_t j = 0; j < d; ++j) {
      p[static_cast<std::size_t>(j)] = std::norm(state.amplitude(j));
    }
    const double count = static_cast<double>(i + 1);
    std::size_t slot = 0;
    for (const auto& [k, pairs] : groups) {
      double nu = 0.0;
      for (const auto& [a, b] : pairs) {
        nu += p[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(b)];
      }
      Accumulator& s = acc[slot++];
      const double delta = nu - s.mean;
      const double delta_n = delta / count;
      const double delta_n2 = delta_n * delta_n;
      const double term1 = delta * delta_n * (count - 1.0);
      s.mean += delta_n;
      s.m4 += term1 * delta_n2 * (count * count - 3.0 * count + 3.0) +
              6.0 * delta_n2 * s.m2 - 4.0 * delta_n * s.m3;
      s.m3 += term1 * delta_n * (count - 2.0) - 3.0 * delta_n * s.m2;
      s.m2 += term1;
    }
  }

  const double big_n = static_cast<double>(samples_count);
  std::vector<HaarWeightSummary> out;
  out.reserve(groups.size());
  std::size_t slot = 0;
  for (const auto& [k, pairs] : groups) {
    const Accumulator& s = acc[slot++];
    HaarWeightSummary row;
    row.frequency = k;
    row.degeneracy = static_cast<std::int64_t>(pairs.size());
    row.mean = s.mean;
    const double sample_var = s.m2 / (big_n - 1.0);
    row.mean_std_error = std::sqrt(sample_var / big_n);
    row.variance = sample_var;
    const double mu4 = s.m4 / big_n;
    const double var_of_var =
        (mu4 - sample_var * sample_var * (big_n - 3.0) / (big_n - 1.0)) /
        big_n;
    row.variance_std_error = std::sqrt(std::max(var_of_var, 0.0));
    out.push_back(row);
  }
  return out;
}

}  // namespace fourierfit
