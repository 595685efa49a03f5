#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fourierfit/interpolate.hpp"
#include "fourierfit/rng.hpp"
#include "fourierfit/spectra.hpp"

namespace fourierfit {

/// Band-limited regression target g(x) = Σ_k ĝ_k e^{i 2π k x}.
struct TargetSpec {
  FourierSeries series;

  double power() const { return series.power(); }

  /// Smallest odd window size n0 with support ⊆ Ω_{n0}.
  std::int64_t band_limit() const { return 2 * series.max_frequency() + 1; }

  bool real_valued(double tol = 1e-12) const {
    return series.conjugate_symmetric(tol);
  }

  static TargetSpec zero() { return TargetSpec{}; }

  static TargetSpec single_tone(std::int64_t p, Complex amplitude) {
    TargetSpec t;
    t.series.set(p, amplitude);
    return t;
  }

  /// Real target with equal-magnitude coefficients on all of Ω_{n0},
  /// normalized to total power P.
  static TargetSpec flat(std::int64_t n0, double total_power) {
    require_odd(n0, "n0");
    require(total_power >= 0.0, "power must be nonnegative");
    TargetSpec t;
    const double amp = std::sqrt(total_power / static_cast<double>(n0));
    const std::int64_t half = (n0 - 1) / 2;
    for (std::int64_t k = -half; k <= half; ++k) t.series.set(k, Complex(amp, 0.0));
    return t;
  }

  /// Random real target on Ω_{n0} scaled to total power P.
  static TargetSpec random_band_limited(std::int64_t n0, double total_power,
                                        std::mt19937_64& engine) {
    require_odd(n0, "n0");
    require(total_power >= 0.0, "power must be nonnegative");
    TargetSpec t;
    std::normal_distribution<double> dist(0.0, 1.0);
    const std::int64_t half = (n0 - 1) / 2;
    t.series.set(0, Complex(dist(engine), 0.0));
    for (std::int64_t k = 1; k <= half; ++k) {
      const Complex c(dist(engine), dist(engine));
      t.series.set(k, c);
      t.series.set(-k, std::conj(c));
    }
    const double p = t.series.power();
    if (p > 0.0 && total_power > 0.0) {
      const double scale = std::sqrt(total_power / p);
      for (const auto& [k, c] : t.series.coefficients()) {
        t.series.set(k, c * scale);
      }
    } else if (total_power == 0.0) {
      t = TargetSpec{};
    }
    return t;
  }
};

/// Exact generalization-error decomposition plus optional Monte Carlo columns.
struct ErrorReport {
  double var = 0.0;
  double bias_sq = 0.0;
  double total = 0.0;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
};

/// Exact generalization error of the minimum-norm interpolant:
///   VAR   = (σ²/n) Σ_{k∈Ω_n} [Σ_{l∈S(k)} ν_l²] / [Σ_{j∈S(k)} ν_j]²
///   BIAS² = Σ_{k∈supp ĝ} |ĝ_k|² [(Σ_{l∈S(k)\k} ν_l)² + Σ_{l∈S(k)\k} ν_l²]
///           / [Σ_{j∈S(k)} ν_j]²
inline ErrorReport closed_form_error(const WeightProfile& weights,
                                     const TargetSpec& target, std::int64_t n,
                                     double sigma_sq) {
  require_odd(n, "n");
  require(sigma_sq >= 0.0, "sigma_sq must be nonnegative");
  require(target.band_limit() <= n,
          "target spectrum must fit inside the sample window");
  const auto cohorts = alias_cohorts(weights, n);

  const std::int64_t half = (n - 1) / 2;
  double var = 0.0;
  for (std::int64_t k = -half; k <= half; ++k) {
    auto it = cohorts.find(k);
    require(it != cohorts.end() && it->second.weight_sum > 0.0,
            "alias weight sum for residue " + std::to_string(k) +
                " is zero; configuration cannot interpolate");
    const AliasCohort& cohort = it->second;
    var += cohort.weight_sq_sum / (cohort.weight_sum * cohort.weight_sum);
  }
  var *= sigma_sq / static_cast<double>(n);

  double bias_sq = 0.0;
  for (const auto& [k, g_hat] : target.series.coefficients()) {
    const double g_sq = std::norm(g_hat);
    if (g_sq == 0.0) continue;
    const AliasCohort& cohort = cohorts.at(k);
    const double nu_k = weights.at(k);
    const double rest_sum = cohort.weight_sum - nu_k;
    const double rest_sq = cohort.weight_sq_sum - nu_k * nu_k;
    bias_sq += g_sq * (rest_sum * rest_sum + rest_sq) /
               (cohort.weight_sum * cohort.weight_sum);
  }

  ErrorReport report;
  report.var = var;
  report.bias_sq = bias_sq;
  report.total = var + bias_sq;
  return report;
}

/// Noise-only error for the uniform-weight model with m+1 aliases per mode.
/// With the 1/n-normalized transform each alias carries ŷ_k/(m+1), so the
/// error is σ²/(m+1); an unnormalized transform would instead give the same
/// expression divided by n.
inline double noise_only_error(std::int64_t n, std::int64_t m, double sigma_sq) {
  require_odd(n, "n");
  require(m >= 0, "m must be nonnegative");
  return sigma_sq / static_cast<double>(m + 1);
}

/// Signal-only error for a single tone of power |ĝ_p|² spread over m aliases:
/// |ĝ_p (m/(m+1))|² + m|ĝ_p|²/(m+1)² = |ĝ_p|² m/(m+1).
inline double signal_only_error(double g_p_sq, std::int64_t m) {
  require(g_p_sq >= 0.0, "tone power must be nonnegative");
  require(m >= 0, "m must be nonnegative");
  return g_p_sq * static_cast<double>(m) / static_cast<double>(m + 1);
}

/// Uniform weights over the contiguous window Ω_d.
inline WeightProfile uniform_weights(std::int64_t d, double value = 1.0) {
  require_odd(d, "d");
  require(value > 0.0, "weight value must be positive");
  std::map<std::int64_t, double> w;
  const std::int64_t half = (d - 1) / 2;
  for (std::int64_t k = -half; k <= half; ++k) w[k] = value;
  return WeightProfile(w);
}

/// Hat profile: mass c spread uniformly over Ω_{n0}, the remaining 1−c spread
/// uniformly over Ω_d \ Ω_{n0}.
inline WeightProfile hat_weights(std::int64_t n0, std::int64_t d, double c) {
  require_odd(n0, "n0");
  require_odd(d, "d");
  require(n0 < d, "hat weights need n0 < d");
  require(c > 0.0 && c < 1.0, "c must lie strictly inside (0,1)");
  std::map<std::int64_t, double> w;
  const std::int64_t half = (d - 1) / 2;
  const std::int64_t inner = (n0 - 1) / 2;
  const double head = c / static_cast<double>(n0);
  const double tail = (1.0 - c) / static_cast<double>(d - n0);
  for (std::int64_t k = -half; k <= half; ++k) {
    w[k] = (std::llabs(k) <= inner) ? head : tail;
  }
  return WeightProfile(w);
}

namespace detail {
/// Support frequencies ordered by descending weight; ties broken by ascending
/// |k|, then positive before negative, so head/tail splits are deterministic.
inline std::vector<std::int64_t> ranked_support(const WeightProfile& weights) {
  std::vector<std::int64_t> keys = weights.support();
  std::stable_sort(keys.begin(), keys.end(),
                   [&](std::int64_t a, std::int64_t b) {
                     const double va = weights.at(a);
                     const double vb = weights.at(b);
                     if (va != vb) return va > vb;
                     if (std::llabs(a) != std::llabs(b))
                       return std::llabs(a) < std::llabs(b);
                     return a > b;
                   });
  return keys;
}
}  // namespace detail

struct EffectiveRank {
  double value = 0.0;
  bool empty_tail = false;
};

/// Effective rank of the alias tail of residue k once the p heaviest modes are
/// removed: R_p^{(k)} = (Σ_{l∈S(k)∩S^{>p}} ν_l)² / Σ_{l∈S(k)∩S^{>p}} ν_l².
inline EffectiveRank effective_rank(const WeightProfile& weights,
                                    std::int64_t k, std::int64_t p,
                                    std::int64_t n) {
  require_odd(n, "n");
  require(p >= 0 && p <= n, "head size p must satisfy 0 <= p <= n");
  require(std::llabs(k) <= (n - 1) / 2, "k must lie inside the sample window");
  const std::vector<std::int64_t> ranked = detail::ranked_support(weights);
  const std::size_t head =
      std::min<std::size_t>(static_cast<std::size_t>(p), ranked.size());
  double sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = head; i < ranked.size(); ++i) {
    const std::int64_t freq = ranked[i];
    if (symmetric_residue(freq, n) != k) continue;
    const double nu = weights.at(freq);
    sum += nu;
    sq_sum += nu * nu;
  }
  if (sq_sum == 0.0) return EffectiveRank{0.0, true};
  return EffectiveRank{sum * sum / sq_sum, false};
}

/// Bound value plus a flag recording whether the derivation's assumptions held
/// for the supplied profile (the value is computed either way).
struct BoundReport {
  double value = 0.0;
  bool assumptions_hold = true;
  std::string note;
};

/// Variance bound σ²·[n0/n + (1/n) Σ_{k∈Ω_n} 1/R_{n0}^{(k)}]; alias classes
/// whose tail is empty contribute nothing to the sum. The per-residue tail
/// sums are accumulated in one pass over the ranked support, which matches
/// `effective_rank` addition for addition while ranking only once.
inline BoundReport var_upper_bound(const WeightProfile& weights,
                                   std::int64_t n0, std::int64_t n,
                                   double sigma_sq) {
  require_odd(n0, "n0");
  require_odd(n, "n");
  require(n0 <= n, "head size n0 must not exceed n");
  require(sigma_sq >= 0.0, "sigma_sq must be nonnegative");

  const std::vector<std::int64_t> ranked = detail::ranked_support(weights);
  const std::size_t head =
      std::min<std::size_t>(static_cast<std::size_t>(n0), ranked.size());
  std::map<std::int64_t, std::pair<double, double>> tails;
  for (std::size_t i = head; i < ranked.size(); ++i) {
    const std::int64_t freq = ranked[i];
    const double nu = weights.at(freq);
    auto& [sum, sq_sum] = tails[symmetric_residue(freq, n)];
    sum += nu;
    sq_sum += nu * nu;
  }
  double tail_sum = 0.0;
  for (const auto& [k, tail] : tails) {
    if (tail.second > 0.0) tail_sum += tail.second / (tail.first * tail.first);
  }
  BoundReport report;
  report.value = sigma_sq * (static_cast<double>(n0) / static_cast<double>(n) +
                             tail_sum / static_cast<double>(n));
  return report;
}

/// Bias bound (m/n + m²t)^{1/2}·P·ζ⁻² with m the largest alias count, t the
/// largest deviation of any off-window weight from its alias-shell average,
/// ζ = Σ_{k∈Ω_{n0}} ν_k, P the target power. t is measured from the profile
/// itself; shells are indexed by l = (k − residue(k))/n.
inline BoundReport bias_upper_bound(const WeightProfile& weights,
                                    const TargetSpec& target, std::int64_t n,
                                    std::int64_t d) {
  require_odd(n, "n");
  require_odd(d, "d");
  require(target.band_limit() <= n,
          "target spectrum must fit inside the sample window");

  const auto cohorts = alias_cohorts(weights, n);
  std::int64_t max_cohort = 0;
  for (const auto& [k, cohort] : cohorts) {
    max_cohort = std::max(
        max_cohort, static_cast<std::int64_t>(cohort.frequencies.size()));
  }
  const std::int64_t m = std::max<std::int64_t>(0, max_cohort - 1);

  std::map<std::int64_t, std::vector<double>> shells;
  for (const auto& [freq, nu] : weights.entries()) {
    const std::int64_t shell = (freq - symmetric_residue(freq, n)) / n;
    shells[shell].push_back(nu);
  }
  double t = 0.0;
  bool shells_complete = true;
  for (const auto& [shell, values] : shells) {
    if (shell == 0) continue;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    for (double v : values) t = std::max(t, std::abs(v - mean));
    if (static_cast<std::int64_t>(values.size()) != n) shells_complete = false;
  }

  const std::int64_t n0 = target.band_limit();
  const std::int64_t inner = (n0 - 1) / 2;
  double zeta = 0.0;
  for (std::int64_t k = -inner; k <= inner; ++k) zeta += weights.at(k);
  require(zeta > 0.0, "bias bound needs positive weight on the target band");

  BoundReport report;
  const double md = static_cast<double>(m);
  report.value = std::sqrt(md / static_cast<double>(n) + md * md * t) *
                 target.power() / (zeta * zeta);

  const bool normalized = std::abs(weights.total() - 1.0) <= 1e-9;
  const bool contiguous = weights.support_size() == d &&
                          weights.max_frequency() == (d - 1) / 2;
  const bool exact_multiple = d == n * (m + 1);
  report.assumptions_hold =
      normalized && contiguous && exact_multiple && shells_complete;
  if (!report.assumptions_hold) {
    report.note = std::string("assumption check: ") +
                  (normalized ? "" : "profile not normalized; ") +
                  (contiguous ? "" : "support not contiguous; ") +
                  (exact_multiple ? "" : "d is not an exact odd multiple of n; ") +
                  (shells_complete ? "" : "ragged alias shells; ");
  }
  return report;
}

struct ScalingPoint {
  std::int64_t n = 0;
  std::int64_t d = 0;
  ErrorReport error;
};

/// d-schedule for scaling sweeps: smallest odd integer ≥ max(n, n^α).
inline std::int64_t scaled_dimension(std::int64_t n, double alpha) {
  const double raw = std::pow(static_cast<double>(n), alpha);
  auto d = static_cast<std::int64_t>(std::ceil(raw - 1e-9));
  d = std::max(d, n);
  if (!is_odd(d)) ++d;
  return d;
}

/// Closed-form error along the benign scaling d = n^α with hat weights.
inline std::vector<ScalingPoint> benign_scaling_curve(
    const std::vector<std::int64_t>& n_list, double alpha, std::int64_t n0,
    double c, const TargetSpec& target, double sigma_sq) {
  require(alpha > 0.0, "alpha must be positive");
  std::vector<ScalingPoint> points;
  points.reserve(n_list.size());
  for (std::int64_t n : n_list) {
    require_odd(n, "n");
    require(target.band_limit() <= n,
            "target spectrum must fit inside every sample window");
    const std::int64_t d = scaled_dimension(n, alpha);
    require(n0 < d, "scaling produced d <= n0; increase n or alpha");
    const WeightProfile weights = hat_weights(n0, d, c);
    ScalingPoint point;
    point.n = n;
    point.d = d;
    point.error = closed_form_error(weights, target, n, sigma_sq);
    points.push_back(point);
  }
  return points;
}

/// Noisy samples of the target on the n-point uniform grid.
inline SampleSet sample_target(const TargetSpec& target, std::int64_t n,
                               double sigma, std::mt19937_64& engine,
                               NoiseKind kind = NoiseKind::gaussian) {
  require_odd(n, "n");
  require(sigma >= 0.0, "sigma must be nonnegative");
  SampleSet samples;
  samples.noise_sigma = sigma;
  samples.values.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    Complex y = target.series.evaluate(static_cast<double>(j) /
                                       static_cast<double>(n));
    if (sigma > 0.0) y += draw_noise(engine, sigma, kind);
    samples.values.push_back(y);
  }
  return samples;
}

}  // namespace fourierfit
