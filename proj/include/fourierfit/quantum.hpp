#pragma once

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fourierfit/common.hpp"
#include "fourierfit/encodings.hpp"
#include "fourierfit/interpolate.hpp"
#include "fourierfit/spectra.hpp"

namespace fourierfit {

/// Normalized amplitude vector |Γ⟩ = Σ_j γ_j |j⟩ prepared by the input layer.
class InputState {
 public:
  explicit InputState(Eigen::VectorXcd amplitudes)
      : amplitudes_(std::move(amplitudes)) {
    require(amplitudes_.size() >= 1, "state needs at least one amplitude");
    double norm_sq = 0.0;
    for (Eigen::Index j = 0; j < amplitudes_.size(); ++j) {
      const Complex g = amplitudes_(j);
      require(std::isfinite(g.real()) && std::isfinite(g.imag()),
              "state amplitudes must be finite");
      norm_sq += std::norm(g);
    }
    require(std::abs(norm_sq - 1.0) <= 1e-12,
            "state must be normalized: got squared norm " +
                std::to_string(norm_sq));
  }

  static InputState uniform(std::int64_t d) {
    require(d >= 1, "dimension must be positive");
    Eigen::VectorXcd g = Eigen::VectorXcd::Constant(
        static_cast<Eigen::Index>(d),
        Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
    return InputState(std::move(g));
  }

  static InputState basis(std::int64_t d, std::int64_t index) {
    require(d >= 1, "dimension must be positive");
    require(index >= 0 && index < d, "basis index out of range");
    Eigen::VectorXcd g =
        Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d));
    g(static_cast<Eigen::Index>(index)) = Complex(1.0, 0.0);
    return InputState(std::move(g));
  }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  Complex amplitude(std::int64_t j) const {
    return amplitudes_(static_cast<Eigen::Index>(j));
  }

  std::int64_t dimension() const {
    return static_cast<std::int64_t>(amplitudes_.size());
  }

 private:
  Eigen::VectorXcd amplitudes_;
};

/// Hermitian measurement operator M.
class Observable {
 public:
  explicit Observable(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols(), "observable must be square");
    require(matrix_.rows() >= 1, "observable must be nonempty");
    double scale = 1.0;
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
      for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
        const Complex v = matrix_(i, j);
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                "observable entries must be finite");
        scale = std::max(scale, std::abs(v));
      }
    }
    const double asymmetry =
        (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    require(asymmetry <= 1e-10 * scale,
            "observable must be Hermitian: max |M - M†| = " +
                std::to_string(asymmetry));
  }

  static Observable zero(std::int64_t d) {
    require(d >= 1, "dimension must be positive");
    return Observable(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                             static_cast<Eigen::Index>(d)));
  }

  static Observable identity(std::int64_t d) {
    require(d >= 1, "dimension must be positive");
    return Observable(Eigen::MatrixXcd::Identity(
        static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
  }

  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  std::int64_t dimension() const {
    return static_cast<std::int64_t>(matrix_.rows());
  }

  double frobenius_norm() const { return matrix_.norm(); }

 private:
  Eigen::MatrixXcd matrix_;
};

/// Fourier series of the model ⟨Γ| S(x)† M S(x) |Γ⟩: the coefficient at
/// frequency k is Σ_{(ℓ,m)∈R(k)} γ_ℓ γ_m* M_{mℓ}.
inline FourierSeries model_series(const DegeneracyMap& degeneracies,
                                  const InputState& state,
                                  const Observable& observable) {
  const std::int64_t d = degeneracies.dimension();
  require(state.dimension() == d && observable.dimension() == d,
          "state, observable, and encoding dimensions must agree");
  FourierSeries series;
  for (const auto& [k, pairs] : degeneracies.all()) {
    Complex c(0.0, 0.0);
    for (const auto& [ell, m] : pairs) {
      c += state.amplitude(ell) * std::conj(state.amplitude(m)) *
           observable.matrix()(m, ell);
    }
    series.set(k, c);
  }
  return series;
}

/// Single-layer model: encoding Hamiltonian, prepared state, measurement, and
/// the Fourier series the three induce.
struct QuantumModel {
  EncodingStrategy encoding;
  InputState state;
  Observable observable;
  FourierSeries series;

  Complex evaluate(double x) const { return series.evaluate(x); }

  double evaluate_real(double x, double* imag_magnitude = nullptr) const {
    const Complex value = evaluate(x);
    if (imag_magnitude != nullptr) *imag_magnitude = std::abs(value.imag());
    return value.real();
  }
};

inline QuantumModel quantum_model(EncodingStrategy encoding, InputState state,
                                  Observable observable) {
  const auto analysis = spectrum_and_degeneracy(encoding);
  FourierSeries series =
      model_series(analysis.degeneracies, state, observable);
  return QuantumModel{std::move(encoding), std::move(state),
                      std::move(observable), std::move(series)};
}

/// Fourier weights induced by a state: ν_k = Σ_{(i,j)∈R(k)} |γ_i|²|γ_j|².
/// They sum to 1 over the spectrum and are symmetric in k, and depend only on
/// the amplitude moduli.
inline WeightProfile fourier_weights_from_state(
    const DegeneracyMap& degeneracies, const InputState& state) {
  const std::int64_t d = degeneracies.dimension();
  require(state.dimension() == d,
          "state and encoding dimensions must agree");
  std::vector<double> p(static_cast<std::size_t>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    p[static_cast<std::size_t>(j)] = std::norm(state.amplitude(j));
  }
  std::map<std::int64_t, double> nu;
  for (const auto& [k, pairs] : degeneracies.all()) {
    double sum = 0.0;
    for (const auto& [i, j] : pairs) {
      sum += p[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(j)];
    }
    nu[k] = sum;
  }
  return WeightProfile(nu);
}

inline WeightProfile fourier_weights_from_state(
    const EncodingStrategy& encoding, const InputState& state) {
  return fourier_weights_from_state(
      spectrum_and_degeneracy(encoding).degeneracies, state);
}

/// Weights of the simplified (uniform-state, tied-entry) model:
/// ν_k = |R(k)| / d².
inline WeightProfile simplified_weights(const DegeneracyMap& degeneracies) {
  const double d = static_cast<double>(degeneracies.dimension());
  std::map<std::int64_t, double> nu;
  for (const auto& [k, pairs] : degeneracies.all()) {
    nu[k] = static_cast<double>(pairs.size()) / (d * d);
  }
  return WeightProfile(nu);
}

namespace detail {

inline void require_real_samples(const SampleSet& samples,
                                 const std::string& op) {
  double scale = 1.0;
  double imag = 0.0;
  for (const Complex& y : samples.values) {
    scale = std::max(scale, std::abs(y));
    imag = std::max(imag, std::abs(y.imag()));
  }
  require(imag <= 1e-9 * scale,
          op + " requires real-valued samples (Hermitian observables produce "
               "real models); max |Im y| = " +
              std::to_string(imag));
}

}  // namespace detail

/// Minimum-Frobenius-norm observable interpolating real samples on the grid
/// x_j = j/n: M_{ℓm} = ŷ_k* γ_ℓ γ_m* / N_k for (ℓ,m) ∈ R(κ), κ ≡ k (mod n),
/// where N_k = Σ_{(i,j)∈R(S(k))} |γ_i|²|γ_j|². The induced series coefficient
/// at κ is ŷ_k ν_κ / N_k, so the model coincides with the classical
/// minimum-norm fit under the state's Fourier weights.
inline Observable optimal_observable(const SampleSet& samples,
                                     const EncodingStrategy& encoding,
                                     const InputState& state) {
  const std::int64_t n = samples.grid_size();
  require_odd(n, "sample count");
  detail::require_real_samples(samples, "optimal_observable");
  const std::int64_t d = encoding.dimension();
  require(state.dimension() == d,
          "state and encoding dimensions must agree");
  for (std::int64_t j = 0; j < d; ++j) {
    require(std::abs(state.amplitude(j)) > 0.0,
            "state amplitudes must be nonzero for an interpolating "
            "observable; amplitude " +
                std::to_string(j) + " vanishes");
  }

  const auto analysis = spectrum_and_degeneracy(encoding);
  const FourierSeries y_hat = dft(samples);
  const double zero_tol =
      detail::kZeroModeTol * detail::interpolation_scale(samples);

  // ν per spectrum frequency, then alias-class totals N_k per residue.
  std::map<std::int64_t, double> nu;
  for (const auto& [kappa, pairs] : analysis.degeneracies.all()) {
    double sum = 0.0;
    for (const auto& [i, j] : pairs) {
      sum += std::norm(state.amplitude(i)) * std::norm(state.amplitude(j));
    }
    nu[kappa] = sum;
  }
  std::map<std::int64_t, double> class_total;
  for (const auto& [kappa, weight] : nu) {
    class_total[symmetric_residue(kappa, n)] += weight;
  }

  const std::int64_t half = (n - 1) / 2;
  for (std::int64_t k = -half; k <= half; ++k) {
    auto it = class_total.find(k);
    const double total = it == class_total.end() ? 0.0 : it->second;
    if (total <= 0.0 && std::abs(y_hat.at(k)) > zero_tol) {
      throw NonInterpolable(
          k, "mode " + std::to_string(k) +
                 " has nonzero sample content but the spectrum covers no "
                 "frequency congruent to it");
    }
  }

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (const auto& [kappa, pairs] : analysis.degeneracies.all()) {
    const std::int64_t k = symmetric_residue(kappa, n);
    const double total = class_total.at(k);
    if (total <= 0.0) continue;
    const Complex factor = std::conj(y_hat.at(k)) / total;
    for (const auto& [ell, m] : pairs) {
      M(ell, m) = factor * state.amplitude(ell) *
                  std::conj(state.amplitude(m));
    }
  }
  return Observable(std::move(M));
}

inline QuantumModel optimal_quantum_model(const SampleSet& samples,
                                          const EncodingStrategy& encoding,
                                          const InputState& state) {
  Observable observable = optimal_observable(samples, encoding, state);
  return quantum_model(encoding, state, std::move(observable));
}

/// Simplified-model fit: all entries addressed by R(k) share one value, the
/// input state is uniform, and the resulting weights are ν_k = |R(k)|/d².
/// The tied entry value is the classical coefficient α_k divided by √|R(k)|;
/// as an ordered pair, entry (a,b) sits in R(κ_ab) with κ_ab = λ_a − λ_b and
/// is consumed by frequency −κ_ab.
inline QuantumModel simplified_model_fit(const SampleSet& samples,
                                         const EncodingStrategy& encoding) {
  detail::require_real_samples(samples, "simplified_model_fit");
  const auto analysis = spectrum_and_degeneracy(encoding);
  const std::int64_t d = encoding.dimension();

  TrainedModel fit =
      min_norm_fit(samples, simplified_weights(analysis.degeneracies));
  const auto& alpha = fit.coefficients();
  const auto alpha_at = [&alpha](std::int64_t k) {
    auto it = alpha.find(k);
    return it == alpha.end() ? Complex(0.0, 0.0) : it->second;
  };

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  for (const auto& [kappa, pairs] : analysis.degeneracies.all()) {
    const double deg =
        static_cast<double>(analysis.degeneracies.degeneracy(-kappa));
    const Complex value = alpha_at(-kappa) / std::sqrt(deg);
    for (const auto& [a, b] : pairs) M(a, b) = value;
  }

  InputState state = InputState::uniform(d);
  Observable observable(std::move(M));
  FourierSeries series =
      model_series(analysis.degeneracies, state, observable);
  return QuantumModel{encoding, std::move(state), std::move(observable),
                      std::move(series)};
}

/// Haar average of ν_k: (|R(k)| + d·δ_{k0}) / (d(d+1)).
inline double haar_mean_weight(const DegeneracyMap& degeneracies,
                               std::int64_t k) {
  require(degeneracies.contains(k),
          "k=" + std::to_string(k) + " lies outside the spectrum");
  const double d = static_cast<double>(degeneracies.dimension());
  const double r = static_cast<double>(degeneracies.degeneracy(k));
  return (r + (k == 0 ? d : 0.0)) / (d * (d + 1.0));
}

inline double haar_mean_weight(const EncodingStrategy& encoding,
                               std::int64_t k) {
  return haar_mean_weight(spectrum_and_degeneracy(encoding).degeneracies, k);
}

/// Haar variance of ν_k for k ≠ 0, with D = (d+3)(d+2)(d+1)d. Closed forms
/// exist for the Binary ladder (piecewise in |k|) and for Golomb rulers
/// (constant over k ≠ 0); no closed form is available for Hamming.
inline double haar_weight_variance(const std::string& strategy,
                                   std::int64_t k, std::int64_t d) {
  require(d >= 2, "dimension must be at least 2");
  if (k == 0) {
    throw InvalidArgument(
        "the variance closed forms cover k != 0 only");
  }
  const double dd = static_cast<double>(d);
  const double big_d = (dd + 3.0) * (dd + 2.0) * (dd + 1.0) * dd;
  const double denom = big_d * dd * (dd + 1.0);
  if (strategy == "binary") {
    const std::int64_t a = std::llabs(k);
    require(a <= d - 1, "k=" + std::to_string(k) +
                            " lies outside the Binary spectrum of dimension " +
                            std::to_string(d));
    const double ka = static_cast<double>(a);
    const double tail = (dd - ka) * (dd - ka) * (4.0 * dd + 6.0);
    if (2 * a <= d) {
      return ((5.0 * dd - 7.0 * ka) * dd * (dd + 1.0) - tail) / denom;
    }
    return (3.0 * (dd - ka) * dd * (dd + 1.0) - tail) / denom;
  }
  if (strategy == "golomb") {
    return (3.0 * dd * dd - dd - 6.0) / denom;
  }
  throw Unsupported("no closed-form Haar weight variance for strategy '" +
                    strategy + "'");
}

/// Replaces the amplitudes inside each Hamming-weight class by their
/// root-mean-square value; the induced ν profile is unchanged because the
/// Hamming degeneracy structure only sees per-class second moments.
inline InputState rebalanced_hamming_state(const InputState& state,
                                           std::int64_t n_qubits) {
  require(n_qubits >= 1 && n_qubits <= 20, "n_qubits must be in 1..20");
  const std::int64_t d = ipow(2, n_qubits);
  require(state.dimension() == d,
          "state dimension must be 2^{n_qubits}");
  std::vector<double> class_mass(static_cast<std::size_t>(n_qubits) + 1, 0.0);
  for (std::int64_t j = 0; j < d; ++j) {
    const int w = std::popcount(static_cast<std::uint64_t>(j));
    class_mass[static_cast<std::size_t>(w)] += std::norm(state.amplitude(j));
  }
  Eigen::VectorXcd phi(static_cast<Eigen::Index>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    const int w = std::popcount(static_cast<std::uint64_t>(j));
    const double size = static_cast<double>(binomial(n_qubits, w));
    phi(static_cast<Eigen::Index>(j)) =
        Complex(std::sqrt(class_mass[static_cast<std::size_t>(w)] / size), 0.0);
  }
  return InputState(std::move(phi));
}

namespace detail {

struct BenignParameters {
  std::int64_t block_half = 0;  // B₀ = (n0+1)/2
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;
  double a = 0.0;
  double b = 0.0;
};

inline BenignParameters benign_parameters(std::int64_t n0, std::int64_t d,
                                          double a) {
  require(d >= 2 && d % 2 == 0, "d must be even");
  require(n0 >= 3 && (n0 + 1) % 4 == 0, "n0 + 1 must be divisible by 4");
  require(d >= 2 * (n0 + 1),
          "d must be at least 2(n0+1) so the amplitude blocks nest");
  const double a_max = 2.0 / static_cast<double>(n0 + 1);
  require(std::isfinite(a) && a >= 0.0 && a <= a_max,
          "a must lie in [0, 2/(n0+1)]");
  BenignParameters p;
  p.block_half = (n0 + 1) / 2;
  p.c1 = d / 2 - (n0 + 1) / 4;
  p.c2 = d / 2 + (n0 + 1) / 4;
  p.a = a;
  p.b = (1.0 - static_cast<double>(p.block_half) * a) /
        static_cast<double>(d - p.block_half);
  return p;
}

}  // namespace detail

/// Two-level amplitude profile over the contiguous d-level ladder: √a on the
/// central block [c1, c2) of length (n0+1)/2 and √b elsewhere, with b chosen
/// so the state is normalized.
inline InputState benign_state(std::int64_t n0, std::int64_t d, double a) {
  const auto p = detail::benign_parameters(n0, d, a);
  Eigen::VectorXcd g(static_cast<Eigen::Index>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    const bool central = j >= p.c1 && j < p.c2;
    g(static_cast<Eigen::Index>(j)) =
        Complex(std::sqrt(central ? p.a : p.b), 0.0);
  }
  return InputState(std::move(g));
}

/// Closed-form weights of the benign state on the contiguous ladder, as a
/// four-branch piecewise function of |k| with B₀ = (n0+1)/2:
///   [0, B₀):   (d − B₀ − 2k) b² + 2k a b + (B₀ − k) a²
///   [B₀, c1):  (d − 2B₀ − k) b² + 2 B₀ a b
///   [c1, c2):  (k − B₀) b² + (d + B₀ − 2k) a b
///   [c2, d):   (d − k) b²
/// Each branch counts the b·b, a·b, and a·a overlaps of the amplitude profile
/// with its own shift by k.
inline WeightProfile benign_state_weights(std::int64_t n0, std::int64_t d,
                                          double a) {
  const auto p = detail::benign_parameters(n0, d, a);
  const double b = p.b;
  const double b0 = static_cast<double>(p.block_half);
  const double dd = static_cast<double>(d);
  std::map<std::int64_t, double> nu;
  for (std::int64_t k = 0; k < d; ++k) {
    const double kk = static_cast<double>(k);
    double value = 0.0;
    if (k < p.block_half) {
      value = (dd - b0 - 2.0 * kk) * b * b + 2.0 * kk * p.a * b +
              (b0 - kk) * p.a * p.a;
    } else if (k < p.c1) {
      value = (dd - 2.0 * b0 - kk) * b * b + 2.0 * b0 * p.a * b;
    } else if (k < p.c2) {
      value = (kk - b0) * b * b + (dd + b0 - 2.0 * kk) * p.a * b;
    } else {
      value = (dd - kk) * b * b;
    }
    nu[k] = value;
    nu[-k] = value;
  }
  return WeightProfile(nu);
}

}  // namespace fourierfit
