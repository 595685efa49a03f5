#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "fourierfit/oracle.hpp"
#include "fourierfit/quantum.hpp"
#include <gtest/gtest.h>

namespace ff = fourierfit;

namespace {

ff::InputState random_positive_state(std::int64_t d, std::uint64_t seed) {
  std::mt19937_64 engine = ff::make_stream(seed, 0);
  Eigen::VectorXcd amplitudes(d);
  double norm_sq = 0.0;
  for (std::int64_t j = 0; j < d; ++j) {
    const double mag = 0.2 + ff::uniform_unit(engine);
    const double phase = ff::kTwoPi * ff::uniform_unit(engine);
    amplitudes(j) = std::polar(mag, phase);
    norm_sq += mag * mag;
  }
  amplitudes /= std::sqrt(norm_sq);
  return ff::InputState(amplitudes);
}

ff::SampleSet random_real_samples(std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 engine = ff::make_stream(seed, 0);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> y;
  for (std::int64_t j = 0; j < n; ++j) y.push_back(dist(engine));
  return ff::SampleSet::from_real(y, 0.0);
}

double hermiticity_residual(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(InputState, ValidatesNormalization) {
  Eigen::VectorXcd v(2);
  v << ff::Complex(1.0, 0.0), ff::Complex(1.0, 0.0);
  EXPECT_THROW(ff::InputState state(v), ff::InvalidArgument);

  const ff::InputState uniform = ff::InputState::uniform(4);
  for (std::int64_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(std::abs(uniform.amplitude(j)), 0.5, 1e-15);
  }
  const ff::InputState basis = ff::InputState::basis(4, 2);
  EXPECT_NEAR(std::abs(basis.amplitude(2)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(basis.amplitude(0)), 0.0, 1e-15);
  EXPECT_THROW(ff::InputState::basis(4, 4), ff::InvalidArgument);
}

TEST(Observable, ValidatesHermiticity) {
  Eigen::MatrixXcd m(2, 2);
  m << ff::Complex(1.0, 0.0), ff::Complex(0.0, 1.0),
       ff::Complex(0.0, 1.0), ff::Complex(2.0, 0.0);
  EXPECT_THROW(ff::Observable obs(m), ff::InvalidArgument);
  m(1, 0) = ff::Complex(0.0, -1.0);
  EXPECT_NO_THROW(ff::Observable obs(m));
  EXPECT_NEAR(ff::Observable::identity(3).frobenius_norm(), std::sqrt(3.0),
              1e-15);
}

TEST(FourierWeights, SumToOneAndIgnorePhases) {
  const ff::EncodingStrategy encoding = ff::binary_strategy(3);
  const ff::InputState state = random_positive_state(8, 52);
  const ff::WeightProfile weights =
      ff::fourier_weights_from_state(encoding, state);
  EXPECT_NEAR(weights.total(), 1.0, 1e-12);

  // Phases do not enter ν: strip them and compare.
  Eigen::VectorXcd stripped(8);
  for (std::int64_t j = 0; j < 8; ++j) {
    stripped(j) = std::abs(state.amplitude(j));
  }
  const ff::WeightProfile bare = ff::fourier_weights_from_state(
      encoding, ff::InputState(stripped));
  for (std::int64_t k : weights.support()) {
    EXPECT_NEAR(weights.at(k), bare.at(k), 1e-14);
    EXPECT_NEAR(weights.at(k), weights.at(-k), 1e-14);
  }
}

TEST(FourierWeights, UniformStateGivesSimplifiedWeights) {
  for (const ff::EncodingStrategy& encoding :
       {ff::binary_strategy(3), ff::hamming_strategy(3),
        ff::golomb_strategy_for_order(4)}) {
    const auto analysis = ff::spectrum_and_degeneracy(encoding);
    const std::int64_t d = encoding.dimension();
    const ff::WeightProfile uniform = ff::fourier_weights_from_state(
        encoding, ff::InputState::uniform(d));
    const ff::WeightProfile simplified =
        ff::simplified_weights(analysis.degeneracies);
    for (std::int64_t k : analysis.spectrum.frequencies()) {
      const double expect =
          static_cast<double>(analysis.degeneracies.degeneracy(k)) /
          static_cast<double>(d * d);
      EXPECT_NEAR(uniform.at(k), expect, 1e-15) << encoding.name << " k=" << k;
      EXPECT_NEAR(simplified.at(k), expect, 1e-15);
    }
  }
}

TEST(FourierWeights, BasisStateConcentratesAtZero) {
  const ff::WeightProfile weights = ff::fourier_weights_from_state(
      ff::binary_strategy(2), ff::InputState::basis(4, 1));
  EXPECT_EQ(weights.support_size(), 1);
  EXPECT_NEAR(weights.at(0), 1.0, 1e-15);
}

TEST(OptimalObservable, IsHermitianAndInterpolates) {
  const std::int64_t n = 7;
  const ff::EncodingStrategy encoding = ff::binary_strategy(4);  // d = 16
  const ff::SampleSet samples = random_real_samples(n, 81);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ff::InputState state = random_positive_state(16, 100 + s);
    const ff::Observable observable =
        ff::optimal_observable(samples, encoding, state);
    EXPECT_LT(hermiticity_residual(observable.matrix()), 1e-12);

    const ff::QuantumModel model =
        ff::quantum_model(encoding, state, observable);
    for (std::int64_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(j) / static_cast<double>(n);
      EXPECT_NEAR(model.evaluate_real(x),
                  samples.values[static_cast<std::size_t>(j)].real(), 1e-8);
    }
  }
}

TEST(OptimalObservable, MatchesClassicalMinNormFit) {
  // The induced series is exactly the classical minimum-norm fit under the
  // state's weight profile.
  const std::int64_t n = 5;
  const ff::EncodingStrategy encoding = ff::binary_strategy(3);
  const ff::SampleSet samples = random_real_samples(n, 82);
  const ff::InputState state = random_positive_state(8, 83);

  const ff::QuantumModel model =
      ff::optimal_quantum_model(samples, encoding, state);
  const ff::WeightProfile weights =
      ff::fourier_weights_from_state(encoding, state);
  const ff::TrainedModel classical = ff::min_norm_fit(samples, weights);

  for (const auto& [k, coeff] : classical.series().coefficients()) {
    EXPECT_NEAR(std::abs(model.series.at(k) - coeff), 0.0, 1e-12) << "k=" << k;
  }
  for (double x : {0.05, 0.37, 0.71}) {
    EXPECT_NEAR(model.evaluate_real(x), classical.evaluate_real(x), 1e-10);
  }
}

TEST(OptimalObservable, MinimizesFrobeniusNormAmongInterpolants) {
  // Perturbing along any interpolation-preserving Hermitian direction must
  // not reduce the Frobenius norm, and the optimum is orthogonal to it.
  const std::int64_t n = 5;
  const ff::EncodingStrategy encoding = ff::binary_strategy(3);  // Ω = ±7
  const auto analysis = ff::spectrum_and_degeneracy(encoding);
  const ff::SampleSet samples = random_real_samples(n, 84);
  const ff::InputState state = random_positive_state(8, 85);
  const ff::Observable optimal =
      ff::optimal_observable(samples, encoding, state);

  // Cohort of residue 2 mod 5 inside Ω: {..., 2, 7}. A Hermitian direction
  // with series ν_{κ2}·(e_{κ1} + e_{-κ1}) − ν_{κ1}·(e_{κ2} + e_{-κ2})
  // vanishes on the sample grid.
  const std::int64_t kappa1 = 2;
  const std::int64_t kappa2 = 7;
  const ff::WeightProfile weights =
      ff::fourier_weights_from_state(encoding, state);
  Eigen::MatrixXcd delta = Eigen::MatrixXcd::Zero(8, 8);
  auto add_aligned = [&](std::int64_t kappa, double scale) {
    for (const auto& [l, m] : analysis.degeneracies.pairs(kappa)) {
      const ff::Complex entry =
          scale * state.amplitude(m) * std::conj(state.amplitude(l));
      delta(m, l) += entry;
      delta(l, m) += std::conj(entry);
    }
  };
  add_aligned(kappa1, weights.at(kappa2));
  add_aligned(kappa2, -weights.at(kappa1));
  ASSERT_LT(hermiticity_residual(delta), 1e-15);

  // The direction is null on the grid: model with M + tΔ still interpolates.
  const double base_norm = optimal.matrix().squaredNorm();
  for (double t : {-2.0, -0.4, 0.7, 3.0}) {
    const Eigen::MatrixXcd shifted = optimal.matrix() + t * delta;
    const ff::FourierSeries series = ff::model_series(
        analysis.degeneracies, state, ff::Observable(shifted));
    for (std::int64_t j = 0; j < n; ++j) {
      const double x = static_cast<double>(j) / static_cast<double>(n);
      EXPECT_NEAR(series.evaluate(x).real(),
                  samples.values[static_cast<std::size_t>(j)].real(), 1e-8);
    }
    EXPECT_GE(shifted.squaredNorm(), base_norm - 1e-10);
  }
  const double overlap =
      (optimal.matrix().adjoint() * delta).trace().real();
  EXPECT_NEAR(overlap, 0.0, 1e-10);
}

TEST(OptimalObservable, RejectsBadInputs) {
  const ff::EncodingStrategy encoding = ff::binary_strategy(3);
  const ff::InputState state = ff::InputState::uniform(8);

  // Complex samples cannot produce a Hermitian observable.
  ff::SampleSet complex_samples;
  for (int j = 0; j < 5; ++j) {
    complex_samples.values.emplace_back(0.0, 1.0);
  }
  EXPECT_THROW(ff::optimal_observable(complex_samples, encoding, state),
               ff::InvalidArgument);

  // Even sample counts are outside the symmetric-grid contract.
  EXPECT_THROW(ff::optimal_observable(
                   ff::SampleSet::from_real({1.0, 2.0}, 0.0), encoding, state),
               ff::InvalidArgument);

  // Zero amplitudes make the per-frequency normalizers degenerate.
  EXPECT_THROW(ff::optimal_observable(random_real_samples(5, 86), encoding,
                                      ff::InputState::basis(8, 0)),
               ff::InvalidArgument);
}

TEST(OptimalObservable, SignalsNonInterpolableCohorts) {
  // A Golomb ruler of order 3 reaches only frequencies {0,±1,±2,±3}; samples
  // with energy at residues untouched by the spectrum cannot be interpolated
  // when n exceeds the coverage.
  const ff::EncodingStrategy encoding = ff::golomb_strategy({0, 1, 3});
  ff::SampleSet samples;
  const std::int64_t n = 9;
  for (std::int64_t j = 0; j < n; ++j) {
    samples.values.emplace_back(
        std::cos(ff::kTwoPi * 4.0 * static_cast<double>(j) /
                 static_cast<double>(n)),
        0.0);
  }
  const ff::InputState state = ff::InputState::uniform(3);
  try {
    ff::optimal_observable(samples, encoding, state);
    FAIL() << "expected NonInterpolable";
  } catch (const ff::NonInterpolable& e) {
    EXPECT_EQ(std::llabs(e.frequency()), 4);
  }
}

TEST(SimplifiedModel, MatchesUniformWeightFitExactly) {
  const std::int64_t n = 7;
  const ff::EncodingStrategy encoding = ff::binary_strategy(3);
  const auto analysis = ff::spectrum_and_degeneracy(encoding);
  const ff::SampleSet samples = random_real_samples(n, 87);

  const ff::QuantumModel model = ff::simplified_model_fit(samples, encoding);
  EXPECT_LT(hermiticity_residual(model.observable.matrix()), 1e-12);

  const ff::TrainedModel classical = ff::min_norm_fit(
      samples, ff::simplified_weights(analysis.degeneracies));
  for (const auto& [k, coeff] : classical.series().coefficients()) {
    EXPECT_NEAR(std::abs(model.series.at(k) - coeff), 0.0, 1e-12);
  }
  for (std::int64_t j = 0; j < n; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(n);
    EXPECT_NEAR(model.evaluate_real(x),
                samples.values[static_cast<std::size_t>(j)].real(), 1e-8);
  }

  // Entry layout: position (a,b) with κ_ab = λ_a − λ_b carries
  // α_{−κ_ab}/√|R(−κ_ab)|.
  const ff::TrainedModel alpha_fit = classical;
  for (const auto& [kappa, pairs] : analysis.degeneracies.all()) {
    for (const auto& [a, b] : pairs) {
      ff::Complex alpha(0.0, 0.0);
      if (alpha_fit.coefficients().count(-kappa) == 1) {
        alpha = alpha_fit.coefficients().at(-kappa);
      }
      const ff::Complex expect =
          alpha / std::sqrt(static_cast<double>(
                      analysis.degeneracies.degeneracy(-kappa)));
      EXPECT_NEAR(std::abs(model.observable.matrix()(a, b) - expect), 0.0,
                  1e-12);
    }
  }
}

TEST(BenignState, FrozenWeightValues) {
  // n0 = 3, d = 8, a = 1/4: block [3,5) holds √a, elsewhere √b with b = 1/12.
  const ff::InputState state = ff::benign_state(3, 8, 0.25);
  for (std::int64_t j = 0; j < 8; ++j) {
    const double expect = (j == 3 || j == 4) ? 0.5 : std::sqrt(1.0 / 12.0);
    EXPECT_NEAR(std::abs(state.amplitude(j)), expect, 1e-14) << "j=" << j;
  }

  const ff::WeightProfile weights = ff::benign_state_weights(3, 8, 0.25);
  const std::map<std::int64_t, double> expect = {
      {0, 1.0 / 6.0},  {1, 19.0 / 144.0}, {2, 7.0 / 72.0}, {3, 13.0 / 144.0},
      {4, 1.0 / 18.0}, {5, 1.0 / 48.0},   {6, 1.0 / 72.0}, {7, 1.0 / 144.0}};
  for (const auto& [k, nu] : expect) {
    EXPECT_NEAR(weights.at(k), nu, 1e-14) << "k=" << k;
    EXPECT_NEAR(weights.at(-k), nu, 1e-14) << "k=-" << k;
  }
  EXPECT_NEAR(weights.total(), 1.0, 1e-12);
}

TEST(BenignState, BranchesMatchBruteForceConvolution) {
  const struct { std::int64_t n0, d; double a; } cases[] = {
      {3, 8, 0.3}, {7, 32, 0.2}, {15, 128, 1.0 / 16.0}};
  for (const auto& c : cases) {
    const ff::WeightProfile closed =
        ff::benign_state_weights(c.n0, c.d, c.a);
    const ff::WeightProfile brute = ff::fourier_weights_from_state(
        ff::contiguous_strategy(c.d), ff::benign_state(c.n0, c.d, c.a));
    for (std::int64_t k = -(c.d - 1); k <= c.d - 1; ++k) {
      EXPECT_NEAR(closed.at(k), brute.at(k), 1e-12)
          << "n0=" << c.n0 << " d=" << c.d << " k=" << k;
    }
    EXPECT_NEAR(closed.total(), 1.0, 1e-10);
  }
}

TEST(BenignState, WeightsAreMonotoneWhenBlockDominates) {
  // For a ≥ 1/(2d − B₀), ν is nonincreasing in |k|.
  const std::int64_t n0 = 7;
  const std::int64_t d = 32;
  const double b0 = 4.0;
  const double a = 1.05 / (2.0 * static_cast<double>(d) - b0);
  const ff::WeightProfile weights = ff::benign_state_weights(n0, d, a);
  for (std::int64_t k = 1; k <= d - 1; ++k) {
    EXPECT_LE(weights.at(k), weights.at(k - 1) + 1e-15) << "k=" << k;
  }
}

TEST(BenignState, ValidatesParameters) {
  EXPECT_THROW(ff::benign_state(5, 32, 0.1), ff::InvalidArgument);   // n0+1 % 4
  EXPECT_THROW(ff::benign_state(15, 31, 0.1), ff::InvalidArgument);  // odd d
  EXPECT_THROW(ff::benign_state(15, 16, 0.1), ff::InvalidArgument);  // d too small
  EXPECT_THROW(ff::benign_state(3, 8, 0.6), ff::InvalidArgument);    // a too big
  EXPECT_NO_THROW(ff::benign_state(3, 8, 0.5));
}

TEST(Rebalancing, PreservesWeightsAndEqualizesClasses) {
  const std::int64_t n_q = 4;
  const std::int64_t d = 16;
  const ff::EncodingStrategy encoding = ff::hamming_strategy(n_q);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ff::InputState state = random_positive_state(d, 900 + s);
    const ff::InputState balanced = ff::rebalanced_hamming_state(state, n_q);

    // Magnitudes are constant within each Hamming-weight class.
    for (std::int64_t j = 0; j < d; ++j) {
      const int w = __builtin_popcountll(static_cast<unsigned long long>(j));
      for (std::int64_t i = 0; i < d; ++i) {
        if (__builtin_popcountll(static_cast<unsigned long long>(i)) != w)
          continue;
        EXPECT_NEAR(std::abs(balanced.amplitude(j)),
                    std::abs(balanced.amplitude(i)), 1e-13);
      }
    }

    const ff::WeightProfile before =
        ff::fourier_weights_from_state(encoding, state);
    const ff::WeightProfile after =
        ff::fourier_weights_from_state(encoding, balanced);
    for (std::int64_t k = -n_q; k <= n_q; ++k) {
      EXPECT_NEAR(before.at(k), after.at(k), 1e-12) << "k=" << k;
    }
  }

  // A state already balanced is a fixed point.
  const ff::InputState uniform = ff::InputState::uniform(d);
  const ff::InputState again = ff::rebalanced_hamming_state(uniform, n_q);
  for (std::int64_t j = 0; j < d; ++j) {
    EXPECT_NEAR(std::abs(again.amplitude(j) - uniform.amplitude(j)), 0.0,
                1e-14);
  }
}

TEST(HaarMoments, MeanMatchesDegeneracyFormula) {
  for (const ff::EncodingStrategy& encoding :
       {ff::binary_strategy(3), ff::hamming_strategy(3),
        ff::golomb_strategy_for_order(4)}) {
    const auto analysis = ff::spectrum_and_degeneracy(encoding);
    const std::int64_t d = encoding.dimension();
    double total = 0.0;
    for (std::int64_t k : analysis.spectrum.frequencies()) {
      const double mean = ff::haar_mean_weight(analysis.degeneracies, k);
      const double expect =
          (static_cast<double>(analysis.degeneracies.degeneracy(k)) +
           (k == 0 ? static_cast<double>(d) : 0.0)) /
          (static_cast<double>(d) * static_cast<double>(d + 1));
      EXPECT_NEAR(mean, expect, 1e-15);
      total += mean;
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << encoding.name;
    EXPECT_THROW(
        ff::haar_mean_weight(analysis.degeneracies, 10 * d), ff::InvalidArgument);
  }
}

TEST(HaarMoments, VarianceFormulasAndCoverage) {
  // Binary branches meet continuously at 2k = d.
  const std::int64_t d = 8;
  const double low = ff::haar_weight_variance("binary", 3, d);
  const double high = ff::haar_weight_variance("binary", 5, d);
  EXPECT_GT(low, 0.0);
  EXPECT_GT(high, 0.0);
  // Frozen spot value: binary d=8, k=2 → 504/570240.
  EXPECT_NEAR(ff::haar_weight_variance("binary", 2, 8), 504.0 / 570240.0,
              1e-15);
  // Golomb: variance is k-independent for k ≠ 0; frozen d=4 value 38/16800.
  EXPECT_NEAR(ff::haar_weight_variance("golomb", 1, 4), 38.0 / 16800.0, 1e-15);
  EXPECT_NEAR(ff::haar_weight_variance("golomb", -5, 4),
              ff::haar_weight_variance("golomb", 2, 4), 1e-18);

  EXPECT_THROW(ff::haar_weight_variance("binary", 0, 8), ff::InvalidArgument);
  EXPECT_THROW(ff::haar_weight_variance("binary", 8, 8), ff::InvalidArgument);
  EXPECT_THROW(ff::haar_weight_variance("hamming", 1, 8), ff::Unsupported);
}

TEST(ModelSeries, AgreesWithStatevectorOracle) {
  const ff::EncodingStrategy encoding = ff::ternary_strategy(2);
  const ff::InputState state = random_positive_state(4, 77);
  const ff::SampleSet samples = random_real_samples(5, 78);
  const ff::QuantumModel model =
      ff::optimal_quantum_model(samples, encoding, state);
  for (double x : {0.0, 0.21, 0.5, 0.83}) {
    double imag_residue = 0.0;
    const double physical = ff::statevector_expectation(
        encoding, state, model.observable, x, &imag_residue);
    EXPECT_NEAR(physical, model.evaluate_real(x), 1e-10);
    EXPECT_LT(imag_residue, 1e-10);
  }
}
