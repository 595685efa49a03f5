#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fourierfit/rng.hpp"
#include "fourierfit/spectra.hpp"
#include <gtest/gtest.h>

namespace ff = fourierfit;

namespace {

ff::SampleSet random_complex_samples(std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 engine = ff::make_stream(seed, 0);
  std::normal_distribution<double> dist(0.0, 1.0);
  ff::SampleSet samples;
  samples.values.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    samples.values.emplace_back(dist(engine), dist(engine));
  }
  return samples;
}

}  // namespace

TEST(Spectrum, SymmetricConstructionAndQueries) {
  const ff::Spectrum s = ff::Spectrum::symmetric(7);
  EXPECT_EQ(s.size(), 7);
  EXPECT_EQ(s.max_frequency(), 3);
  EXPECT_TRUE(s.contains(0));
  EXPECT_TRUE(s.contains(-3));
  EXPECT_FALSE(s.contains(4));
  const std::vector<std::int64_t> expect = {-3, -2, -1, 0, 1, 2, 3};
  EXPECT_EQ(s.frequencies(), expect);
}

TEST(Spectrum, RejectsAsymmetricSets) {
  EXPECT_THROW(ff::Spectrum({-1, 0, 2}), ff::InvalidArgument);
  EXPECT_THROW(ff::Spectrum({-1, 1}), ff::InvalidArgument);  // missing 0
  EXPECT_THROW(ff::Spectrum::symmetric(4), ff::InvalidArgument);
  EXPECT_NO_THROW(ff::Spectrum({-5, -2, 0, 2, 5}));
}

TEST(Spectrum, SymmetricResidueMatchesDefinition) {
  EXPECT_EQ(ff::symmetric_residue(0, 7), 0);
  EXPECT_EQ(ff::symmetric_residue(3, 7), 3);
  EXPECT_EQ(ff::symmetric_residue(4, 7), -3);
  EXPECT_EQ(ff::symmetric_residue(-4, 7), 3);
  EXPECT_EQ(ff::symmetric_residue(10, 7), 3);
  EXPECT_EQ(ff::symmetric_residue(-10, 7), -3);
  for (std::int64_t k = -40; k <= 40; ++k) {
    const std::int64_t r = ff::symmetric_residue(k, 7);
    EXPECT_LE(std::llabs(r), 3);
    EXPECT_EQ((k - r) % 7, 0);
  }
}

TEST(AliasSet, FrozenExamples) {
  // Residue 2 mod 7 inside the 35-frequency window.
  const ff::Spectrum window = ff::Spectrum::symmetric(35);
  const std::vector<std::int64_t> expect_a = {-12, -5, 2, 9, 16};
  EXPECT_EQ(ff::alias_set(2, 7, window), expect_a);

  // Residue 1 mod 3 inside a sparse Golomb-style spectrum.
  const ff::Spectrum sparse(
      {-6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6});
  const std::vector<std::int64_t> expect_b = {-5, -2, 1, 4};
  EXPECT_EQ(ff::alias_set(1, 3, sparse), expect_b);
}

TEST(AliasSet, PartitionsTheSpectrum) {
  const std::int64_t n = 7;
  const ff::Spectrum window = ff::Spectrum::symmetric(49);
  std::size_t covered = 0;
  for (std::int64_t k = -3; k <= 3; ++k) {
    const auto cohort = ff::alias_set(k, n, window);
    covered += cohort.size();
    for (std::int64_t freq : cohort) {
      EXPECT_EQ(ff::symmetric_residue(freq, n), k);
    }
    EXPECT_TRUE(std::is_sorted(cohort.begin(), cohort.end()));
  }
  EXPECT_EQ(covered, static_cast<std::size_t>(window.size()));
}

TEST(AliasSet, ValidatesWindow) {
  const ff::Spectrum window = ff::Spectrum::symmetric(35);
  EXPECT_THROW(ff::alias_set(4, 7, window), ff::InvalidArgument);
  EXPECT_THROW(ff::alias_set(0, 6, window), ff::InvalidArgument);
}

TEST(FourierSeries, EvaluateMatchesDirectSum) {
  ff::FourierSeries series;
  series.set(0, ff::Complex(0.5, 0.0));
  series.set(2, ff::Complex(0.0, -0.5));
  series.set(-2, ff::Complex(0.0, 0.5));
  const double x = 0.3125;
  ff::Complex direct(0.0, 0.0);
  for (const auto& [k, c] : series.coefficients()) {
    direct += c * std::exp(ff::Complex(0.0, ff::kTwoPi * static_cast<double>(k) * x));
  }
  const ff::Complex got = series.evaluate(x);
  EXPECT_NEAR(std::abs(got - direct), 0.0, 1e-14);
  // sin(2π·2x) built from the conjugate pair above.
  EXPECT_NEAR(got.real(), 0.5 + std::sin(ff::kTwoPi * 2.0 * x), 1e-12);
}

TEST(FourierSeries, ConjugateSymmetryDetection) {
  ff::FourierSeries real_series;
  real_series.set(1, ff::Complex(0.25, -0.75));
  real_series.set(-1, ff::Complex(0.25, 0.75));
  real_series.set(0, ff::Complex(1.0, 0.0));
  EXPECT_TRUE(real_series.conjugate_symmetric(1e-12));

  ff::FourierSeries lopsided;
  lopsided.set(1, ff::Complex(1.0, 0.0));
  EXPECT_FALSE(lopsided.conjugate_symmetric(1e-12));
}

TEST(Dft, RoundTripIsExactToTolerance) {
  for (std::int64_t n : {3, 7, 31, 101, 1001}) {
    const ff::SampleSet samples = random_complex_samples(n, 77 + static_cast<std::uint64_t>(n));
    const ff::FourierSeries series = ff::dft(samples);
    const ff::SampleSet back = ff::idft(series, n);
    ASSERT_EQ(back.values.size(), samples.values.size());
    double max_err = 0.0;
    for (std::size_t j = 0; j < samples.values.size(); ++j) {
      max_err = std::max(max_err, std::abs(back.values[j] - samples.values[j]));
    }
    EXPECT_LT(max_err, 1e-10) << "n=" << n;
  }
}

TEST(Dft, ParsevalHolds) {
  const std::int64_t n = 101;
  const ff::SampleSet samples = random_complex_samples(n, 19);
  const ff::FourierSeries series = ff::dft(samples);
  double time_power = 0.0;
  for (const ff::Complex& y : samples.values) time_power += std::norm(y);
  time_power /= static_cast<double>(n);
  const double freq_power = series.power();
  EXPECT_NEAR(freq_power, time_power, 1e-9 * std::max(1.0, time_power));
}

TEST(Dft, RecoversSingleTone) {
  // y_j = e^{i 2π p j / n} has DFT concentrated at k = p with value 1.
  const std::int64_t n = 11;
  const std::int64_t p = 3;
  ff::SampleSet samples;
  for (std::int64_t j = 0; j < n; ++j) {
    const double phase = ff::kTwoPi * static_cast<double>(p * j) / static_cast<double>(n);
    samples.values.emplace_back(std::cos(phase), std::sin(phase));
  }
  const ff::FourierSeries series = ff::dft(samples);
  EXPECT_NEAR(std::abs(series.at(p) - ff::Complex(1.0, 0.0)), 0.0, 1e-12);
  for (std::int64_t k = -5; k <= 5; ++k) {
    if (k == p) continue;
    EXPECT_NEAR(std::abs(series.at(k)), 0.0, 1e-12) << "k=" << k;
  }
}

TEST(Dft, RequiresOddGrid) {
  ff::SampleSet samples = ff::SampleSet::from_real({1.0, 2.0, 3.0, 4.0}, 0.0);
  EXPECT_THROW(ff::dft(samples), ff::InvalidArgument);
}

TEST(SampleSet, FromRealCopiesValues) {
  const ff::SampleSet samples = ff::SampleSet::from_real({1.0, -2.0, 0.5}, 0.25);
  EXPECT_EQ(samples.grid_size(), 3);
  EXPECT_DOUBLE_EQ(samples.noise_sigma, 0.25);
  EXPECT_DOUBLE_EQ(samples.values[1].real(), -2.0);
  EXPECT_DOUBLE_EQ(samples.values[1].imag(), 0.0);
}
