#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "fourierfit/common.hpp"

namespace fourierfit {

/// Ordered set of integer frequencies, symmetric about zero (k present iff -k
/// present, 0 always present). Covers both the contiguous window Ω_d and the
/// gapped spectra arising from encoding Hamiltonians.
class Spectrum {
 public:
  Spectrum() : frequencies_{0} {}

  explicit Spectrum(std::vector<std::int64_t> frequencies)
      : frequencies_(std::move(frequencies)) {
    std::sort(frequencies_.begin(), frequencies_.end());
    frequencies_.erase(std::unique(frequencies_.begin(), frequencies_.end()),
                       frequencies_.end());
    require(!frequencies_.empty(), "spectrum must be nonempty");
    for (std::int64_t f : frequencies_) {
      require(contains(-f), "spectrum must be symmetric about zero; missing " +
                                std::to_string(-f));
    }
    require(contains(0), "spectrum must contain frequency 0");
  }

  /// Contiguous symmetric window Ω_size = {-(size-1)/2, ..., (size-1)/2}.
  static Spectrum symmetric(std::int64_t size) {
    require_odd(size, "spectrum size");
    std::vector<std::int64_t> freqs;
    freqs.reserve(static_cast<std::size_t>(size));
    const std::int64_t half = (size - 1) / 2;
    for (std::int64_t k = -half; k <= half; ++k) freqs.push_back(k);
    Spectrum s;
    s.frequencies_ = std::move(freqs);
    return s;
  }

  const std::vector<std::int64_t>& frequencies() const { return frequencies_; }

  bool contains(std::int64_t k) const {
    return std::binary_search(frequencies_.begin(), frequencies_.end(), k);
  }

  std::int64_t size() const {
    return static_cast<std::int64_t>(frequencies_.size());
  }

  std::int64_t max_frequency() const { return frequencies_.back(); }

 private:
  std::vector<std::int64_t> frequencies_;
};

inline Spectrum symmetric_spectrum(std::int64_t size) {
  return Spectrum::symmetric(size);
}

/// Alias set S(k) = {l in spectrum : l ≡ k (mod n)}, ascending. May be empty
/// for gapped spectra.
inline std::vector<std::int64_t> alias_set(std::int64_t k, std::int64_t n,
                                           const Spectrum& spectrum) {
  require_odd(n, "n");
  require(std::llabs(k) <= (n - 1) / 2,
          "k must lie in the symmetric window of size n");
  std::vector<std::int64_t> out;
  for (std::int64_t f : spectrum.frequencies()) {
    if (symmetric_residue(f, n) == k) out.push_back(f);
  }
  return out;
}

/// Values y_j observed on the uniform grid x_j = j/n, j = 0..n-1.
struct SampleSet {
  std::vector<Complex> values;
  double noise_sigma = 0.0;

  std::int64_t grid_size() const {
    return static_cast<std::int64_t>(values.size());
  }

  static SampleSet from_real(const std::vector<double>& v, double sigma = 0.0) {
    SampleSet s;
    s.values.reserve(v.size());
    for (double y : v) s.values.emplace_back(y, 0.0);
    s.noise_sigma = sigma;
    return s;
  }
};

/// Sparse complex Fourier series c_k indexed by integer frequency;
/// f(x) = Σ_k c_k e^{i 2π k x}. Absent frequencies read as zero.
class FourierSeries {
 public:
  FourierSeries() = default;

  Complex at(std::int64_t k) const {
    auto it = coefficients_.find(k);
    return it == coefficients_.end() ? Complex(0.0, 0.0) : it->second;
  }

  void set(std::int64_t k, Complex value) { coefficients_[k] = value; }

  const std::map<std::int64_t, Complex>& coefficients() const {
    return coefficients_;
  }

  bool empty() const { return coefficients_.empty(); }

  std::int64_t max_frequency() const {
    std::int64_t mx = 0;
    for (const auto& [k, c] : coefficients_) mx = std::max<std::int64_t>(mx, std::llabs(k));
    return mx;
  }

  double power() const {
    double p = 0.0;
    for (const auto& [k, c] : coefficients_) p += std::norm(c);
    return p;
  }

  Complex evaluate(double x) const {
    Complex sum(0.0, 0.0);
    for (const auto& [k, c] : coefficients_) {
      sum += c * std::polar(1.0, kTwoPi * static_cast<double>(k) * x);
    }
    return sum;
  }

  /// True when c_{-k} = conj(c_k) for every stored frequency (real-valued f).
  bool conjugate_symmetric(double tol = 1e-12) const {
    for (const auto& [k, c] : coefficients_) {
      if (std::abs(c - std::conj(at(-k))) > tol) return false;
    }
    return true;
  }

 private:
  std::map<std::int64_t, Complex> coefficients_;
};

/// Discrete Fourier transform on the uniform grid, normalized so that
/// ŷ_k = (1/n) Σ_j y_j e^{-i 2π j k / n} for k in Ω_n. With this convention a
/// pure tone y_j = e^{i 2π p j / n} has ŷ_p = 1.
inline FourierSeries dft(const SampleSet& samples) {
  const std::int64_t n = samples.grid_size();
  require_odd(n, "sample count");
  FourierSeries series;
  const std::int64_t half = (n - 1) / 2;
  for (std::int64_t k = -half; k <= half; ++k) {
    Complex sum(0.0, 0.0);
    for (std::int64_t j = 0; j < n; ++j) {
      const double angle = -kTwoPi * static_cast<double>(j) *
                           static_cast<double>(k) / static_cast<double>(n);
      sum += samples.values[static_cast<std::size_t>(j)] * std::polar(1.0, angle);
    }
    series.set(k, sum / static_cast<double>(n));
  }
  return series;
}

/// Inverse transform back onto the n-point grid: y_j = Σ_k ŷ_k e^{i 2π k j/n}.
/// The series must be supported inside Ω_n.
inline SampleSet idft(const FourierSeries& series, std::int64_t n) {
  require_odd(n, "n");
  const std::int64_t half = (n - 1) / 2;
  for (const auto& [k, c] : series.coefficients()) {
    require(std::llabs(k) <= half,
            "series frequency " + std::to_string(k) +
                " lies outside the symmetric window of size " + std::to_string(n));
    (void)c;
  }
  SampleSet samples;
  samples.values.resize(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) {
    samples.values[static_cast<std::size_t>(j)] =
        series.evaluate(static_cast<double>(j) / static_cast<double>(n));
  }
  return samples;
}

}  // namespace fourierfit
