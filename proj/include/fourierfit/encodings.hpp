#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fourierfit/common.hpp"
#include "fourierfit/spectra.hpp"

namespace fourierfit {

/// A diagonal data-encoding Hamiltonian H = diag(λ_0, ..., λ_{d-1}).
/// Separable strategies additionally carry the generator r, with
/// λ_j = 2 (r · j) - ‖r‖₁ over bitstrings j (least significant bit first).
struct EncodingStrategy {
  std::string name;
  std::vector<double> eigenvalues;
  std::optional<std::vector<double>> generator;

  std::int64_t dimension() const {
    return static_cast<std::int64_t>(eigenvalues.size());
  }
};

/// Eigenvalues of the separable Hamiltonian built from single-qubit Z terms
/// with prefactors r: λ_j = 2 (r · j) - ‖r‖₁, j ranging over all 2^{n_q}
/// bitstrings. Bit t of the integer j multiplies r_t.
inline std::vector<double> separable_eigenvalues(const std::vector<double>& r) {
  const std::int64_t n = static_cast<std::int64_t>(r.size());
  require(n >= 1, "separable generator needs at least one qubit");
  require(n <= 20, "separable strategies supported up to 20 qubits");
  double norm1 = 0.0;
  for (double v : r) {
    require(std::isfinite(v), "generator entries must be finite");
    norm1 += std::abs(v);
  }
  const std::int64_t d = ipow(2, n);
  std::vector<double> lambda(static_cast<std::size_t>(d));
  for (std::int64_t j = 0; j < d; ++j) {
    double dot = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
      if ((j >> t) & 1) dot += r[static_cast<std::size_t>(t)];
    }
    lambda[static_cast<std::size_t>(j)] = 2.0 * dot - norm1;
  }
  return lambda;
}

inline EncodingStrategy separable_strategy(std::string name,
                                           std::vector<double> r) {
  EncodingStrategy s;
  s.name = std::move(name);
  s.eigenvalues = separable_eigenvalues(r);
  s.generator = std::move(r);
  return s;
}

/// All prefactors 1/2: spectrum {-n_q, ..., n_q} with binomial degeneracies.
inline EncodingStrategy hamming_strategy(std::int64_t n_qubits) {
  require(n_qubits >= 1, "n_qubits must be positive");
  return separable_strategy(
      "hamming", std::vector<double>(static_cast<std::size_t>(n_qubits), 0.5));
}

/// Prefactors 2^t / 2: eigenvalues j - (2^{n_q} - 1)/2 for j = 0..2^{n_q}-1,
/// the centered contiguous ladder.
inline EncodingStrategy binary_strategy(std::int64_t n_qubits) {
  require(n_qubits >= 1, "n_qubits must be positive");
  std::vector<double> r(static_cast<std::size_t>(n_qubits));
  for (std::int64_t t = 0; t < n_qubits; ++t) {
    r[static_cast<std::size_t>(t)] = 0.5 * static_cast<double>(ipow(2, t));
  }
  return separable_strategy("binary", std::move(r));
}

/// Prefactors 3^t / 2: the spectrum fills the whole window
/// {-(3^{n_q}-1)/2, ..., (3^{n_q}-1)/2}, the largest reachable separably.
inline EncodingStrategy ternary_strategy(std::int64_t n_qubits) {
  require(n_qubits >= 1, "n_qubits must be positive");
  require(n_qubits <= 13, "ternary strategies supported up to 13 qubits");
  std::vector<double> r(static_cast<std::size_t>(n_qubits));
  for (std::int64_t t = 0; t < n_qubits; ++t) {
    r[static_cast<std::size_t>(t)] = 0.5 * static_cast<double>(ipow(3, t));
  }
  return separable_strategy("ternary", std::move(r));
}

/// Centered ladder of arbitrary dimension d (not necessarily a power of two):
/// λ_j = j - (d-1)/2, so |R(k)| = d - |k| on Ω = {-(d-1), ..., d-1}.
inline EncodingStrategy contiguous_strategy(std::int64_t d) {
  require(d >= 1, "dimension must be positive");
  EncodingStrategy s;
  s.name = "contiguous";
  s.eigenvalues.resize(static_cast<std::size_t>(d));
  const double shift = 0.5 * static_cast<double>(d - 1);
  for (std::int64_t j = 0; j < d; ++j) {
    s.eigenvalues[static_cast<std::size_t>(j)] =
        static_cast<double>(j) - shift;
  }
  return s;
}

inline EncodingStrategy explicit_strategy(std::string name,
                                          std::vector<double> eigenvalues) {
  require(!eigenvalues.empty(), "eigenvalue list must be nonempty");
  for (double v : eigenvalues) {
    require(std::isfinite(v), "eigenvalues must be finite");
  }
  EncodingStrategy s;
  s.name = std::move(name);
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

/// Validates the Golomb ruler property (all pairwise differences distinct) and
/// uses the marks directly as eigenvalues, giving |R(k)| = 1 for every k ≠ 0.
inline EncodingStrategy golomb_strategy(const std::vector<std::int64_t>& marks) {
  require(marks.size() >= 2, "a Golomb ruler needs at least two marks");
  std::vector<std::int64_t> sorted = marks;
  std::sort(sorted.begin(), sorted.end());
  require(sorted.front() >= 0, "ruler marks must be nonnegative");
  const std::size_t d = sorted.size();
  std::map<std::int64_t, std::pair<std::int64_t, std::int64_t>> seen;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const std::int64_t diff = sorted[j] - sorted[i];
      if (diff == 0) {
        throw InvalidArgument("ruler marks must be distinct; " +
                              std::to_string(sorted[i]) + " repeats");
      }
      auto [it, inserted] = seen.emplace(
          diff, std::make_pair(sorted[i], sorted[j]));
      if (!inserted) {
        throw InvalidArgument(
            "not a Golomb ruler: difference " + std::to_string(diff) +
            " repeats for marks (" + std::to_string(it->second.first) + "," +
            std::to_string(it->second.second) + ") and (" +
            std::to_string(sorted[i]) + "," + std::to_string(sorted[j]) + ")");
      }
    }
  }
  EncodingStrategy s;
  s.name = "golomb";
  s.eigenvalues.reserve(d);
  for (std::int64_t m : sorted) {
    s.eigenvalues.push_back(static_cast<double>(m));
  }
  return s;
}

/// Bundled optimal rulers for 2..8 marks; larger rulers must be supplied by
/// the caller (optimal ruler search is out of scope).
inline std::vector<std::int64_t> golomb_marks(std::int64_t order) {
  switch (order) {
    case 2: return {0, 1};
    case 3: return {0, 1, 3};
    case 4: return {0, 1, 4, 6};
    case 5: return {0, 1, 4, 9, 11};
    case 6: return {0, 1, 4, 10, 12, 17};
    case 7: return {0, 1, 4, 10, 18, 23, 25};
    case 8: return {0, 1, 4, 9, 15, 22, 32, 34};
    default:
      throw InvalidArgument("no bundled Golomb ruler with " +
                            std::to_string(order) +
                            " marks; supply marks explicitly");
  }
}

inline EncodingStrategy golomb_strategy_for_order(std::int64_t order) {
  return golomb_strategy(golomb_marks(order));
}

/// R(k) = {(ℓ, m) : λ_ℓ - λ_m = k} for every integer frequency k in the
/// spectrum. Pairs are ordered (ℓ ascending, then m ascending).
class DegeneracyMap {
 public:
  using IndexPair = std::pair<int, int>;

  DegeneracyMap(std::int64_t dimension,
                std::map<std::int64_t, std::vector<IndexPair>> pairs)
      : dimension_(dimension), pairs_(std::move(pairs)) {}

  std::int64_t dimension() const { return dimension_; }

  bool contains(std::int64_t k) const { return pairs_.count(k) > 0; }

  /// |R(k)|; zero when k is outside the spectrum.
  std::int64_t degeneracy(std::int64_t k) const {
    auto it = pairs_.find(k);
    return it == pairs_.end()
               ? 0
               : static_cast<std::int64_t>(it->second.size());
  }

  const std::vector<IndexPair>& pairs(std::int64_t k) const {
    static const std::vector<IndexPair> kEmpty;
    auto it = pairs_.find(k);
    return it == pairs_.end() ? kEmpty : it->second;
  }

  const std::map<std::int64_t, std::vector<IndexPair>>& all() const {
    return pairs_;
  }

  Spectrum spectrum() const {
    std::vector<std::int64_t> freqs;
    freqs.reserve(pairs_.size());
    for (const auto& [k, p] : pairs_) freqs.push_back(k);
    return Spectrum(std::move(freqs));
  }

 private:
  std::int64_t dimension_;
  std::map<std::int64_t, std::vector<IndexPair>> pairs_;
};

namespace detail {

struct ScaledEigenvalues {
  std::vector<std::int64_t> scaled;
  std::int64_t scale = 1;
};

/// Finds the smallest q ≤ 1024 with q·λ_i integral for all i, so that
/// eigenvalue differences can be grouped by exact integer comparison.
inline ScaledEigenvalues scale_eigenvalues(
    const std::vector<double>& eigenvalues) {
  require(!eigenvalues.empty(), "eigenvalue list must be nonempty");
  for (double v : eigenvalues) {
    require(std::isfinite(v), "eigenvalues must be finite");
  }
  constexpr std::int64_t kMaxScale = 1024;
  constexpr double kTol = 1e-9;
  for (std::int64_t q = 1; q <= kMaxScale; ++q) {
    ScaledEigenvalues out;
    out.scale = q;
    out.scaled.reserve(eigenvalues.size());
    bool ok = true;
    for (double v : eigenvalues) {
      const double s = v * static_cast<double>(q);
      const double r = std::round(s);
      if (std::abs(s - r) > kTol * std::max(1.0, std::abs(s))) {
        ok = false;
        break;
      }
      out.scaled.push_back(static_cast<std::int64_t>(r));
    }
    if (ok) return out;
  }
  throw Unsupported(
      "eigenvalues admit no rational representation with denominator <= " +
      std::to_string(kMaxScale) +
      "; degeneracy grouping needs exact differences");
}

}  // namespace detail

struct SpectrumAnalysis {
  Spectrum spectrum;
  DegeneracyMap degeneracies;
};

/// Brute-force O(d²) enumeration of all eigenvalue differences. Differences
/// must land on integers: the model lives on the period-1 grid, so fractional
/// frequencies have no resolvable alias structure and are rejected.
inline SpectrumAnalysis spectrum_and_degeneracy(
    const std::vector<double>& eigenvalues) {
  const auto scaled = detail::scale_eigenvalues(eigenvalues);
  const std::int64_t d = static_cast<std::int64_t>(scaled.scaled.size());
  std::map<std::int64_t, std::vector<DegeneracyMap::IndexPair>> groups;
  for (std::int64_t ell = 0; ell < d; ++ell) {
    for (std::int64_t m = 0; m < d; ++m) {
      const std::int64_t delta = scaled.scaled[static_cast<std::size_t>(ell)] -
                                 scaled.scaled[static_cast<std::size_t>(m)];
      if (delta % scaled.scale != 0) {
        throw Unsupported(
            "spectrum contains the non-integer frequency " +
            std::to_string(static_cast<double>(delta) /
                           static_cast<double>(scaled.scale)) +
            "; only integer frequencies are supported");
      }
      groups[delta / scaled.scale].push_back(
          {static_cast<int>(ell), static_cast<int>(m)});
    }
  }
  std::vector<std::int64_t> freqs;
  freqs.reserve(groups.size());
  for (const auto& [k, p] : groups) freqs.push_back(k);
  return SpectrumAnalysis{Spectrum(std::move(freqs)),
                          DegeneracyMap(d, std::move(groups))};
}

inline SpectrumAnalysis spectrum_and_degeneracy(
    const EncodingStrategy& strategy) {
  return spectrum_and_degeneracy(strategy.eigenvalues);
}

/// |R(k)| = C(2 n_q, n_q - |k|) for the Hamming strategy.
inline std::int64_t hamming_degeneracy(std::int64_t n_qubits, std::int64_t k) {
  require(n_qubits >= 1, "n_qubits must be positive");
  const std::int64_t a = std::llabs(k);
  if (a > n_qubits) {
    throw InvalidArgument("k=" + std::to_string(k) +
                          " lies outside the Hamming spectrum of " +
                          std::to_string(n_qubits) + " qubits");
  }
  return static_cast<std::int64_t>(binomial(2 * n_qubits, n_qubits - a));
}

/// |R(k)| = 2^{n_q} - |k| for the Binary strategy.
inline std::int64_t binary_degeneracy(std::int64_t n_qubits, std::int64_t k) {
  require(n_qubits >= 1 && n_qubits <= 20, "n_qubits must be in 1..20");
  const std::int64_t d = ipow(2, n_qubits);
  if (std::llabs(k) > d - 1) {
    throw InvalidArgument("k=" + std::to_string(k) +
                          " lies outside the Binary spectrum of " +
                          std::to_string(n_qubits) + " qubits");
  }
  return d - std::llabs(k);
}

/// Signed-ternary digits of k: the unique vector in {-1,0,1}^{n_q} with
/// Σ_t digit_t 3^t = k, computed by writing k + (3^{n_q}-1)/2 in unsigned
/// ternary and subtracting one from every digit. Digit t multiplies 3^t.
inline std::vector<int> shifted_ternary(std::int64_t k, std::int64_t n_qubits) {
  require(n_qubits >= 1 && n_qubits <= 38, "n_qubits must be in 1..38");
  const std::int64_t half = (ipow(3, n_qubits) - 1) / 2;
  if (std::llabs(k) > half) {
    throw InvalidArgument("k=" + std::to_string(k) +
                          " lies outside the ternary window ±" +
                          std::to_string(half));
  }
  std::int64_t u = k + half;
  std::vector<int> digits(static_cast<std::size_t>(n_qubits));
  for (std::int64_t t = 0; t < n_qubits; ++t) {
    digits[static_cast<std::size_t>(t)] = static_cast<int>(u % 3) - 1;
    u /= 3;
  }
  return digits;
}

/// |R(k)| = 2^{n_q - ‖T(k)‖₁} for the Ternary strategy, where T(k) is the
/// signed-ternary digit vector of k.
inline std::int64_t ternary_degeneracy(std::int64_t n_qubits, std::int64_t k) {
  require(n_qubits <= 20, "n_qubits must be in 1..20");
  const std::vector<int> digits = shifted_ternary(k, n_qubits);
  std::int64_t weight = 0;
  for (int dgt : digits) weight += std::abs(dgt);
  return ipow(2, n_qubits - weight);
}

/// Number of ordered bitstring pairs (i, j) with j - i equal to the given
/// difference vector: 2^{n - ‖diff‖₁}.
inline std::int64_t combinatorial_multiplicity(const std::vector<int>& diff) {
  const std::int64_t n = static_cast<std::int64_t>(diff.size());
  require(n >= 1 && n <= 62, "difference vector length must be in 1..62");
  std::int64_t weight = 0;
  for (int dgt : diff) {
    require(dgt >= -1 && dgt <= 1, "difference entries must be in {-1, 0, 1}");
    weight += std::abs(dgt);
  }
  return ipow(2, n - weight);
}

/// Row `row` of the ternary frame operator T_n ∈ {-1,0,1}^{3^n × n}: rows
/// enumerate digit vectors v lexicographically with the first component most
/// significant and digits ordered -1 < 0 < 1. Row 0 is all -1.
inline std::vector<int> frame_row(std::int64_t row, std::int64_t n) {
  require(n >= 1 && n <= 38, "n must be in 1..38");
  require(row >= 0 && row < ipow(3, n), "row index out of range");
  std::vector<int> v(static_cast<std::size_t>(n));
  for (std::int64_t t = n - 1; t >= 0; --t) {
    v[static_cast<std::size_t>(t)] = static_cast<int>(row % 3) - 1;
    row /= 3;
  }
  return v;
}

/// The 3^n frequencies k_v = 2 (r · v) reachable from generator r, listed in
/// the frame-operator row order. On v = j_ℓ - j_m this reproduces λ_ℓ - λ_m.
inline std::vector<double> frame_frequencies(const std::vector<double>& r) {
  const std::int64_t n = static_cast<std::int64_t>(r.size());
  require(n >= 1 && n <= 12, "generator length must be in 1..12");
  const std::int64_t rows = ipow(3, n);
  std::vector<double> out(static_cast<std::size_t>(rows));
  for (std::int64_t i = 0; i < rows; ++i) {
    const std::vector<int> v = frame_row(i, n);
    double dot = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
      dot += r[static_cast<std::size_t>(t)] * v[static_cast<std::size_t>(t)];
    }
    out[static_cast<std::size_t>(i)] = 2.0 * dot;
  }
  return out;
}

/// Least-squares generator for a target frequency list of length 3^n in the
/// frame-operator row order. Columns of T_n are orthogonal with squared norm
/// 2·3^{n-1} and the reachable frequencies are k = T_n (2r), so
/// r = T_nᵀ k / (4·3^{n-1}); targets built via frame_frequencies round-trip
/// exactly.
inline std::vector<double> design_hamiltonian(
    const std::vector<double>& target_frequencies) {
  const std::int64_t size =
      static_cast<std::int64_t>(target_frequencies.size());
  std::int64_t n = 0;
  std::int64_t p = 1;
  while (p < size) {
    p *= 3;
    ++n;
  }
  require(n >= 1 && p == size,
          "target frequency list must have length 3^n for some n >= 1, got " +
              std::to_string(size));
  require(n <= 12, "generator length must be in 1..12");
  for (double v : target_frequencies) {
    require(std::isfinite(v), "target frequencies must be finite");
  }
  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t i = 0; i < size; ++i) {
    const std::vector<int> v = frame_row(i, n);
    for (std::int64_t t = 0; t < n; ++t) {
      r[static_cast<std::size_t>(t)] +=
          static_cast<double>(v[static_cast<std::size_t>(t)]) *
          target_frequencies[static_cast<std::size_t>(i)];
    }
  }
  const double scale = 4.0 * static_cast<double>(ipow(3, n - 1));
  for (double& v : r) v /= scale;
  return r;
}

}  // namespace fourierfit
