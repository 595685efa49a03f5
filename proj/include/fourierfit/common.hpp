#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fourierfit {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition or malformed input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Requested computation has no closed form / implementation for the inputs.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// The sample set cannot be interpolated: some DFT mode ŷ_k is nonzero while
/// the total alias weight available for residue k is zero (or the spectrum has
/// no frequency congruent to k at all).
class NonInterpolable : public Error {
 public:
  NonInterpolable(std::int64_t frequency, const std::string& what)
      : Error(what), frequency_(frequency) {}
  std::int64_t frequency() const noexcept { return frequency_; }

 private:
  std::int64_t frequency_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

inline bool is_odd(std::int64_t v) { return (v % 2) != 0; }

inline void require_odd(std::int64_t v, const std::string& name) {
  require(v >= 1 && is_odd(v), name + " must be a positive odd integer, got " +
                                   std::to_string(v));
}

/// Representative of k modulo odd n inside the symmetric window
/// {-(n-1)/2, ..., (n-1)/2}.
inline std::int64_t symmetric_residue(std::int64_t k, std::int64_t n) {
  std::int64_t r = k % n;
  if (r < 0) r += n;
  if (2 * r > n - 1) r -= n;
  return r;
}

/// Exact binomial coefficient; valid for the small arguments used here
/// (n up to ~60 keeps every partial product inside 64 bits).
inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

inline std::int64_t ipow(std::int64_t base, std::int64_t exponent) {
  std::int64_t result = 1;
  for (std::int64_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace fourierfit
