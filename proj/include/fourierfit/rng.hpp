#pragma once

#include <cstdint>
#include <random>

#include "fourierfit/common.hpp"

namespace fourierfit {

enum class NoiseKind { gaussian, uniform, rademacher };

inline const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::uniform: return "uniform";
    case NoiseKind::rademacher: return "rademacher";
  }
  return "gaussian";
}

/// splitmix64 step (Steele, Lea, Flood 2014). Used only to derive stream
/// seeds; the per-stream engine is mt19937_64.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seed for stream `index` under `master_seed`. Two mixing
/// rounds so that nearby (seed, index) pairs decorrelate.
inline std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t s = master_seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  std::uint64_t a = splitmix64_next(s);
  std::uint64_t b = splitmix64_next(s);
  return a ^ (b >> 1);
}

/// Independent engine for one trial / worker. Streams depend only on
/// (master_seed, index), never on execution order, so parallel and serial runs
/// produce identical results.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(stream_seed(master_seed, index));
}

/// Zero-mean noise draw with variance sigma^2 under the selected model.
inline double draw_noise(std::mt19937_64& engine, double sigma, NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian: {
      std::normal_distribution<double> dist(0.0, sigma);
      return dist(engine);
    }
    case NoiseKind::uniform: {
      // U(-a, a) with a = sigma*sqrt(3) has variance sigma^2.
      const double a = sigma * 1.7320508075688772935;
      std::uniform_real_distribution<double> dist(-a, a);
      return dist(engine);
    }
    case NoiseKind::rademacher: {
      std::bernoulli_distribution dist(0.5);
      return dist(engine) ? sigma : -sigma;
    }
  }
  return 0.0;
}

inline double uniform_unit(std::mt19937_64& engine) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(engine);
}

inline Complex standard_complex_gaussian(std::mt19937_64& engine) {
  std::normal_distribution<double> dist(0.0, 1.0);
  const double re = dist(engine);
  const double im = dist(engine);
  return Complex(re, im);
}

}  // namespace fourierfit
