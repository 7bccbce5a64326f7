#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "simstore/common.hpp"

namespace simstore {

// Seeded random source. All draws are implemented on top of the raw engine
// output so results are reproducible run-to-run for a given seed, independent
// of standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling to avoid modulo bias.
    if (n == 0) throw ContractViolation("uniform_index: n must be positive");
    std::uint64_t bound = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= bound);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  double normal(double mean = 0.0, double sd = 1.0) {
    // Box-Muller, no caching: one draw consumes two uniforms.
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + sd * z;
  }

  double log_normal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  int poisson(double mean) {
    // Knuth's method; fine for the small means used here.
    double limit = std::exp(-mean);
    double prod = uniform();
    int k = 0;
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }

  // Marsaglia-Tsang, unit scale.
  double gamma(double shape) {
    if (shape <= 0) throw ContractViolation("gamma: shape must be positive");
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0) continue;
      double v = t * t * t;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double alpha, double b) {
    if (alpha <= 0 || b <= 0) throw ContractViolation("beta: parameters must be positive");
    double x = gamma(alpha);
    double y = gamma(b);
    return x / (x + y);
  }

  // Fisher-Yates over [0, n) index vectors.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Deterministically derives an independent stream from (seed, salt).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer over the mixed pair.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace simstore
