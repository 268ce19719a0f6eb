#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopnet {

// All randomness in the project flows through this wrapper around a
// mt19937_64 engine. Raw 64-bit words are mapped to doubles explicitly so
// that every stream is bit-reproducible for a given seed, independent of
// the standard library's distribution implementations.
inline constexpr char kRngName[] = "mt19937_64+splitmix64";

// splitmix64 output (finalizer) function.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed-mixing function: stream `index` of a base seed. Replicate r of a
// Monte Carlo run uses derive_seed(master_seed, r); an environment derives
// its internal substreams the same way from its own seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + index * 0x9E3779B97F4A7C15ULL);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1); never returns an exact 0 or 1.
  double open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) {
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("bernoulli: p must be in [0,1], got " +
                                  std::to_string(p));
    }
    return uniform01() < p;
  }

  // Unbiased integer in [0, n) by rejection.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
    const std::uint64_t bound = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= bound);
    return static_cast<std::size_t>(x % n);
  }

  double exponential() { return -std::log(open01()); }

  // Index i with probability weights[i] / sum(weights).
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0)) {
        throw std::invalid_argument("categorical: negative or NaN weight");
      }
      total += w;
    }
    if (total <= 0.0) {
      throw std::invalid_argument("categorical: weights sum to zero");
    }
    const double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.size() - 1;
  }

  // Flat Dirichlet sample: strictly positive entries summing to 1.
  std::vector<double> dirichlet(std::size_t n) {
    std::vector<double> q(n);
    double total = 0.0;
    for (auto& v : q) {
      v = exponential();
      total += v;
    }
    for (auto& v : q) v /= total;
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace coopnet
