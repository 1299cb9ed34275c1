#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace netclust {

// Seeded sampling utilities. All distributions are derived from the raw
// mt19937_64 stream with fixed arithmetic (no std:: distribution adaptors,
// whose algorithms are implementation-defined), so the same seed yields the
// same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0,1) with 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in (0,1]: safe under log()
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform_pos()); }

  // Box-Muller; second draw of each pair is cached
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
  }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1
  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Knuth product method; normal approximation for large means where the
  // product of uniforms would underflow
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 60.0) {
      const double n = mean + std::sqrt(mean) * normal();
      return n < 0.0 ? 0 : static_cast<int>(n + 0.5);
    }
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  // symmetric Dirichlet(alpha); output normalized to the simplex
  void dirichlet(double alpha, std::span<double> out) {
    double total = 0.0;
    for (double& v : out) {
      v = (alpha == 1.0) ? exponential() : gamma(alpha);
      total += v;
    }
    if (total <= 0.0) {
      for (double& v : out) v = 1.0 / static_cast<double>(out.size());
      return;
    }
    for (double& v : out) v /= total;
  }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace netclust
