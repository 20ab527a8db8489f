#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace kg {

/// Seeded random source. The engine is std::mt19937_64, whose raw output is
/// fixed by the standard; all derived draws (uniform ints, reals, gaussians)
/// are implemented here rather than with std:: distributions, so sequences
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);

  /// Uniform real in [0, 1) with 53 random bits.
  double real();

  /// Normal draw via Box-Muller (two uniforms per call, no spare cached).
  double gauss(double mu, double sigma);

  bool chance(double p) { return real() < p; }

  /// Serialized engine state, suitable for exact resume.
  std::string state() const;
  void restore(const std::string& state);

  /// FNV-1a digest of the serialized state.
  std::uint64_t state_digest() const;

 private:
  std::mt19937_64 eng_;
};

}  // namespace kg
