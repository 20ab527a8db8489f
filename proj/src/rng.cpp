#include "kg/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kg/error.hpp"
#include "kg/util.hpp"

namespace kg {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw UsageError("Rng::below(0)");
  // Rejection sampling over the top multiple of n keeps the draw unbiased.
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return x % n;
}

double Rng::real() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::gauss(double mu, double sigma) {
  double u1 = real();
  double u2 = real();
  while (u1 <= 0.0) u1 = real();
  double r = std::sqrt(-2.0 * std::log(u1));
  return mu + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::string Rng::state() const {
  std::ostringstream ss;
  ss << eng_;
  return ss.str();
}

void Rng::restore(const std::string& state) {
  std::istringstream ss(state);
  ss >> eng_;
  if (!ss) throw DataError("invalid rng state");
}

std::uint64_t Rng::state_digest() const { return fnv1a(state()); }

}  // namespace kg
