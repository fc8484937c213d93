#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace pttunnel::testing {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(std::complex<double> got, std::complex<double> want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Fixed-seed generator for property tests; failures reproduce exactly.
class Draw {
 public:
  explicit Draw(unsigned seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<>(lo, hi)(rng_); }

 private:
  std::mt19937 rng_;
};

}  // namespace pttunnel::testing
