#pragma once

#include "mmtk/types.hpp"

#include <cstdint>
#include <random>

namespace mmtk {

/// Seeded generator for reproducible sample batteries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }

  RealVector uniform_box(Eigen::Index n, double radius);
  RealVector gaussian(Eigen::Index n);
  Vector complex_gaussian(Eigen::Index n);
  /// Haar-distributed point of P(C^n), or of P(span basis) when a basis is given.
  ProjectivePoint projective_point(Eigen::Index n);
  ProjectivePoint projective_point_in(const Matrix& basis);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mmtk
