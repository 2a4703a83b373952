#pragma once

#include "mmtk/repspec.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(MMTK_DATA_DIR) + "/" + name; }

inline const mmtk::RepresentationSpec& sym2() {
  static const mmtk::RepresentationSpec spec = mmtk::load_representation_file(data_path("sl2_sym2.json"));
  return spec;
}

inline const mmtk::RepresentationSpec& sym2_plus_trivial() {
  static const mmtk::RepresentationSpec spec = mmtk::load_representation_file(data_path("sl2_sym2_plus_trivial.json"));
  return spec;
}

inline const mmtk::RepresentationSpec& torus_p2() {
  static const mmtk::RepresentationSpec spec = mmtk::load_representation_file(data_path("torus_p2.json"));
  return spec;
}

// Abelian spec with generators h_j = diag(weights[0][j], weights[1][j], ...), all in 𝔞.
inline mmtk::RepresentationSpec diagonal_spec(const std::vector<std::vector<double>>& weights) {
  const int n = static_cast<int>(weights.size());
  const int r = static_cast<int>(weights.front().size());
  std::vector<mmtk::Generator> gens;
  std::vector<std::string> names;
  for (int j = 0; j < r; ++j) {
    mmtk::Matrix h = mmtk::Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = weights[i][j];
    names.push_back("h" + std::to_string(j));
    gens.push_back({names.back(), h, mmtk::GeneratorTag::P});
  }
  return mmtk::RepresentationSpec(n, gens, names, names);
}

inline mmtk::Vector vec(std::initializer_list<mmtk::Complex> entries) {
  mmtk::Vector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index k = 0;
  for (const auto& e : entries) v[k++] = e;
  return v;
}

inline mmtk::RealVector rvec(std::initializer_list<double> entries) {
  mmtk::RealVector v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index k = 0;
  for (double e : entries) v[k++] = e;
  return v;
}

// Lowering operator on Sym²C² in the unitary basis x², √2·xy, y².
inline mmtk::Matrix sym2_f() {
  const double r2 = std::sqrt(2.0);
  mmtk::Matrix f = mmtk::Matrix::Zero(3, 3);
  f(1, 0) = r2;
  f(2, 1) = r2;
  return f;
}

}  // namespace testing
