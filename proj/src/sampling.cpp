#include "mmtk/sampling.hpp"

namespace mmtk {

RealVector Sampler::uniform_box(Eigen::Index n, double radius) {
  RealVector r(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = uniform(-radius, radius);
  return r;
}

RealVector Sampler::gaussian(Eigen::Index n) {
  RealVector r(n);
  for (Eigen::Index i = 0; i < n; ++i) r[i] = normal();
  return r;
}

Vector Sampler::complex_gaussian(Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal();
    const double im = normal();
    v[i] = Complex(re, im);
  }
  return v;
}

ProjectivePoint Sampler::projective_point(Eigen::Index n) {
  Vector v = complex_gaussian(n);
  while (v.norm() < 1e-6) v = complex_gaussian(n);
  return ProjectivePoint(v);
}

ProjectivePoint Sampler::projective_point_in(const Matrix& basis) {
  Vector c = complex_gaussian(basis.cols());
  while (c.norm() < 1e-6) c = complex_gaussian(basis.cols());
  return ProjectivePoint(basis * c);
}

}  // namespace mmtk
