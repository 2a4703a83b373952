#include "mmtk/moment.hpp"

#include "mmtk/linalg.hpp"

namespace mmtk {

namespace {

Vector horizontal(const Vector& v, const Vector& w) { return w - v.dot(w) * v; }

}  // namespace

RealVector moment_value(const RepresentationSpec& spec, const ProjectivePoint& x) {
  const Vector& v = x.vector();
  RealVector mu(spec.p_dim());
  for (int k = 0; k < spec.p_dim(); ++k) mu[k] = v.dot(spec.p_element(k) * v).real();
  return mu;
}

double moment_component(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta) {
  const Vector& v = x.vector();
  return v.dot(spec.rho_p(beta) * v).real();
}

RealVector moment_torus(const RepresentationSpec& spec, const ProjectivePoint& x) {
  const Vector& v = x.vector();
  RealVector mu(spec.a_rank());
  for (int j = 0; j < spec.a_rank(); ++j) mu[j] = v.dot(spec.a_raw()[j] * v).real();
  return mu;
}

TangentVector fundamental_field(const ProjectivePoint& x, const Matrix& xi) {
  const Vector& v = x.vector();
  return TangentVector{x, horizontal(v, xi * v)};
}

TangentVector vector_field(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta) {
  return fundamental_field(x, spec.rho_p(beta));
}

double fs_metric(const Vector& t, const Vector& s) { return 2.0 * t.dot(s).real(); }

std::vector<Vector> tangent_frame(const ProjectivePoint& x) {
  Matrix v(x.dim(), 1);
  v.col(0) = x.vector();
  const Matrix perp = linalg::complex_complement(v);
  std::vector<Vector> frame;
  const Complex i(0.0, 1.0);
  for (Eigen::Index j = 0; j < perp.cols(); ++j) {
    frame.emplace_back(perp.col(j));
    frame.emplace_back(i * perp.col(j));
  }
  return frame;
}

TangentVector fs_gradient(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta) {
  const Vector& v = x.vector();
  const Vector av = spec.rho_p(beta) * v;
  Vector grad = Vector::Zero(x.dim());
  // d/ds μ^β([v + s δ]) at s = 0 equals 2 Re⟨δ, ρ(β)v⟩ for δ ⟂ v; the metric
  // dual of that covector over a g-orthogonal frame gives the gradient.
  for (const Vector& e : tangent_frame(x)) {
    const double differential = 2.0 * e.dot(av).real();
    grad += (differential / fs_metric(e, e)) * e;
  }
  return TangentVector{x, grad};
}

ProjectivePoint move_along(const ProjectivePoint& x, const Vector& t, double s) {
  return ProjectivePoint(x.vector() + s * t);
}

ProjectivePoint act(const Matrix& g, const ProjectivePoint& x) { return ProjectivePoint(g * x.vector()); }

ProjectivePoint flow_point(const Matrix& rho_beta, const ProjectivePoint& x, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (rho_beta + rho_beta.adjoint()));
  const RealVector lambda = eig.eigenvalues();
  const double top = lambda.maxCoeff();
  const double bottom = lambda.minCoeff();
  const double shift = t >= 0 ? top : bottom;
  Vector c = eig.eigenvectors().adjoint() * x.vector();
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] *= std::exp(t * (lambda[i] - shift));
  return ProjectivePoint(eig.eigenvectors() * c);
}

RealMatrix adjoint_on_p(const RepresentationSpec& spec, const Matrix& k) {
  const Matrix kinv = k.inverse();
  RealMatrix r(spec.p_dim(), spec.p_dim());
  for (int j = 0; j < spec.p_dim(); ++j) {
    const Matrix moved = k * spec.p_element(j) * kinv;
    for (int i = 0; i < spec.p_dim(); ++i) r(i, j) = linalg::trace_inner(spec.p_element(i), moved);
  }
  return r;
}

}  // namespace mmtk
