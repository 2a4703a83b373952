#include "mmtk/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>

namespace mmtk {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::HermiticityViolation: return "HermiticityViolation";
    case ErrorCode::NonCommutingTorus: return "NonCommutingTorus";
    case ErrorCode::ClosureOverflow: return "ClosureOverflow";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::ExposureFailure: return "ExposureFailure";
    case ErrorCode::NotInvariant: return "NotInvariant";
    case ErrorCode::NotMaxPoint: return "NotMaxPoint";
    case ErrorCode::DegenerateOrbitMap: return "DegenerateOrbitMap";
    case ErrorCode::OutsideCell: return "OutsideCell";
    case ErrorCode::SolveSingular: return "SolveSingular";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::CertificateFailure: return "CertificateFailure";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

ProjectivePoint::ProjectivePoint(const Vector& v) {
  const double n = v.norm();
  if (!(n > 1e-300) || !std::isfinite(n)) {
    throw Error(ErrorCode::PreconditionViolation, "projective point from a zero or non-finite vector");
  }
  v_ = v / n;
}

double ProjectivePoint::distance(const ProjectivePoint& other) const {
  const Complex overlap = other.v_.dot(v_);  // ⟨w, v⟩
  const double mag = std::abs(overlap);
  if (mag == 0.0) return (v_ - other.v_).norm();
  const Vector aligned = other.v_ * (overlap / mag);
  return (v_ - aligned).norm();
}

bool ProjectivePoint::same_as(const ProjectivePoint& other, double tol) const {
  return std::abs(other.v_.dot(v_)) >= 1.0 - tol;
}

namespace linalg {

double trace_inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array().conjugate()).real().sum();
}

double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

std::vector<std::vector<int>> cluster_descending(const RealVector& values, double gap) {
  std::vector<std::vector<int>> groups;
  for (int i = 0; i < values.size(); ++i) {
    if (groups.empty() || values[groups.back().back()] - values[i] > gap) {
      groups.push_back({i});
    } else {
      groups.back().push_back(i);
    }
  }
  return groups;
}

std::vector<Level> hermitian_levels(const Matrix& h, double gap) {
  std::vector<Level> out;
  if (h.rows() == 0) return out;
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const RealVector asc = eig.eigenvalues();
  const Eigen::Index n = asc.size();
  RealVector desc(n);
  Matrix vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    desc[i] = asc[n - 1 - i];
    vecs.col(i) = eig.eigenvectors().col(n - 1 - i);
  }
  for (const auto& group : cluster_descending(desc, gap)) {
    Level level;
    level.basis.resize(n, static_cast<Eigen::Index>(group.size()));
    double sum = 0.0;
    for (std::size_t j = 0; j < group.size(); ++j) {
      level.basis.col(static_cast<Eigen::Index>(j)) = vecs.col(group[j]);
      sum += desc[group[j]];
    }
    level.value = sum / static_cast<double>(group.size());
    out.push_back(std::move(level));
  }
  return out;
}

std::vector<RealLevel> symmetric_levels(const RealMatrix& s, double gap) {
  std::vector<RealLevel> out;
  if (s.rows() == 0) return out;
  const RealMatrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym);
  const RealVector asc = eig.eigenvalues();
  const Eigen::Index n = asc.size();
  RealVector desc(n);
  RealMatrix vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    desc[i] = asc[n - 1 - i];
    vecs.col(i) = eig.eigenvectors().col(n - 1 - i);
  }
  for (const auto& group : cluster_descending(desc, gap)) {
    RealLevel level;
    level.basis.resize(n, static_cast<Eigen::Index>(group.size()));
    double sum = 0.0;
    for (std::size_t j = 0; j < group.size(); ++j) {
      level.basis.col(static_cast<Eigen::Index>(j)) = vecs.col(group[j]);
      sum += desc[group[j]];
    }
    level.value = sum / static_cast<double>(group.size());
    out.push_back(std::move(level));
  }
  return out;
}

RealVector to_real(const Vector& v) {
  RealVector r(2 * v.size());
  r.head(v.size()) = v.real();
  r.tail(v.size()) = v.imag();
  return r;
}

Vector from_real(const RealVector& r) {
  const Eigen::Index n = r.size() / 2;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(r[i], r[n + i]);
  return v;
}

RealMatrix real_frame(const Matrix& complex_basis) {
  const Eigen::Index n = complex_basis.rows();
  RealMatrix frame(2 * n, 2 * complex_basis.cols());
  const Complex i(0.0, 1.0);
  for (Eigen::Index j = 0; j < complex_basis.cols(); ++j) {
    frame.col(2 * j) = to_real(complex_basis.col(j));
    frame.col(2 * j + 1) = to_real(i * complex_basis.col(j));
  }
  return frame;
}

RealMatrix real_complement(const RealMatrix& frame, const RealMatrix& cols, double tol) {
  const Eigen::Index k = frame.cols();
  if (cols.cols() == 0) return frame;
  const RealMatrix coords = frame.transpose() * cols;  // k × m
  Eigen::JacobiSVD<RealMatrix> svd(coords, Eigen::ComputeFullU);
  const RealVector s = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol) ++rank;
  }
  const RealMatrix u = svd.matrixU();
  return frame * u.rightCols(k - rank);
}

Matrix complex_complement(const Matrix& basis) {
  const Eigen::Index n = basis.rows();
  if (basis.cols() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeFullU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-12) ++rank;
  }
  const Matrix u = svd.matrixU();
  return u.rightCols(n - rank);
}

Matrix nilpotent_exp(const Matrix& n, int terms) {
  Matrix result = Matrix::Identity(n.rows(), n.cols());
  Matrix power = result;
  double factorial = 1.0;
  for (int k = 1; k < terms; ++k) {
    power = power * n;
    factorial *= k;
    result += power / factorial;
  }
  return result;
}

Matrix unipotent_log(const Matrix& u, int terms) {
  const Matrix m = u - Matrix::Identity(u.rows(), u.cols());
  Matrix result = Matrix::Zero(u.rows(), u.cols());
  Matrix power = Matrix::Identity(u.rows(), u.cols());
  for (int k = 1; k <= terms; ++k) {
    power = power * m;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    result += sign * power / static_cast<double>(k);
  }
  return result;
}

Matrix expm(const Matrix& a) { return a.exp(); }

double subspace_gap(const RealMatrix& q1, const RealMatrix& q2) {
  if (q1.cols() != q2.cols()) return 1.0;
  if (q1.cols() == 0) return 0.0;
  const RealMatrix residual = q1 - q2 * (q2.transpose() * q1);
  Eigen::JacobiSVD<RealMatrix> svd(residual);
  return svd.singularValues()[0];
}

}  // namespace linalg
}  // namespace mmtk
