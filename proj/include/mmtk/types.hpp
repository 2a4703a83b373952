#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mmtk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Machine-readable failure classes. Every library error carries exactly one.
enum class ErrorCode {
  MalformedDocument,
  HermiticityViolation,
  NonCommutingTorus,
  ClosureOverflow,
  DegenerateInput,
  ExposureFailure,
  NotInvariant,
  NotMaxPoint,
  DegenerateOrbitMap,
  OutsideCell,
  SolveSingular,
  NotIrreducible,
  NoConvergence,
  CertificateFailure,
  PreconditionViolation,
  IoError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Numerical thresholds shared by the modules. Defaults follow the project
/// conventions; each run may override them.
struct Tolerances {
  double hermitian = 1e-12;      // ‖A − A*‖∞ for tagged generators
  double commute = 1e-10;        // ‖[A_i, A_j]‖∞ for the torus
  double closure = 1e-9;         // new-direction threshold in lie_closure
  double cluster_gap = 1e-8;     // eigenvalue grouping
  double drop = 1e-10;           // "nonzero coordinate" in BB limits
  double fixed = 1e-8;           // ‖β_X(x)‖ below this means x ∈ X^β
  double invariance = 1e-9;      // subspace invariance residual
  double cell = 1e-10;           // minimum top-level coefficient
  double orbit_rank = 1e-10;     // σ_min of the r⁻ orbit map
  int max_closure_dim = 64;
  int max_dim_v = 64;
};

/// A point of P(V), stored as a unit-norm representative.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  /// Normalizes `v`; throws PreconditionViolation on a (numerically) zero vector.
  explicit ProjectivePoint(const Vector& v);

  const Vector& vector() const noexcept { return v_; }
  Eigen::Index dim() const noexcept { return v_.size(); }

  /// Phase-aligned Euclidean distance min_φ ‖v − e^{iφ} w‖ between representatives.
  double distance(const ProjectivePoint& other) const;
  bool same_as(const ProjectivePoint& other, double tol = 1e-9) const;

 private:
  Vector v_;
};

/// Tangent vector at a point of P(V), represented by its horizontal lift t ⟂ v.
struct TangentVector {
  ProjectivePoint base;
  Vector t;

  double euclidean_norm() const { return t.norm(); }
};

/// Complex subspace of C^N given by an orthonormal basis (N × k).
struct Subspace {
  Matrix basis;

  Eigen::Index ambient_dim() const { return basis.rows(); }
  Eigen::Index dim() const { return basis.cols(); }
  Matrix projector() const { return basis * basis.adjoint(); }

  static Subspace whole(Eigen::Index n) {
    return Subspace{Matrix::Identity(n, n)};
  }
};

}  // namespace mmtk
