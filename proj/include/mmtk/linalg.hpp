#pragma once

#include "mmtk/types.hpp"

#include <vector>

namespace mmtk::linalg {

/// Real trace form ⟨A, B⟩ = Re tr(A B*).
double trace_inner(const Matrix& a, const Matrix& b);

inline Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

/// θ(X) = −X*, the Cartan involution on matrices.
inline Matrix cartan_involution(const Matrix& x) { return -x.adjoint(); }

double max_abs(const Matrix& a);

/// Groups of indices into `values` (sorted descending) whose consecutive
/// differences do not exceed `gap`.
std::vector<std::vector<int>> cluster_descending(const RealVector& values, double gap);

/// One eigenvalue cluster of a Hermitian matrix.
struct Level {
  double value = 0.0;
  Matrix basis;  // orthonormal columns
};

/// Eigen-decomposition of a Hermitian matrix, clustered, ordered by descending value.
std::vector<Level> hermitian_levels(const Matrix& h, double gap);

/// Real eigen-decomposition of a symmetric matrix, clustered, descending.
struct RealLevel {
  double value = 0.0;
  RealMatrix basis;
};
std::vector<RealLevel> symmetric_levels(const RealMatrix& s, double gap);

/// C^N viewed as R^{2N}: [Re v; Im v].
RealVector to_real(const Vector& v);
Vector from_real(const RealVector& r);

/// Real orthonormal basis (columns, in the real view) of the complement of
/// span_R(cols) inside span_R(frame), where `frame` is a real orthonormal frame.
RealMatrix real_complement(const RealMatrix& frame, const RealMatrix& cols, double tol);

/// Real frame {b_1, i b_1, b_2, i b_2, ...} of a complex orthonormal basis.
RealMatrix real_frame(const Matrix& complex_basis);

/// Orthonormal basis (complex) of the orthogonal complement of `basis` in C^N.
Matrix complex_complement(const Matrix& basis);

/// exp(N) = Σ_{k<terms} N^k / k! for nilpotent N (exact finite series).
Matrix nilpotent_exp(const Matrix& n, int terms);
/// log(U) = Σ_{k=1}^{terms} (−1)^{k+1} (U − I)^k / k for unipotent U.
Matrix unipotent_log(const Matrix& u, int terms);

/// exp of a general complex matrix (Padé, via Eigen).
Matrix expm(const Matrix& a);

/// sin of the largest principal angle between column spaces of two real
/// orthonormal bases of equal dimension; 1 if the dimensions differ.
double subspace_gap(const RealMatrix& q1, const RealMatrix& q2);

}  // namespace mmtk::linalg
