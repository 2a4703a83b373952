#pragma once

#include "mmtk/strata.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mmtk {

/// Product chart R^{β−} × F × U → P(V) around a point of X^β_max.
///
/// All directions are real: n-coordinates over an orthonormal basis of
/// ρ(r⁻), f-coordinates over a real frame of F, u-coordinates over the real
/// frame {b_j, i b_j} of the top level of W orthogonal to w0.
struct LstChart {
  ProjectivePoint base_point;
  Vector w0;                    // unit representative of the base point
  RealVector beta;
  Matrix rho_beta;
  Subspace w;                   // ambient invariant subspace of the irreducible part
  Subspace complement;          // invariant complement carried along (possibly empty)
  std::vector<linalg::Level> levels;  // ρ(β)-levels of W, descending
  std::vector<Matrix> n_basis;  // orthonormal basis of ρ(r⁻)
  std::vector<double> n_grades;
  Matrix orbit_dirs;            // columns ρ(n_i) w0
  Matrix u_basis;               // complex orthonormal basis of W_top ⊖ w0
  std::vector<Vector> f_dirs;   // real frame of F (graded part first, then complement part)
  std::vector<int> f_levels;    // level index for graded directions, −1 for complement directions
  int nilpotency = 1;           // number of terms of the exponential series

  int n_dim() const { return static_cast<int>(n_basis.size()); }
  int f_dim() const { return static_cast<int>(f_dirs.size()); }
  int u_dim() const { return static_cast<int>(2 * u_basis.cols()); }
};

struct ChartCoordinates {
  RealVector n;
  RealVector f;
  RealVector u;
};

struct UnipotentElement {
  Matrix n;
  Matrix g;
};

UnipotentElement make_unipotent(const LstChart& chart, const RealVector& n_coords);
/// n-coordinates of a unipotent g ∈ R^{β−} (log projected onto ρ(r⁻)).
RealVector unipotent_coordinates(const LstChart& chart, const Matrix& g);

/// Chart at x ∈ X^β_max for X = P(W) (W = C^N when omitted).
LstChart build_chart(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x);
LstChart build_chart(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x,
                     const Subspace& w);

/// Ψ(f, u) = w0 + U·u + Σ f_i F_i, unnormalized.
Vector slice_vector(const LstChart& chart, const RealVector& f, const RealVector& u);

ProjectivePoint phi_forward(const LstChart& chart, const ChartCoordinates& c);
ProjectivePoint phi_forward(const LstChart& chart, const Matrix& g, const RealVector& f, const RealVector& u);

ChartCoordinates phi_inverse(const LstChart& chart, const ProjectivePoint& z);

/// Cell chart on V = W ⊕ complement for irreducible W; β must expose the top weight of W.
LstChart blv_chart(const RepresentationSpec& spec, const BetaGrading& grading, const Subspace& w,
                   const Subspace& complement);

/// Basis of the commutant {X : [P_W ρ(e) P_W, X] = 0 for all e} acting on W coordinates.
std::vector<Matrix> commutant_basis(const RepresentationSpec& spec, const Subspace& w, double tol = 1e-8);
/// Complex dimension of the commutant; 1 iff W is irreducible.
int commutant_dimension(const RepresentationSpec& spec, const Subspace& w, double tol = 1e-8);

/// Drops the n-part of phi_inverse.
std::pair<RealVector, RealVector> quotient_project(const LstChart& chart, const ProjectivePoint& z);

struct VerificationReport {
  std::string check;
  int samples = 0;
  std::uint64_t seed = 0;
  double max_error = 0.0;
  double threshold = 0.0;
  std::vector<std::string> violations;
  std::map<std::string, double> extras;

  bool passed() const { return violations.empty(); }
};

/// Random coordinates with every entry uniform in [−radius, radius].
ChartCoordinates random_coordinates(const LstChart& chart, std::uint64_t seed, double radius);

/// Freeness g·z ≠ z and the bounded-escape properness proxy on sampled cell points.
VerificationReport verify_freeness(const LstChart& chart, int samples, std::uint64_t seed);

/// Lie algebra of I^β: elements of g_zero acting trivially on sampled points of X^β_max.
std::vector<Matrix> ineffectivity_algebra(const BetaGrading& grading, const LstChart& chart, std::uint64_t seed,
                                          double tol = 1e-9);

/// Φ(r·h g h⁻¹, h·v, u) = r·h·Φ(g, v, u) for sampled r ∈ R^{β−}, h ∈ exp Lie(I^β).
VerificationReport equivariance_check(const BetaGrading& grading, const LstChart& chart, int samples,
                                      std::uint64_t seed);

}  // namespace mmtk
