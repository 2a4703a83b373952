#pragma once

#include "mmtk/linalg.hpp"
#include "mmtk/repspec.hpp"

#include <optional>
#include <vector>

namespace mmtk {

/// Eigenvalue ladder of ρ(β) on V and of ad(ρ(β)) on 𝔤.
///
/// Algebra subspaces are stored twice: as real coordinate bases over
/// spec.algebra() (orthonormal columns) and as the corresponding matrices.
struct BetaGrading {
  RealVector beta;
  Matrix rho_beta;
  std::vector<linalg::Level> v_levels;      // descending
  std::vector<linalg::RealLevel> g_levels;  // descending, coordinates over the algebra basis
  RealMatrix r_minus;
  RealMatrix g_zero;
  RealMatrix r_plus;
  std::vector<Matrix> r_minus_elements;
  std::vector<double> r_minus_grades;  // ad-eigenvalue of each r_minus element
  std::vector<Matrix> g_zero_elements;
  std::vector<Matrix> r_plus_elements;

  bool is_zero() const { return beta.size() == 0 || beta.norm() == 0.0; }
  /// Index of the v_level whose eigenvalue is within `gap` of `value`, or −1.
  int level_of(double value, double gap) const;
};

BetaGrading build_grading(const RepresentationSpec& spec, const RealVector& beta);

enum class LimitDirection { Forward, Backward };

struct Limit {
  ProjectivePoint point;
  int level = 0;  // index into v_levels
};

/// lim_{t→±∞} exp(tρ(β))·x: the normalized component of x in the highest
/// (forward) or lowest (backward) level among those carrying weight > drop.
Limit bb_limit_level(const BetaGrading& grading, const ProjectivePoint& x, LimitDirection direction,
                     double drop = 1e-10);
ProjectivePoint bb_limit(const BetaGrading& grading, const ProjectivePoint& x, LimitDirection direction,
                         double drop = 1e-10);

struct StratumRecord {
  ProjectivePoint point;
  bool fixed = false;
  double level_value = 0.0;
  bool in_beta_minus_max = false;
  ProjectivePoint forward_limit;
  ProjectivePoint backward_limit;
};

/// Stratum data of x inside X = P(W) (W = C^N when omitted).
StratumRecord classify_point(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x,
                             const std::optional<Subspace>& w = std::nullopt);

/// Largest residual ‖(I − P_W) ρ(e_i) P_W‖ over the algebra basis.
double invariance_residual(const RepresentationSpec& spec, const Subspace& w);

/// Levels of ρ(β) restricted to an invariant subspace W, descending.
std::vector<linalg::Level> w_levels(const BetaGrading& grading, const Subspace& w, double gap);

/// Top ρ(β)-eigenspace inside W; P of it is X^β_max for X = P(W).
Subspace x_beta_max(const RepresentationSpec& spec, const BetaGrading& grading, const Subspace& w);
Subspace x_beta_max(const RepresentationSpec& spec, const BetaGrading& grading);

/// Real matrix of ξ ↦ ξ_X(x) over the given elements (columns in the [Re; Im] view).
RealMatrix orbit_map(const std::vector<Matrix>& elements, const ProjectivePoint& x);
double smallest_singular_value(const RealMatrix& m);

/// Orthonormal basis (matrices) of the Hermitian part 𝔭 ∩ g_zero.
std::vector<Matrix> p_centralizer(const BetaGrading& grading, double tol = 1e-9);

/// Matrix of θ on algebra coordinates.
RealMatrix theta_on_algebra(const AlgebraBasis& algebra);

/// max over level pairs of the distance of [𝔤_a, 𝔤_b] from 𝔤_{a+b}.
double bracket_multiplicativity_residual(const RepresentationSpec& spec, const BetaGrading& grading);

}  // namespace mmtk
