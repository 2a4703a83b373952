#pragma once

#include "mmtk/repspec.hpp"

#include <map>
#include <vector>

namespace mmtk {

/// Half-space ⟨normal, x⟩ ≤ offset with unit outer normal.
struct Facet {
  RealVector normal;
  double offset = 0.0;
  std::vector<int> vertices;  // incident vertex indices (into Polytope::points)
};

/// Convex hull of a finite point set.
///
/// Facets live inside the affine hull of the points: for a lower-dimensional
/// hull the normals are orthogonal to the directions normal to the hull, so a
/// normal cone is generated by the facet normals plus that orthogonal space.
struct Polytope {
  std::vector<RealVector> points;
  std::vector<int> vertices;
  std::vector<Facet> facets;
  std::map<int, std::vector<int>> vertex_facets;  // vertex index -> facet indices
  std::vector<int> boundary_order;                 // ordered cycle (2-d) or endpoints (1-d)
  int affine_dim = 0;
  bool exact = false;       // integral input handled in rational arithmetic
  bool degenerate = false;  // all input points coincide

  int ambient_dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  bool is_vertex(int index) const;
};

struct ExtremePoints {
  std::vector<int> indices;
  bool degenerate = false;
  bool exact = false;
};

/// Indices of points that are not convex combinations of the other points,
/// decided by a phase-one simplex feasibility solve per point (rational
/// arithmetic for integral input, floating point with `tol` otherwise).
/// Repeated points collapse onto their first occurrence.
ExtremePoints extreme_points(const std::vector<RealVector>& points, double tol = 1e-9);

Polytope build_polytope(const std::vector<RealVector>& points, double tol = 1e-9);

struct FaceResult {
  std::vector<int> indices;
  bool total_face = false;  // β = 0
};

/// F_β: vertices attaining max ⟨β, ·⟩ within `tol`.
FaceResult exposed_face(const Polytope& poly, const RealVector& beta, double tol = 1e-9);

struct NormalCone {
  RealVector vertex;
  std::vector<RealVector> generators;
};

NormalCone normal_cone(const Polytope& poly, int vertex_index);

/// A vector exposing exactly {σ}: σ itself when it passes the self-exposure
/// test, otherwise the normalized sum of the normal-cone generators.
RealVector exposing_vector(const Polytope& poly, int vertex_index, double tol = 1e-9);

/// Weights of the torus on a ρ(𝔤)-invariant subspace W (default C^N).
std::vector<WeightSpace> weight_decomposition(const RepresentationSpec& spec, const Subspace& w);

/// conv(μ_a(P(W)^A)): hull of the torus weights on W in raw torus coordinates.
Polytope momentum_polytope(const RepresentationSpec& spec);
Polytope momentum_polytope(const RepresentationSpec& spec, const Subspace& w);

}  // namespace mmtk
