#pragma once

#include "mmtk/repspec.hpp"

namespace mmtk {

/// μ_p(x) in orthonormal p-coordinates: k-th entry v* A_k v.
RealVector moment_value(const RepresentationSpec& spec, const ProjectivePoint& x);

/// μ^β(x) = ⟨μ_p(x), β⟩ = v* ρ(β) v.
double moment_component(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta);

/// μ_a(x) in raw torus coordinates: j-th entry v* H_j v.
RealVector moment_torus(const RepresentationSpec& spec, const ProjectivePoint& x);

/// β_X(x): derivative at t = 0 of [exp(tρ(β)) v], i.e. the projection of ρ(β)v onto v^⊥.
TangentVector vector_field(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta);

/// ξ_X(x) for an arbitrary algebra element given as a matrix.
TangentVector fundamental_field(const ProjectivePoint& x, const Matrix& xi);

/// Fubini–Study metric on horizontal lifts: g_x(t, s) = 2 Re⟨t, s⟩.
double fs_metric(const Vector& t, const Vector& s);

/// Real frame of T_x P(V), orthonormal for Re⟨,⟩: {b_j, i b_j} with b_j an
/// orthonormal basis of v^⊥.
std::vector<Vector> tangent_frame(const ProjectivePoint& x);

/// Riemannian gradient of μ^β for the Fubini–Study metric, assembled from the
/// differential of the Rayleigh quotient on a tangent frame.
TangentVector fs_gradient(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta);

/// Point reached by moving from x along a horizontal direction: [v + s·t].
ProjectivePoint move_along(const ProjectivePoint& x, const Vector& t, double s);

/// [g v] for a matrix group element g.
ProjectivePoint act(const Matrix& g, const ProjectivePoint& x);

/// exp(tρ(β))·x evaluated in the eigenbasis of ρ(β) (stable for large |t|).
ProjectivePoint flow_point(const Matrix& rho_beta, const ProjectivePoint& x, double t);

/// Matrix R with μ_p(k·x) = R μ_p(x) for unitary k normalizing ρ(𝔭): R_ij = ⟨A_i, k A_j k⁻¹⟩.
RealMatrix adjoint_on_p(const RepresentationSpec& spec, const Matrix& k);

}  // namespace mmtk
