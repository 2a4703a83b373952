#pragma once

#include "mmtk/polytope.hpp"
#include "mmtk/repspec.hpp"

#include <string>
#include <vector>

namespace mmtk {

struct FlowParams {
  double step = 1e-2;
  double stop_tol = 1e-9;
  int max_steps = 100000;
  double max_step = 1.0;
  double growth = 1.2;
  double slack = 1e-12;  // allowed η decrease per accepted step
};

struct FlowSample {
  double time = 0.0;
  ProjectivePoint point;
  double eta = 0.0;
};

struct Trajectory {
  std::vector<FlowSample> samples;
  ProjectivePoint limit;
  RealVector beta_limit;
  bool converged = false;
  int steps = 0;
  double grad_norm = 0.0;
};

/// η(x) = ‖μ_p(x)‖².
double eta(const RepresentationSpec& spec, const ProjectivePoint& x);

/// Integrates x' = P_x(ρ(μ_p(x)) v) with RK4, renormalizing each step and
/// using η-monotonicity as the step controller. Never throws on
/// non-convergence; check `converged` (or call require_converged).
Trajectory flow_eta(const RepresentationSpec& spec, const ProjectivePoint& x0, const FlowParams& params = {});

/// Throws NoConvergence for an unconverged trajectory.
void require_converged(const Trajectory& traj);

/// Indices of converged trajectories whose final η is within `tol` of the batch maximum.
std::vector<int> batch_maximizers(const std::vector<Trajectory>& batch, double tol = 1e-6);

/// Element of 𝔞 (as a matrix) whose torus coordinates ⟨·, H_j⟩ equal `torus_point`.
Matrix torus_element(const RepresentationSpec& spec, const RealVector& torus_point);

struct KAlignment {
  Matrix k;             // unitary element of exp(ρ(𝔨))
  double residual = 0;  // ‖k ρ(β) k⁻¹ − target‖_F
  int iterations = 0;
};

/// Double-bracket ascent of ⟨k ρ(β) k⁻¹, target⟩ over exp(ρ(𝔨)).
KAlignment align_to(const RepresentationSpec& spec, const Matrix& rho_beta, const Matrix& target,
                    int max_iter = 2000);

struct CertificateReport {
  bool passed = false;
  std::string failed_clause;  // "a", "b", "c" or empty
  std::string message;
  int vertex = -1;            // polytope vertex matched in clause (a)
  double spectrum_gap = 0.0;
  double vertex_error = 0.0;  // |μ_a(k·limit) − σ| after alignment
  double stabilizer_field = 0.0;
};

/// Evaluates clauses (a)–(c) for the limit of a converged trajectory without throwing.
CertificateReport evaluate_certificate(const RepresentationSpec& spec, const Trajectory& traj, const Polytope& poly,
                                       double tol = 1e-6);

/// As evaluate_certificate, but raises CertificateFailure naming the failing clause
/// and PreconditionViolation for an unconverged trajectory.
CertificateReport extreme_certificate(const RepresentationSpec& spec, const Trajectory& traj, const Polytope& poly,
                                      double tol = 1e-6);

}  // namespace mmtk
