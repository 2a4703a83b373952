#include "mmtk/flow.hpp"

#include "mmtk/linalg.hpp"
#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"
#include "mmtk/strata.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmtk {

namespace {

Vector flow_field(const RepresentationSpec& spec, const Vector& v) {
  const ProjectivePoint x(v);
  const Vector& u = x.vector();
  const Vector w = spec.rho_p(moment_value(spec, x)) * u;
  return w - u.dot(w) * u;
}

Vector rk4(const RepresentationSpec& spec, const Vector& v, double h) {
  const Vector k1 = flow_field(spec, v);
  const Vector k2 = flow_field(spec, v + 0.5 * h * k1);
  const Vector k3 = flow_field(spec, v + 0.5 * h * k2);
  const Vector k4 = flow_field(spec, v + h * k3);
  const Vector next = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return next / next.norm();
}

RealVector sorted_spectrum(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues();  // ascending
}

Matrix k_projection(const RepresentationSpec& spec, const Matrix& y) {
  Matrix out = Matrix::Zero(y.rows(), y.cols());
  for (int i = 0; i < spec.k_dim(); ++i) out += linalg::trace_inner(spec.k_element(i), y) * spec.k_element(i);
  return out;
}

}  // namespace

double eta(const RepresentationSpec& spec, const ProjectivePoint& x) { return moment_value(spec, x).squaredNorm(); }

Trajectory flow_eta(const RepresentationSpec& spec, const ProjectivePoint& x0, const FlowParams& params) {
  Trajectory traj;
  Vector v = x0.vector();
  double h = params.step;
  double t = 0.0;
  double current = eta(spec, x0);
  traj.samples.push_back(FlowSample{t, x0, current});
  while (traj.steps < params.max_steps) {
    traj.grad_norm = flow_field(spec, v).norm();
    if (traj.grad_norm < params.stop_tol) {
      traj.converged = true;
      break;
    }
    ++traj.steps;
    const Vector next = rk4(spec, v, h);
    const double next_eta = eta(spec, ProjectivePoint(next));
    if (next_eta < current - params.slack) {
      h *= 0.5;
      continue;
    }
    v = next;
    t += h;
    current = next_eta;
    traj.samples.push_back(FlowSample{t, ProjectivePoint(v), current});
    h = std::min(h * params.growth, params.max_step);
  }
  if (!traj.converged) traj.grad_norm = flow_field(spec, v).norm();
  traj.limit = ProjectivePoint(v);
  traj.beta_limit = moment_value(spec, traj.limit);
  return traj;
}

void require_converged(const Trajectory& traj) {
  if (!traj.converged) {
    std::ostringstream msg;
    msg << "flow did not converge after " << traj.steps << " steps (gradient norm " << traj.grad_norm << ")";
    throw Error(ErrorCode::NoConvergence, msg.str());
  }
}

std::vector<int> batch_maximizers(const std::vector<Trajectory>& batch, double tol) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& tr : batch) {
    if (tr.converged) best = std::max(best, tr.samples.back().eta);
  }
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(batch.size()); ++i) {
    if (batch[i].converged && batch[i].samples.back().eta >= best - tol) out.push_back(i);
  }
  return out;
}

Matrix torus_element(const RepresentationSpec& spec, const RealVector& torus_point) {
  const RealVector c = spec.a_gram().ldlt().solve(torus_point);
  Matrix out = Matrix::Zero(spec.dim_v(), spec.dim_v());
  for (int j = 0; j < spec.a_rank(); ++j) out += c[j] * spec.a_raw()[j];
  return out;
}

KAlignment align_to(const RepresentationSpec& spec, const Matrix& rho_beta, const Matrix& target, int max_iter) {
  const Eigen::Index n = rho_beta.rows();
  KAlignment out;
  out.k = Matrix::Identity(n, n);
  Matrix current = rho_beta;
  auto score = [&](const Matrix& b) { return linalg::trace_inner(b, target); };
  double f = score(current);
  double step = 1.0 / (1.0 + target.norm() * rho_beta.norm());
  Sampler kicks(0x9e3779b97f4a7c15ULL);
  int kicks_left = 5;
  for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
    out.residual = (current - target).norm();
    if (out.residual < 1e-13) break;
    Matrix xi = k_projection(spec, linalg::bracket(target, current));
    const double gnorm = xi.norm();
    if (gnorm < 1e-14) {
      // Stationary but not aligned: a critical point other than the maximum.
      if (kicks_left-- <= 0 || spec.k_dim() == 0) break;
      xi = Matrix::Zero(n, n);
      for (int i = 0; i < spec.k_dim(); ++i) xi += kicks.normal() * spec.k_element(i);
      const Matrix u = linalg::expm(1e-2 * xi / std::max(xi.norm(), 1e-300));
      out.k = u * out.k;
      current = u * current * u.adjoint();
      f = score(current);
      continue;
    }
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      const Matrix u = linalg::expm(step * xi);
      const Matrix trial = u * current * u.adjoint();
      const double ft = score(trial);
      if (ft > f + 1e-4 * step * gnorm * gnorm) {
        out.k = u * out.k;
        current = trial;
        f = ft;
        accepted = true;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  out.residual = (current - target).norm();
  return out;
}

CertificateReport evaluate_certificate(const RepresentationSpec& spec, const Trajectory& traj, const Polytope& poly,
                                       double tol) {
  CertificateReport rep;
  if (!traj.converged) {
    rep.failed_clause = "precondition";
    rep.message = "trajectory did not converge";
    return rep;
  }
  const RealVector& beta = traj.beta_limit;
  const Matrix rho_beta = spec.rho_p(beta);
  const RealVector spectrum = sorted_spectrum(rho_beta);

  // (a) β is K-conjugate to an extreme point of the torus polytope.
  double best_err = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  for (int v : poly.vertices) {
    const Matrix target = torus_element(spec, poly.points[v]);
    const double gap = (sorted_spectrum(target) - spectrum).cwiseAbs().maxCoeff();
    best_gap = std::min(best_gap, gap);
    if (gap > tol) continue;
    const KAlignment al = align_to(spec, rho_beta, target);
    const double err = (moment_torus(spec, act(al.k, traj.limit)) - poly.points[v]).norm();
    if (err < best_err) {
      best_err = err;
      rep.vertex = v;
    }
  }
  rep.spectrum_gap = best_gap;
  rep.vertex_error = best_err;
  if (!(best_err <= tol)) {
    rep.failed_clause = "a";
    std::ostringstream msg;
    msg << "mu_p(limit) is not conjugate to a polytope vertex (spectral gap " << best_gap << ", torus error "
        << best_err << ")";
    rep.message = msg.str();
    return rep;
  }

  // (b) the limit lies in X^β_max.
  const BetaGrading grading = build_grading(spec, beta);
  const StratumRecord rec = classify_point(spec, grading, traj.limit);
  if (!rec.fixed || !rec.in_beta_minus_max) {
    rep.failed_clause = "b";
    rep.message = "limit is not in the maximal fixed component for beta = mu_p(limit)";
    return rep;
  }

  // (c) 𝔭^β kills the limit.
  for (const Matrix& xi : p_centralizer(grading)) {
    rep.stabilizer_field = std::max(rep.stabilizer_field, fundamental_field(traj.limit, xi).t.norm());
  }
  if (!(rep.stabilizer_field < tol)) {
    rep.failed_clause = "c";
    rep.message = "p-part of the centralizer moves the limit";
    return rep;
  }
  rep.passed = true;
  return rep;
}

CertificateReport extreme_certificate(const RepresentationSpec& spec, const Trajectory& traj, const Polytope& poly,
                                      double tol) {
  if (!traj.converged) {
    throw Error(ErrorCode::PreconditionViolation, "certificate requires a converged trajectory");
  }
  CertificateReport rep = evaluate_certificate(spec, traj, poly, tol);
  if (!rep.passed) throw Error(ErrorCode::CertificateFailure, "clause (" + rep.failed_clause + "): " + rep.message);
  return rep;
}

}  // namespace mmtk
