#include "mmtk/strata.hpp"

#include "mmtk/moment.hpp"

#include <algorithm>
#include <cmath>

namespace mmtk {

namespace {

std::vector<Matrix> to_elements(const AlgebraBasis& algebra, const RealMatrix& coords) {
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < coords.cols(); ++j) out.push_back(algebra.element(coords.col(j)));
  return out;
}

RealMatrix hstack(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(std::max(a.rows(), b.rows()), a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

}  // namespace

int BetaGrading::level_of(double value, double gap) const {
  for (int i = 0; i < static_cast<int>(v_levels.size()); ++i) {
    if (std::abs(v_levels[i].value - value) <= gap) return i;
  }
  return -1;
}

BetaGrading build_grading(const RepresentationSpec& spec, const RealVector& beta) {
  if (beta.size() != spec.p_dim()) {
    throw Error(ErrorCode::PreconditionViolation, "beta has " + std::to_string(beta.size()) +
                                                      " coordinates, expected " + std::to_string(spec.p_dim()));
  }
  const double gap = spec.tolerances().cluster_gap;
  const AlgebraBasis& algebra = spec.algebra();
  BetaGrading g;
  g.beta = beta;
  g.rho_beta = spec.rho_p(beta);
  g.v_levels = linalg::hermitian_levels(g.rho_beta, gap);

  const int d = algebra.dim();
  RealMatrix ad(d, d);
  for (int j = 0; j < d; ++j) {
    const Matrix moved = linalg::bracket(g.rho_beta, algebra.elements[j]);
    for (int i = 0; i < d; ++i) ad(i, j) = linalg::trace_inner(algebra.elements[i], moved);
  }
  g.g_levels = linalg::symmetric_levels(ad, gap);
  g.r_minus.resize(d, 0);
  g.g_zero.resize(d, 0);
  g.r_plus.resize(d, 0);
  for (const auto& level : g.g_levels) {
    if (level.value > gap) {
      g.r_plus = hstack(g.r_plus, level.basis);
    } else if (level.value < -gap) {
      g.r_minus = hstack(g.r_minus, level.basis);
      for (Eigen::Index j = 0; j < level.basis.cols(); ++j) g.r_minus_grades.push_back(level.value);
    } else {
      g.g_zero = hstack(g.g_zero, level.basis);
    }
  }
  g.r_minus_elements = to_elements(algebra, g.r_minus);
  g.g_zero_elements = to_elements(algebra, g.g_zero);
  g.r_plus_elements = to_elements(algebra, g.r_plus);
  return g;
}

Limit bb_limit_level(const BetaGrading& grading, const ProjectivePoint& x, LimitDirection direction, double drop) {
  const Vector& v = x.vector();
  int chosen = -1;
  const int n = static_cast<int>(grading.v_levels.size());
  for (int i = 0; i < n; ++i) {
    const int idx = direction == LimitDirection::Forward ? i : n - 1 - i;
    const Vector c = grading.v_levels[idx].basis.adjoint() * v;
    if (c.norm() > drop) {
      chosen = idx;
      break;
    }
  }
  if (chosen < 0) throw Error(ErrorCode::PreconditionViolation, "point has no component above the drop tolerance");
  const Matrix& b = grading.v_levels[chosen].basis;
  return Limit{ProjectivePoint(b * (b.adjoint() * v)), chosen};
}

ProjectivePoint bb_limit(const BetaGrading& grading, const ProjectivePoint& x, LimitDirection direction,
                         double drop) {
  return bb_limit_level(grading, x, direction, drop).point;
}

double invariance_residual(const RepresentationSpec& spec, const Subspace& w) {
  const Matrix proj = w.projector();
  const Matrix outside = Matrix::Identity(proj.rows(), proj.cols()) - proj;
  double worst = 0.0;
  for (const Matrix& e : spec.algebra().elements) {
    worst = std::max(worst, (outside * e * w.basis).norm());
  }
  return worst;
}

std::vector<linalg::Level> w_levels(const BetaGrading& grading, const Subspace& w, double gap) {
  const Matrix compressed = w.basis.adjoint() * grading.rho_beta * w.basis;
  std::vector<linalg::Level> levels = linalg::hermitian_levels(compressed, gap);
  for (auto& level : levels) level.basis = w.basis * level.basis;
  return levels;
}

Subspace x_beta_max(const RepresentationSpec& spec, const BetaGrading& grading, const Subspace& w) {
  if (w.ambient_dim() != spec.dim_v()) {
    throw Error(ErrorCode::PreconditionViolation, "subspace lives in the wrong ambient dimension");
  }
  const double residual = invariance_residual(spec, w);
  if (residual > spec.tolerances().invariance) {
    throw Error(ErrorCode::NotInvariant, "subspace is not invariant (residual " + std::to_string(residual) + ")");
  }
  if (w.dim() == 0) return w;
  return Subspace{w_levels(grading, w, spec.tolerances().cluster_gap).front().basis};
}

Subspace x_beta_max(const RepresentationSpec& spec, const BetaGrading& grading) {
  return x_beta_max(spec, grading, Subspace::whole(spec.dim_v()));
}

StratumRecord classify_point(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x,
                             const std::optional<Subspace>& w) {
  const Tolerances& tol = spec.tolerances();
  StratumRecord rec;
  rec.point = x;
  rec.fixed = fundamental_field(x, grading.rho_beta).t.norm() < tol.fixed;
  const Limit fwd = bb_limit_level(grading, x, LimitDirection::Forward, tol.drop);
  if (rec.fixed) {
    rec.forward_limit = x;
    rec.backward_limit = x;
  } else {
    rec.forward_limit = fwd.point;
    rec.backward_limit = bb_limit(grading, x, LimitDirection::Backward, tol.drop);
  }
  rec.level_value = moment_component(spec, rec.forward_limit, grading.beta);
  double top = grading.v_levels.front().value;
  if (w) top = w_levels(grading, *w, tol.cluster_gap).front().value;
  rec.in_beta_minus_max = std::abs(grading.v_levels[fwd.level].value - top) <= tol.cluster_gap;
  return rec;
}

RealMatrix orbit_map(const std::vector<Matrix>& elements, const ProjectivePoint& x) {
  RealMatrix m(2 * x.dim(), static_cast<Eigen::Index>(elements.size()));
  for (std::size_t j = 0; j < elements.size(); ++j) {
    m.col(static_cast<Eigen::Index>(j)) = linalg::to_real(fundamental_field(x, elements[j]).t);
  }
  return m;
}

double smallest_singular_value(const RealMatrix& m) {
  if (m.cols() == 0) return 0.0;
  if (m.rows() < m.cols()) return 0.0;
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues()[m.cols() - 1];
}

std::vector<Matrix> p_centralizer(const BetaGrading& grading, double tol) {
  std::vector<Matrix> basis;
  for (const Matrix& z : grading.g_zero_elements) {
    Matrix h = 0.5 * (z + z.adjoint());
    for (int pass = 0; pass < 2; ++pass) {
      for (const Matrix& b : basis) h -= linalg::trace_inner(h, b) * b;
    }
    const double n = h.norm();
    if (n > tol) basis.push_back(h / n);
  }
  return basis;
}

RealMatrix theta_on_algebra(const AlgebraBasis& algebra) {
  const int d = algebra.dim();
  RealMatrix t(d, d);
  for (int j = 0; j < d; ++j) {
    const Matrix image = linalg::cartan_involution(algebra.elements[j]);
    for (int i = 0; i < d; ++i) t(i, j) = linalg::trace_inner(algebra.elements[i], image);
  }
  return t;
}

double bracket_multiplicativity_residual(const RepresentationSpec& spec, const BetaGrading& grading) {
  const AlgebraBasis& algebra = spec.algebra();
  const double gap = spec.tolerances().cluster_gap;
  double worst = 0.0;
  const auto& levels = grading.g_levels;
  for (const auto& la : levels) {
    for (const auto& lb : levels) {
      const linalg::RealLevel* target = nullptr;
      for (const auto& lc : levels) {
        if (std::abs(lc.value - (la.value + lb.value)) <= 10 * gap) target = &lc;
      }
      for (Eigen::Index i = 0; i < la.basis.cols(); ++i) {
        const Matrix x = algebra.element(la.basis.col(i));
        for (Eigen::Index j = 0; j < lb.basis.cols(); ++j) {
          const Matrix br = linalg::bracket(x, algebra.element(lb.basis.col(j)));
          RealVector c = algebra.coordinates(br);
          if (target) c -= target->basis * (target->basis.transpose() * c);
          worst = std::max(worst, c.norm());
        }
      }
    }
  }
  return worst;
}

}  // namespace mmtk
