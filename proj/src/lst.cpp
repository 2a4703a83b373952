#include "mmtk/lst.hpp"

#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mmtk {

namespace {

constexpr double kGradeMatch = 1e-7;
constexpr double kSolveCondition = 1e-12;

Vector fix_phase(const Vector& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v * (std::abs(v[k]) / v[k]);
}

Matrix n_matrix(const LstChart& chart, const RealVector& coords) {
  Matrix n = Matrix::Zero(chart.rho_beta.rows(), chart.rho_beta.cols());
  for (int i = 0; i < chart.n_dim(); ++i) n += coords[i] * chart.n_basis[i];
  return n;
}

Vector u_vector(const LstChart& chart, const RealVector& u) {
  Vector out = Vector::Zero(chart.w0.size());
  for (Eigen::Index j = 0; j < chart.u_basis.cols(); ++j) {
    out += Complex(u[2 * j], u[2 * j + 1]) * chart.u_basis.col(j);
  }
  return out;
}

// Real frame of F restricted to the graded levels of W, split per level.
void add_graded_f_dirs(LstChart& chart, double tol) {
  const double top = chart.levels.front().value;
  for (int l = 1; l < static_cast<int>(chart.levels.size()); ++l) {
    const RealMatrix frame = linalg::real_frame(chart.levels[l].basis);
    std::vector<Vector> hits;
    for (int i = 0; i < chart.n_dim(); ++i) {
      if (std::abs(top + chart.n_grades[i] - chart.levels[l].value) <= kGradeMatch) {
        hits.push_back(chart.orbit_dirs.col(i));
      }
    }
    RealMatrix cols(frame.rows(), static_cast<Eigen::Index>(hits.size()));
    for (std::size_t j = 0; j < hits.size(); ++j) cols.col(static_cast<Eigen::Index>(j)) = linalg::to_real(hits[j]);
    const RealMatrix comp = linalg::real_complement(frame, cols, tol);
    for (Eigen::Index j = 0; j < comp.cols(); ++j) {
      chart.f_dirs.push_back(linalg::from_real(comp.col(j)));
      chart.f_levels.push_back(l);
    }
  }
}

LstChart chart_on(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x,
                  const Subspace& w) {
  const Tolerances& tol = spec.tolerances();
  if (grading.is_zero()) {
    throw Error(ErrorCode::DegenerateOrbitMap, "beta = 0: the orbit map of the unipotent radical is degenerate");
  }
  const Subspace top = x_beta_max(spec, grading, w);
  const Vector& v = x.vector();
  const Vector in_top = top.basis * (top.basis.adjoint() * v);
  if ((v - in_top).norm() > tol.fixed) {
    throw Error(ErrorCode::NotMaxPoint, "base point is not in the maximal fixed component");
  }
  LstChart chart;
  chart.base_point = x;
  chart.w0 = fix_phase(in_top.normalized());
  chart.beta = grading.beta;
  chart.rho_beta = grading.rho_beta;
  chart.w = w;
  chart.complement = Subspace{Matrix(spec.dim_v(), 0)};
  chart.levels = w_levels(grading, w, tol.cluster_gap);
  chart.n_basis = grading.r_minus_elements;
  chart.n_grades = grading.r_minus_grades;
  chart.nilpotency = std::max<int>(1, static_cast<int>(grading.v_levels.size()));

  chart.orbit_dirs.resize(spec.dim_v(), chart.n_dim());
  for (int i = 0; i < chart.n_dim(); ++i) chart.orbit_dirs.col(i) = chart.n_basis[i] * chart.w0;
  if (chart.n_dim() > 0) {
    const double smin = smallest_singular_value(orbit_map(chart.n_basis, ProjectivePoint(chart.w0)));
    if (smin < tol.orbit_rank) {
      std::ostringstream msg;
      msg << "orbit map of the unipotent radical has smallest singular value " << smin;
      throw Error(ErrorCode::DegenerateOrbitMap, msg.str());
    }
  }

  const Vector coeff = top.basis.adjoint() * chart.w0;
  Matrix cm(coeff.size(), 1);
  cm.col(0) = coeff;
  chart.u_basis = top.basis * linalg::complex_complement(cm);
  add_graded_f_dirs(chart, 1e-10);
  return chart;
}

}  // namespace

UnipotentElement make_unipotent(const LstChart& chart, const RealVector& n_coords) {
  UnipotentElement e;
  e.n = n_matrix(chart, n_coords);
  e.g = linalg::nilpotent_exp(e.n, chart.nilpotency);
  return e;
}

RealVector unipotent_coordinates(const LstChart& chart, const Matrix& g) {
  const Matrix log = linalg::unipotent_log(g, chart.nilpotency);
  RealVector c(chart.n_dim());
  for (int i = 0; i < chart.n_dim(); ++i) c[i] = linalg::trace_inner(chart.n_basis[i], log);
  return c;
}

LstChart build_chart(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x) {
  return chart_on(spec, grading, x, Subspace::whole(spec.dim_v()));
}

LstChart build_chart(const RepresentationSpec& spec, const BetaGrading& grading, const ProjectivePoint& x,
                     const Subspace& w) {
  return chart_on(spec, grading, x, w);
}

Vector slice_vector(const LstChart& chart, const RealVector& f, const RealVector& u) {
  if (f.size() != chart.f_dim() || u.size() != chart.u_dim()) {
    throw Error(ErrorCode::PreconditionViolation, "chart coordinates have the wrong size");
  }
  Vector s = chart.w0 + u_vector(chart, u);
  for (int j = 0; j < chart.f_dim(); ++j) s += f[j] * chart.f_dirs[j];
  return s;
}

ProjectivePoint phi_forward(const LstChart& chart, const ChartCoordinates& c) {
  if (c.n.size() != chart.n_dim()) throw Error(ErrorCode::PreconditionViolation, "n-coordinates have the wrong size");
  return phi_forward(chart, make_unipotent(chart, c.n).g, c.f, c.u);
}

ProjectivePoint phi_forward(const LstChart& chart, const Matrix& g, const RealVector& f, const RealVector& u) {
  return ProjectivePoint(g * slice_vector(chart, f, u));
}

ChartCoordinates phi_inverse(const LstChart& chart, const ProjectivePoint& z) {
  const Vector& v = z.vector();
  const Complex lead = chart.w0.dot(v);
  if (std::abs(lead) < 1e-10) {
    throw Error(ErrorCode::OutsideCell, "point has vanishing top coefficient");
  }
  const Vector y = v / lead;
  const Vector y_w = chart.w.basis * (chart.w.basis.adjoint() * y);
  Vector y_c = y - y_w;
  if (chart.complement.dim() == 0) {
    if (y_c.norm() > 1e-8 * y.norm()) throw Error(ErrorCode::OutsideCell, "point does not lie in P(W)");
  } else {
    y_c = chart.complement.basis * (chart.complement.basis.adjoint() * y_c);
  }

  ChartCoordinates out;
  out.n = RealVector::Zero(chart.n_dim());
  out.f = RealVector::Zero(chart.f_dim());
  out.u.resize(chart.u_dim());
  const Vector uc = chart.u_basis.adjoint() * y;
  for (Eigen::Index j = 0; j < uc.size(); ++j) {
    out.u[2 * j] = uc[j].real();
    out.u[2 * j + 1] = uc[j].imag();
  }
  const Vector base = chart.w0 + u_vector(chart, out.u);
  const double top = chart.levels.front().value;

  // Level by level, the new n-block enters linearly through ρ(n_i)·base and
  // the level's F block directly; everything else is already known.
  for (int l = 1; l < static_cast<int>(chart.levels.size()); ++l) {
    const Matrix& lb = chart.levels[l].basis;
    const RealMatrix frame = linalg::real_frame(lb);
    std::vector<int> n_idx;
    for (int i = 0; i < chart.n_dim(); ++i) {
      if (std::abs(top + chart.n_grades[i] - chart.levels[l].value) <= kGradeMatch) n_idx.push_back(i);
    }
    std::vector<int> f_idx;
    for (int j = 0; j < chart.f_dim(); ++j) {
      if (chart.f_levels[j] == l) f_idx.push_back(j);
    }
    const Eigen::Index unknowns = static_cast<Eigen::Index>(n_idx.size() + f_idx.size());
    if (unknowns != frame.cols()) {
      throw Error(ErrorCode::SolveSingular, "level system is not square");
    }
    const Vector predicted = make_unipotent(chart, out.n).g * slice_vector(chart, out.f, out.u);
    const RealVector rhs = frame.transpose() * linalg::to_real(y_w - predicted);
    RealMatrix a(frame.cols(), unknowns);
    Eigen::Index col = 0;
    for (int i : n_idx) a.col(col++) = frame.transpose() * linalg::to_real(chart.n_basis[i] * base);
    for (int j : f_idx) a.col(col++) = frame.transpose() * linalg::to_real(chart.f_dirs[j]);
    Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector s = svd.singularValues();
    if (s.size() > 0 && s[s.size() - 1] < kSolveCondition * std::max(1.0, s[0])) {
      throw Error(ErrorCode::SolveSingular, "level " + std::to_string(l) + " system lost rank");
    }
    const RealVector sol = svd.solve(rhs);
    col = 0;
    for (int i : n_idx) out.n[i] = sol[col++];
    for (int j : f_idx) out.f[j] = sol[col++];
  }

  if (chart.complement.dim() > 0) {
    const Vector back = make_unipotent(chart, -out.n).g * y_c;
    for (int j = 0; j < chart.f_dim(); ++j) {
      if (chart.f_levels[j] < 0) out.f[j] = chart.f_dirs[j].dot(back).real();
    }
  }
  return out;
}

std::vector<Matrix> commutant_basis(const RepresentationSpec& spec, const Subspace& w, double tol) {
  const Eigen::Index k = w.dim();
  if (k == 0) return {};
  // vec(A X − X A) = (I ⊗ A − Aᵀ ⊗ I) vec(X); the commutant is the common
  // kernel, read off the Gram matrix Σ Kᴴ K.
  Matrix gram = Matrix::Zero(k * k, k * k);
  const Matrix id = Matrix::Identity(k, k);
  for (const Matrix& e : spec.algebra().elements) {
    const Matrix a = w.basis.adjoint() * e * w.basis;
    Matrix block(k * k, k * k);
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = 0; j < k; ++j) {
        block.block(i * k, j * k, k, k) = (i == j ? a : Matrix::Zero(k, k)) - a(j, i) * id;
      }
    }
    gram += block.adjoint() * block;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const RealVector lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  std::vector<Matrix> out;
  for (Eigen::Index c = 0; c < lambda.size(); ++c) {
    if (lambda[c] > tol * scale) continue;
    out.push_back(Eigen::Map<const Matrix>(eig.eigenvectors().col(c).data(), k, k));
  }
  return out;
}

int commutant_dimension(const RepresentationSpec& spec, const Subspace& w, double tol) {
  return static_cast<int>(commutant_basis(spec, w, tol).size());
}

LstChart blv_chart(const RepresentationSpec& spec, const BetaGrading& grading, const Subspace& w,
                   const Subspace& complement) {
  const Tolerances& tol = spec.tolerances();
  if (w.dim() == 0) throw Error(ErrorCode::PreconditionViolation, "W is empty");
  if (complement.dim() > 0) {
    if ((w.basis.adjoint() * complement.basis).norm() > tol.invariance) {
      throw Error(ErrorCode::PreconditionViolation, "W and its complement are not orthogonal");
    }
    if (invariance_residual(spec, complement) > tol.invariance) {
      throw Error(ErrorCode::NotInvariant, "complement is not invariant");
    }
  }
  if (invariance_residual(spec, w) > tol.invariance) throw Error(ErrorCode::NotInvariant, "W is not invariant");
  const int commutant = commutant_dimension(spec, w);
  if (commutant != 1) {
    throw Error(ErrorCode::NotIrreducible,
                "W has a commutant of dimension " + std::to_string(commutant) + ", so it is reducible");
  }
  const Subspace top = x_beta_max(spec, grading, w);
  LstChart chart = chart_on(spec, grading, ProjectivePoint(top.basis.col(0)), w);
  chart.complement = complement;
  const RealMatrix frame = linalg::real_frame(complement.basis);
  for (Eigen::Index j = 0; j < frame.cols(); ++j) {
    chart.f_dirs.push_back(linalg::from_real(frame.col(j)));
    chart.f_levels.push_back(-1);
  }
  return chart;
}

std::pair<RealVector, RealVector> quotient_project(const LstChart& chart, const ProjectivePoint& z) {
  ChartCoordinates c = phi_inverse(chart, z);
  return {std::move(c.f), std::move(c.u)};
}

ChartCoordinates random_coordinates(const LstChart& chart, std::uint64_t seed, double radius) {
  Sampler s(seed);
  return ChartCoordinates{s.uniform_box(chart.n_dim(), radius), s.uniform_box(chart.f_dim(), radius),
                          s.uniform_box(chart.u_dim(), radius)};
}

VerificationReport verify_freeness(const LstChart& chart, int samples, std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "freeness";
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = 1e-8;
  if (chart.n_dim() == 0) {
    rep.extras["vacuous"] = 1.0;
    return rep;
  }
  Sampler s(seed);
  double min_sep = std::numeric_limits<double>::infinity();
  double max_escape = 0.0;
  for (int k = 0; k < samples; ++k) {
    const ChartCoordinates c{s.uniform_box(chart.n_dim(), 2.0), s.uniform_box(chart.f_dim(), 2.0),
                             s.uniform_box(chart.u_dim(), 2.0)};
    const ProjectivePoint z = phi_forward(chart, c);
    RealVector n = s.uniform_box(chart.n_dim(), 2.0);
    while (n.norm() <= 1e-3) n = s.uniform_box(chart.n_dim(), 2.0);
    const ProjectivePoint moved = act(make_unipotent(chart, n).g, z);
    const double sep = moved.distance(z);
    min_sep = std::min(min_sep, sep);
    if (!(sep > rep.threshold)) {
      rep.violations.push_back("sample " + std::to_string(k) + ": g.z = z with |n| = " + std::to_string(n.norm()));
    }
    rep.max_error = std::max(rep.max_error, std::max(0.0, rep.threshold - sep));

    // Bounded-escape proxy: along g_t = exp(t n̂), t → ∞, the orbit point must
    // stay inside the cell and leave every bounded coordinate box.
    const RealVector dir = n / n.norm();
    bool escaped = false;
    for (int j = 0; j <= 12 && !escaped; ++j) {
      const double t = std::ldexp(1.0, j);
      try {
        const ChartCoordinates far = phi_inverse(chart, act(make_unipotent(chart, t * dir).g, z));
        const double reach = far.n.norm();
        max_escape = std::max(max_escape, reach);
        if (reach > 100.0) escaped = true;
      } catch (const Error& e) {
        rep.violations.push_back("sample " + std::to_string(k) + ": orbit point left the cell (" + e.what() + ")");
        escaped = true;
      }
    }
    if (!escaped) rep.violations.push_back("sample " + std::to_string(k) + ": orbit stayed in a bounded box");
  }
  rep.extras["min_separation"] = min_sep;
  rep.extras["max_escape_radius"] = max_escape;
  return rep;
}

std::vector<Matrix> ineffectivity_algebra(const BetaGrading& grading, const LstChart& chart, std::uint64_t seed,
                                          double tol) {
  const auto& zero = grading.g_zero_elements;
  if (zero.empty()) return {};
  Matrix top(chart.w0.size(), 1 + chart.u_basis.cols());
  top.col(0) = chart.w0;
  if (chart.u_basis.cols() > 0) top.rightCols(chart.u_basis.cols()) = chart.u_basis;
  Sampler s(seed);
  std::vector<RealMatrix> blocks{orbit_map(zero, ProjectivePoint(chart.w0))};
  if (top.cols() > 1) {
    for (int k = 0; k < 4; ++k) blocks.push_back(orbit_map(zero, s.projective_point_in(top)));
  }
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  RealMatrix m(std::max<Eigen::Index>(rows, static_cast<Eigen::Index>(zero.size())), zero.size());
  m.setZero();
  rows = 0;
  for (const auto& b : blocks) {
    m.middleRows(rows, b.rows()) = b;
    rows += b.rows();
  }
  Eigen::JacobiSVD<RealMatrix> svd(m, Eigen::ComputeFullV);
  const RealVector sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  std::vector<Matrix> out;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j < sv.size() && sv[j] > tol * scale) continue;
    Matrix x = Matrix::Zero(chart.w0.size(), chart.w0.size());
    for (std::size_t i = 0; i < zero.size(); ++i) x += svd.matrixV()(static_cast<Eigen::Index>(i), j) * zero[i];
    out.push_back(x);
  }
  return out;
}

VerificationReport equivariance_check(const BetaGrading& grading, const LstChart& chart, int samples,
                                      std::uint64_t seed) {
  VerificationReport rep;
  rep.check = "equivariance";
  rep.samples = samples;
  rep.seed = seed;
  rep.threshold = 1e-7;
  const std::vector<Matrix> ineff = ineffectivity_algebra(grading, chart, seed);
  rep.extras["ineffectivity_dim"] = static_cast<double>(ineff.size());
  Sampler s(seed + 1);
  const Eigen::Index dim = chart.w0.size();
  for (int k = 0; k < samples; ++k) {
    const Matrix r = make_unipotent(chart, s.uniform_box(chart.n_dim(), 1.0)).g;
    Matrix xi = Matrix::Zero(dim, dim);
    for (const Matrix& e : ineff) xi += s.uniform(-1.0, 1.0) * e;
    const Matrix h = linalg::expm(xi);
    const Matrix h_inv = linalg::expm(-xi);
    const ChartCoordinates c{s.uniform_box(chart.n_dim(), 2.0), s.uniform_box(chart.f_dim(), 1.0),
                             s.uniform_box(chart.u_dim(), 1.0)};
    const Matrix g = make_unipotent(chart, c.n).g;

    // h·v: isotropy action on F, normalized by the scalar on the top line.
    const Complex chi = chart.w0.dot(h * chart.w0);
    Vector v = Vector::Zero(dim);
    for (int j = 0; j < chart.f_dim(); ++j) v += c.f[j] * chart.f_dirs[j];
    const Vector hv = h * v / chi;
    RealVector hf(chart.f_dim());
    Vector rebuilt = Vector::Zero(dim);
    for (int j = 0; j < chart.f_dim(); ++j) {
      hf[j] = chart.f_dirs[j].dot(hv).real();
      rebuilt += hf[j] * chart.f_dirs[j];
    }
    const double split_err = (hv - rebuilt).norm();

    const Matrix conj = r * h * g * h_inv;
    const RealVector n_lhs = unipotent_coordinates(chart, conj);
    const double group_err = (make_unipotent(chart, n_lhs).g - conj).norm();
    const ProjectivePoint lhs = phi_forward(chart, ChartCoordinates{n_lhs, hf, c.u});
    const ProjectivePoint rhs = act(r * h, phi_forward(chart, c));
    const double err = std::max({lhs.distance(rhs), split_err, group_err});
    rep.max_error = std::max(rep.max_error, err);
    if (!(err < rep.threshold)) {
      rep.violations.push_back("sample " + std::to_string(k) + ": error " + std::to_string(err));
    }
  }
  return rep;
}

}  // namespace mmtk
