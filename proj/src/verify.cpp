#include "mmtk/verify.hpp"

#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace mmtk {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr int kShards = 8;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

VerificationReport new_report(const std::string& check, int samples, std::uint64_t seed, double threshold) {
  VerificationReport r;
  r.check = check;
  r.samples = samples;
  r.seed = seed;
  r.threshold = threshold;
  return r;
}

void record(VerificationReport& rep, double err, const std::string& what) {
  rep.max_error = std::max(rep.max_error, err);
  if (!(err < rep.threshold)) rep.violations.push_back(what + ": error " + fmt(err));
}

void set_max(VerificationReport& rep, const std::string& key, double v) {
  auto it = rep.extras.find(key);
  rep.extras[key] = it == rep.extras.end() ? v : std::max(it->second, v);
}

void set_min(VerificationReport& rep, const std::string& key, double v) {
  auto it = rep.extras.find(key);
  rep.extras[key] = it == rep.extras.end() ? v : std::min(it->second, v);
}

RealVector unit_beta(Sampler& s, int dim) {
  RealVector b = s.gaussian(dim);
  while (b.norm() < 1e-6) b = s.gaussian(dim);
  return b / b.norm();
}

Matrix random_algebra_element(const std::vector<Matrix>& basis, Sampler& s, double radius, Eigen::Index n) {
  Matrix x = Matrix::Zero(n, n);
  for (const Matrix& e : basis) x += s.uniform(-radius, radius) * e;
  return x;
}

VerificationReport unavailable(const std::string& check, int samples, std::uint64_t seed, const std::string& why) {
  VerificationReport r = new_report(check, samples, seed, 0.0);
  r.violations.push_back("not evaluated: " + why);
  return r;
}

// Exact reduced row echelon form; returns rank.
int rational_rref(std::vector<std::vector<Rational>>& a, int cols) {
  int row = 0;
  const int rows = static_cast<int>(a.size());
  for (int c = 0; c < cols && row < rows; ++c) {
    int piv = -1;
    for (int i = row; i < rows; ++i) {
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(a[row], a[piv]);
    const Rational p = a[row][c];
    for (auto& x : a[row]) x /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == row || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[row][j];
    }
    ++row;
  }
  return row;
}

// Does p lie in the simplex spanned by the chosen points (unique barycentric solution, all ≥ 0)?
bool in_simplex(const std::vector<std::vector<long long>>& pts, const std::vector<int>& subset,
                const std::vector<long long>& p) {
  const int d = static_cast<int>(p.size());
  const int m = static_cast<int>(subset.size());
  std::vector<std::vector<Rational>> a(d + 1, std::vector<Rational>(m + 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < m; ++j) a[i][j] = pts[subset[j]][i];
    a[i][m] = p[i];
  }
  for (int j = 0; j < m; ++j) a[d][j] = 1;
  a[d][m] = 1;
  const int rank = rational_rref(a, m);
  if (rank < m) return false;  // affinely dependent subset; a smaller one covers it
  for (int i = rank; i <= d; ++i) {
    if (a[i][m] != 0) return false;  // inconsistent
  }
  for (int i = 0; i < m; ++i) {
    if (a[i][m] < 0) return false;
  }
  return true;
}

bool covered(const std::vector<std::vector<long long>>& pts, const std::vector<int>& others,
             const std::vector<long long>& p) {
  const int d = static_cast<int>(p.size());
  const int total = static_cast<int>(others.size());
  for (int m = 1; m <= std::min(d + 1, total); ++m) {
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    while (true) {
      std::vector<int> subset(m);
      for (int i = 0; i < m; ++i) subset[i] = others[idx[i]];
      if (in_simplex(pts, subset, p)) return true;
      int k = m - 1;
      while (k >= 0 && idx[k] == total - m + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int i = k + 1; i < m; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return false;
}

// Orthonormal basis of the direction space of the affine hull of the vertices.
RealMatrix hull_directions(const Polytope& poly) {
  const int r = poly.ambient_dim();
  if (poly.vertices.size() < 2) return RealMatrix(r, 0);
  RealMatrix d(r, static_cast<Eigen::Index>(poly.vertices.size()) - 1);
  for (std::size_t i = 1; i < poly.vertices.size(); ++i) {
    d.col(static_cast<Eigen::Index>(i) - 1) = poly.points[poly.vertices[i]] - poly.points[poly.vertices[0]];
  }
  Eigen::JacobiSVD<RealMatrix> svd(d, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-9) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

}  // namespace

std::vector<int> oracle_extreme_points(const std::vector<std::vector<long long>>& points) {
  std::vector<int> distinct;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (std::none_of(distinct.begin(), distinct.end(), [&](int j) { return points[j] == points[i]; })) {
      distinct.push_back(i);
    }
  }
  if (distinct.size() == 1) return distinct;
  std::vector<int> out;
  for (int i : distinct) {
    std::vector<int> others;
    for (int j : distinct) {
      if (j != i) others.push_back(j);
    }
    if (!covered(points, others, points[i])) out.push_back(i);
  }
  return out;
}

VerificationReport run_sharded(const std::string& check, int samples, std::uint64_t seed,
                               const std::function<VerificationReport(int, std::uint64_t)>& body, int shards) {
  std::vector<VerificationReport> parts(static_cast<std::size_t>(shards));
  std::vector<std::thread> workers;
  for (int s = 0; s < shards; ++s) {
    const int count = samples / shards + (s < samples % shards ? 1 : 0);
    workers.emplace_back([&parts, &body, s, count, seed] {
      parts[static_cast<std::size_t>(s)] = body(count, seed + static_cast<std::uint64_t>(s));
    });
  }
  for (auto& w : workers) w.join();
  VerificationReport out = new_report(check, samples, seed, parts.front().threshold);
  for (const auto& p : parts) {
    out.max_error = std::max(out.max_error, p.max_error);
    out.violations.insert(out.violations.end(), p.violations.begin(), p.violations.end());
    for (const auto& [key, value] : p.extras) {
      if (key.rfind("min_", 0) == 0) {
        set_min(out, key, value);
      } else {
        set_max(out, key, value);
      }
    }
  }
  return out;
}

Vector finite_difference_gradient(const RepresentationSpec& spec, const ProjectivePoint& x, const RealVector& beta,
                                  double h) {
  Vector grad = Vector::Zero(x.dim());
  for (const Vector& e : tangent_frame(x)) {
    const double plus = moment_component(spec, move_along(x, e, h), beta);
    const double minus = moment_component(spec, move_along(x, e, -h), beta);
    grad += ((plus - minus) / (2.0 * h) / fs_metric(e, e)) * e;
  }
  return grad;
}

int auto_vertex(const Polytope& poly) {
  int best = poly.vertices.front();
  for (int v : poly.vertices) {
    const RealVector& a = poly.points[v];
    const RealVector& b = poly.points[best];
    if (std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size())) best = v;
  }
  return best;
}

std::vector<Subspace> invariant_decomposition(const RepresentationSpec& spec, std::uint64_t seed) {
  const Subspace whole = Subspace::whole(spec.dim_v());
  const std::vector<Matrix> comm = commutant_basis(spec, whole);
  Sampler s(seed);
  Matrix h = Matrix::Zero(spec.dim_v(), spec.dim_v());
  const Complex i(0.0, 1.0);
  for (const Matrix& x : comm) {
    h += s.normal() * 0.5 * (x + x.adjoint());
    h += s.normal() * 0.5 * i * (x - x.adjoint());
  }
  std::vector<Subspace> out;
  for (const auto& level : linalg::hermitian_levels(h, 1e-6)) out.push_back(Subspace{level.basis});
  return out;
}

Context make_context(const RepresentationSpec& spec, const RealVector& beta, const std::optional<Subspace>& w) {
  Context ctx;
  ctx.spec = &spec;
  ctx.poly = momentum_polytope(spec);
  ctx.beta = beta;
  ctx.grading = build_grading(spec, beta);
  ctx.components = invariant_decomposition(spec);
  if (w) {
    if (invariance_residual(spec, *w) > spec.tolerances().invariance) {
      throw Error(ErrorCode::NotInvariant, "W is not invariant under the algebra");
    }
    ctx.w = *w;
  } else {
    const Vector top = x_beta_max(spec, ctx.grading).basis.col(0);
    double best = -1.0;
    for (const Subspace& c : ctx.components) {
      const double overlap = (c.basis.adjoint() * top).norm();
      if (overlap > best) {
        best = overlap;
        ctx.w = c;
      }
    }
  }
  ctx.complement = Subspace{linalg::complex_complement(ctx.w.basis)};
  ctx.base_point = ProjectivePoint(x_beta_max(spec, ctx.grading, ctx.w).basis.col(0));
  try {
    ctx.chart = build_chart(spec, ctx.grading, ctx.base_point, ctx.w);
  } catch (const Error& e) {
    ctx.chart_error = e.what();
  }
  return ctx;
}

Context make_context(const RepresentationSpec& spec) {
  const Polytope poly = momentum_polytope(spec);
  const int vertex = auto_vertex(poly);
  const RealVector beta_torus = exposing_vector(poly, vertex);
  Context ctx = make_context(spec, spec.beta_from_torus(beta_torus));
  ctx.vertex = vertex;
  ctx.beta_torus = beta_torus;
  return ctx;
}

VerificationReport check_algebra(const RepresentationSpec& spec) {
  const AlgebraBasis& alg = spec.algebra();
  const int d = alg.dim();
  VerificationReport rep = new_report("algebra", d, 0, 1e-9);
  double gram = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      gram = std::max(gram, std::abs(linalg::trace_inner(alg.elements[i], alg.elements[j]) - (i == j ? 1.0 : 0.0)));
    }
  }
  rep.extras["gram_error"] = gram;
  if (!(gram < 1e-10)) rep.violations.push_back("trace-form Gram matrix differs from identity by " + fmt(gram));
  double closure = 0.0;
  double jacobi = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      closure = std::max(closure, alg.residual(linalg::bracket(alg.elements[i], alg.elements[j])));
      for (int k = 0; k < d; ++k) {
        const Matrix& a = alg.elements[i];
        const Matrix& b = alg.elements[j];
        const Matrix& c = alg.elements[k];
        const Matrix jac = linalg::bracket(a, linalg::bracket(b, c)) + linalg::bracket(b, linalg::bracket(c, a)) +
                           linalg::bracket(c, linalg::bracket(a, b));
        jacobi = std::max(jacobi, jac.norm());
      }
    }
  }
  rep.extras["closure_residual"] = closure;
  rep.extras["jacobi_residual"] = jacobi;
  record(rep, closure, "bracket closure");
  record(rep, jacobi, "Jacobi identity");
  const AlgebraBasis again = lie_closure(alg.elements, ClosureOptions{spec.tolerances().closure, d + 1});
  double idem = again.dim() == d ? 0.0 : 1.0;
  for (const Matrix& e : again.elements) idem = std::max(idem, alg.residual(e));
  rep.extras["idempotence_error"] = idem;
  record(rep, idem, "closure idempotence");
  return rep;
}

VerificationReport check_weights(const RepresentationSpec& spec) {
  VerificationReport rep = new_report("weights", 1, 0, 1e-9);
  const auto spaces = weight_decomposition(spec);
  Eigen::Index total = 0;
  double ortho = 0.0;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    total += spaces[i].basis.cols();
    for (std::size_t j = 0; j < i; ++j) ortho = std::max(ortho, (spaces[i].basis.adjoint() * spaces[j].basis).norm());
  }
  if (total != spec.dim_v()) {
    rep.violations.push_back("weight space dimensions sum to " + std::to_string(total) + ", not " +
                             std::to_string(spec.dim_v()));
  }
  rep.extras["weight_count"] = static_cast<double>(spaces.size());
  record(rep, ortho, "weight space orthogonality");
  return rep;
}

VerificationReport check_gradient(const RepresentationSpec& spec, int samples, std::uint64_t seed) {
  return run_sharded("gradient", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("gradient", count, s, 1e-8);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const ProjectivePoint x = rng.projective_point(spec.dim_v());
      const RealVector beta = unit_beta(rng, spec.p_dim());
      const Vector field = vector_field(spec, x, beta).t;
      const double fs = (fs_gradient(spec, x, beta).t - field).norm();
      const double fd = (finite_difference_gradient(spec, x, beta) - field).norm();
      set_max(rep, "max_fs_error", fs);
      set_max(rep, "max_fd_error", fd);
      record(rep, std::max(fs, fd), "sample " + std::to_string(k));
    }
    return rep;
  });
}

VerificationReport check_monotony(const RepresentationSpec& spec, int trajectories, std::uint64_t seed, int times) {
  return run_sharded("monotony", trajectories, seed, [&, times](int count, std::uint64_t s) {
    VerificationReport rep = new_report("monotony", count, s, 1e-12);
    Sampler rng(s);
    const double t0 = -2.0;
    const double dt = 4.0 / (times - 1);
    for (int k = 0; k < count; ++k) {
      const ProjectivePoint x = rng.projective_point(spec.dim_v());
      const RealVector beta = unit_beta(rng, spec.p_dim());
      if (vector_field(spec, x, beta).t.norm() <= 1e-6) {
        set_max(rep, "skipped_fixed", 1.0);
        continue;
      }
      const Matrix rho = spec.rho_p(beta);
      double prev = moment_component(spec, flow_point(rho, x, t0), beta);
      for (int i = 1; i < times; ++i) {
        const ProjectivePoint y_prev = flow_point(rho, x, t0 + (i - 1) * dt);
        const double cur = moment_component(spec, flow_point(rho, x, t0 + i * dt), beta);
        const double step = cur - prev;
        // Strictly increasing wherever the increment is resolvable in double
        // precision; otherwise nondecreasing up to the slack.
        const double speed = vector_field(spec, y_prev, beta).t.squaredNorm();
        const bool resolvable = 2.0 * speed * dt > 1e-10;
        const double deficit = std::max(0.0, -step);
        rep.max_error = std::max(rep.max_error, deficit);
        if (step < -rep.threshold || (resolvable && !(step > 0.0))) {
          rep.violations.push_back("trajectory " + std::to_string(k) + " at t = " + fmt(t0 + i * dt) +
                                   ": increment " + fmt(step));
        }
        prev = cur;
      }
    }
    return rep;
  });
}

VerificationReport check_moment_equivariance(const RepresentationSpec& spec, int samples, std::uint64_t seed) {
  std::vector<Matrix> k_basis;
  for (int i = 0; i < spec.k_dim(); ++i) k_basis.push_back(spec.k_element(i));
  return run_sharded("moment_equivariance", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("moment_equivariance", count, s, 1e-8);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const ProjectivePoint x = rng.projective_point(spec.dim_v());
      const Matrix kmat = linalg::expm(random_algebra_element(k_basis, rng, 1.0, spec.dim_v()));
      const RealVector lhs = moment_value(spec, act(kmat, x));
      const RealVector rhs = adjoint_on_p(spec, kmat) * moment_value(spec, x);
      record(rep, (lhs - rhs).norm(), "sample " + std::to_string(k));
    }
    return rep;
  });
}

VerificationReport check_image_containment(const RepresentationSpec& spec, const Polytope& poly, int samples,
                                           std::uint64_t seed) {
  const RealMatrix dirs = hull_directions(poly);
  const RealVector origin = poly.points[poly.vertices.front()];
  return run_sharded("image_containment", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("image_containment", count, s, 1e-9);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const RealVector mu = moment_torus(spec, rng.projective_point(spec.dim_v()));
      double excess = 0.0;
      for (const Facet& f : poly.facets) excess = std::max(excess, f.normal.dot(mu) - f.offset);
      const RealVector off = (mu - origin) - dirs * (dirs.transpose() * (mu - origin));
      excess = std::max(excess, off.norm());
      record(rep, excess, "sample " + std::to_string(k));
    }
    return rep;
  });
}

VerificationReport check_polytope_oracle(int instances, std::uint64_t seed) {
  return run_sharded("polytope_oracle", instances, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("polytope_oracle", count, s, 1e-9);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const int dim = 1 + rng.index(3);
      const int n = 1 + rng.index(12);
      std::vector<std::vector<long long>> ints;
      for (int i = 0; i < n; ++i) {
        if (i > 0 && rng.index(10) == 0) {
          ints.push_back(ints[rng.index(i)]);
          continue;
        }
        std::vector<long long> p(dim);
        for (auto& c : p) c = rng.index(7) - 3;
        ints.push_back(p);
      }
      std::vector<RealVector> pts;
      std::vector<RealVector> scaled;
      for (const auto& p : ints) {
        RealVector v(dim);
        for (int c = 0; c < dim; ++c) v[c] = static_cast<double>(p[c]);
        pts.push_back(v);
        scaled.push_back(v / 3.0 + RealVector::Constant(dim, 0.1));
      }
      const std::vector<int> expected = oracle_extreme_points(ints);
      std::vector<int> exact = extreme_points(pts).indices;
      std::vector<int> floating = extreme_points(scaled).indices;
      std::sort(exact.begin(), exact.end());
      std::sort(floating.begin(), floating.end());
      const std::string tag = "instance " + std::to_string(k) + " (d=" + std::to_string(dim) +
                              ", n=" + std::to_string(n) + ")";
      if (exact != expected) rep.violations.push_back(tag + ": exact extreme points disagree with the oracle");
      if (floating != expected) rep.violations.push_back(tag + ": floating extreme points disagree with the oracle");
      const Polytope poly = build_polytope(pts);
      for (const Facet& f : poly.facets) {
        for (int i = 0; i < n; ++i) {
          const double slack = f.normal.dot(pts[i]) - f.offset;
          const bool incident = std::find(f.vertices.begin(), f.vertices.end(), i) != f.vertices.end();
          record(rep, incident ? std::abs(slack) : std::max(0.0, slack), tag + " facet inequality");
        }
      }
    }
    return rep;
  });
}

VerificationReport check_exposure(const Polytope& poly, int samples, std::uint64_t seed) {
  VerificationReport rep = new_report("exposure", samples, seed, 0.0);
  Sampler rng(seed);
  const RealMatrix dirs = hull_directions(poly);
  const int r = poly.ambient_dim();
  for (int v : poly.vertices) {
    try {
      const RealVector beta = exposing_vector(poly, v);
      const FaceResult face = exposed_face(poly, beta);
      if (face.indices != std::vector<int>{v}) rep.violations.push_back("exposing vector of vertex " + std::to_string(v));
    } catch (const Error& e) {
      rep.violations.push_back(std::string("vertex ") + std::to_string(v) + ": " + e.what());
      continue;
    }
    const NormalCone cone = normal_cone(poly, v);
    for (int k = 0; k < samples && !cone.generators.empty(); ++k) {
      RealVector beta = RealVector::Zero(r);
      for (const RealVector& g : cone.generators) beta += rng.uniform(0.1, 1.0) * g;
      RealVector perp = rng.gaussian(r);
      perp -= dirs * (dirs.transpose() * perp);
      beta += perp;
      const FaceResult face = exposed_face(poly, beta);
      if (face.indices != std::vector<int>{v}) {
        rep.violations.push_back("interior cone vector fails to expose vertex " + std::to_string(v));
      }
    }
  }
  return rep;
}

VerificationReport check_grading(const RepresentationSpec& spec, int samples, std::uint64_t seed) {
  const RealMatrix theta = theta_on_algebra(spec.algebra());
  return run_sharded("grading", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("grading", count, s, 1e-9);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const RealVector beta = rng.gaussian(spec.p_dim());
      const BetaGrading g = build_grading(spec, beta);
      const std::string tag = "beta " + std::to_string(k);
      if (g.r_minus.cols() + g.g_zero.cols() + g.r_plus.cols() != spec.algebra().dim()) {
        rep.violations.push_back(tag + ": grading dimensions do not sum to dim g");
      }
      const double mult = bracket_multiplicativity_residual(spec, g);
      set_max(rep, "max_multiplicativity", mult);
      record(rep, mult, tag + " bracket multiplicativity");
      const double angle = linalg::subspace_gap(theta * g.r_minus, g.r_plus);
      set_max(rep, "max_theta_angle", angle);
      if (!(angle < 1e-8)) rep.violations.push_back(tag + ": theta(r_minus) != r_plus, angle " + fmt(angle));
    }
    return rep;
  });
}

VerificationReport check_bb_limits(const RepresentationSpec& spec, int samples, std::uint64_t seed) {
  return run_sharded("bb_limits", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("bb_limits", count, s, 1e-7);
    Sampler rng(s);
    const double drop = spec.tolerances().drop;
    for (int k = 0; k < count; ++k) {
      const RealVector beta = unit_beta(rng, spec.p_dim());
      const BetaGrading g = build_grading(spec, beta);
      const ProjectivePoint x = rng.projective_point(spec.dim_v());
      const std::string tag = "sample " + std::to_string(k);
      for (auto dir : {LimitDirection::Forward, LimitDirection::Backward}) {
        const ProjectivePoint lim = bb_limit(g, x, dir, drop);
        const double field = fundamental_field(lim, g.rho_beta).t.norm();
        set_max(rep, "max_limit_field", field);
        if (!(field < spec.tolerances().fixed)) rep.violations.push_back(tag + ": limit is not fixed");
      }
      const Matrix gz = linalg::expm(random_algebra_element(g.g_zero_elements, rng, 0.5, spec.dim_v()));
      const ProjectivePoint a = bb_limit(g, act(gz, x), LimitDirection::Forward, drop);
      const ProjectivePoint b = act(gz, bb_limit(g, x, LimitDirection::Forward, drop));
      record(rep, a.distance(b), tag + " G^beta-equivariance");
    }
    return rep;
  });
}

VerificationReport check_max_component(const Context& ctx, int samples, std::uint64_t seed) {
  const RepresentationSpec& spec = *ctx.spec;
  const RealVector sigma = spec.p_coordinates(torus_element(spec, ctx.poly.points[ctx.vertex]));
  const Subspace top = x_beta_max(spec, ctx.grading);
  const Matrix outside = linalg::complex_complement(top.basis);
  const std::vector<Matrix> pbeta = p_centralizer(ctx.grading);
  return run_sharded("max_component", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("max_component", count, s, 1e-8);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const int kind = k % 4;  // 0,1: in X^β_max; 2: offset ≥ 1e-2; 3: Haar point
      ProjectivePoint x;
      bool expected = kind < 2;
      if (expected) {
        x = rng.projective_point_in(top.basis);
      } else if (kind == 2 && outside.cols() > 0) {
        const Vector w = rng.projective_point_in(top.basis).vector();
        const Vector t = rng.projective_point_in(outside).vector();
        x = ProjectivePoint(w + rng.uniform(1e-2, 1.0) * t);
      } else {
        x = rng.projective_point(spec.dim_v());
        expected = outside.cols() == 0;
      }
      const std::string tag = "sample " + std::to_string(k);
      const bool in_fiber = (moment_value(spec, x) - sigma).norm() < 1e-7;
      const StratumRecord rec = classify_point(spec, ctx.grading, x);
      const bool in_max = rec.fixed && rec.in_beta_minus_max;
      if (in_fiber != expected || in_max != expected) {
        rep.violations.push_back(tag + ": membership mismatch (fiber " + std::to_string(in_fiber) + ", max " +
                                 std::to_string(in_max) + ", expected " + std::to_string(expected) + ")");
      }
      if (!expected) continue;
      double rplus = 0.0;
      for (const Matrix& xi : ctx.grading.r_plus_elements) rplus = std::max(rplus, fundamental_field(x, xi).t.norm());
      double pfield = 0.0;
      for (const Matrix& xi : pbeta) pfield = std::max(pfield, fundamental_field(x, xi).t.norm());
      set_max(rep, "max_rplus_field", rplus);
      set_max(rep, "max_pbeta_field", pfield);
      record(rep, rplus, tag + " r_plus kills X^beta_max");
      record(rep, pfield, tag + " p^beta kills X^beta_max");
      if (!ctx.grading.r_minus_elements.empty()) {
        const double smin = smallest_singular_value(orbit_map(ctx.grading.r_minus_elements, x));
        set_min(rep, "min_orbit_sigma", smin);
        if (!(smin > 1e-8)) rep.violations.push_back(tag + ": r_minus orbit map degenerate, sigma_min " + fmt(smin));
      }
    }
    return rep;
  });
}

VerificationReport check_chart_roundtrip(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("chart_roundtrip", samples, seed, ctx.chart_error);
  const LstChart& chart = *ctx.chart;
  VerificationReport out = run_sharded("chart_roundtrip", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("chart_roundtrip", count, s, 1e-9);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const std::string tag = "sample " + std::to_string(k);
      const ChartCoordinates c{rng.uniform_box(chart.n_dim(), 2.0), rng.uniform_box(chart.f_dim(), 2.0),
                               rng.uniform_box(chart.u_dim(), 2.0)};
      const ChartCoordinates back = phi_inverse(chart, phi_forward(chart, c));
      double box = 0.0;
      if (c.n.size()) box = std::max(box, (back.n - c.n).cwiseAbs().maxCoeff());
      if (c.f.size()) box = std::max(box, (back.f - c.f).cwiseAbs().maxCoeff());
      if (c.u.size()) box = std::max(box, (back.u - c.u).cwiseAbs().maxCoeff());
      set_max(rep, "max_box_error", box);
      record(rep, box, tag + " inverse after forward");
      const ProjectivePoint z = rng.projective_point_in(chart.w.basis);
      try {
        const double cell = phi_forward(chart, phi_inverse(chart, z)).distance(z);
        set_max(rep, "max_cell_error", cell);
        record(rep, cell, tag + " forward after inverse");
      } catch (const Error& e) {
        rep.violations.push_back(tag + ": " + e.what());
      }
    }
    return rep;
  });
  if (chart.n_dim() > 0) {
    out.extras["orbit_sigma_min"] = smallest_singular_value(orbit_map(chart.n_basis, chart.base_point));
    if (!(out.extras["orbit_sigma_min"] > 1e-8)) out.violations.push_back("orbit map rank deficient at the base point");
  }
  return out;
}

VerificationReport check_fibration(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("fibration", samples, seed, ctx.chart_error);
  const LstChart& chart = *ctx.chart;
  return run_sharded("fibration", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("fibration", count, s, 1e-9);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const ChartCoordinates c{rng.uniform_box(chart.n_dim(), 2.0), rng.uniform_box(chart.f_dim(), 2.0),
                               rng.uniform_box(chart.u_dim(), 2.0)};
      const ProjectivePoint lim = bb_limit(ctx.grading, phi_forward(chart, c), LimitDirection::Forward);
      const ProjectivePoint base(slice_vector(chart, RealVector::Zero(chart.f_dim()), c.u));
      record(rep, lim.distance(base), "sample " + std::to_string(k));
    }
    return rep;
  });
}

VerificationReport check_equivariance(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("equivariance", samples, seed, ctx.chart_error);
  return run_sharded("equivariance", samples, seed, [&](int count, std::uint64_t s) {
    return equivariance_check(ctx.grading, *ctx.chart, count, s);
  });
}

VerificationReport check_freeness(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("freeness", samples, seed, ctx.chart_error);
  return run_sharded("freeness", samples, seed,
                     [&](int count, std::uint64_t s) { return verify_freeness(*ctx.chart, count, s); });
}

VerificationReport check_quotient(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("quotient", samples, seed, ctx.chart_error);
  const LstChart& chart = *ctx.chart;
  return run_sharded("quotient", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("quotient", count, s, 1e-8);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const std::string tag = "sample " + std::to_string(k);
      const ChartCoordinates c{rng.uniform_box(chart.n_dim(), 2.0), rng.uniform_box(chart.f_dim(), 2.0),
                               rng.uniform_box(chart.u_dim(), 2.0)};
      const ProjectivePoint z = phi_forward(chart, c);
      const Matrix g = make_unipotent(chart, rng.uniform_box(chart.n_dim(), 2.0)).g;
      const auto [f0, u0] = quotient_project(chart, z);
      const auto [f1, u1] = quotient_project(chart, act(g, z));
      double inv = 0.0;
      if (f0.size()) inv = std::max(inv, (f1 - f0).cwiseAbs().maxCoeff());
      if (u0.size()) inv = std::max(inv, (u1 - u0).cwiseAbs().maxCoeff());
      set_max(rep, "max_invariance_error", inv);
      record(rep, inv, tag + " R-invariance");
      const ProjectivePoint base(slice_vector(chart, RealVector::Zero(chart.f_dim()), u0));
      const double fib = bb_limit(ctx.grading, z, LimitDirection::Forward).distance(base);
      set_max(rep, "max_base_error", fib);
      record(rep, fib, tag + " p o q = p^beta-");
    }
    return rep;
  });
}

VerificationReport check_blv(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("blv", samples, seed, ctx.chart_error);
  const RepresentationSpec& spec = *ctx.spec;
  const LstChart blv = blv_chart(spec, ctx.grading, ctx.w, ctx.complement);
  const LstChart& irreducible = *ctx.chart;
  const Subspace empty{Matrix(spec.dim_v(), 0)};
  const LstChart reduced = blv_chart(spec, ctx.grading, ctx.w, empty);
  VerificationReport out = run_sharded("blv", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("blv", count, s, 1e-9);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const std::string tag = "sample " + std::to_string(k);
      const ChartCoordinates c{rng.uniform_box(blv.n_dim(), 2.0), rng.uniform_box(blv.f_dim(), 2.0),
                               rng.uniform_box(blv.u_dim(), 2.0)};
      const ChartCoordinates back = phi_inverse(blv, phi_forward(blv, c));
      double box = 0.0;
      if (c.n.size()) box = std::max(box, (back.n - c.n).cwiseAbs().maxCoeff());
      if (c.f.size()) box = std::max(box, (back.f - c.f).cwiseAbs().maxCoeff());
      if (c.u.size()) box = std::max(box, (back.u - c.u).cwiseAbs().maxCoeff());
      record(rep, box, tag + " inverse after forward");
      const ProjectivePoint z = rng.projective_point(spec.dim_v());
      try {
        record(rep, phi_forward(blv, phi_inverse(blv, z)).distance(z), tag + " forward after inverse");
      } catch (const Error& e) {
        rep.violations.push_back(tag + ": " + e.what());
      }
      // With no complement the chart is the irreducible one.
      const ChartCoordinates ci{rng.uniform_box(irreducible.n_dim(), 2.0), rng.uniform_box(irreducible.f_dim(), 2.0),
                                rng.uniform_box(irreducible.u_dim(), 2.0)};
      const ProjectivePoint za = phi_forward(reduced, ci);
      const ProjectivePoint zb = phi_forward(irreducible, ci);
      double agree = za.distance(zb);
      const ChartCoordinates ca = phi_inverse(reduced, zb);
      const ChartCoordinates cb = phi_inverse(irreducible, zb);
      if (ca.n.size()) agree = std::max(agree, (ca.n - cb.n).cwiseAbs().maxCoeff());
      if (ca.f.size()) agree = std::max(agree, (ca.f - cb.f).cwiseAbs().maxCoeff());
      if (ca.u.size()) agree = std::max(agree, (ca.u - cb.u).cwiseAbs().maxCoeff());
      set_max(rep, "max_reduction_error", agree);
      if (!(agree < 1e-12)) rep.violations.push_back(tag + ": reduced chart differs by " + fmt(agree));
    }
    return rep;
  });
  out.extras["complement_dim"] = static_cast<double>(ctx.complement.dim());
  return out;
}

VerificationReport check_flow(const Context& ctx, int starts, std::uint64_t seed) {
  const RepresentationSpec& spec = *ctx.spec;
  VerificationReport rep = new_report("flow", starts, seed, 1e-6);
  Sampler rng(seed);
  std::vector<Trajectory> batch;
  for (int k = 0; k < starts; ++k) batch.push_back(flow_eta(spec, rng.projective_point(spec.dim_v())));
  int unconverged = 0;
  for (int k = 0; k < starts; ++k) {
    const auto& samples = batch[k].samples;
    if (!batch[k].converged) ++unconverged;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].eta < samples[i - 1].eta - 1e-12) {
        rep.violations.push_back("trajectory " + std::to_string(k) + ": eta decreased at step " + std::to_string(i));
        break;
      }
    }
  }
  const std::vector<int> maxi = batch_maximizers(batch);
  for (int k : maxi) {
    const CertificateReport cert = evaluate_certificate(spec, batch[k], ctx.poly);
    rep.max_error = std::max(rep.max_error, cert.vertex_error);
    if (!cert.passed) {
      rep.violations.push_back("trajectory " + std::to_string(k) + ": certificate clause (" + cert.failed_clause +
                               ") " + cert.message);
    }
  }
  if (maxi.empty()) rep.violations.push_back("no converged trajectory");
  rep.extras["maximizers"] = static_cast<double>(maxi.size());
  rep.extras["unconverged"] = static_cast<double>(unconverged);
  return rep;
}

VerificationReport check_cell_coverage(const Context& ctx, int samples, std::uint64_t seed) {
  if (!ctx.chart) return unavailable("cell_coverage", samples, seed, ctx.chart_error);
  const RepresentationSpec& spec = *ctx.spec;
  const Vector w0 = ctx.chart->w0;
  return run_sharded("cell_coverage", samples, seed, [&](int count, std::uint64_t s) {
    VerificationReport rep = new_report("cell_coverage", count, s, 5.0);
    Sampler rng(s);
    for (int k = 0; k < count; ++k) {
      const ProjectivePoint z = rng.projective_point_in(ctx.w.basis);
      int tries = 0;
      bool inside = false;
      while (!inside && tries < 6) {
        const Matrix g = linalg::expm(random_algebra_element(spec.algebra().elements, rng, 1.0, spec.dim_v()));
        const Vector gz = g * z.vector();
        inside = std::abs(w0.dot(gz)) / gz.norm() > 1e-10;
        ++tries;
      }
      rep.max_error = std::max(rep.max_error, static_cast<double>(tries - 1));
      if (!inside) rep.violations.push_back("sample " + std::to_string(k) + ": no translate reached the cell");
    }
    return rep;
  });
}

std::vector<VerificationReport> run_battery(const RepresentationSpec& spec, const BatteryOptions& options) {
  const int n = options.samples;
  const std::uint64_t seed = options.seed;
  std::vector<VerificationReport> out;
  out.push_back(check_algebra(spec));
  out.push_back(check_weights(spec));
  out.push_back(check_gradient(spec, n, seed));
  out.push_back(check_monotony(spec, std::max(1, n / 5), seed));
  out.push_back(check_moment_equivariance(spec, n, seed));
  Context ctx;
  try {
    ctx = make_context(spec);
  } catch (const Error& e) {
    out.push_back(unavailable("context", n, seed, e.what()));
    return out;
  }
  out.push_back(check_image_containment(spec, ctx.poly, n, seed));
  out.push_back(check_polytope_oracle(std::max(1, n / 10), seed));
  out.push_back(check_exposure(ctx.poly, 20, seed));
  out.push_back(check_grading(spec, std::max(1, n / 5), seed));
  out.push_back(check_bb_limits(spec, n, seed));
  out.push_back(check_max_component(ctx, std::max(1, n / 2), seed));
  out.push_back(check_chart_roundtrip(ctx, n, seed));
  out.push_back(check_fibration(ctx, n, seed));
  out.push_back(check_equivariance(ctx, n, seed));
  out.push_back(check_freeness(ctx, n, seed));
  out.push_back(check_quotient(ctx, n, seed));
  out.push_back(check_blv(ctx, n, seed));
  out.push_back(check_flow(ctx, std::max(1, n / 10), seed));
  out.push_back(check_cell_coverage(ctx, std::max(1, n / 2), seed));
  return out;
}

}  // namespace mmtk
