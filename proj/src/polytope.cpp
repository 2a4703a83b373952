#include "mmtk/polytope.hpp"

#include "mmtk/linalg.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace mmtk {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Arithmetic policy: exact comparisons for rationals, `eps`-tolerant for doubles.
template <class S>
struct Num;

template <>
struct Num<double> {
  static bool is_zero(double x, double eps) { return std::abs(x) <= eps; }
  static bool positive(double x, double eps) { return x > eps; }
  static bool negative(double x, double eps) { return x < -eps; }
  static double to_double(double x) { return x; }
  static double abs(double x) { return std::abs(x); }
};

template <>
struct Num<Rational> {
  static bool is_zero(const Rational& x, double) { return x == 0; }
  static bool positive(const Rational& x, double) { return x > 0; }
  static bool negative(const Rational& x, double) { return x < 0; }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }
};

template <class S>
using Point = std::vector<S>;
template <class S>
using Mat = std::vector<std::vector<S>>;

constexpr double kPivotEps = 1e-12;

template <class S>
S dot(const Point<S>& a, const Point<S>& b) {
  S s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class S>
Point<S> minus(const Point<S>& a, const Point<S>& b) {
  Point<S> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

// Phase-one simplex: is there λ ≥ 0 with Σλ_j q_j = p and Σλ_j = 1?
// Bland's rule guarantees termination in exact arithmetic.
template <class S>
bool in_convex_hull(const std::vector<Point<S>>& cols, const Point<S>& p, double tol) {
  const int r = static_cast<int>(p.size());
  const int m = r + 1;
  const int n = static_cast<int>(cols.size());
  if (n == 0) return false;
  const int width = n + m + 1;
  const int rhs = n + m;
  Mat<S> t(m, Point<S>(width, S(0)));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = cols[j][i];
    t[i][rhs] = p[i];
  }
  for (int j = 0; j < n; ++j) t[r][j] = S(1);
  t[r][rhs] = S(1);
  for (int i = 0; i < m; ++i) {
    if (Num<S>::negative(t[i][rhs], 0.0)) {
      for (auto& x : t[i]) x = -x;
    }
    t[i][n + i] = S(1);
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;
  Point<S> obj(width, S(0));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) obj[j] -= t[i][j];
  }
  for (int i = 0; i < m; ++i) obj[rhs] -= t[i][rhs];

  const int max_iter = 100 * (n + m) + 100;
  for (int iter = 0; iter < max_iter; ++iter) {
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (Num<S>::negative(obj[j], kPivotEps)) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    S best(0);
    for (int i = 0; i < m; ++i) {
      if (!Num<S>::positive(t[i][enter], kPivotEps)) continue;
      const S ratio = t[i][rhs] / t[i][enter];
      if (leave < 0 || Num<S>::negative(ratio - best, kPivotEps) ||
          (Num<S>::is_zero(ratio - best, kPivotEps) && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) break;
    const S piv = t[leave][enter];
    for (auto& x : t[leave]) x /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || Num<S>::is_zero(t[i][enter], 0.0)) continue;
      const S f = t[i][enter];
      for (int j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    if (!Num<S>::is_zero(obj[enter], 0.0)) {
      const S f = obj[enter];
      for (int j = 0; j < width; ++j) obj[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  // obj[rhs] = −(sum of artificials).
  return Num<S>::is_zero(obj[rhs], tol);
}

template <class S>
bool same_point(const Point<S>& a, const Point<S>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!Num<S>::is_zero(a[i] - b[i], tol)) return false;
  }
  return true;
}

template <class S>
ExtremePoints extreme_impl(const std::vector<Point<S>>& pts, double tol) {
  ExtremePoints out;
  std::vector<int> distinct;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    bool dup = false;
    for (int j : distinct) {
      if (same_point(pts[i], pts[j], tol)) {
        dup = true;
        break;
      }
    }
    if (!dup) distinct.push_back(i);
  }
  if (distinct.size() == 1) {
    out.indices = distinct;
    out.degenerate = true;
    return out;
  }
  for (int i : distinct) {
    std::vector<Point<S>> others;
    for (int j : distinct) {
      if (j != i) others.push_back(pts[j]);
    }
    if (!in_convex_hull(others, pts[i], tol)) out.indices.push_back(i);
  }
  return out;
}

// Row reduction in place; returns pivot columns.
template <class S>
std::vector<int> rref(Mat<S>& a, int cols) {
  std::vector<int> pivots;
  int row = 0;
  const int rows = static_cast<int>(a.size());
  for (int c = 0; c < cols && row < rows; ++c) {
    int best = -1;
    for (int i = row; i < rows; ++i) {
      if (Num<S>::is_zero(a[i][c], kPivotEps)) continue;
      if (best < 0 || Num<S>::abs(a[i][c]) > Num<S>::abs(a[best][c])) best = i;
    }
    if (best < 0) continue;
    std::swap(a[row], a[best]);
    const S piv = a[row][c];
    for (auto& x : a[row]) x /= piv;
    for (int i = 0; i < rows; ++i) {
      if (i == row || Num<S>::is_zero(a[i][c], 0.0)) continue;
      const S f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[row][j];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

template <class S>
Point<S> solve_square(Mat<S> a, const Point<S>& b) {
  const int n = static_cast<int>(b.size());
  for (int i = 0; i < n; ++i) a[i].push_back(b[i]);
  rref(a, n);
  Point<S> x(n);
  for (int i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

// Direction basis of the affine hull plus coordinates of every point in it.
template <class S>
struct AffineChart {
  std::vector<Point<S>> dirs;    // d vectors in R^r
  std::vector<Point<S>> coords;  // per point, d coordinates
  Mat<S> gram;                   // dirs Gram matrix
};

template <class S>
AffineChart<S> affine_chart(const std::vector<Point<S>>& pts) {
  AffineChart<S> chart;
  const std::size_t r = pts.front().size();
  Mat<S> echelon;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Point<S> d = minus(pts[i], pts[0]);
    Mat<S> trial = echelon;
    trial.push_back(d);
    Mat<S> work = trial;
    if (rref(work, static_cast<int>(r)).size() == trial.size()) {
      echelon = trial;
      chart.dirs.push_back(d);
    }
  }
  if constexpr (std::is_same_v<S, double>) {
    // Orthonormalize so that coordinates are isometric.
    for (std::size_t i = 0; i < chart.dirs.size(); ++i) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < i; ++j) {
          const double c = dot(chart.dirs[i], chart.dirs[j]);
          for (std::size_t k = 0; k < r; ++k) chart.dirs[i][k] -= c * chart.dirs[j][k];
        }
      }
      const double n = std::sqrt(dot(chart.dirs[i], chart.dirs[i]));
      for (auto& x : chart.dirs[i]) x /= n;
    }
  }
  const std::size_t d = chart.dirs.size();
  chart.gram.assign(d, Point<S>(d, S(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) chart.gram[i][j] = dot(chart.dirs[i], chart.dirs[j]);
  }
  for (const auto& p : pts) {
    const Point<S> diff = minus(p, pts[0]);
    Point<S> rhs(d);
    for (std::size_t i = 0; i < d; ++i) rhs[i] = dot(chart.dirs[i], diff);
    chart.coords.push_back(d == 0 ? Point<S>{} : solve_square(chart.gram, rhs));
  }
  return chart;
}

template <class S>
struct HullFacet {
  Point<S> normal;  // in R^r
  S offset;
  std::vector<int> incident;  // local vertex indices
};

template <class S>
struct HullResult {
  int dim = 0;
  std::vector<HullFacet<S>> facets;
  std::vector<int> order;
};

template <class S>
bool proportional_equal(const Point<S>& a, const Point<S>& b, double tol) {
  return same_point(a, b, tol);
}

// Normalizes a c-space normal for de-duplication.
template <class S>
Point<S> canonical(Point<S> v) {
  if constexpr (std::is_same_v<S, double>) {
    double n = 0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
  } else {
    S scale(0);
    for (const auto& x : v) {
      if (x != 0) {
        scale = Num<S>::abs(x);
        break;
      }
    }
    for (auto& x : v) x /= scale;
  }
  return v;
}

template <class S>
HullResult<S> hull_impl(const std::vector<Point<S>>& verts, double tol) {
  HullResult<S> out;
  const AffineChart<S> chart = affine_chart(verts);
  const int d = static_cast<int>(chart.dirs.size());
  const int k = static_cast<int>(verts.size());
  const std::size_t r = verts.front().size();
  out.dim = d;
  if (d == 0) {
    out.order = {0};
    return out;
  }

  std::vector<std::pair<Point<S>, std::vector<int>>> cfacets;  // c-space normal, incident
  const auto& c = chart.coords;
  if (d == 1) {
    int lo = 0;
    int hi = 0;
    for (int i = 1; i < k; ++i) {
      if (c[i][0] < c[lo][0]) lo = i;
      if (c[i][0] > c[hi][0]) hi = i;
    }
    out.order = {lo, hi};
    cfacets.push_back({Point<S>{S(-1)}, {lo}});
    cfacets.push_back({Point<S>{S(1)}, {hi}});
  } else if (d == 2) {
    // Gift wrapping; extreme points contain no collinear boundary triples.
    int start = 0;
    for (int i = 1; i < k; ++i) {
      if (c[i][0] < c[start][0] || (c[i][0] == c[start][0] && c[i][1] < c[start][1])) start = i;
    }
    int cur = start;
    do {
      out.order.push_back(cur);
      int cand = cur == 0 ? 1 : 0;
      for (int j = 0; j < k; ++j) {
        if (j == cur || j == cand) continue;
        const S cross = (c[cand][0] - c[cur][0]) * (c[j][1] - c[cur][1]) -
                        (c[cand][1] - c[cur][1]) * (c[j][0] - c[cur][0]);
        if (Num<S>::negative(cross, 0.0)) cand = j;
      }
      cur = cand;
    } while (cur != start && static_cast<int>(out.order.size()) <= k);
    const int m = static_cast<int>(out.order.size());
    for (int i = 0; i < m; ++i) {
      const int a = out.order[i];
      const int b = out.order[(i + 1) % m];
      cfacets.push_back({Point<S>{c[b][1] - c[a][1], c[a][0] - c[b][0]}, {a, b}});
    }
  } else {
    // Facet enumeration over d-subsets of vertices.
    std::vector<int> idx(d);
    for (int i = 0; i < d; ++i) idx[i] = i;
    std::vector<Point<S>> seen;
    while (true) {
      Mat<S> rows;
      for (int i = 1; i < d; ++i) rows.push_back(minus(c[idx[i]], c[idx[0]]));
      const std::vector<int> piv = rref(rows, d);
      if (static_cast<int>(piv.size()) == d - 1) {
        int free_col = 0;
        while (std::find(piv.begin(), piv.end(), free_col) != piv.end()) ++free_col;
        Point<S> nrm(d, S(0));
        nrm[free_col] = S(1);
        for (int i = 0; i < d - 1; ++i) nrm[piv[i]] = -rows[i][free_col];
        if constexpr (std::is_same_v<S, double>) nrm = canonical(nrm);
        bool pos = false;
        bool neg = false;
        std::vector<int> incident;
        for (int j = 0; j < k; ++j) {
          const S s = dot(nrm, minus(c[j], c[idx[0]]));
          if (Num<S>::positive(s, tol)) {
            pos = true;
          } else if (Num<S>::negative(s, tol)) {
            neg = true;
          } else {
            incident.push_back(j);
          }
        }
        if (!(pos && neg)) {
          if (pos) {
            for (auto& x : nrm) x = -x;
          }
          const Point<S> key = canonical(nrm);
          bool dup = false;
          for (const auto& s : seen) {
            if (proportional_equal(s, key, tol)) {
              dup = true;
              break;
            }
          }
          if (!dup) {
            seen.push_back(key);
            cfacets.push_back({nrm, incident});
          }
        }
      }
      int pos_i = d - 1;
      while (pos_i >= 0 && idx[pos_i] == k - d + pos_i) --pos_i;
      if (pos_i < 0) break;
      ++idx[pos_i];
      for (int i = pos_i + 1; i < d; ++i) idx[i] = idx[i - 1] + 1;
    }
  }

  // Map c-space normals n_c to R^r: n = D G⁻¹ n_c, offset = ⟨n_c, c_v⟩ + ⟨n, p0⟩.
  for (auto& [nc, incident] : cfacets) {
    const Point<S> y = solve_square(chart.gram, nc);
    Point<S> n(r, S(0));
    for (int i = 0; i < d; ++i) {
      for (std::size_t t = 0; t < r; ++t) n[t] += y[i] * chart.dirs[i][t];
    }
    HullFacet<S> f;
    f.offset = dot(nc, c[incident.front()]) + dot(n, verts[0]);
    f.normal = std::move(n);
    f.incident = incident;
    out.facets.push_back(std::move(f));
  }
  return out;
}

std::optional<std::vector<Point<Rational>>> as_integral(const std::vector<RealVector>& pts) {
  std::vector<Point<Rational>> out;
  for (const auto& p : pts) {
    Point<Rational> q;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double r = std::round(p[i]);
      if (!std::isfinite(p[i]) || std::abs(p[i] - r) > 1e-9 || std::abs(r) > 1e12) return std::nullopt;
      q.emplace_back(static_cast<long long>(r));
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<Point<double>> as_double(const std::vector<RealVector>& pts) {
  std::vector<Point<double>> out;
  for (const auto& p : pts) out.emplace_back(p.data(), p.data() + p.size());
  return out;
}

void check_input(const std::vector<RealVector>& points) {
  if (points.empty()) throw Error(ErrorCode::PreconditionViolation, "point set is empty");
  const Eigen::Index r = points.front().size();
  for (const auto& p : points) {
    if (p.size() != r) throw Error(ErrorCode::PreconditionViolation, "points have mixed dimensions");
  }
}

template <class S>
Polytope assemble(const std::vector<RealVector>& points, const std::vector<Point<S>>& pts, double tol) {
  Polytope poly;
  poly.points = points;
  const ExtremePoints ext = extreme_impl(pts, tol);
  poly.vertices = ext.indices;
  poly.degenerate = ext.degenerate;
  std::vector<Point<S>> verts;
  for (int i : poly.vertices) verts.push_back(pts[i]);
  const HullResult<S> hull = hull_impl(verts, tol);
  poly.affine_dim = hull.dim;
  for (int local : hull.order) poly.boundary_order.push_back(poly.vertices[local]);
  for (const auto& f : hull.facets) {
    Facet facet;
    facet.normal.resize(static_cast<Eigen::Index>(f.normal.size()));
    for (std::size_t i = 0; i < f.normal.size(); ++i) facet.normal[i] = Num<S>::to_double(f.normal[i]);
    const double len = facet.normal.norm();
    facet.normal /= len;
    facet.offset = Num<S>::to_double(f.offset) / len;
    for (int local : f.incident) facet.vertices.push_back(poly.vertices[local]);
    std::sort(facet.vertices.begin(), facet.vertices.end());
    poly.facets.push_back(std::move(facet));
  }
  for (int v : poly.vertices) poly.vertex_facets[v] = {};
  for (int fi = 0; fi < static_cast<int>(poly.facets.size()); ++fi) {
    for (int v : poly.facets[fi].vertices) poly.vertex_facets[v].push_back(fi);
  }
  return poly;
}

}  // namespace

bool Polytope::is_vertex(int index) const {
  return std::find(vertices.begin(), vertices.end(), index) != vertices.end();
}

ExtremePoints extreme_points(const std::vector<RealVector>& points, double tol) {
  check_input(points);
  if (auto exact = as_integral(points)) {
    ExtremePoints out = extreme_impl(*exact, tol);
    out.exact = true;
    return out;
  }
  return extreme_impl(as_double(points), tol);
}

Polytope build_polytope(const std::vector<RealVector>& points, double tol) {
  check_input(points);
  if (auto exact = as_integral(points)) {
    Polytope poly = assemble(points, *exact, tol);
    poly.exact = true;
    return poly;
  }
  return assemble(points, as_double(points), tol);
}

FaceResult exposed_face(const Polytope& poly, const RealVector& beta, double tol) {
  FaceResult out;
  if (beta.norm() == 0.0) {
    out.indices = poly.vertices;
    out.total_face = true;
    return out;
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int v : poly.vertices) best = std::max(best, beta.dot(poly.points[v]));
  for (int v : poly.vertices) {
    if (beta.dot(poly.points[v]) >= best - tol) out.indices.push_back(v);
  }
  return out;
}

NormalCone normal_cone(const Polytope& poly, int vertex_index) {
  if (!poly.is_vertex(vertex_index)) {
    throw Error(ErrorCode::PreconditionViolation, "index " + std::to_string(vertex_index) + " is not a vertex");
  }
  NormalCone cone;
  cone.vertex = poly.points[vertex_index];
  for (int fi : poly.vertex_facets.at(vertex_index)) cone.generators.push_back(poly.facets[fi].normal);
  return cone;
}

RealVector exposing_vector(const Polytope& poly, int vertex_index, double tol) {
  const NormalCone cone = normal_cone(poly, vertex_index);
  const RealVector& sigma = cone.vertex;
  RealVector beta;
  bool self_exposing = sigma.norm() > 0.0;
  for (int v : poly.vertices) {
    if (v == vertex_index || !self_exposing) continue;
    if (!(sigma.dot(poly.points[v]) < sigma.dot(sigma) - tol)) self_exposing = false;
  }
  if (self_exposing) {
    beta = sigma;
  } else if (!cone.generators.empty()) {
    beta = RealVector::Zero(sigma.size());
    for (const auto& g : cone.generators) beta += g;
    if (beta.norm() > 0.0) beta /= beta.norm();
  } else {
    beta = RealVector::Unit(sigma.size(), 0);
  }
  const FaceResult face = exposed_face(poly, beta, tol);
  if (face.indices.size() != 1 || face.indices.front() != vertex_index) {
    throw Error(ErrorCode::ExposureFailure,
                "exposing vector for vertex " + std::to_string(vertex_index) + " does not isolate it");
  }
  return beta;
}

std::vector<WeightSpace> weight_decomposition(const RepresentationSpec& spec, const Subspace& w) {
  if (spec.a_rank() == 0) throw Error(ErrorCode::PreconditionViolation, "a_basis is empty");
  const double gap = spec.tolerances().cluster_gap;
  std::vector<WeightSpace> spaces{{RealVector(0), w.basis}};
  for (const Matrix& h : spec.a_raw()) {
    std::vector<WeightSpace> refined;
    for (const WeightSpace& s : spaces) {
      const Matrix compressed = s.basis.adjoint() * h * s.basis;
      for (const linalg::Level& level : linalg::hermitian_levels(compressed, gap)) {
        WeightSpace ws;
        ws.weight.resize(s.weight.size() + 1);
        ws.weight << s.weight, level.value;
        ws.basis = s.basis * level.basis;
        refined.push_back(std::move(ws));
      }
    }
    spaces = std::move(refined);
  }
  std::sort(spaces.begin(), spaces.end(), [](const WeightSpace& a, const WeightSpace& b) {
    for (Eigen::Index i = 0; i < a.weight.size(); ++i) {
      if (a.weight[i] != b.weight[i]) return a.weight[i] > b.weight[i];
    }
    return false;
  });
  return spaces;
}

Polytope momentum_polytope(const RepresentationSpec& spec) {
  return momentum_polytope(spec, Subspace::whole(spec.dim_v()));
}

Polytope momentum_polytope(const RepresentationSpec& spec, const Subspace& w) {
  std::vector<RealVector> pts;
  for (const WeightSpace& ws : weight_decomposition(spec, w)) pts.push_back(ws.weight);
  return build_polytope(pts);
}

}  // namespace mmtk
