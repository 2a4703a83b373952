#include "mmtk/polytope.hpp"

#include "mmtk/sampling.hpp"
#include "mmtk/verify.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace mmtk;
using testing::rvec;

namespace {

std::vector<RealVector> square() { return {rvec({0, 0}), rvec({1, 0}), rvec({0, 1}), rvec({1, 1})}; }

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool has_generator(const NormalCone& cone, const RealVector& g) {
  return std::any_of(cone.generators.begin(), cone.generators.end(),
                     [&](const RealVector& x) { return (x.normalized() - g.normalized()).norm() < 1e-12; });
}

}  // namespace

TEST_SUITE("polytope") {
  TEST_CASE("interior point is excluded") {
    auto pts = square();
    pts.push_back(rvec({0.5, 0.5}));
    CHECK(sorted(extreme_points(pts).indices) == std::vector<int>{0, 1, 2, 3});
    pts = square();
    pts.push_back(rvec({0, 0}));
    const auto ex = extreme_points(pts);
    CHECK(ex.exact);
    CHECK(sorted(ex.indices) == std::vector<int>{0, 1, 2, 3});
  }

  TEST_CASE("Sym2 weights: endpoints 2 and -2") {
    const Polytope poly = momentum_polytope(testing::sym2());
    REQUIRE(poly.points.size() == 3);
    CHECK(poly.affine_dim == 1);
    REQUIRE(poly.vertices.size() == 2);
    std::vector<double> v;
    for (int i : poly.vertices) v.push_back(poly.points[i][0]);
    std::sort(v.begin(), v.end());
    CHECK(v[0] == doctest::Approx(-2.0));
    CHECK(v[1] == doctest::Approx(2.0));
  }

  TEST_CASE("torus weights (2,1,0) give vertices 2 and 0") {
    const Polytope poly = momentum_polytope(testing::torus_p2());
    std::vector<double> v;
    for (int i : poly.vertices) v.push_back(poly.points[i][0]);
    std::sort(v.begin(), v.end());
    CHECK(v == std::vector<double>{0.0, 2.0});
  }

  TEST_CASE("random disk points inside a square keep only the corners") {
    Sampler rng(42);
    std::vector<RealVector> pts;
    for (int k = 0; k < 50; ++k) {
      const double r = 0.9 * std::sqrt(rng.uniform(0, 1));
      const double a = rng.uniform(0, 2 * M_PI);
      pts.push_back(rvec({r * std::cos(a), r * std::sin(a)}));
    }
    for (const auto& c : {rvec({-1, -1}), rvec({1, -1}), rvec({1, 1}), rvec({-1, 1})}) pts.push_back(c);
    const auto ex = extreme_points(pts);
    CHECK_FALSE(ex.exact);
    CHECK(sorted(ex.indices) == std::vector<int>{50, 51, 52, 53});
  }

  TEST_CASE("single repeated point is degenerate") {
    const auto ex = extreme_points({rvec({1, 2}), rvec({1, 2})});
    CHECK(ex.degenerate);
    CHECK(ex.indices == std::vector<int>{0});
  }

  TEST_CASE("exposed faces of the unit square") {
    const Polytope poly = build_polytope(square());
    CHECK(sorted(exposed_face(poly, rvec({1, 0})).indices) == std::vector<int>{1, 3});
    CHECK(exposed_face(poly, rvec({1, 1})).indices == std::vector<int>{3});
    const FaceResult all = exposed_face(poly, rvec({0, 0}));
    CHECK(all.total_face);
    CHECK(all.indices.size() == 4);
    const Polytope seg = momentum_polytope(testing::sym2());
    const FaceResult top = exposed_face(seg, rvec({1}));
    REQUIRE(top.indices.size() == 1);
    CHECK(seg.points[top.indices[0]][0] == doctest::Approx(2.0));
  }

  TEST_CASE("normal cones") {
    const Polytope poly = build_polytope(square());
    const NormalCone cone = normal_cone(poly, 3);
    CHECK(cone.generators.size() == 2);
    CHECK(has_generator(cone, rvec({1, 0})));
    CHECK(has_generator(cone, rvec({0, 1})));
    const Polytope seg = build_polytope({rvec({-2}), rvec({2})});
    const NormalCone top = normal_cone(seg, 1);
    REQUIRE(top.generators.size() == 1);
    CHECK(top.generators[0][0] > 0.0);
  }

  TEST_CASE("exposing vectors") {
    const Polytope seg = momentum_polytope(testing::sym2());
    int top = -1;
    for (int v : seg.vertices) {
      if (seg.points[v][0] > 0) top = v;
    }
    CHECK(exposing_vector(seg, top)[0] == doctest::Approx(2.0));
    const Polytope sq = build_polytope(square());
    CHECK((exposing_vector(sq, 3) - rvec({1, 1})).norm() < 1e-12);
    const RealVector fallback = exposing_vector(sq, 0);
    CHECK((fallback - rvec({-1, -1}) / std::sqrt(2.0)).norm() < 1e-12);
  }

  TEST_CASE("exposing vector of every vertex of a random hull exposes it") {
    Sampler rng(8);
    std::vector<RealVector> pts;
    for (int k = 0; k < 15; ++k) pts.push_back(rng.gaussian(2));
    const Polytope poly = build_polytope(pts);
    for (int v : poly.vertices) CHECK(exposed_face(poly, exposing_vector(poly, v)).indices == std::vector<int>{v});
  }

  TEST_CASE("facets of a 3-d hull are valid") {
    Sampler rng(4);
    std::vector<RealVector> pts;
    for (int k = 0; k < 12; ++k) pts.push_back(rng.gaussian(3));
    const Polytope poly = build_polytope(pts);
    CHECK(poly.affine_dim == 3);
    for (const Facet& f : poly.facets) {
      CHECK(f.normal.norm() == doctest::Approx(1.0));
      for (const auto& p : pts) CHECK(f.normal.dot(p) <= f.offset + 1e-9);
    }
  }

  TEST_CASE("extreme points agree with the exact brute-force oracle") {
    Sampler rng(21);
    for (int k = 0; k < 100; ++k) {
      const int d = 1 + k % 3;
      const int n = 1 + rng.index(12);
      std::vector<std::vector<long long>> ints;
      std::vector<RealVector> pts;
      for (int i = 0; i < n; ++i) {
        std::vector<long long> p(d);
        RealVector v(d);
        for (int c = 0; c < d; ++c) v[c] = static_cast<double>(p[c] = rng.index(5) - 2);
        ints.push_back(p);
        pts.push_back(v);
      }
      CHECK(sorted(extreme_points(pts).indices) == oracle_extreme_points(ints));
    }
  }

  TEST_CASE("oracle on a hand-checked instance") {
    // Collinear triple plus an off-line point: the middle point is not extreme.
    CHECK(oracle_extreme_points({{0, 0}, {1, 1}, {2, 2}, {0, 2}}) == std::vector<int>{0, 2, 3});
    CHECK(oracle_extreme_points({{3}, {3}}) == std::vector<int>{0});
  }
}
