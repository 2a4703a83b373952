#include "mmtk/strata.hpp"

#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace mmtk;
using testing::rvec;
using testing::sym2;
using testing::vec;

namespace {

RealVector h_beta() { return sym2().beta_from_torus(rvec({1})); }

bool same(const ProjectivePoint& a, const Vector& b) { return a.distance(ProjectivePoint(b)) < 1e-12; }

}  // namespace

TEST_SUITE("strata") {
  TEST_CASE("zero beta grades everything at level zero") {
    const BetaGrading g = build_grading(sym2(), rvec({0, 0}));
    CHECK(g.is_zero());
    CHECK(g.r_minus.cols() == 0);
    CHECK(g.r_plus.cols() == 0);
    CHECK(g.g_zero.cols() == 3);
  }

  TEST_CASE("grading of sl2 by h") {
    const BetaGrading g = build_grading(sym2(), h_beta());
    CHECK(g.r_minus.cols() == 1);
    CHECK(g.g_zero.cols() == 1);
    CHECK(g.r_plus.cols() == 1);
    REQUIRE(g.r_minus_grades.size() == 1);
    CHECK(g.r_minus_grades[0] == doctest::Approx(-2.0));
    // r_minus is spanned by the lowering operator.
    const Matrix f = testing::sym2_f();
    const Matrix n = g.r_minus_elements[0];
    CHECK(std::abs(std::abs(linalg::trace_inner(n, f)) - f.norm()) < 1e-12);
    CHECK(bracket_multiplicativity_residual(sym2(), g) < 1e-12);
    CHECK(linalg::subspace_gap(theta_on_algebra(sym2().algebra()) * g.r_minus, g.r_plus) < 1e-12);
  }

  TEST_CASE("limits on the torus (2,1,0)") {
    const auto& spec = testing::torus_p2();
    const BetaGrading g = build_grading(spec, spec.beta_from_torus(rvec({1})));
    const ProjectivePoint x(vec({1, 1, 1}));
    CHECK(same(bb_limit(g, x, LimitDirection::Forward), vec({1, 0, 0})));
    CHECK(same(bb_limit(g, x, LimitDirection::Backward), vec({0, 0, 1})));
    CHECK(same(bb_limit(g, ProjectivePoint(vec({0, 1, 1})), LimitDirection::Forward), vec({0, 1, 0})));
  }

  TEST_CASE("limit agrees with a long flow") {
    const BetaGrading g = build_grading(sym2(), h_beta());
    Sampler rng(12);
    for (int k = 0; k < 20; ++k) {
      const ProjectivePoint x = rng.projective_point(3);
      CHECK(flow_point(g.rho_beta, x, 40.0).distance(bb_limit(g, x, LimitDirection::Forward)) < 1e-12);
      CHECK(flow_point(g.rho_beta, x, -40.0).distance(bb_limit(g, x, LimitDirection::Backward)) < 1e-12);
    }
  }

  TEST_CASE("classification on Sym2 with beta = h") {
    const BetaGrading g = build_grading(sym2(), h_beta());
    const StratumRecord generic = classify_point(sym2(), g, ProjectivePoint(vec({1, 1, 1})));
    CHECK_FALSE(generic.fixed);
    CHECK(same(generic.forward_limit, vec({1, 0, 0})));
    CHECK(generic.level_value == doctest::Approx(2.0));
    CHECK(generic.in_beta_minus_max);

    const StratumRecord middle = classify_point(sym2(), g, ProjectivePoint(vec({0, 1, 0})));
    CHECK(middle.fixed);
    CHECK(std::abs(middle.level_value) < 1e-12);
    CHECK_FALSE(middle.in_beta_minus_max);

    const StratumRecord bottom = classify_point(sym2(), g, ProjectivePoint(vec({0, 0, 1})));
    CHECK(bottom.fixed);
    CHECK(bottom.level_value == doctest::Approx(-2.0));
  }

  TEST_CASE("maximal fixed component") {
    const BetaGrading g = build_grading(sym2(), h_beta());
    const Subspace top = x_beta_max(sym2(), g);
    REQUIRE(top.dim() == 1);
    CHECK(same(ProjectivePoint(top.basis.col(0)), vec({1, 0, 0})));
    CHECK(x_beta_max(sym2(), build_grading(sym2(), rvec({0, 0}))).dim() == 3);

    const auto& v = testing::sym2_plus_trivial();
    Matrix e3 = Matrix::Zero(4, 1);
    e3(3, 0) = 1.0;
    const Subspace trivial{e3};
    const BetaGrading gv = build_grading(v, v.beta_from_torus(rvec({1})));
    const Subspace in_trivial = x_beta_max(v, gv, trivial);
    REQUIRE(in_trivial.dim() == 1);
    CHECK(std::abs(in_trivial.basis(3, 0)) == doctest::Approx(1.0));
    const auto levels = w_levels(gv, trivial, 1e-8);
    REQUIRE(levels.size() == 1);
    CHECK(std::abs(levels[0].value) < 1e-12);
  }

  TEST_CASE("non-invariant subspace is rejected") {
    Matrix b = Matrix::Zero(3, 1);
    b(0, 0) = 1.0;
    const BetaGrading g = build_grading(sym2(), h_beta());
    CHECK_THROWS_AS(x_beta_max(sym2(), g, Subspace{b}), Error);
  }

  TEST_CASE("orbit map and centralizer at the top point") {
    const BetaGrading g = build_grading(sym2(), h_beta());
    const ProjectivePoint top(vec({1, 0, 0}));
    CHECK(smallest_singular_value(orbit_map(g.r_minus_elements, top)) > 1e-8);
    for (const Matrix& xi : g.r_plus_elements) CHECK(fundamental_field(top, xi).t.norm() < 1e-15);
    const auto pb = p_centralizer(g);
    REQUIRE(pb.size() == 1);
    CHECK(fundamental_field(top, pb[0]).t.norm() < 1e-15);
  }

  TEST_CASE("grading properties for random beta") {
    Sampler rng(17);
    const RealMatrix theta = theta_on_algebra(sym2().algebra());
    for (int k = 0; k < 30; ++k) {
      const BetaGrading g = build_grading(sym2(), rng.gaussian(2));
      CHECK(g.r_minus.cols() + g.g_zero.cols() + g.r_plus.cols() == 3);
      CHECK(bracket_multiplicativity_residual(sym2(), g) < 1e-9);
      CHECK(linalg::subspace_gap(theta * g.r_minus, g.r_plus) < 1e-8);
    }
  }
}
