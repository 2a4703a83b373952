#include "mmtk/lst.hpp"

#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"
#include "mmtk/verify.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace mmtk;
using testing::rvec;
using testing::sym2;
using testing::vec;

namespace {

const BetaGrading& h_grading() {
  static const BetaGrading g = build_grading(sym2(), sym2().beta_from_torus(rvec({1})));
  return g;
}

const LstChart& top_chart() {
  static const LstChart c = build_chart(sym2(), h_grading(), ProjectivePoint(vec({1, 0, 0})));
  return c;
}

// s with ρ(n) = s·F, F the lowering operator.
double lowering_coefficient(const LstChart& chart, const RealVector& n) {
  Matrix rn = Matrix::Zero(3, 3);
  for (int i = 0; i < chart.n_dim(); ++i) rn += n[i] * chart.n_basis[i];
  const Matrix f = testing::sym2_f();
  return linalg::trace_inner(rn, f) / f.squaredNorm();
}

ChartCoordinates symbolic_coordinates(const LstChart& chart, double s, double c) {
  const Matrix f = testing::sym2_f();
  ChartCoordinates out{RealVector(chart.n_dim()), RealVector(chart.f_dim()), RealVector(chart.u_dim())};
  for (int i = 0; i < chart.n_dim(); ++i) out.n[i] = s * linalg::trace_inner(f, chart.n_basis[i]);
  for (int i = 0; i < chart.f_dim(); ++i) out.f[i] = c * chart.f_dirs[i][2].real();
  out.u.setZero();
  return out;
}

}  // namespace

TEST_SUITE("lst") {
  TEST_CASE("chart at the highest weight line") {
    const LstChart& c = top_chart();
    CHECK(c.n_dim() == 1);
    CHECK(c.u_dim() == 0);
    CHECK(c.f_dim() == 3);
    // Orbit direction is the xy line; F holds i·xy and the y² line.
    CHECK(std::abs(c.orbit_dirs(1, 0)) > 0.5);
    CHECK(std::abs(c.orbit_dirs(0, 0)) + std::abs(c.orbit_dirs(2, 0)) < 1e-14);
    int y2 = 0;
    for (const Vector& d : c.f_dirs) {
      CHECK(std::abs(c.orbit_dirs.col(0).dot(d).real()) < 1e-14);
      if (std::abs(d[2]) > 0.99) ++y2;
    }
    CHECK(y2 == 2);
  }

  TEST_CASE("chart preconditions") {
    CHECK_THROWS_AS(build_chart(sym2(), h_grading(), ProjectivePoint(vec({0, 1, 0}))), Error);
    try {
      build_chart(sym2(), h_grading(), ProjectivePoint(vec({0, 1, 0})));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotMaxPoint);
    }
    const BetaGrading zero = build_grading(sym2(), rvec({0, 0}));
    try {
      build_chart(sym2(), zero, ProjectivePoint(vec({1, 0, 0})));
      FAIL("expected DegenerateOrbitMap");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DegenerateOrbitMap);
    }
  }

  TEST_CASE("origin maps to the base point") {
    const LstChart& c = top_chart();
    const ChartCoordinates zero{RealVector::Zero(c.n_dim()), RealVector::Zero(c.f_dim()), RealVector::Zero(c.u_dim())};
    CHECK(phi_forward(c, zero).distance(c.base_point) == 0.0);
    const ChartCoordinates back = phi_inverse(c, c.base_point);
    CHECK(back.n.norm() + back.f.norm() < 1e-15);
  }

  TEST_CASE("symbolic forward map on Sym2") {
    const LstChart& c = top_chart();
    const double r2 = std::sqrt(2.0);
    for (auto [s, cc] : {std::pair{1.0, 2.0}, std::pair{-0.5, 0.25}, std::pair{1.7, -1.1}}) {
      // [x² + 2s·xy + (s² + c)·y²] in the unitary basis.
      const Vector expected = vec({1.0, 2.0 * s / r2, s * s + cc});
      CHECK(phi_forward(c, symbolic_coordinates(c, s, cc)).distance(ProjectivePoint(expected)) < 1e-14);
    }
  }

  TEST_CASE("inverse of [1:2:3] is s = 1, c = 2") {
    const LstChart& c = top_chart();
    const ChartCoordinates coords = phi_inverse(c, ProjectivePoint(vec({1.0, std::sqrt(2.0), 3.0})));
    const double a = 2.0, b = 3.0;  // monomial coefficients of xy and y²
    const double s = a / 2.0;
    CHECK(std::abs(lowering_coefficient(c, coords.n) - s) < 1e-10);
    Vector fpart = Vector::Zero(3);
    for (int i = 0; i < c.f_dim(); ++i) fpart += coords.f[i] * c.f_dirs[i];
    CHECK(std::abs(fpart[2] - Complex(b - s * s)) < 1e-10);
    CHECK(std::abs(fpart[1]) < 1e-10);
    const auto [f, u] = quotient_project(c, ProjectivePoint(vec({1.0, std::sqrt(2.0), 3.0})));
    CHECK((f - coords.f).norm() == 0.0);
    CHECK(u.size() == 0);
  }

  TEST_CASE("outside the cell") {
    try {
      phi_inverse(top_chart(), ProjectivePoint(vec({0, 1, 1})));
      FAIL("expected OutsideCell");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::OutsideCell);
    }
  }

  TEST_CASE("round trips in both directions") {
    const LstChart& c = top_chart();
    Sampler rng(31);
    for (int k = 0; k < 200; ++k) {
      const ChartCoordinates x = random_coordinates(c, 100 + k, 2.0);
      const ChartCoordinates y = phi_inverse(c, phi_forward(c, x));
      CHECK((y.n - x.n).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((y.f - x.f).cwiseAbs().maxCoeff() < 1e-9);
      const ProjectivePoint z = rng.projective_point(3);
      CHECK(phi_forward(c, phi_inverse(c, z)).distance(z) < 1e-9);
    }
  }

  TEST_CASE("unipotent elements") {
    const LstChart& c = top_chart();
    const UnipotentElement u = make_unipotent(c, rvec({1.3}));
    Matrix power = Matrix::Identity(3, 3);
    for (int k = 0; k < c.nilpotency; ++k) power = power * u.n;
    CHECK(power.norm() < 1e-14);
    CHECK((u.g - linalg::expm(u.n)).norm() < 1e-13);
    const Matrix et = linalg::expm(40.0 * h_grading().rho_beta);
    const Matrix emt = linalg::expm(-40.0 * h_grading().rho_beta);
    CHECK((et * u.g * emt - Matrix::Identity(3, 3)).norm() < 1e-8);
    CHECK((unipotent_coordinates(c, u.g) - rvec({1.3})).norm() < 1e-13);
  }

  TEST_CASE("freeness, equivariance and quotient on Sym2") {
    const LstChart& c = top_chart();
    CHECK(verify_freeness(c, 200, 1).passed());
    const VerificationReport eq = equivariance_check(h_grading(), c, 200, 2);
    CHECK(eq.passed());
    CHECK(eq.max_error < 1e-7);
    CHECK(ineffectivity_algebra(h_grading(), c, 3).size() == 1);
    const ProjectivePoint fixed(vec({1, 0, 0}));
    const auto [f, u] = quotient_project(c, fixed);
    CHECK(f.norm() == 0.0);
  }

  TEST_CASE("freeness is vacuous without r_minus") {
    const auto& t = testing::torus_p2();
    const BetaGrading g = build_grading(t, t.beta_from_torus(rvec({1})));
    const LstChart c = build_chart(t, g, ProjectivePoint(vec({1, 0, 0})));
    CHECK(c.n_dim() == 0);
    const VerificationReport r = verify_freeness(c, 10, 1);
    CHECK(r.passed());
    CHECK(r.extras.count("vacuous") == 1);
  }

  TEST_CASE("commutant detects reducibility") {
    CHECK(commutant_dimension(sym2(), Subspace::whole(3)) == 1);
    CHECK(commutant_dimension(testing::sym2_plus_trivial(), Subspace::whole(4)) == 2);
  }

  TEST_CASE("reducible chart reduces to the irreducible one") {
    const auto& v = testing::sym2_plus_trivial();
    const Context ctx = make_context(v);
    REQUIRE(ctx.chart);
    CHECK(ctx.w.dim() == 3);
    CHECK(ctx.complement.dim() == 1);
    const LstChart full = blv_chart(v, ctx.grading, ctx.w, ctx.complement);
    CHECK(full.f_dim() == ctx.chart->f_dim() + 2);
    const LstChart reduced = blv_chart(v, ctx.grading, ctx.w, Subspace{Matrix(4, 0)});
    for (int k = 0; k < 50; ++k) {
      const ChartCoordinates x = random_coordinates(*ctx.chart, 500 + k, 2.0);
      CHECK(phi_forward(reduced, x).distance(phi_forward(*ctx.chart, x)) < 1e-12);
      ChartCoordinates padded = x;
      padded.f.conservativeResize(full.f_dim());
      padded.f.tail(2).setZero();
      CHECK(phi_forward(full, padded).distance(phi_forward(*ctx.chart, x)) < 1e-12);
    }
    try {
      blv_chart(v, ctx.grading, Subspace::whole(4), Subspace{Matrix(4, 0)});
      FAIL("expected NotIrreducible");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotIrreducible);
    }
  }
}
