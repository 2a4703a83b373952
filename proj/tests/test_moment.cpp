#include "mmtk/moment.hpp"

#include "mmtk/sampling.hpp"
#include "mmtk/verify.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace mmtk;
using testing::rvec;
using testing::sym2;
using testing::vec;

TEST_SUITE("moment") {
  TEST_CASE("moment component on P1") {
    const auto spec = testing::diagonal_spec({{1}, {0}});
    const RealVector beta = spec.beta_from_torus(rvec({1}));
    CHECK(moment_component(spec, ProjectivePoint(vec({1, 1})), beta) == doctest::Approx(0.5));
    CHECK(moment_component(spec, ProjectivePoint(vec({1, 0})), beta) == doctest::Approx(1.0));
  }

  TEST_CASE("symmetric weights cancel") {
    const RealVector beta = rvec({1, 0});  // h / |h|
    CHECK(std::abs(moment_component(sym2(), ProjectivePoint(vec({1, 1, 1})), beta)) < 1e-15);
  }

  TEST_CASE("torus moment on Sym2") {
    CHECK(moment_torus(sym2(), ProjectivePoint(vec({1, 0, 0})))[0] == doctest::Approx(2.0));
    CHECK(std::abs(moment_torus(sym2(), ProjectivePoint(vec({1, 1, 1})))[0]) < 1e-15);
    CHECK(moment_torus(sym2(), ProjectivePoint(vec({1, 1, 0})))[0] == doctest::Approx(1.0));
  }

  TEST_CASE("vector field at fixed points and for beta = 0") {
    const RealVector h = sym2().beta_from_torus(rvec({1}));
    CHECK(vector_field(sym2(), ProjectivePoint(vec({1, 0, 0})), h).t.norm() < 1e-15);
    Sampler rng(3);
    for (int k = 0; k < 10; ++k) {
      CHECK(vector_field(sym2(), rng.projective_point(3), rvec({0, 0})).t.norm() == 0.0);
    }
  }

  TEST_CASE("vector field on P1 matches the flow derivative") {
    const auto spec = testing::diagonal_spec({{1}, {0}});
    const RealVector beta = spec.beta_from_torus(rvec({1}));
    const ProjectivePoint x(vec({1, 1}));
    const Vector t = vector_field(spec, x, beta).t;
    const Vector expected = vec({1, -1}) / (2.0 * std::sqrt(2.0));
    CHECK((t - expected).norm() < 1e-15);
    CHECK(t.norm() == doctest::Approx(0.5));
    // Central difference of t ↦ exp(tβ)·x, phase-aligned with x.
    const double h = 1e-6;
    const Matrix rho = spec.rho_p(beta);
    const Vector plus = flow_point(rho, x, h).vector();
    const Vector minus = flow_point(rho, x, -h).vector();
    auto align = [&](const Vector& v) { return Vector(v * std::polar(1.0, -std::arg(x.vector().dot(v)))); };
    CHECK(((align(plus) - align(minus)) / (2 * h) - expected).norm() < 1e-8);
  }

  TEST_CASE("gradient equals vector field") {
    const auto spec = testing::diagonal_spec({{1}, {0}});
    const RealVector beta = spec.beta_from_torus(rvec({1}));
    const ProjectivePoint x(vec({1, 1}));
    CHECK((fs_gradient(spec, x, beta).t - vector_field(spec, x, beta).t).norm() < 1e-14);
    CHECK((finite_difference_gradient(spec, x, beta) - vector_field(spec, x, beta).t).norm() < 1e-8);
    Sampler rng(5);
    for (int k = 0; k < 50; ++k) {
      const ProjectivePoint y = rng.projective_point(3);
      RealVector b = rng.gaussian(2);
      b.normalize();
      CHECK((finite_difference_gradient(sym2(), y, b) - vector_field(sym2(), y, b).t).norm() < 1e-8);
      CHECK((fs_gradient(sym2(), y, b).t - vector_field(sym2(), y, b).t).norm() < 1e-12);
    }
  }

  TEST_CASE("gradient vanishes at fixed points") {
    const RealVector h = sym2().beta_from_torus(rvec({1}));
    for (const auto& v : {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})}) {
      CHECK(fs_gradient(sym2(), ProjectivePoint(v), h).t.norm() < 1e-15);
    }
  }

  TEST_CASE("K-equivariance of the moment map") {
    const Matrix k = linalg::expm(0.7 * sym2().k_element(0));
    Sampler rng(9);
    for (int i = 0; i < 20; ++i) {
      const ProjectivePoint x = rng.projective_point(3);
      CHECK((moment_value(sym2(), act(k, x)) - adjoint_on_p(sym2(), k) * moment_value(sym2(), x)).norm() < 1e-13);
    }
  }

  TEST_CASE("tangent frame is orthonormal for the real part") {
    Sampler rng(2);
    const ProjectivePoint x = rng.projective_point(3);
    const auto frame = tangent_frame(x);
    REQUIRE(frame.size() == 4);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      CHECK(std::abs(x.vector().dot(frame[i])) < 1e-14);
      for (std::size_t j = 0; j < frame.size(); ++j) {
        CHECK(frame[i].dot(frame[j]).real() == doctest::Approx(i == j ? 1.0 : 0.0));
      }
    }
  }
}
