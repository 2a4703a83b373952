#include "mmtk/flow.hpp"

#include "mmtk/linalg.hpp"
#include "mmtk/moment.hpp"
#include "mmtk/sampling.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace mmtk;
using testing::sym2;
using testing::vec;

TEST_SUITE("flow") {
  TEST_CASE("highest weight line is stationary") {
    const ProjectivePoint x0(vec({1, 0, 0}));
    const Trajectory t = flow_eta(sym2(), x0);
    CHECK(t.converged);
    CHECK(t.steps == 0);
    CHECK(t.limit.distance(x0) == 0.0);
    CHECK(moment_torus(sym2(), t.limit)[0] == doctest::Approx(2.0));
    CHECK(eta(sym2(), t.limit) == doctest::Approx(0.5));  // ‖h‖² = 8, μ_p = 2h/8
  }

  TEST_CASE("zero weight line is a minimal critical point") {
    const Trajectory t = flow_eta(sym2(), ProjectivePoint(vec({0, 1, 0})));
    CHECK(t.converged);
    CHECK(t.beta_limit.norm() < 1e-15);
  }

  TEST_CASE("generic starts converge to a vertex orbit with eta nondecreasing") {
    Sampler rng(77);
    const Polytope poly = momentum_polytope(sym2());
    std::vector<Trajectory> batch;
    for (int k = 0; k < 10; ++k) batch.push_back(flow_eta(sym2(), rng.projective_point(3)));
    for (const auto& t : batch) {
      CHECK(t.converged);
      for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].eta >= t.samples[i - 1].eta - 1e-12);
    }
    const auto maxi = batch_maximizers(batch);
    CHECK(maxi.size() == batch.size());
    for (int k : maxi) {
      const CertificateReport c = extreme_certificate(sym2(), batch[k], poly);
      CHECK(c.passed);
      CHECK(std::abs(std::abs(poly.points[c.vertex][0]) - 2.0) < 1e-12);
      CHECK(c.vertex_error < 1e-6);
    }
  }

  TEST_CASE("saddle at the zero weight fails clause (a)") {
    const Polytope poly = momentum_polytope(sym2());
    const Trajectory t = flow_eta(sym2(), ProjectivePoint(vec({0, 1, 0})));
    const CertificateReport c = evaluate_certificate(sym2(), t, poly);
    CHECK_FALSE(c.passed);
    CHECK(c.failed_clause == "a");
    try {
      extreme_certificate(sym2(), t, poly);
      FAIL("expected CertificateFailure");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::CertificateFailure);
    }
  }

  TEST_CASE("unconverged trajectory is a precondition error") {
    FlowParams p;
    p.max_steps = 2;
    const Trajectory t = flow_eta(sym2(), ProjectivePoint(vec({1, 1, 1})), p);
    CHECK_FALSE(t.converged);
    try {
      extreme_certificate(sym2(), t, momentum_polytope(sym2()));
      FAIL("expected PreconditionViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PreconditionViolation);
    }
    CHECK_THROWS_AS(require_converged(t), Error);
  }

  TEST_CASE("torus element reproduces torus coordinates") {
    const auto& t = testing::torus_p2();
    const Matrix a = torus_element(t, testing::rvec({2.0}));
    CHECK(linalg::trace_inner(a, t.a_raw()[0]) == doctest::Approx(2.0));
  }
}
