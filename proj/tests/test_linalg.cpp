#include "mmtk/linalg.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace mmtk;

TEST_SUITE("linalg") {
  TEST_CASE("trace form is Re tr(A B*)") {
    Matrix a(2, 2), b(2, 2);
    a << 1.0, Complex(0, 1), 0.0, 2.0;
    b << Complex(0, 1), 1.0, 3.0, 1.0;
    const double expected = (a * b.adjoint()).trace().real();
    CHECK(linalg::trace_inner(a, b) == doctest::Approx(expected));
    CHECK(linalg::trace_inner(a, a) == doctest::Approx(a.squaredNorm()));
  }

  TEST_CASE("hermitian levels are descending and clustered") {
    Matrix h = Matrix::Zero(4, 4);
    h.diagonal() << 1.0, 3.0, 1.0 + 1e-12, -2.0;
    const auto levels = linalg::hermitian_levels(h, 1e-8);
    REQUIRE(levels.size() == 3);
    CHECK(levels[0].value == doctest::Approx(3.0));
    CHECK(levels[1].basis.cols() == 2);
    CHECK(levels[2].value == doctest::Approx(-2.0));
  }

  TEST_CASE("nilpotent exponential and logarithm are inverse") {
    const Matrix n = testing::sym2_f() * Complex(0.3, -0.7);
    const Matrix g = linalg::nilpotent_exp(n, 3);
    CHECK((g - linalg::expm(n)).norm() < 1e-13);
    CHECK((linalg::unipotent_log(g, 3) - n).norm() < 1e-13);
  }

  TEST_CASE("real view round trip") {
    const Vector v = testing::vec({Complex(1, 2), Complex(-3, 0.5)});
    CHECK((linalg::from_real(linalg::to_real(v)) - v).norm() == 0.0);
  }

  TEST_CASE("complex complement is orthonormal and orthogonal") {
    Matrix b = Matrix::Zero(3, 1);
    b(0, 0) = 1.0 / std::sqrt(2.0);
    b(1, 0) = Complex(0, 1) / std::sqrt(2.0);
    const Matrix c = linalg::complex_complement(b);
    REQUIRE(c.cols() == 2);
    CHECK((c.adjoint() * c - Matrix::Identity(2, 2)).norm() < 1e-14);
    CHECK((b.adjoint() * c).norm() < 1e-14);
  }

  TEST_CASE("subspace gap of equal spans is zero") {
    RealMatrix q(3, 2);
    q << 1, 0, 0, 1, 0, 0;
    RealMatrix r(3, 2);
    r << 1, 1, 1, -1, 0, 0;
    r.col(0).normalize();
    r.col(1).normalize();
    CHECK(linalg::subspace_gap(q, r) < 1e-14);
    RealMatrix s(3, 2);
    s << 1, 0, 0, 0, 0, 1;
    CHECK(linalg::subspace_gap(q, s) > 0.5);
  }
}
