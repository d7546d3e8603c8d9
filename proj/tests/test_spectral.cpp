#include "doctest.h"
#include "qedlab/linalg.hpp"
#include "qedlab/spectral.hpp"

using namespace qedlab;

TEST_CASE("Lanczos agrees with dense") {
  cmat a = spectral::random_block(600, 600, 5);
  a = (a + a.adjoint()).eval();
  spectral::EigOptions o;
  o.count = 4;
  o.tol = 1e-10;
  const auto d = spectral::lowest_eigenpairs(make_op(a), o);
  CHECK(d.dense);
  o.dense_below = 0;
  const auto l = spectral::lowest_eigenpairs(make_op(a), o);
  CHECK_FALSE(l.dense);
  CHECK((d.eigenvalues - l.eigenvalues).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(l.residuals.maxCoeff() < 1e-8);
}

TEST_CASE("degenerate pairs are grouped") {
  rvec d(6);
  d << 1, 1, 2, 2 + 1e-9, 3, 4;
  const auto r = spectral::lowest_eigenpairs(make_diag_op(d), {.count = 5});
  const auto m = spectral::multiplicities(r.groups);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == 2);
  CHECK(m[1] == 2);
  CHECK(spectral::degeneracy_groups(d, 0).size() == 6);
}

TEST_CASE("quadratic form") {
  rvec d(3);
  d << 1, 2, 3;
  cvec v = cvec::Ones(3) / std::sqrt(3.0);
  CHECK(spectral::quadratic_form(make_diag_op(d), v).value == doctest::Approx(2.0));
  CHECK_THROWS(spectral::quadratic_form(make_diag_op(d), cvec::Ones(3)));
}

TEST_CASE("seeded runs are reproducible") {
  cmat a = spectral::random_block(300, 300, 9);
  a = (a + a.adjoint()).eval();
  spectral::EigOptions o;
  o.count = 2;
  o.dense_below = 0;
  const auto x = spectral::lowest_eigenpairs(make_op(a), o);
  const auto y = spectral::lowest_eigenpairs(make_op(a), o);
  CHECK((x.eigenvalues - y.eigenvalues).norm() == 0.0);
  CHECK(x.iterations == y.iterations);
}

TEST_CASE("non-Hermitian input is refused") {
  cmat a = cmat::Zero(3, 3);
  a(0, 1) = 1;
  CHECK_THROWS_AS(spectral::lowest_eigenpairs(make_op(a)), Error);
}
