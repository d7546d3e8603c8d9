#include "doctest.h"
#include "qedlab/fock.hpp"
#include "qedlab/linalg.hpp"

using namespace qedlab;

TEST_CASE("truncated Fock dimension") {
  for (int M : {1, 3, 6})
    for (int n : {0, 1, 2, 3}) CHECK(fock::build_fock_basis(M, n).dim() == Index(fock::binomial(M + n, n)));
}

TEST_CASE("ladder operators") {
  const auto fb = fock::build_fock_basis(3, 3);
  const Index F = fb.dim();
  for (int i = 0; i < 3; ++i) {
    const spmat a = fock::ladder(fb, i, fock::Direction::annihilate).matrix;
    const spmat c = fock::ladder(fb, i, fock::Direction::create).matrix;
    CHECK(linalg::max_abs(spmat(c - spmat(a.adjoint()))) == 0.0);
    for (int j = 0; j < 3; ++j) {
      const spmat cj = fock::ladder(fb, j, fock::Direction::create).matrix;
      cmat comm = cmat(spmat(a * cj - cj * a));
      if (i == j) comm -= cmat::Identity(F, F);
      for (Index r = 0; r < F; ++r)
        for (Index q = 0; q < F; ++q)
          if (fb.total(r) < 3 && fb.total(q) < 3) CHECK(std::abs(comm(r, q)) < 1e-14);
    }
  }
}

TEST_CASE("number operator and occupancies") {
  const auto fb = fock::build_fock_basis(4, 2);
  const rvec ones = rvec::Ones(4);
  CHECK((fock::dgamma_diagonal(fb, ones) - cmat(fock::number_operator(fb).matrix).diagonal().real()).norm() == 0.0);
  cvec v = cvec::Random(3 * fb.dim());
  v.normalize();
  const rvec occ = fock::mode_occupancies(fb, v);
  const rvec n = fock::dgamma_diagonal(fb, ones);
  double expect = 0;
  for (Index i = 0; i < v.size(); ++i) expect += std::norm(v[i]) * n[i % fb.dim()];
  CHECK(occ.sum() == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("field operator is Hermitian") {
  const auto fb = fock::build_fock_basis(3, 2);
  cvec c(3);
  c << cplx(0.1, 0.2), cplx(-0.3, 0.0), cplx(0.0, 0.5);
  const auto f = fock::field_operator(fb, c);
  CHECK(linalg::hermiticity_defect(f.matrix) < 1e-15);
}

TEST_CASE("coordinate text round trip") {
  const auto fb = fock::build_fock_basis(2, 2);
  const spmat a = fock::ladder(fb, 1, fock::Direction::create).matrix;
  const spmat b = fock::from_coordinate_text(fock::coordinate_text(a), a.rows(), a.cols());
  CHECK(linalg::max_abs(spmat(a - b)) == 0.0);
}
