#include <cmath>

#include "doctest.h"
#include "qedlab/electron.hpp"
#include "qedlab/linalg.hpp"
#include "qedlab/spectral.hpp"

using namespace qedlab;

TEST_CASE("grid is parity symmetric") {
  const auto eb = electron::build_electron_basis(3, 10, 6);
  for (Index i = 0; i < eb.points(); ++i) CHECK((eb.position(eb.parity(i)) + eb.position(i)).norm() < 1e-14);
}

TEST_CASE("Fourier pairing is unitary") {
  const auto eb = electron::build_electron_basis(1, 8, 16);
  cvec v = cvec::Random(eb.points());
  const cvec h = electron::to_momentum(eb, v);
  CHECK(h.norm() == doctest::Approx(v.norm()));
  CHECK((electron::to_grid(eb, h) - v).norm() < 1e-13);
  const cmat F = electron::dft_matrix(eb);
  CHECK((F * v - h).norm() < 1e-12);
}

TEST_CASE("free square root, dense and FFT") {
  const auto eb = electron::build_electron_basis(1, 8, 16);
  const cmat d = electron::free_sqrt_dense(eb);
  const LinOp op = electron::free_sqrt_op(eb);
  cvec v = cvec::Random(eb.points());
  CHECK((d * v - op * v).norm() < 1e-12);
  CHECK(linalg::herm_eigvals(d).minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("Dirac matrices") {
  const auto a = electron::dirac_matrices();
  CHECK((a.beta * a.beta - Eigen::Matrix4cd::Identity()).norm() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK((a.alpha[i] * a.beta + a.beta * a.alpha[i]).norm() == 0.0);
}

TEST_CASE("free Dirac spectrum is symmetric with gap") {
  const auto eb = electron::build_electron_basis(1, 5, 8);
  const rvec s = electron::free_dirac_spectrum(eb);
  CHECK(s.cwiseAbs().minCoeff() >= 1.0);
  CHECK((s + s.reverse()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("potentials") {
  const auto eb = electron::build_electron_basis(1, 20, 16);
  electron::PotentialSpec p;
  p.kind = electron::PotentialKind::soft_coulomb;
  p.gamma = 0.5;
  const rvec v = electron::potential_values(eb, p);
  CHECK(electron::potential_is_even(eb, v));
  CHECK(v.maxCoeff() < 0);
  CHECK_THROWS(electron::potential_kind_from_string("yukawa"));
}

TEST_CASE("Brown-Ravenhall without potential") {
  const auto eb = electron::build_electron_basis(3, 4, 4);
  electron::PotentialSpec p;
  spectral::EigOptions o;
  o.count = 2;
  const auto r = spectral::lowest_eigenpairs(electron::brown_ravenhall(eb, p), o);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0));
}

TEST_CASE("electronic comparison operator binds a soft Coulomb well") {
  const auto eb = electron::build_electron_basis(1, 20, 32);
  electron::PotentialSpec p;
  p.kind = electron::PotentialKind::soft_coulomb;
  p.gamma = 0.5;
  const auto r = spectral::lowest_eigenpairs(electron::electronic_comparison(eb, p));
  CHECK(r.eigenvalues[0] < 1.0);
  p.gamma = 0;
  CHECK(spectral::lowest_eigenpairs(electron::electronic_comparison(eb, p)).eigenvalues[0] == doctest::Approx(1.0));
}
