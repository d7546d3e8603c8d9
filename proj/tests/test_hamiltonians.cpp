#include <cmath>

#include "doctest.h"
#include "qedlab/hamiltonians.hpp"
#include "qedlab/linalg.hpp"
#include "qedlab/spectral.hpp"

using namespace qedlab;

namespace {

struct Small {
  ElectronBasis eb = electron::build_electron_basis(1, 10, 6);
  modes::ModeSet ms;
  fock::FockBasis fb;
  rvec v;
  explicit Small(double e, int n_max = 1, double gamma = 0.3) {
    ms = modes::select_subset(modes::build_mode_set(0.5, 1.0, 0.5, e), 4);
    fb = fock::build_fock_basis(int(ms.size()), n_max);
    electron::PotentialSpec p;
    p.kind = electron::PotentialKind::soft_coulomb;
    p.gamma = gamma;
    v = electron::potential_values(eb, p);
  }
  ham::Operators ops() const { return ham::make_operators(eb, fb, ms, v); }
};

}  // namespace

TEST_CASE("squared Dirac operator equals the block assembly") {
  Small s(0.8);
  const auto d = ham::assemble_dirac(s.eb, s.fb, s.ms);
  const spmat sq = d.m * d.m;
  const auto b = ham::assemble_block_square(s.eb, s.fb, s.ms);
  CHECK(linalg::max_abs(spmat(sq - b.m)) / linalg::max_abs(sq) < 1e-12);
  CHECK(linalg::hermiticity_defect(d.m) < 1e-14);
}

TEST_CASE("spectral split invariants and backend agreement") {
  Small s(0.5);
  const auto d = ham::assemble_dirac(s.eb, s.fb, s.ms);
  const auto a = ham::spectral_split(d, ham::Backend::dense);
  const auto b = ham::spectral_split(d, ham::Backend::quadrature, 100);
  const Index n = d.dim();
  CHECK(a.gap >= 1 - 1e-12);
  CHECK(a.rank_plus + a.rank_minus == n);
  CHECK(linalg::max_abs(cmat(a.p_plus + a.p_minus - cmat::Identity(n, n))) < 1e-12);
  CHECK(linalg::max_abs(cmat(a.abs - a.sign * cmat(d.m))) < 1e-11);
  CHECK(linalg::max_abs(cmat(a.sign - b.sign)) < 1e-9);
}

TEST_CASE("sign quadrature weights") {
  const auto q = ham::sign_quadrature(50);
  CHECK(q.shifts.size() == 50);
  // (2/pi) int_0^inf dy / (1 + y^2) = 1
  double s = 0;
  for (std::size_t k = 0; k < q.shifts.size(); ++k) s += q.weights[k] / (1 + q.shifts[k]);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("inverse square root by quadrature") {
  cmat a = cmat::Random(30, 30);
  a = a * a.adjoint() + cmat::Identity(30, 30);
  const auto es = linalg::herm_eig(a);
  const cmat ref = es.vectors * es.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() * es.vectors.adjoint();
  const cvec v = cvec::Random(30);
  const cvec w = ham::inv_sqrt_apply([&](const cvec& x, cvec& y) { y = a * x; }, v, ham::sign_quadrature(200));
  CHECK((w - ref * v).norm() < 1e-10 * v.norm());
}

TEST_CASE("free Pauli-Fierz operator starts at one") {
  Small s(0.0, 0, 0.0);
  const auto ops = s.ops();
  const auto hs = ham::split_half(ops.x.m);
  const auto r = spectral::lowest_eigenpairs(ham::assemble_pauli_fierz(ops, ham::Backend::dense, &hs));
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Pauli-Fierz backends agree") {
  Small s(0.6);
  const auto ops = s.ops();
  const auto hs = ham::split_half(ops.x.m);
  const LinOp a = ham::assemble_pauli_fierz(ops, ham::Backend::dense, &hs);
  const LinOp b = ham::assemble_pauli_fierz(ops, ham::Backend::quadrature, nullptr, 200);
  const cvec v = cvec::Random(a.dim);
  CHECK((a * v - b * v).norm() < 1e-9 * v.norm());
}

TEST_CASE("no-pair compression") {
  Small s(0.4);
  const auto ops = s.ops();
  const auto hs = ham::split_half(ops.x.m);
  const auto np = ham::assemble_no_pair(ops, ham::Backend::dense, &hs);
  CHECK(np.h_plus.rows() + np.h_minus.rows() == ops.x.dim() * 2);
  CHECK(linalg::hermiticity_defect(np.h_plus) < 1e-12);
  const cmat g = np.basis_plus.adjoint() * np.basis_plus;
  CHECK(linalg::max_abs(cmat(g - cmat::Identity(g.rows(), g.cols()))) < 1e-12);
}

TEST_CASE("Kramers involution") {
  Small s(0.7);
  const ham::Kramers k(s.eb, s.fb, 4);
  const cvec v = cvec::Random(4 * s.eb.points() * s.fb.dim());
  CHECK((k.apply(k.apply(v)) + v).norm() < 1e-13);
  CHECK(std::abs(k.apply(v).dot(v)) < 1e-12);
  CHECK_NOTHROW(ham::Kramers::check_preconditions(s.eb, s.ms, s.v));
  rvec odd = s.v;
  odd[0] += 0.1;
  CHECK_THROWS_AS(ham::Kramers::check_preconditions(s.eb, s.ms, odd), Error);
  const auto ops = s.ops();
  const auto hs = ham::split_half(ops.x.m);
  const auto np = ham::assemble_no_pair(ops, ham::Backend::dense, &hs);
  CHECK(k.commutator_residual(np.h_hat, {v}) < 1e-10);
}

TEST_CASE("gauge transformation") {
  Small s0(0.0);
  const auto g0 = ham::gauge_transform(s0.eb, s0.fb, s0.ms);
  CHECK(linalg::max_abs(spmat(g0.unitary - linalg::identity(g0.unitary.rows()))) == 0.0);
  Small s(0.5);
  const auto g = ham::gauge_transform(s.eb, s.fb, s.ms);
  CHECK(g.unitarity_defect < 1e-12);
}

TEST_CASE("fiber operator") {
  const auto ms = modes::select_subset(modes::build_mode_set(0.5, 1.0, 0.5, 0.0), 4);
  const auto fb0 = fock::build_fock_basis(int(ms.size()), 0);
  const rvec e = linalg::herm_eigvals(ham::fiber_hamiltonian(fb0, ms, Vec3::Zero(), ham::FiberKind::pf, 1));
  CHECK(e[0] == doctest::Approx(1.0));
  const auto ms1 = modes::select_subset(modes::build_mode_set(0.5, 1.0, 0.5, 0.5), 4);
  const auto fb = fock::build_fock_basis(int(ms1.size()), 1);
  for (auto kind : {ham::FiberKind::pf, ham::FiberKind::np}) {
    const double a = linalg::herm_eigvals(ham::fiber_hamiltonian(fb, ms1, Vec3(0.3, 0, 0), kind, 1))[0];
    const double b = linalg::herm_eigvals(ham::fiber_hamiltonian(fb, ms1, Vec3(-0.3, 0, 0), kind, 1))[0];
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}
