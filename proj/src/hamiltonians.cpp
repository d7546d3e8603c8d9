#include "qedlab/hamiltonians.hpp"

#include <cmath>

#include "qedlab/linalg.hpp"

namespace qedlab::ham {

spmat embed_spinor(const Eigen::MatrixXcd& s, const spmat& scalar, Index F) {
  const Index r = s.rows();
  const Index dim = scalar.rows() * r;
  std::vector<Triplet> t;
  std::vector<std::pair<int, int>> nz;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (s(a, b) != cplx(0)) nz.emplace_back(a, b);
  t.reserve(scalar.nonZeros() * nz.size());
  for (int k = 0; k < scalar.outerSize(); ++k)
    for (spmat::InnerIterator it(scalar, k); it; ++it) {
      const Index xr = it.row() / F, fr = it.row() % F, xc = it.col() / F, fc = it.col() % F;
      for (auto [a, b] : nz) t.emplace_back((xr * r + a) * F + fr, (xc * r + b) * F + fc, s(a, b) * it.value());
    }
  spmat m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

cmat half_to_full(const cmat& upper, const cmat& lower, Index points, Index F) {
  const Index cols = upper.cols();
  cmat out = cmat::Zero(points * 4 * F, cols);
  for (Index x = 0; x < points; ++x)
    for (int s = 0; s < 2; ++s) {
      const Index h = (x * 2 + s) * F;
      out.block((x * 4 + s) * F, 0, F, cols) = upper.block(h, 0, F, cols);
      out.block((x * 4 + 2 + s) * F, 0, F, cols) = lower.block(h, 0, F, cols);
    }
  return out;
}

cmat full_block(const cmat& full, int blk, Index points, Index F) {
  const Index cols = full.cols();
  cmat out(points * 2 * F, cols);
  for (Index x = 0; x < points; ++x)
    for (int s = 0; s < 2; ++s) out.block((x * 2 + s) * F, 0, F, cols) = full.block((x * 4 + 2 * blk + s) * F, 0, F, cols);
  return out;
}

spmat field_component(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, int j,
                      modes::Gauge g) {
  require(Index(ms.size()) == fb.num_modes(), "field_component: mode count != Fock modes");
  const Index P = eb.points(), F = fb.dim();
  const int M = fb.num_modes();
  std::vector<Triplet> t;
  std::vector<cplx> amp(M);
  std::vector<Vec3> c(M);
  for (int m = 0; m < M; ++m) c[m] = ms.coeff(m);
  const bool shifted = g == modes::Gauge::pauli_fierz && j < eb.d;
  for (Index x = 0; x < P; ++x) {
    const Vec3 pos = eb.position(x);
    for (int m = 0; m < M; ++m) {
      cplx ph = std::exp(cplx(0, -modes::phase_arg(ms.modes[m].k, pos, eb.d)));
      if (shifted) ph -= 1.0;
      amp[m] = c[m][j] * ph;
    }
    for (Index f = 0; f < F; ++f) {
      const auto& st = fb.state(f);
      for (int m = 0; m < M; ++m) {
        if (amp[m] == cplx(0)) continue;
        const Index up = fb.raised(f, m);
        if (up < 0) continue;
        const double s = std::sqrt(double(st[m] + 1));
        t.emplace_back(x * F + up, x * F + f, amp[m] * s);
        t.emplace_back(x * F + f, x * F + up, std::conj(amp[m]) * s);
      }
    }
  }
  spmat a(P * F, P * F);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

namespace {

spmat kron_identity_right(const spmat& a, Index F) {
  std::vector<Triplet> t;
  t.reserve(a.nonZeros() * F);
  for (int k = 0; k < a.outerSize(); ++k)
    for (spmat::InnerIterator it(a, k); it; ++it)
      for (Index f = 0; f < F; ++f) t.emplace_back(it.row() * F + f, it.col() * F + f, it.value());
  spmat m(a.rows() * F, a.cols() * F);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

spmat kinetic_component(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, int j,
                        modes::Gauge g) {
  spmat a = field_component(eb, fb, ms, j, g);
  if (j < eb.d) {
    spmat p = electron::momentum_operator(eb, j);
    spmat pf = kron_identity_right(p, fb.dim());
    a += pf;
  }
  return a;
}

SparseHermitian assemble_sigma_pi(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms,
                                  modes::Gauge g) {
  const auto s = electron::pauli_matrices();
  const Index F = fb.dim();
  spmat x(eb.points() * 2 * F, eb.points() * 2 * F);
  for (int j = 0; j < 3; ++j) {
    spmat pij = kinetic_component(eb, fb, ms, j, g);
    if (pij.nonZeros() == 0) continue;
    x += embed_spinor(s[j], pij, F);
  }
  x.prune(cplx(0));
  return {x, {eb.points(), 2, F}};
}

SparseHermitian assemble_dirac(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms,
                               modes::Gauge g) {
  const auto al = electron::dirac_matrices();
  const Index F = fb.dim();
  const Index PF = eb.points() * F;
  spmat d(PF * 4, PF * 4);
  for (int j = 0; j < 3; ++j) {
    spmat pij = kinetic_component(eb, fb, ms, j, g);
    if (pij.nonZeros() == 0) continue;
    d += embed_spinor(al.alpha[j], pij, F);
  }
  d += embed_spinor(al.beta, linalg::identity(PF), F);
  d.prune(cplx(0));
  return {d, {eb.points(), 4, F}};
}

SparseHermitian assemble_block_square(const ElectronBasis& eb, const fock::FockBasis& fb,
                                      const modes::ModeSet& ms, modes::Gauge g) {
  const SparseHermitian x = assemble_sigma_pi(eb, fb, ms, g);
  spmat t = x.m * x.m;
  t += linalg::identity(t.rows());
  const Index F = fb.dim();
  std::vector<Triplet> tr;
  tr.reserve(2 * t.nonZeros());
  for (int k = 0; k < t.outerSize(); ++k)
    for (spmat::InnerIterator it(t, k); it; ++it) {
      const Index xr = it.row() / (2 * F), sr = (it.row() / F) % 2, fr = it.row() % F;
      const Index xc = it.col() / (2 * F), sc = (it.col() / F) % 2, fc = it.col() % F;
      for (int blk = 0; blk < 2; ++blk)
        tr.emplace_back((xr * 4 + 2 * blk + sr) * F + fr, (xc * 4 + 2 * blk + sc) * F + fc, it.value());
    }
  spmat out(t.rows() * 2, t.cols() * 2);
  out.setFromTriplets(tr.begin(), tr.end());
  return {out, {eb.points(), 4, F}};
}

rvec potential_diagonal(const ElectronBasis& eb, const fock::FockBasis& fb, const rvec& v, int r) {
  const Index F = fb.dim();
  rvec d(eb.points() * r * F);
  for (Index x = 0; x < eb.points(); ++x) d.segment(x * r * F, r * F).setConstant(v[x]);
  return d;
}

rvec field_energy_diagonal(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, int r) {
  rvec w(ms.size());
  for (std::size_t j = 0; j < ms.size(); ++j) w[j] = ms.modes[j].omega;
  const rvec hf = fock::dgamma_diagonal(fb, w);
  const Index F = fb.dim();
  rvec d(eb.points() * r * F);
  for (Index b = 0; b < eb.points() * r; ++b) d.segment(b * F, F) = hf;
  return d;
}

Operators make_operators(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, const rvec& v,
                         modes::Gauge g) {
  require(v.size() == eb.points(), "make_operators: potential size mismatch");
  Operators ops;
  ops.eb = eb;
  ops.fb = fb;
  ops.ms = ms;
  ops.gauge = g;
  ops.v = v;
  ops.x = assemble_sigma_pi(eb, fb, ms, g);
  return ops;
}

LinOp brown_ravenhall(const ElectronBasis& eb, double gamma) {
  electron::PotentialSpec spec;
  spec.kind = electron::PotentialKind::coulomb;
  spec.gamma = gamma;
  return electron::brown_ravenhall(eb, spec);
}

cmat fiber_hamiltonian(const fock::FockBasis& fb, const modes::ModeSet& ms, const Vec3& P, FiberKind kind, int d) {
  require(Index(ms.size()) == fb.num_modes(), "fiber_hamiltonian: mode count != Fock modes");
  const auto s = electron::pauli_matrices();
  const Index F = fb.dim();
  const int M = fb.num_modes();
  cmat x = cmat::Zero(2 * F, 2 * F);
  for (int j = 0; j < 3; ++j) {
    cvec c(M);
    rvec kj(M);
    for (int m = 0; m < M; ++m) {
      c[m] = ms.coeff(m)[j];
      kj[m] = ms.modes[m].k[j];
    }
    cmat pij = cmat(fock::field_operator(fb, c).matrix);
    pij.diagonal().array() += P[j];
    if (j < d) pij.diagonal() -= fock::dgamma_diagonal(fb, kj).cast<cplx>();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        if (s[j](a, b) != cplx(0)) x.block(a * F, b * F, F, F) += s[j](a, b) * pij;
  }
  // fiber ordering is (spinor, fock); same algebra as the grid case with one point
  x = 0.5 * (x + x.adjoint());
  auto eg = linalg::herm_eig(x);
  const rvec& sv = eg.values;
  rvec mu = (sv.array().square() + 1.0).sqrt();
  rvec w(M);
  for (int m = 0; m < M; ++m) w[m] = ms.modes[m].omega;
  const rvec hf1 = fock::dgamma_diagonal(fb, w);
  rvec hf(2 * F);
  hf << hf1, hf1;
  if (kind == FiberKind::pf) {
    cmat h = eg.vectors * mu.asDiagonal() * eg.vectors.adjoint();
    h.diagonal() += hf.cast<cplx>();
    return 0.5 * (h + h.adjoint());
  }
  HalfSplit hs{sv, mu, eg.vectors};
  rvec a, b;
  pair_coefficients(hs, a, b);
  cmat m = eg.vectors.adjoint() * hf.asDiagonal() * eg.vectors;
  rmat ab = a * a.transpose() + b * b.transpose();
  cmat h = m.cwiseProduct(ab.cast<cplx>());
  h.diagonal() += mu.cast<cplx>();
  return 0.5 * (h + h.adjoint());
}

GaugeTransform gauge_transform(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms) {
  const Index P = eb.points(), F = fb.dim();
  const int M = fb.num_modes();
  std::vector<linalg::HermEig> eig(eb.d);
  std::vector<cvec> g(eb.d);
  for (int j = 0; j < eb.d; ++j) {
    g[j].resize(M);
    for (int m = 0; m < M; ++m) g[j][m] = ms.coeff(m)[j];
    eig[j] = linalg::herm_eig(cmat(fock::field_operator(fb, g[j]).matrix));
  }
  rvec w(M);
  for (int m = 0; m < M; ++m) w[m] = ms.modes[m].omega;
  const rvec hf = fock::dgamma_diagonal(fb, w);
  // a(omega g) - a^*(omega g) as a matrix: anti-Hermitian
  std::vector<cmat> k(eb.d);
  for (int j = 0; j < eb.d; ++j) {
    cvec og = g[j].cwiseProduct(w.cast<cplx>());
    cmat create = cmat::Zero(F, F);
    for (int m = 0; m < M; ++m) create += og[m] * cmat(fock::ladder(fb, m, fock::Direction::create).matrix);
    k[j] = create.adjoint() - create;
  }
  std::vector<Triplet> tu, th;
  double defect = 0;
  for (Index x = 0; x < P; ++x) {
    const Vec3 pos = eb.position(x);
    cmat u = cmat::Identity(F, F);
    for (int j = 0; j < eb.d; ++j) {
      cvec ph = (cplx(0, pos[j]) * eig[j].values.cast<cplx>()).array().exp();
      u = u * (eig[j].vectors * ph.asDiagonal() * eig[j].vectors.adjoint());
    }
    defect = std::max(defect, linalg::max_abs(cmat(u.adjoint() * u - cmat::Identity(F, F))));
    cmat ht = hf.cast<cplx>().asDiagonal();
    double cst = 0;
    for (int j = 0; j < eb.d; ++j) {
      ht += cplx(0, pos[j]) * k[j];
      for (int l = 0; l < eb.d; ++l) {
        cplx ip = 0;
        for (int m = 0; m < M; ++m) ip += std::conj(g[j][m]) * w[m] * g[l][m];
        cst += pos[j] * pos[l] * ip.real();
      }
    }
    ht.diagonal().array() += cst;
    for (Index a = 0; a < F; ++a)
      for (Index b = 0; b < F; ++b) {
        if (std::abs(u(a, b)) > 0) tu.emplace_back(x * F + a, x * F + b, u(a, b));
        if (std::abs(ht(a, b)) > 0) th.emplace_back(x * F + a, x * F + b, ht(a, b));
      }
  }
  GaugeTransform gt;
  gt.unitary.resize(P * F, P * F);
  gt.unitary.setFromTriplets(tu.begin(), tu.end());
  gt.field_energy.resize(P * F, P * F);
  gt.field_energy.setFromTriplets(th.begin(), th.end());
  gt.unitarity_defect = defect;
  if (defect > 1e-10) fail(ErrorCode::not_converged, "gauge_transform: exponential not unitary to 1e-10");
  return gt;
}

cvec apply_scalar(const spmat& op, const cvec& psi, int r, Index F) {
  const Index P = op.rows() / F;
  require(psi.size() == P * r * F, "apply_scalar: size mismatch");
  // gather each spinor component as a scalar-space vector
  cvec out(psi.size());
  cvec tmp(P * F), res(P * F);
  for (int s = 0; s < r; ++s) {
    for (Index x = 0; x < P; ++x) tmp.segment(x * F, F) = psi.segment((x * r + s) * F, F);
    res = op * tmp;
    for (Index x = 0; x < P; ++x) out.segment((x * r + s) * F, F) = res.segment(x * F, F);
  }
  return out;
}

Kramers::Kramers(const ElectronBasis& eb, const fock::FockBasis& fb, int r) : eb_(eb), F_(fb.dim()), r_(r) {
  require(r == 4 || r == 2, "Kramers: r must be 2 or 4");
  const auto s = electron::pauli_matrices();
  if (r == 4) {
    const auto al = electron::dirac_matrices();
    Eigen::Matrix4cd J = Eigen::Matrix4cd::Zero();
    J.block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();
    J.block<2, 2>(2, 0) = -Eigen::Matrix2cd::Identity();
    m_ = J * al.alpha[1];
  } else {
    m_ = s[1];
  }
}

cvec Kramers::apply(const cvec& psi) const {
  const Index P = eb_.points();
  require(psi.size() == P * r_ * F_, "Kramers::apply: size mismatch");
  cvec out = cvec::Zero(psi.size());
  for (Index x = 0; x < P; ++x) {
    const Index xr = eb_.parity(x);
    for (int a = 0; a < r_; ++a)
      for (int b = 0; b < r_; ++b) {
        const cplx m = m_(a, b);
        if (m == cplx(0)) continue;
        out.segment((x * r_ + a) * F_, F_) += m * psi.segment((xr * r_ + b) * F_, F_).conjugate();
      }
  }
  return out;
}

double Kramers::commutator_residual(const LinOp& h, const std::vector<cvec>& probes) const {
  double worst = 0;
  for (const auto& p : probes) {
    const cvec hp = h * p;
    const cvec lhs = h * apply(p);
    const cvec rhs = apply(hp);
    worst = std::max(worst, (lhs - rhs).norm() / std::max(hp.norm(), 1e-300));
  }
  return worst;
}

void Kramers::check_preconditions(const ElectronBasis& eb, const modes::ModeSet& ms, const rvec& v) {
  if (!electron::potential_is_even(eb, v)) fail(ErrorCode::precondition, "Kramers: potential is not parity symmetric");
  for (std::size_t j = 0; j < ms.size(); ++j) {
    const auto& a = ms.modes[j];
    if (a.partner < 0) fail(ErrorCode::precondition, "Kramers: mode without partner");
    const auto& b = ms.modes[a.partner];
    if (b.k != -a.k || b.gavg != a.gavg || b.cell_volume != a.cell_volume)
      fail(ErrorCode::precondition, "Kramers: mode set not symmetric under k -> -k");
  }
}

}  // namespace qedlab::ham
