#include <cmath>

#include "json.hpp"
#include "qedlab/hamiltonians.hpp"
#include "qedlab/linalg.hpp"

namespace qedlab::ham {

Backend backend_from_string(const std::string& s) {
  if (s == "dense") return Backend::dense;
  if (s == "quadrature") return Backend::quadrature;
  fail(ErrorCode::invalid_argument, "unknown backend '" + s + "' (dense|quadrature)");
}

std::string to_string(Backend b) { return b == Backend::dense ? "dense" : "quadrature"; }

QuadratureRule sign_quadrature(int K) {
  require(K >= 1, "sign_quadrature: K >= 1");
  std::vector<double> x, w;
  linalg::gauss_legendre(2 * K, x, w);
  QuadratureRule r;
  for (int i = 0; i < 2 * K; ++i) {
    if (x[i] <= 0) continue;
    const double th = 0.5 * kPi * x[i];
    const double c = std::cos(th);
    const double y = std::tan(th);
    r.shifts.push_back(y * y);
    // (2/pi) (pi/2) w sec^2; the integrand is even in theta so the positive half suffices
    r.weights.push_back(w[i] / (c * c));
  }
  return r;
}

cvec inv_sqrt_apply(const std::function<void(const cvec&, cvec&)>& q, const cvec& v, const QuadratureRule& rule,
                    double tol) {
  return linalg::multishift_cg(q, v, rule.shifts, rule.weights, tol, 20000);
}

std::string SpectralSplit::to_json() const {
  nlohmann::json j;
  j["backend"] = ham::to_string(backend);
  j["dim"] = abs.rows();
  j["rank_plus"] = rank_plus;
  j["rank_minus"] = rank_minus;
  j["gap"] = gap;
  return j.dump();
}

namespace {

// D = [[1, X], [X, -1]] with X Hermitian certifies D^2 = (1 + X^2) (+) (1 + X^2) >= 1
bool dirac_structure(const spmat& d, Index F) {
  for (int k = 0; k < d.outerSize(); ++k)
    for (spmat::InnerIterator it(d, k); it; ++it) {
      const Index sr = (it.row() / F) % 4, sc = (it.col() / F) % 4;
      const bool upr = sr < 2, upc = sc < 2;
      if (upr == upc) {
        if (it.row() != it.col()) return false;
        if (std::abs(it.value() - cplx(upr ? 1.0 : -1.0)) > 1e-14) return false;
      }
    }
  return linalg::hermiticity_defect(d) < 1e-13;
}

}  // namespace

SpectralSplit spectral_split(const SparseHermitian& d, Backend b, int K) {
  const Index N = d.dim();
  SpectralSplit s;
  s.backend = b;
  if (b == Backend::dense) {
    auto eg = linalg::herm_eig(cmat(d.m));
    s.gap = eg.values.cwiseAbs().minCoeff();
    if (s.gap < 1.0 - 1e-9) fail(ErrorCode::precondition, "spectral_split: operator has spectrum inside (-1, 1)");
    rvec sg(N), ab(N), pp(N), pm(N);
    for (Index i = 0; i < N; ++i) {
      const double l = eg.values[i];
      sg[i] = l > 0 ? 1 : -1;
      ab[i] = std::abs(l);
      pp[i] = l > 0;
      pm[i] = l < 0;
    }
    const cmat& V = eg.vectors;
    s.sign = V * sg.asDiagonal() * V.adjoint();
    s.abs = V * ab.asDiagonal() * V.adjoint();
    s.p_plus = V * pp.asDiagonal() * V.adjoint();
    s.p_minus = V * pm.asDiagonal() * V.adjoint();
    s.rank_plus = Index(pp.sum());
    s.rank_minus = Index(pm.sum());
    return s;
  }
  if (!dirac_structure(d.m, d.shape.fock))
    fail(ErrorCode::precondition, "spectral_split: quadrature backend needs beta-diagonal Dirac structure");
  s.gap = 1.0;
  const QuadratureRule rule = sign_quadrature(K);
  const spmat& D = d.m;
  auto q = [&](const cvec& v, cvec& out) { out = D * (D * v); };
  s.sign.resize(N, N);
  for (Index i = 0; i < N; ++i) {
    cvec e = cvec::Zero(N);
    e[i] = 1;
    const cvec de = D * e;
    s.sign.col(i) = inv_sqrt_apply(q, de, rule);
  }
  s.sign = 0.5 * (s.sign + s.sign.adjoint());
  s.abs = s.sign * D;
  s.abs = 0.5 * (s.abs + s.abs.adjoint());
  const cmat I = cmat::Identity(N, N);
  s.p_plus = 0.5 * (I + s.sign);
  s.p_minus = 0.5 * (I - s.sign);
  s.rank_plus = Index(std::llround(s.p_plus.trace().real()));
  s.rank_minus = Index(std::llround(s.p_minus.trace().real()));
  return s;
}

HalfSplit split_half(const spmat& x) {
  auto eg = linalg::herm_eig(cmat(x));
  HalfSplit hs;
  hs.s = eg.values;
  hs.W = std::move(eg.vectors);
  hs.mu = (hs.s.array().square() + 1.0).sqrt();
  return hs;
}

void pair_coefficients(const HalfSplit& hs, rvec& a, rvec& b) {
  const rvec inv = hs.mu.cwiseInverse();
  const rvec q = (2.0 + 2.0 * inv.array()).sqrt();
  a = (1.0 + inv.array()) / q.array();
  b = (hs.s.array() * inv.array()) / q.array();
}

LinOp assemble_pauli_fierz(const Operators& ops, Backend b, const HalfSplit* hs, int K) {
  const rvec d = potential_diagonal(ops.eb, ops.fb, ops.v, 2) + field_energy_diagonal(ops.eb, ops.fb, ops.ms, 2);
  if (b == Backend::dense) {
    HalfSplit local;
    if (!hs) {
      local = split_half(ops.x.m);
      hs = &local;
    }
    cmat h = hs->W * hs->mu.asDiagonal() * hs->W.adjoint();
    h.diagonal() += d.cast<cplx>();
    return make_op(cmat(0.5 * (h + h.adjoint())));
  }
  auto X = std::make_shared<spmat>(ops.x.m);
  auto rule = std::make_shared<QuadratureRule>(sign_quadrature(K));
  LinOp op;
  op.dim = X->rows();
  op.apply = [X, rule, d](const cmat& in, cmat& out) {
    out.resize(in.rows(), in.cols());
    auto q = [&](const cvec& v, cvec& o) { o = v + *X * (*X * v); };
    for (Index c = 0; c < in.cols(); ++c) {
      cvec tv;
      q(in.col(c), tv);
      out.col(c) = inv_sqrt_apply(q, tv, *rule) + d.cwiseProduct(in.col(c));
    }
  };
  return op;
}

cmat pauli_fierz_full_dense(const Operators& ops, const HalfSplit& hs) {
  const cmat h2 = assemble_pauli_fierz(ops, Backend::dense, &hs).to_dense();
  const Index P = ops.eb.points(), F = ops.fb.dim();
  const Index n2 = h2.rows();
  cmat e = cmat::Identity(n2, n2);
  cmat zero = cmat::Zero(n2, n2);
  cmat up = half_to_full(e, zero, P, F), lo = half_to_full(zero, e, P, F);
  return up * h2 * up.adjoint() + lo * h2 * lo.adjoint();
}

NoPair assemble_no_pair(const Operators& ops, Backend b, const HalfSplit* hs, int K, bool with_potential) {
  const Index P = ops.eb.points(), F = ops.fb.dim();
  const rvec hf = field_energy_diagonal(ops.eb, ops.fb, ops.ms, 2);
  rvec d = hf;
  if (with_potential) d += potential_diagonal(ops.eb, ops.fb, ops.v, 2);
  NoPair np;
  if (b == Backend::dense) {
    HalfSplit local;
    if (!hs) {
      local = split_half(ops.x.m);
      hs = &local;
    }
    rvec a, bb;
    pair_coefficients(*hs, a, bb);
    const cmat& W = hs->W;
    const rmat ab = a * a.transpose() + bb * bb.transpose();
    cmat m = W.adjoint() * d.asDiagonal() * W;
    np.h_plus = m.cwiseProduct(ab.cast<cplx>());
    np.h_plus.diagonal() += hs->mu.cast<cplx>();
    np.h_plus = 0.5 * (np.h_plus + np.h_plus.adjoint());
    cmat mm = W.adjoint() * hf.asDiagonal() * W;
    np.h_minus = mm.cwiseProduct(ab.cast<cplx>());
    np.h_minus.diagonal() += hs->mu.cast<cplx>();
    np.h_minus = 0.5 * (np.h_minus + np.h_minus.adjoint());
    const cmat wa = W * a.asDiagonal(), wb = W * bb.asDiagonal();
    np.basis_plus = half_to_full(wa, wb, P, F);
    np.basis_minus = half_to_full(-wb, wa, P, F);
    auto bp = std::make_shared<cmat>(np.basis_plus), bm = std::make_shared<cmat>(np.basis_minus);
    auto hp = std::make_shared<cmat>(np.h_plus), hm = std::make_shared<cmat>(np.h_minus);
    np.h_hat.dim = bp->rows();
    np.h_hat.apply = [bp, bm, hp, hm](const cmat& in, cmat& out) {
      out = *bp * (*hp * (bp->adjoint() * in)) + *bm * (*hm * (bm->adjoint() * in));
    };
    return np;
  }
  // matrix-free: P+ (D + V + H_f) P+ + c P-
  const SparseHermitian D = assemble_dirac(ops.eb, ops.fb, ops.ms, ops.gauge);
  if (!dirac_structure(D.m, F)) fail(ErrorCode::internal, "assemble_no_pair: Dirac structure check failed");
  rvec dfull(P * 4 * F);
  for (Index x = 0; x < P; ++x)
    for (int blk = 0; blk < 2; ++blk)
      dfull.segment((x * 4 + 2 * blk) * F, 2 * F) = d.segment(x * 2 * F, 2 * F);
  double rownorm = 0;
  for (int k = 0; k < D.m.outerSize(); ++k) {
    double s = 0;
    for (spmat::InnerIterator it(D.m, k); it; ++it) s += std::abs(it.value());
    rownorm = std::max(rownorm, s);
  }
  np.shift = 2.0 * (rownorm + dfull.cwiseAbs().maxCoeff()) + 10.0;
  auto Dp = std::make_shared<spmat>(D.m);
  auto rule = std::make_shared<QuadratureRule>(sign_quadrature(K));
  const double c = np.shift;
  np.h_hat.dim = Dp->rows();
  np.h_hat.apply = [Dp, rule, dfull, c](const cmat& in, cmat& out) {
    out.resize(in.rows(), in.cols());
    auto q = [&](const cvec& v, cvec& o) { o = *Dp * (*Dp * v); };
    auto pplus = [&](const cvec& v) -> cvec {
      const cvec s = inv_sqrt_apply(q, *Dp * v, *rule);
      return 0.5 * (v + s);
    };
    for (Index k = 0; k < in.cols(); ++k) {
      const cvec v = in.col(k);
      const cvec w = pplus(v);
      const cvec u = *Dp * w + dfull.cwiseProduct(w);
      out.col(k) = pplus(u) + c * (v - w);
    }
  };
  return np;
}

}  // namespace qedlab::ham
