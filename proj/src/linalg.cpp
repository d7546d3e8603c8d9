#include "qedlab/linalg.hpp"

#include <lapacke.h>

#include <cmath>

namespace qedlab {

cmat LinOp::to_dense() const {
  if (dense) return *dense;
  if (sparse) return cmat(*sparse);
  cmat id = cmat::Identity(dim, dim);
  cmat out(dim, dim);
  apply(id, out);
  return out;
}

cvec LinOp::operator*(const cvec& v) const {
  cmat in = v;
  cmat out(dim, 1);
  apply(in, out);
  return out.col(0);
}

LinOp make_op(cmat m) {
  LinOp op;
  op.dim = m.rows();
  auto p = std::make_shared<const cmat>(std::move(m));
  op.dense = p;
  op.apply = [p](const cmat& in, cmat& out) { out.noalias() = (*p) * in; };
  return op;
}

LinOp make_op(spmat m) {
  LinOp op;
  op.dim = m.rows();
  auto p = std::make_shared<const spmat>(std::move(m));
  op.sparse = p;
  op.apply = [p](const cmat& in, cmat& out) { out.noalias() = (*p) * in; };
  return op;
}

LinOp make_diag_op(rvec d) {
  LinOp op;
  op.dim = d.size();
  auto p = std::make_shared<const rvec>(std::move(d));
  op.apply = [p](const cmat& in, cmat& out) { out = p->asDiagonal() * in; };
  return op;
}

}  // namespace qedlab

namespace qedlab::linalg {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  require(n >= 1, "gauss_legendre: n >= 1");
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = wi;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
}

HermEig herm_eig(const cmat& a, bool want_vectors) {
  require(a.rows() == a.cols(), "herm_eig: square matrix required");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  HermEig out;
  out.values.resize(n);
  if (n == 0) return out;
  cmat work = a;
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'U', n,
                            reinterpret_cast<lapack_complex_double*>(work.data()), n, out.values.data());
  if (info != 0) fail(ErrorCode::not_converged, "zheevd failed, info=" + std::to_string(info));
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

rvec herm_eigvals(const cmat& a) { return herm_eig(a, false).values; }

double max_abs(const cmat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double max_abs(const spmat& a) {
  double m = 0;
  for (int k = 0; k < a.outerSize(); ++k)
    for (spmat::InnerIterator it(a, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

double hermiticity_defect(const spmat& a) {
  spmat d = a - spmat(a.adjoint());
  return max_abs(d);
}

double hermiticity_defect(const cmat& a) { return max_abs(cmat(a - a.adjoint())); }

spmat identity(Index n) {
  spmat m(n, n);
  m.setIdentity();
  return m;
}

spmat diag(const rvec& d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (Index i = 0; i < d.size(); ++i)
    if (d[i] != 0.0) t.emplace_back(i, i, d[i]);
  spmat m(d.size(), d.size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

cvec multishift_cg(const std::function<void(const cvec&, cvec&)>& q, const cvec& b,
                   const std::vector<double>& shifts, const std::vector<double>& weights, double tol,
                   int max_iter, MultiShiftStats* stats) {
  const std::size_t ns = shifts.size();
  const Index n = b.size();
  cvec result = cvec::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return result;
  std::vector<cvec> p(ns, b);
  std::vector<double> zeta(ns, 1.0), zeta_old(ns, 1.0), active(ns, 1.0);
  cvec r = b, ap(n);
  double rr = r.squaredNorm();
  double alpha_old = 1.0, beta_old = 0.0;
  int it = 0;
  // seed system is the unshifted operator
  cvec p0 = b;
  for (; it < max_iter; ++it) {
    q(p0, ap);
    const double pap = p0.dot(ap).real();
    const double alpha = rr / pap;
    for (std::size_t k = 0; k < ns; ++k) {
      if (active[k] == 0.0) continue;
      const double s = shifts[k];
      const double denom = alpha * beta_old * (zeta_old[k] - zeta[k]) + zeta_old[k] * alpha_old * (1.0 + s * alpha);
      const double zn = zeta[k] * zeta_old[k] * alpha_old / denom;
      const double ak = alpha * zn / zeta[k];
      result.noalias() += (weights[k] * ak) * p[k];
      zeta_old[k] = zeta[k];
      zeta[k] = zn;
    }
    r.noalias() -= alpha * ap;
    const double rr_new = r.squaredNorm();
    const double beta = rr_new / rr;
    const double rn = std::sqrt(rr_new);
    for (std::size_t k = 0; k < ns; ++k) {
      if (active[k] == 0.0) continue;
      const double bk = beta * (zeta[k] / zeta_old[k]) * (zeta[k] / zeta_old[k]);
      p[k] = zeta[k] * r + bk * p[k];
      if (std::abs(zeta[k]) * rn <= 0.1 * tol * bnorm) active[k] = 0.0;
    }
    p0 = r + beta * p0;
    alpha_old = alpha;
    beta_old = beta;
    rr = rr_new;
    if (rn <= tol * bnorm) {
      ++it;
      break;
    }
  }
  const double res = std::sqrt(rr) / bnorm;
  if (stats) {
    stats->iterations = it;
    stats->residual = res;
  }
  if (res > tol) fail(ErrorCode::not_converged, "multishift CG: residual " + std::to_string(res));
  return result;
}

}  // namespace qedlab::linalg
