#include "qedlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "json.hpp"
#include "qedlab/linalg.hpp"

namespace qedlab::spectral {

std::string SpectralResult::to_json() const {
  nlohmann::json j;
  j["eigenvalues"] = std::vector<double>(eigenvalues.data(), eigenvalues.data() + eigenvalues.size());
  j["residuals"] = std::vector<double>(residuals.data(), residuals.data() + residuals.size());
  j["groups"] = groups;
  j["iterations"] = iterations;
  j["dense"] = dense;
  return j.dump();
}

std::vector<std::vector<Index>> degeneracy_groups(const rvec& eigs, double tol) {
  std::vector<std::vector<Index>> g;
  for (Index i = 0; i < eigs.size(); ++i) {
    if (i > 0 && eigs[i] < eigs[i - 1]) fail(ErrorCode::invalid_argument, "degeneracy_groups: eigenvalues not ascending");
    if (i == 0 || !(eigs[i] - eigs[i - 1] < tol))
      g.push_back({i});
    else
      g.back().push_back(i);
  }
  return g;
}

std::vector<int> multiplicities(const std::vector<std::vector<Index>>& groups) {
  std::vector<int> m;
  for (const auto& g : groups) m.push_back(int(g.size()));
  return m;
}

QuadForm quadratic_form(const LinOp& h, const cvec& state) {
  if (std::abs(state.norm() - 1.0) > 1e-8) fail(ErrorCode::invalid_argument, "quadratic_form: state not normalized");
  const cplx q = state.dot(h * state);
  return {q.real(), q.imag()};
}

void fix_phase(cvec& v) {
  Index k;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v[k]) == 0) return;
  v *= std::conj(v[k]) / std::abs(v[k]);
  v[k] = std::abs(v[k]);
}

cmat random_block(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  cmat x(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = nd(rng);
      x(r, c) = cplx(re, nd(rng));
    }
  return x;
}

namespace {

// orthogonalize block b against the first k columns of v (two passes), then orthonormalize
// within the block; returns the number of surviving columns placed at v.col(k..)
Index extend_basis(cmat& v, Index k, cmat b) {
  for (int pass = 0; pass < 2; ++pass)
    if (k > 0) b -= v.leftCols(k) * (v.leftCols(k).adjoint() * b);
  Index added = 0;
  for (Index c = 0; c < b.cols(); ++c) {
    cvec x = b.col(c);
    const double n0 = x.norm();
    for (int pass = 0; pass < 2; ++pass) {
      if (k + added > 0) x -= v.leftCols(k + added) * (v.leftCols(k + added).adjoint() * x);
    }
    const double n = x.norm();
    if (n <= 1e-10 * std::max(n0, 1e-300) || n < 1e-300) continue;
    v.col(k + added) = x / n;
    ++added;
  }
  return added;
}

void finish(SpectralResult& r, const LinOp& h, const EigOptions& opt) {
  for (Index i = 0; i < r.eigenvectors.cols(); ++i) {
    cvec v = r.eigenvectors.col(i);
    fix_phase(v);
    r.eigenvectors.col(i) = v;
  }
  r.groups = degeneracy_groups(r.eigenvalues, opt.degeneracy_tol);
}

}  // namespace

SpectralResult lowest_eigenpairs(const LinOp& h, const EigOptions& opt) {
  const Index n = h.dim;
  require(opt.count >= 1, "lowest_eigenpairs: count >= 1");
  require(opt.count <= n, "lowest_eigenpairs: count exceeds dimension");
  SpectralResult r;
  if (n < opt.dense_below) {
    cmat a = h.to_dense();
    if (linalg::hermiticity_defect(a) > 1e-10 * std::max(1.0, linalg::max_abs(a)))
      fail(ErrorCode::precondition, "lowest_eigenpairs: operator not Hermitian");
    a = 0.5 * (a + a.adjoint());
    auto eg = linalg::herm_eig(a);
    r.dense = true;
    r.eigenvalues = eg.values.head(opt.count);
    r.eigenvectors = eg.vectors.leftCols(opt.count);
    cmat res = a * r.eigenvectors - r.eigenvectors * r.eigenvalues.asDiagonal();
    r.residuals = res.colwise().norm().transpose();
    finish(r, h, opt);
    return r;
  }

  const int nb = std::max(1, opt.block);
  const Index mmax =
      std::min<Index>(n, opt.max_basis > 0 ? opt.max_basis : std::max(4 * opt.count + 6 * nb, 48));
  const Index keep = std::min<Index>(mmax - nb, opt.count + nb + 2);
  cmat V(n, mmax), AV(n, mmax);
  Index k = extend_basis(V, 0, random_block(n, nb, opt.seed));
  cmat tmp;
  h.apply(V.leftCols(k), tmp);
  AV.leftCols(k) = tmp;
  Index applied = k;
  Index last_begin = 0, last_end = k;
  rvec theta;
  cmat Y;
  std::vector<double> history;
  int restarts = 0;
  while (true) {
    // Rayleigh-Ritz on the current basis
    cmat G = V.leftCols(k).adjoint() * AV.leftCols(k);
    G = 0.5 * (G + G.adjoint());
    auto eg = linalg::herm_eig(G);
    theta = eg.values;
    Y = eg.vectors;
    const Index want = std::min<Index>(opt.count, k);
    cmat X = V.leftCols(k) * Y.leftCols(want);
    cmat R = AV.leftCols(k) * Y.leftCols(want) - X * theta.head(want).asDiagonal();
    rvec rn = R.colwise().norm().transpose();
    bool conv = want == opt.count;
    for (Index i = 0; i < want; ++i) conv = conv && rn[i] <= opt.tol * std::max(1.0, std::abs(theta[i]));
    history.push_back(theta[0]);
    if (conv) {
      r.eigenvalues = theta.head(want);
      r.eigenvectors = X;
      // true residuals from a fresh application
      cmat hx;
      h.apply(X, hx);
      applied += X.cols();
      r.residuals = (hx - X * r.eigenvalues.asDiagonal()).colwise().norm().transpose();
      r.iterations = int(applied);
      finish(r, h, opt);
      return r;
    }
    if (k + nb > mmax) {
      if (++restarts > opt.max_restarts) {
        std::string msg = "lowest_eigenpairs: no convergence; Ritz history of lowest value:";
        for (std::size_t i = history.size() > 8 ? history.size() - 8 : 0; i < history.size(); ++i)
          msg += " " + std::to_string(history[i]);
        fail(ErrorCode::not_converged, msg);
      }
      // thick restart: keep the lowest Ritz vectors, continue with the residual block
      const Index kk = std::min(keep, k);
      cmat Vk = V.leftCols(k) * Y.leftCols(kk);
      cmat AVk = AV.leftCols(k) * Y.leftCols(kk);
      V.leftCols(kk) = Vk;
      AV.leftCols(kk) = AVk;
      cmat Rb = AVk.leftCols(std::min<Index>(nb, kk)) -
                Vk.leftCols(std::min<Index>(nb, kk)) * theta.head(std::min<Index>(nb, kk)).asDiagonal();
      k = kk;
      Index added = extend_basis(V, k, Rb);
      if (added == 0) added = extend_basis(V, k, random_block(n, nb, opt.seed + 7919 * restarts));
      h.apply(V.middleCols(k, added), tmp);
      AV.middleCols(k, added) = tmp;
      applied += added;
      last_begin = k;
      last_end = k + added;
      k += added;
      continue;
    }
    // block Lanczos step: next block from H applied to the newest block
    cmat B = AV.middleCols(last_begin, last_end - last_begin);
    Index added = extend_basis(V, k, B);
    if (added == 0) added = extend_basis(V, k, random_block(n, nb, opt.seed + 104729 + k));
    if (added == 0) fail(ErrorCode::not_converged, "lowest_eigenpairs: Krylov space exhausted");
    h.apply(V.middleCols(k, added), tmp);
    AV.middleCols(k, added) = tmp;
    applied += added;
    last_begin = k;
    last_end = k + added;
    k += added;
  }
}

}  // namespace qedlab::spectral
