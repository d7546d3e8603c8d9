#include "qedlab/fock.hpp"

#include <cmath>
#include <sstream>

namespace qedlab::fock {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

namespace {

// occupations of fixed total in lexicographically descending order, mode 0 first
void compositions(int M, int total, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == M - 1) {
    cur[pos] = total;
    out.push_back(cur);
    return;
  }
  for (int v = total; v >= 0; --v) {
    cur[pos] = v;
    compositions(M, total - v, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

}  // namespace

FockBasis::FockBasis(int num_modes, int n_max) : M_(num_modes), n_max_(n_max) {
  require(num_modes >= 1, "fock basis: M >= 1 required");
  require(n_max >= 0, "fock basis: n_max >= 0 required");
  const double d = binomial(num_modes + n_max, n_max);
  if (d > 1e7) fail(ErrorCode::invalid_argument, "fock basis: dimension exceeds 1e7 states");
  std::vector<int> cur(M_, 0);
  for (int t = 0; t <= n_max; ++t) {
    const std::size_t before = states_.size();
    compositions(M_, t, cur, 0, states_);
    totals_.insert(totals_.end(), states_.size() - before, t);
  }
  for (std::size_t i = 0; i < states_.size(); ++i) index_[states_[i]] = Index(i);
  const std::size_t F = states_.size();
  raise_.assign(F * M_, -1);
  lower_.assign(F * M_, -1);
  for (std::size_t i = 0; i < F; ++i) {
    std::vector<int> s = states_[i];
    for (int j = 0; j < M_; ++j) {
      if (totals_[i] < n_max_) {
        s[j] += 1;
        raise_[i * M_ + j] = index_.at(s);
        s[j] -= 1;
      }
      if (s[j] > 0) {
        s[j] -= 1;
        lower_[i * M_ + j] = index_.at(s);
        s[j] += 1;
      }
    }
  }
}

Index FockBasis::index_of(const std::vector<int>& occ) const {
  auto it = index_.find(occ);
  return it == index_.end() ? -1 : it->second;
}

FockBasis build_fock_basis(int M, int n_max) { return FockBasis(M, n_max); }

FockOperator ladder(const FockBasis& fb, int j, Direction dir) {
  require(j >= 0 && j < fb.num_modes(), "ladder: mode index out of range");
  std::vector<Triplet> t;
  for (Index i = 0; i < fb.dim(); ++i) {
    const int nj = fb.state(i)[j];
    if (dir == Direction::annihilate) {
      const Index k = fb.lowered(i, j);
      if (k >= 0) t.emplace_back(k, i, std::sqrt(double(nj)));
    } else {
      const Index k = fb.raised(i, j);
      if (k >= 0) t.emplace_back(k, i, std::sqrt(double(nj + 1)));
    }
  }
  spmat m(fb.dim(), fb.dim());
  m.setFromTriplets(t.begin(), t.end());
  return {m, dir == Direction::annihilate ? Kind::annihilate : Kind::create};
}

rvec dgamma_diagonal(const FockBasis& fb, const rvec& weights) {
  require(weights.size() == fb.num_modes(), "dgamma: one weight per mode required");
  rvec d(fb.dim());
  for (Index i = 0; i < fb.dim(); ++i) {
    double s = 0;
    const auto& st = fb.state(i);
    for (int j = 0; j < fb.num_modes(); ++j)
      if (st[j]) s += st[j] * weights[j];
    d[i] = s;
  }
  return d;
}

FockOperator dgamma(const FockBasis& fb, const rvec& weights) {
  const rvec d = dgamma_diagonal(fb, weights);
  std::vector<Triplet> t;
  for (Index i = 0; i < d.size(); ++i)
    if (d[i] != 0) t.emplace_back(i, i, d[i]);
  spmat m(fb.dim(), fb.dim());
  m.setFromTriplets(t.begin(), t.end());
  return {m, Kind::dgamma};
}

FockOperator number_operator(const FockBasis& fb) {
  FockOperator op = dgamma(fb, rvec::Ones(fb.num_modes()));
  op.kind = Kind::number;
  return op;
}

FockOperator field_operator(const FockBasis& fb, const cvec& coeffs) {
  require(coeffs.size() == fb.num_modes(), "field_operator: one coefficient per mode required");
  std::vector<Triplet> t;
  for (Index i = 0; i < fb.dim(); ++i) {
    const auto& st = fb.state(i);
    for (int j = 0; j < fb.num_modes(); ++j) {
      if (coeffs[j] == cplx(0)) continue;
      const Index up = fb.raised(i, j);
      if (up >= 0) {
        const double s = std::sqrt(double(st[j] + 1));
        t.emplace_back(up, i, coeffs[j] * s);
        t.emplace_back(i, up, std::conj(coeffs[j]) * s);
      }
    }
  }
  spmat m(fb.dim(), fb.dim());
  m.setFromTriplets(t.begin(), t.end());
  return {m, Kind::field};
}

rvec mode_occupancies(const FockBasis& fb, const cvec& state) {
  const Index F = fb.dim();
  require(state.size() % F == 0, "mode_occupancies: state size is not a multiple of the Fock dimension");
  rvec occ = rvec::Zero(fb.num_modes());
  const Index outer = state.size() / F;
  for (Index o = 0; o < outer; ++o)
    for (Index f = 0; f < F; ++f) {
      const double w = std::norm(state[o * F + f]);
      if (w == 0) continue;
      const auto& st = fb.state(f);
      for (int j = 0; j < fb.num_modes(); ++j)
        if (st[j]) occ[j] += st[j] * w;
    }
  return occ;
}

double mode_occupancy(const FockBasis& fb, const cvec& state, int j) {
  require(j >= 0 && j < fb.num_modes(), "mode_occupancy: mode index out of range");
  const double n2 = state.squaredNorm();
  if (std::abs(n2 - 1.0) > 1e-8) fail(ErrorCode::precondition, "mode_occupancy: state is not normalised");
  return mode_occupancies(fb, state)[j];
}

std::string coordinate_text(const spmat& m) {
  std::ostringstream os;
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (spmat::InnerIterator it(m, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value().real() << " " << it.value().imag() << "\n";
  return os.str();
}

spmat from_coordinate_text(const std::string& s, Index rows, Index cols) {
  std::istringstream is(s);
  std::vector<Triplet> t;
  Index r, c;
  double re, im;
  while (is >> r >> c >> re >> im) t.emplace_back(r, c, cplx(re, im));
  spmat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace qedlab::fock
