#include "qedlab/electron.hpp"

#include <fftw3.h>

#include <cmath>
#include <sstream>

namespace qedlab {

Index ElectronBasis::points() const {
  Index p = 1;
  for (int a = 0; a < d; ++a) p *= n;
  return p;
}

Vec3 ElectronBasis::position(Index i) const {
  Vec3 x = Vec3::Zero();
  for (int a = d - 1; a >= 0; --a) {
    x[a] = x1[i % n];
    i /= n;
  }
  return x;
}

Vec3 ElectronBasis::momentum(Index i) const {
  Vec3 p = Vec3::Zero();
  for (int a = d - 1; a >= 0; --a) {
    p[a] = p1[i % n];
    i /= n;
  }
  return p;
}

Index ElectronBasis::parity(Index i) const {
  Index out = 0, mul = 1;
  for (int a = d - 1; a >= 0; --a) {
    const Index j = i % n;
    out += (n - 1 - j) * mul;
    mul *= n;
    i /= n;
  }
  return out;
}

}  // namespace qedlab

namespace qedlab::electron {

ElectronBasis build_electron_basis(int d, double L, int n) {
  require(d == 1 || d == 3, "electron basis: d must be 1 or 3");
  require(L > 0, "electron basis: L must be positive");
  require(n >= 4, "electron basis: n >= 4 required");
  require(n % 2 == 0, "electron basis: odd n breaks the +-p symmetry of the dual lattice");
  ElectronBasis eb;
  eb.d = d;
  eb.L = L;
  eb.n = n;
  eb.h = L / n;
  eb.x1.resize(n);
  eb.p1.resize(n);
  for (int j = 0; j < n; ++j) eb.x1[j] = (j - 0.5 * (n - 1)) * eb.h;
  for (int k = 0; k < n; ++k) {
    const int m = k < n / 2 ? k : k - n;
    eb.p1[k] = 2 * kPi * m / L;
  }
  return eb;
}

std::array<Eigen::Matrix2cd, 3> pauli_matrices() {
  const cplx I(0, 1);
  std::array<Eigen::Matrix2cd, 3> s;
  s[0] << 0, 1, 1, 0;
  s[1] << 0, -I, I, 0;
  s[2] << 1, 0, 0, -1;
  return s;
}

DiracAlgebra dirac_matrices() {
  DiracAlgebra a;
  auto s = pauli_matrices();
  for (int j = 0; j < 3; ++j) {
    a.alpha[j].setZero();
    a.alpha[j].block<2, 2>(0, 2) = s[j];
    a.alpha[j].block<2, 2>(2, 0) = s[j];
  }
  a.beta.setZero();
  a.beta.diagonal() << 1, 1, -1, -1;
  return a;
}

Fft::Fft(int d, int n) {
  int dims[3] = {n, n, n};
  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= n;
  scratch_.resize(size_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch_.data());
  fwd_ = fftw_plan_dft(d, dims, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft(d, dims, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Fft::forward(cplx* data) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void Fft::backward(cplx* data) {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

namespace {

cvec momentum_phases(const ElectronBasis& eb) {
  const Index N = eb.points();
  cvec ph(N);
  for (Index i = 0; i < N; ++i) {
    Index r = i;
    double arg = 0;
    for (int a = 0; a < eb.d; ++a) {
      const Index k = r % eb.n;
      r /= eb.n;
      const int m = k < eb.n / 2 ? int(k) : int(k) - eb.n;
      arg += kPi * m * (eb.n - 1.0) / eb.n;
    }
    ph[i] = std::exp(cplx(0, arg));
  }
  return ph;
}

}  // namespace

cvec to_momentum(const ElectronBasis& eb, const cvec& psi) {
  require(psi.size() == eb.points(), "to_momentum: size mismatch");
  Fft f(eb.d, eb.n);
  cvec out = psi;
  f.forward(out.data());
  out = out.cwiseProduct(momentum_phases(eb)) / std::sqrt(double(eb.points()));
  return out;
}

cvec to_grid(const ElectronBasis& eb, const cvec& psi_hat) {
  require(psi_hat.size() == eb.points(), "to_grid: size mismatch");
  Fft f(eb.d, eb.n);
  cvec out = psi_hat.cwiseProduct(momentum_phases(eb).conjugate());
  f.backward(out.data());
  return out / std::sqrt(double(eb.points()));
}

cmat dft_matrix(const ElectronBasis& eb) {
  const Index N = eb.points();
  require(N <= 4096, "dft_matrix: grid too large for a dense DFT");
  cmat F(N, N);
  for (Index m = 0; m < N; ++m) {
    const Vec3 p = eb.momentum(m);
    for (Index j = 0; j < N; ++j) F(m, j) = std::exp(cplx(0, -p.dot(eb.position(j))));
  }
  return F / std::sqrt(double(N));
}

namespace {

// 1d kernel of an operator diagonal in momentum: K(a,b) = (1/n) sum_m f(p_m) e^{i p_m (x_a - x_b)}
cmat kernel_1d(const ElectronBasis& eb, const std::function<double(double)>& f) {
  const int n = eb.n;
  cmat K(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx s = 0;
      for (int k = 0; k < n; ++k) s += f(eb.p1[k]) * std::exp(cplx(0, eb.p1[k] * (eb.x1[a] - eb.x1[b])));
      K(a, b) = s / double(n);
    }
  return K;
}

}  // namespace

spmat momentum_operator(const ElectronBasis& eb, int axis) {
  require(axis >= 0 && axis < eb.d, "momentum_operator: axis out of range");
  const cmat K = kernel_1d(eb, [](double p) { return p; });
  const Index N = eb.points();
  Index stride = 1;
  for (int a = eb.d - 1; a > axis; --a) stride *= eb.n;
  std::vector<Triplet> t;
  t.reserve(N * eb.n);
  for (Index i = 0; i < N; ++i) {
    const Index ia = (i / stride) % eb.n;
    const Index base = i - ia * stride;
    for (Index b = 0; b < eb.n; ++b) {
      const cplx v = K(ia, b);
      if (std::abs(v) > 0) t.emplace_back(i, base + b * stride, v);
    }
  }
  spmat P(N, N);
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

namespace {

cmat momentum_function_dense(const ElectronBasis& eb, const std::function<double(const Vec3&)>& f) {
  const Index N = eb.points();
  require(N <= 4096, "dense momentum operator: grid too large");
  const cmat F = dft_matrix(eb);
  rvec d(N);
  for (Index m = 0; m < N; ++m) d[m] = f(eb.momentum(m));
  cmat out = F.adjoint() * d.asDiagonal() * F;
  return 0.5 * (out + out.adjoint());
}

}  // namespace

cmat free_sqrt_dense(const ElectronBasis& eb) {
  return momentum_function_dense(eb, [](const Vec3& p) { return std::sqrt(p.squaredNorm() + 1.0); });
}

cmat abs_momentum_dense(const ElectronBasis& eb) {
  return momentum_function_dense(eb, [](const Vec3& p) { return p.norm(); });
}

LinOp free_sqrt_op(const ElectronBasis& eb) {
  const Index N = eb.points();
  auto fft = std::make_shared<Fft>(eb.d, eb.n);
  auto w = std::make_shared<rvec>(N);
  for (Index m = 0; m < N; ++m) (*w)[m] = std::sqrt(eb.momentum(m).squaredNorm() + 1.0) / double(N);
  LinOp op;
  op.dim = N;
  op.apply = [fft, w](const cmat& in, cmat& out) {
    out.resize(in.rows(), in.cols());
    for (Index c = 0; c < in.cols(); ++c) {
      cvec v = in.col(c);
      fft->forward(v.data());
      v = v.cwiseProduct(*w);
      fft->backward(v.data());
      out.col(c) = v;
    }
  };
  return op;
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "none") return PotentialKind::none;
  if (s == "coulomb") return PotentialKind::coulomb;
  if (s == "soft_coulomb") return PotentialKind::soft_coulomb;
  if (s == "harmonic") return PotentialKind::harmonic;
  if (s == "custom") return PotentialKind::custom;
  fail(ErrorCode::invalid_argument, "unknown potential kind '" + s + "'");
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::none: return "none";
    case PotentialKind::coulomb: return "coulomb";
    case PotentialKind::soft_coulomb: return "soft_coulomb";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::custom: return "custom";
  }
  return "?";
}

Vec3 minimal_image(const ElectronBasis& eb, const Vec3& x) {
  Vec3 y = x;
  for (int a = 0; a < eb.d; ++a) y[a] = x[a] - eb.L * std::round(x[a] / eb.L);
  return y;
}

rvec potential_values(const ElectronBasis& eb, const PotentialSpec& spec) {
  const Index N = eb.points();
  rvec v = rvec::Zero(N);
  const double r0 = eb.L / (2.0 * eb.n);
  for (Index i = 0; i < N; ++i) {
    const double r = minimal_image(eb, eb.position(i)).norm();
    switch (spec.kind) {
      case PotentialKind::none: break;
      case PotentialKind::coulomb: v[i] = -spec.gamma / std::max(r, r0); break;
      case PotentialKind::soft_coulomb: v[i] = -spec.gamma / std::sqrt(r * r + spec.s * spec.s); break;
      case PotentialKind::harmonic: v[i] = spec.c * r * r; break;
      case PotentialKind::custom:
        require(Index(spec.samples.size()) == N, "custom potential: sample count != grid size");
        v[i] = spec.samples[i];
        break;
    }
  }
  return v;
}

spmat potential_operator(const ElectronBasis& eb, const PotentialSpec& spec) {
  const rvec v = potential_values(eb, spec);
  std::vector<Triplet> t;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) t.emplace_back(i, i, v[i]);
  spmat m(v.size(), v.size());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

bool potential_is_even(const ElectronBasis& eb, const rvec& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != v[eb.parity(i)]) return false;
  return true;
}

LinOp electronic_comparison(const ElectronBasis& eb, const PotentialSpec& spec) {
  const rvec v = potential_values(eb, spec);
  if (eb.points() <= 2048) {
    cmat h = free_sqrt_dense(eb);
    h.diagonal() += v.cast<cplx>();
    return make_op(std::move(h));
  }
  LinOp t = free_sqrt_op(eb);
  auto vp = std::make_shared<rvec>(v);
  LinOp op;
  op.dim = t.dim;
  op.apply = [t, vp](const cmat& in, cmat& out) {
    t.apply(in, out);
    out += vp->asDiagonal() * in;
  };
  return op;
}

LinOp brown_ravenhall(const ElectronBasis& eb, const PotentialSpec& spec) {
  const Index N = eb.points();
  auto fft = std::make_shared<Fft>(eb.d, eb.n);
  auto v = std::make_shared<rvec>(potential_values(eb, spec));
  // positive energy spinors u_s(p) = ((E+1) chi_s, sigma.p chi_s) / sqrt(2E(E+1))
  auto u = std::make_shared<std::vector<Eigen::Matrix<cplx, 4, 2>>>(N);
  auto e = std::make_shared<rvec>(N);
  const auto s = pauli_matrices();
  for (Index m = 0; m < N; ++m) {
    const Vec3 p = eb.momentum(m);
    const double E = std::sqrt(p.squaredNorm() + 1.0);
    Eigen::Matrix2cd sp = p[0] * s[0] + p[1] * s[1] + p[2] * s[2];
    Eigen::Matrix<cplx, 4, 2> um;
    um.topRows<2>() = (E + 1.0) * Eigen::Matrix2cd::Identity();
    um.bottomRows<2>() = sp;
    (*u)[m] = um / std::sqrt(2 * E * (E + 1));
    (*e)[m] = E;
  }
  LinOp op;
  op.dim = 2 * N;
  op.apply = [fft, v, u, e, N](const cmat& in, cmat& out) {
    out.resize(in.rows(), in.cols());
    std::array<cvec, 4> comp;
    for (auto& c : comp) c.resize(N);
    for (Index c = 0; c < in.cols(); ++c) {
      for (Index m = 0; m < N; ++m) {
        Eigen::Vector4cd psi = (*u)[m] * Eigen::Vector2cd(in(2 * m, c), in(2 * m + 1, c));
        for (int a = 0; a < 4; ++a) comp[a][m] = psi[a];
      }
      for (int a = 0; a < 4; ++a) {
        fft->backward(comp[a].data());
        comp[a] = comp[a].cwiseProduct(*v) / double(N);
        fft->forward(comp[a].data());
      }
      for (Index m = 0; m < N; ++m) {
        Eigen::Vector4cd w(comp[0][m], comp[1][m], comp[2][m], comp[3][m]);
        Eigen::Vector2cd r = (*u)[m].adjoint() * w;
        out(2 * m, c) = r[0] + (*e)[m] * in(2 * m, c);
        out(2 * m + 1, c) = r[1] + (*e)[m] * in(2 * m + 1, c);
      }
    }
  };
  return op;
}

rvec free_dirac_spectrum(const ElectronBasis& eb) {
  const auto a = dirac_matrices();
  const Index N = eb.points();
  rvec out(4 * N);
  for (Index m = 0; m < N; ++m) {
    const Vec3 p = eb.momentum(m);
    Eigen::Matrix4cd h = a.beta;
    for (int j = 0; j < 3; ++j) h += p[j] * a.alpha[j];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
    out.segment<4>(4 * m) = es.eigenvalues();
  }
  std::sort(out.data(), out.data() + out.size());
  return out;
}

std::string grid_csv(const ElectronBasis& eb, const cvec& psi, int components) {
  require(psi.size() == eb.points() * components, "grid_csv: size mismatch");
  std::ostringstream os;
  os.precision(17);
  for (int a = 0; a < eb.d; ++a) os << "x" << (a + 1) << ",";
  os << "component,re,im\n";
  for (Index i = 0; i < eb.points(); ++i) {
    const Vec3 x = eb.position(i);
    for (int c = 0; c < components; ++c) {
      for (int a = 0; a < eb.d; ++a) os << x[a] << ",";
      const cplx z = psi[i * components + c];
      os << c << "," << z.real() << "," << z.imag() << "\n";
    }
  }
  return os.str();
}

}  // namespace qedlab::electron
