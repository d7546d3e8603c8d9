#pragma once

#include <array>
#include <string>
#include <vector>

#include "qedlab/types.hpp"

namespace qedlab {

// periodic grid with the parity-symmetric shift x_j = (j - (n-1)/2) h
struct ElectronBasis {
  int d = 1;
  double L = 1;
  int n = 4;
  double h = 0.25;
  std::vector<double> x1;  // 1d grid positions
  std::vector<double> p1;  // 1d momenta in FFT order

  Index points() const;
  Index dim() const { return 4 * points(); }
  Vec3 position(Index i) const;
  Vec3 momentum(Index i) const;
  // grid index of -x
  Index parity(Index i) const;
};

}  // namespace qedlab

namespace qedlab::electron {

ElectronBasis build_electron_basis(int d, double L, int n);

struct DiracAlgebra {
  std::array<Eigen::Matrix4cd, 3> alpha;
  Eigen::Matrix4cd beta;
};

DiracAlgebra dirac_matrices();
std::array<Eigen::Matrix2cd, 3> pauli_matrices();

// unnormalised FFTW wrapper on the n^d grid
class Fft {
 public:
  Fft(int d, int n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  void forward(cplx* data);
  void backward(cplx* data);
  Index size() const { return size_; }

 private:
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
  Index size_ = 0;
  std::vector<cplx> scratch_;
};

// unitary Fourier pairing of a scalar grid function (momentum index in FFT order)
cvec to_momentum(const ElectronBasis& eb, const cvec& psi);
cvec to_grid(const ElectronBasis& eb, const cvec& psi_hat);
// dense unitary DFT matrix F[m][j] = e^{-i p_m x_j} / sqrt(n^d); only for small grids
cmat dft_matrix(const ElectronBasis& eb);

// scalar operators on the n^d grid
spmat momentum_operator(const ElectronBasis& eb, int axis);
cmat free_sqrt_dense(const ElectronBasis& eb);
LinOp free_sqrt_op(const ElectronBasis& eb);
// |p| on scalar grid functions, used by the diamagnetic check
cmat abs_momentum_dense(const ElectronBasis& eb);

enum class PotentialKind { none, coulomb, soft_coulomb, harmonic, custom };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::none;
  double gamma = 0;
  double s = 1;
  double c = 0;
  std::vector<double> samples;
};

PotentialKind potential_kind_from_string(const std::string& s);
std::string to_string(PotentialKind k);

Vec3 minimal_image(const ElectronBasis& eb, const Vec3& x);
rvec potential_values(const ElectronBasis& eb, const PotentialSpec& spec);
spmat potential_operator(const ElectronBasis& eb, const PotentialSpec& spec);
bool potential_is_even(const ElectronBasis& eb, const rvec& v);

// h_V = sqrt(1 - Laplacian) + V on scalar grid functions (dense when small, else FFT based)
LinOp electronic_comparison(const ElectronBasis& eb, const PotentialSpec& spec);

// Brown-Ravenhall operator Lambda+ (D_0 + V) Lambda+ on Ran Lambda+, two components per momentum
LinOp brown_ravenhall(const ElectronBasis& eb, const PotentialSpec& spec);
// the free Dirac spectrum check: sorted eigenvalues of alpha.p + beta per momentum
rvec free_dirac_spectrum(const ElectronBasis& eb);

// x_1..x_d, component, re, im
std::string grid_csv(const ElectronBasis& eb, const cvec& psi, int components);

}  // namespace qedlab::electron
