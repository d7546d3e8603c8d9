#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qedlab/electron.hpp"
#include "qedlab/fock.hpp"
#include "qedlab/modes.hpp"
#include "qedlab/types.hpp"

namespace qedlab::ham {

struct Shape {
  Index electron = 0;
  Index spinor = 0;
  Index fock = 0;
  Index dim() const { return electron * spinor * fock; }
};

struct SparseHermitian {
  spmat m;
  Shape shape;
  Index dim() const { return m.rows(); }
};

// spatial (x (x) Fock) index = x * F + f; spinor index sits between: (x * r + s) * F + f
spmat embed_spinor(const Eigen::MatrixXcd& s, const spmat& scalar, Index fock_dim);
// copy a half-space (2-spinor) vector into the upper (blk = 0) or lower (blk = 1) block of the full space
cmat half_to_full(const cmat& upper, const cmat& lower, Index points, Index fock_dim);
cmat full_block(const cmat& full, int blk, Index points, Index fock_dim);

// A^(j)(x) on x (x) Fock; in the pauli_fierz gauge the components along electron axes are A(x) - A(0)
spmat field_component(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, int j,
                      modes::Gauge g = modes::Gauge::discretized);
// -i d_j + A^(j)(x) on x (x) Fock (momentum part absent for axes the electron does not move along)
spmat kinetic_component(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, int j,
                        modes::Gauge g = modes::Gauge::discretized);

SparseHermitian assemble_sigma_pi(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms,
                                  modes::Gauge g = modes::Gauge::discretized);
SparseHermitian assemble_dirac(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms,
                               modes::Gauge g = modes::Gauge::discretized);
// T_A (+) T_A assembled from sigma.pi blocks, T_A = (sigma.pi)^2 + 1
SparseHermitian assemble_block_square(const ElectronBasis& eb, const fock::FockBasis& fb,
                                      const modes::ModeSet& ms, modes::Gauge g = modes::Gauge::discretized);

// diagonal of V (x) 1 and 1 (x) H_f on a space with r spinor components
rvec potential_diagonal(const ElectronBasis& eb, const fock::FockBasis& fb, const rvec& v, int r);
rvec field_energy_diagonal(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, int r);

enum class Backend { dense, quadrature };
Backend backend_from_string(const std::string& s);
std::string to_string(Backend b);

struct QuadratureRule {
  std::vector<double> shifts;   // y_k^2
  std::vector<double> weights;  // (2/pi) w_k sec^2(theta_k)
};
QuadratureRule sign_quadrature(int K);

// Q^{-1/2} v for Hermitian Q >= 1, by the tan-substituted quadrature and multi-shift CG
cvec inv_sqrt_apply(const std::function<void(const cvec&, cvec&)>& q, const cvec& v, const QuadratureRule& rule,
                    double tol = 1e-13);

struct SpectralSplit {
  cmat abs, sign, p_plus, p_minus;
  Backend backend = Backend::dense;
  Index rank_plus = 0, rank_minus = 0;
  double gap = 0;  // smallest |eigenvalue| (dense) or lower bound check value
  std::string to_json() const;
};

SpectralSplit spectral_split(const SparseHermitian& d, Backend b, int K = 200);

// X = W diag(s) W^*, mu = sqrt(s^2 + 1)
struct HalfSplit {
  rvec s, mu;
  cmat W;
};
HalfSplit split_half(const spmat& x);

// no-pair basis coefficients: Ran P+ column i = (a_i w_i, b_i w_i), Ran P- column i = (-b_i w_i, a_i w_i)
void pair_coefficients(const HalfSplit& hs, rvec& a, rvec& b);

struct Operators {
  ElectronBasis eb;
  fock::FockBasis fb;
  modes::ModeSet ms;
  modes::Gauge gauge = modes::Gauge::discretized;
  rvec v;  // potential on the grid
  SparseHermitian x;  // sigma.pi on the 2-spinor half space
};

Operators make_operators(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms, const rvec& v,
                         modes::Gauge g = modes::Gauge::discretized);

// Pauli-Fierz: the full operator is (sqrt(T_A) + V + H_f) (+) (same), returned on the half space
LinOp assemble_pauli_fierz(const Operators& ops, Backend b, const HalfSplit* hs = nullptr, int K = 200);
// full 4-spinor dense PF matrix (small systems only)
cmat pauli_fierz_full_dense(const Operators& ops, const HalfSplit& hs);

struct NoPair {
  cmat h_plus, h_minus;   // compressed, dimension rank P+ / rank P-
  cmat basis_plus, basis_minus;  // full-space orthonormal bases (empty for matrix-free)
  LinOp h_hat;            // full space: h_plus (+) h_minus, or shifted matrix-free form
  double shift = 0;       // matrix-free: P- carries this constant instead of h_minus
};
NoPair assemble_no_pair(const Operators& ops, Backend b, const HalfSplit* hs = nullptr, int K = 200,
                        bool with_potential = true);

// Brown-Ravenhall on the electronic grid (no field)
LinOp brown_ravenhall(const ElectronBasis& eb, double gamma);

enum class FiberKind { pf, np };
// on C^4 (x) Fock, returned reduced: pf -> sqrt(T(P)) + H_f on C^2 (x) Fock (each eigenvalue twice in full),
// np -> compressed P+ (D(P) + H_f) P+
cmat fiber_hamiltonian(const fock::FockBasis& fb, const modes::ModeSet& ms, const Vec3& P, FiberKind kind,
                       int d = 3);

struct GaugeTransform {
  spmat unitary;  // on x (x) Fock
  spmat field_energy;  // H~_f assembled directly, on x (x) Fock
  double unitarity_defect = 0;
};
GaugeTransform gauge_transform(const ElectronBasis& eb, const fock::FockBasis& fb, const modes::ModeSet& ms);
// apply a scalar-space operator to a state with r spinor components
cvec apply_scalar(const spmat& op, const cvec& psi, int r, Index fock_dim);

class Kramers {
 public:
  // r = 4 (full Dirac spinor) or 2 (upper half)
  Kramers(const ElectronBasis& eb, const fock::FockBasis& fb, int r = 4);
  cvec apply(const cvec& psi) const;
  double commutator_residual(const LinOp& h, const std::vector<cvec>& probes) const;
  static void check_preconditions(const ElectronBasis& eb, const modes::ModeSet& ms, const rvec& v);

 private:
  ElectronBasis eb_;
  Index F_;
  int r_;
  Eigen::MatrixXcd m_;
};

}  // namespace qedlab::ham
