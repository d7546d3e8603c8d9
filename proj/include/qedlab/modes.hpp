#pragma once

#include <array>
#include <vector>

#include "qedlab/types.hpp"

namespace qedlab {
struct ElectronBasis;
}

namespace qedlab::modes {

enum class Gauge { standard, massive, discretized, pauli_fierz };

Gauge gauge_from_string(const std::string& s);
std::string to_string(Gauge g);

struct Mode {
  Vec3 k = Vec3::Zero();       // representative wave vector
  int lambda = 0;
  double omega = 0.0;          // dispersion used in H_f
  double cell_volume = 0.0;
  int partner = -1;
  std::array<int, 3> cell{0, 0, 0};  // lattice cell index (nu), or node index for reference sets
  Vec3 gavg = Vec3::Zero();    // cell average of |k|^{-1/2} e_lambda(k)
};

struct ModeSet {
  std::vector<Mode> modes;
  double m = 0.0;
  double uv = 1.0;
  double eps = 0.0;   // 0 marks a reference quadrature set
  double charge = 0.0;

  std::size_t size() const { return modes.size(); }
  bool is_reference() const { return eps == 0.0; }
  // discrete coefficient at x = 0, quadrature weight included
  Vec3 coeff(std::size_t j) const;
  double shell_volume() const;
};

struct ReferenceOptions {
  std::vector<double> radial_breaks;  // interior radial breakpoints in (m, uv)
  int radial_nodes = 24;              // per radial segment
  int polar_nodes = 16;
  int azimuthal_nodes = 16;           // must be even
};

// fixed generic rotation applied to the momentum lattice
const Eigen::Matrix3d& lattice_rotation();

ModeSet build_mode_set(double m, double uv, double eps, double charge);
ModeSet build_reference_set(double m, double uv, double charge, const ReferenceOptions& opt = {});
// partner closed subset of the cells with smallest omega, at most max_modes modes
ModeSet select_subset(const ModeSet& ms, std::size_t max_modes);

std::pair<Vec3, Vec3> polarization_vectors(const Vec3& k);
Vec3 polarization(const Vec3& k, int lambda);

// d = 1 uses only the first coordinate of x and k
double phase_arg(const Vec3& k, const Vec3& x, int d);

CVec3 coupling_at(const Vec3& x, const ModeSet& ms, std::size_t j, Gauge g, int d = 3);
// continuous coupling function at an arbitrary wave vector
CVec3 continuous_coupling(const Vec3& x, const Vec3& k, int lambda, double charge, double m, double uv,
                          Gauge g, int d = 3);

struct CouplingNorms {
  double d_minus1 = 0, d_0 = 0, d_1 = 0, d_2 = 0;
  double curl = 0;  // sqrt of 2 int |curl G|^2 / omega
};

CouplingNorms coupling_norms(const ModeSet& ms, const std::vector<Vec3>& xs, Gauge g, int d = 3);
CouplingNorms coupling_norms(const ModeSet& ms, const ElectronBasis& eb, Gauge g);

// Delta^2 = sum (omega + 1/omega) sup_x |G_fine - G_coarse|^2 vol over the nodes of `fine`;
// returns Delta (not squared)
double discretization_error(const ModeSet& fine, const ModeSet& coarse, const std::vector<Vec3>& xs,
                            int d = 3);

// exact volume of an axis-aligned box intersected with a centred ball
double box_ball_volume(const Vec3& lo, const Vec3& hi, double R);
// integral of f over (box ∩ {m <= |k| <= uv}) in lattice coordinates, tensor Gauss-Legendre
// of order 3 with `sub` subdivisions per transverse axis and exact z-limits
template <class F>
void cell_quadrature(const Vec3& lo, const Vec3& hi, double m, double uv, int sub, F&& f);

std::string to_json(const ModeSet& ms);
ModeSet from_json(const std::string& s);

}  // namespace qedlab::modes

#include "qedlab/cellquad.hpp"
