#include "qedlab/modes.hpp"

// the endpoint asserts in tanh_sinh misfire for some breakpoint intervals; the integrand is finite there
#define BOOST_DISABLE_ASSERTS
#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>

#include "qedlab/electron.hpp"
#include "qedlab/linalg.hpp"
#include "json.hpp"

namespace qedlab::modes {

using nlohmann::json;

Gauge gauge_from_string(const std::string& s) {
  if (s == "standard") return Gauge::standard;
  if (s == "massive") return Gauge::massive;
  if (s == "discretized") return Gauge::discretized;
  if (s == "pauli_fierz") return Gauge::pauli_fierz;
  fail(ErrorCode::invalid_argument, "unknown gauge '" + s + "'");
}

std::string to_string(Gauge g) {
  switch (g) {
    case Gauge::standard: return "standard";
    case Gauge::massive: return "massive";
    case Gauge::discretized: return "discretized";
    case Gauge::pauli_fierz: return "pauli_fierz";
  }
  return "?";
}

const Eigen::Matrix3d& lattice_rotation() {
  static const Eigen::Matrix3d r = [] {
    Eigen::Matrix3d m = (Eigen::AngleAxisd(0.3718, Vec3::UnitZ()) * Eigen::AngleAxisd(0.6123, Vec3::UnitY()) *
                         Eigen::AngleAxisd(0.2291, Vec3::UnitX()))
                            .toRotationMatrix();
    return m;
  }();
  return r;
}

Vec3 ModeSet::coeff(std::size_t j) const {
  const Mode& md = modes.at(j);
  return (-charge / (2.0 * kPi) * std::sqrt(md.cell_volume)) * md.gavg;
}

double ModeSet::shell_volume() const { return 4.0 * kPi / 3.0 * (uv * uv * uv - m * m * m); }

std::pair<Vec3, Vec3> polarization_vectors(const Vec3& k) {
  const Vec3 kb(k[1], -k[0], 0.0);
  const double nb = kb.norm();
  if (nb == 0.0 || k.norm() == 0.0) fail(ErrorCode::precondition, "polarization undefined: k on the third axis");
  Vec3 e0 = kb / nb;
  Vec3 e1 = (k / k.norm()).cross(e0);
  return {e0, e1};
}

Vec3 polarization(const Vec3& k, int lambda) {
  auto [e0, e1] = polarization_vectors(k);
  return lambda == 0 ? e0 : e1;
}

namespace {

// half-space convention keeping eps(-k) = eps(k)
Vec3 polarization_sym(const Vec3& k, int lambda) {
  const Vec3 kl = lattice_rotation().transpose() * k;
  return kl[0] < 0 ? polarization(k, lambda) : polarization(Vec3(-k), lambda);
}

// area of {0<=x<=a, 0<=y<=b, x^2+y^2<=r^2}, a,b >= 0
double quadrant_area(double a, double b, double r) {
  a = std::min(a, r);
  b = std::min(b, r);
  if (a <= 0 || b <= 0) return 0.0;
  if (a * a + b * b <= r * r) return a * b;
  auto F = [r](double x) {
    const double s = std::sqrt(std::max(0.0, r * r - x * x));
    return 0.5 * (x * s + r * r * std::asin(std::clamp(x / r, -1.0, 1.0)));
  };
  const double xs = std::sqrt(std::max(0.0, r * r - b * b));
  return b * xs + F(a) - F(xs);
}

double signed_quadrant(double a, double b, double r) {
  const double s = (a < 0 ? -1.0 : 1.0) * (b < 0 ? -1.0 : 1.0);
  return s * quadrant_area(std::abs(a), std::abs(b), r);
}

double rect_disk_area(double x0, double x1, double y0, double y1, double r) {
  if (r <= 0) return 0.0;
  return signed_quadrant(x1, y1, r) - signed_quadrant(x0, y1, r) - signed_quadrant(x1, y0, r) +
         signed_quadrant(x0, y0, r);
}

}  // namespace

double box_ball_volume(const Vec3& lo, const Vec3& hi, double R) {
  if (R <= 0) return 0.0;
  double dmin2 = 0, dmax2 = 0;
  for (int a = 0; a < 3; ++a) {
    const double c = std::clamp(0.0, lo[a], hi[a]);
    dmin2 += c * c;
    dmax2 += std::max(lo[a] * lo[a], hi[a] * hi[a]);
  }
  if (dmin2 >= R * R) return 0.0;
  if (dmax2 <= R * R) return (hi - lo).prod();
  const double z0 = std::max(lo[2], -R), z1 = std::min(hi[2], R);
  if (z1 <= z0) return 0.0;
  std::vector<double> br{z0, z1};
  auto add_radius = [&](double rho) {
    if (rho < R) {
      const double z = std::sqrt(R * R - rho * rho);
      for (double zz : {z, -z})
        if (zz > z0 && zz < z1) br.push_back(zz);
    }
  };
  for (double xv : {lo[0], hi[0]}) add_radius(std::abs(xv));
  for (double yv : {lo[1], hi[1]}) add_radius(std::abs(yv));
  for (double xv : {lo[0], hi[0]})
    for (double yv : {lo[1], hi[1]}) add_radius(std::hypot(xv, yv));
  if (0.0 > z0 && 0.0 < z1) br.push_back(0.0);
  std::sort(br.begin(), br.end());
  auto f = [&](double z) {
    const double r2 = R * R - z * z;
    return rect_disk_area(lo[0], hi[0], lo[1], hi[1], r2 > 0 ? std::sqrt(r2) : 0.0);
  };
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(12);
  double vol = 0;
  // slivers below ~1e-12 of the span are handled by a midpoint value, tanh-sinh cannot resolve them
  const double tiny = 1e-12 * (z1 - z0);
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double len = br[i + 1] - br[i];
    if (len <= 0) continue;
    if (len < tiny)
      vol += len * f(0.5 * (br[i] + br[i + 1]));
    else
      vol += integrator.integrate(f, br[i], br[i + 1], 1e-14);
  }
  return vol;
}

namespace {

struct CellData {
  std::array<int, 3> idx;
  double volume;
  double omega;
  Vec3 kappa;  // lattice frame
  bool origin;
};

bool cell_in_shell(const std::array<int, 3>& c, double eps, double m, double uv, CellData& out) {
  Vec3 lo(eps * c[0], eps * c[1], eps * c[2]);
  Vec3 hi(eps * (c[0] + 1), eps * (c[1] + 1), eps * (c[2] + 1));
  Vec3 p0, far;
  for (int a = 0; a < 3; ++a) {
    p0[a] = std::clamp(0.0, lo[a], hi[a]);
    far[a] = std::abs(lo[a]) > std::abs(hi[a]) ? lo[a] : hi[a];
  }
  const double dmin = p0.norm(), dmax = far.norm();
  if (!(dmin < uv && dmax > m)) return false;
  const double vol = box_ball_volume(lo, hi, uv) - (m > 0 ? box_ball_volume(lo, hi, m) : 0.0);
  if (!(vol > 0)) return false;
  out.idx = c;
  out.volume = vol;
  out.origin = dmin == 0.0;
  if (dmin >= m) {
    out.kappa = p0;
    out.omega = dmin;
  } else {
    // point on the segment p0 -> far with |kappa| = m
    const Vec3 d = far - p0;
    const double A = d.squaredNorm(), B = 2 * p0.dot(d), C = p0.squaredNorm() - m * m;
    const double t = (-B + std::sqrt(B * B - 4 * A * C)) / (2 * A);
    out.kappa = p0 + t * d;
    out.omega = m;
  }
  return true;
}

std::array<int, 3> partner_cell(const std::array<int, 3>& c) { return {-c[0] - 1, -c[1] - 1, -c[2] - 1}; }

void finish_partners(ModeSet& ms) {
  std::map<std::pair<std::array<int, 3>, int>, int> where;
  for (std::size_t j = 0; j < ms.modes.size(); ++j) where[{ms.modes[j].cell, ms.modes[j].lambda}] = int(j);
  for (auto& md : ms.modes) {
    const std::array<int, 3> pc = partner_cell(md.cell);
    auto it = where.find({pc, md.lambda});
    if (it == where.end()) fail(ErrorCode::internal, "mode set not closed under k -> -k");
    md.partner = it->second;
  }
}

}  // namespace

ModeSet build_mode_set(double m, double uv, double eps, double charge) {
  require(uv > 0, "build_mode_set: uv must be positive");
  require(m >= 0 && m < uv, "build_mode_set: need 0 <= m < uv");
  require(m > 0, "build_mode_set: lattice mode sets need an infra-red cutoff m > 0");
  require(eps > 0, "build_mode_set: eps must be positive");
  require(eps <= uv, "build_mode_set: eps > uv, cells straddle the origin region and nu_eps degenerates");
  ModeSet ms;
  ms.m = m;
  ms.uv = uv;
  ms.eps = eps;
  ms.charge = charge;
  const Eigen::Matrix3d& R = lattice_rotation();
  const int imax = int(std::ceil(uv / eps)) + 1;
  std::map<std::array<int, 3>, std::array<Mode, 2>> canon;
  for (int i = -imax; i < imax; ++i)
    for (int j = -imax; j < imax; ++j)
      for (int l = -imax; l < imax; ++l) {
        std::array<int, 3> c{i, j, l};
        CellData cd;
        if (!cell_in_shell(c, eps, m, uv, cd)) continue;
        const auto pc = partner_cell(c);
        auto itp = canon.find(pc);
        std::array<Mode, 2> pair;
        if (itp != canon.end()) {
          // partner already built: exact negation
          for (int lam = 0; lam < 2; ++lam) {
            pair[lam] = itp->second[lam];
            pair[lam].k = -itp->second[lam].k;
            pair[lam].cell = c;
          }
        } else {
          Vec3 lo(eps * i, eps * j, eps * l), hi(eps * (i + 1), eps * (j + 1), eps * (l + 1));
          const int sub = cd.origin ? 4 : 2;
          double w1 = 0;
          Vec3 acc[2] = {Vec3::Zero(), Vec3::Zero()};
          cell_quadrature(lo, hi, m, uv, sub, [&](const Vec3& kl, double w) {
            const Vec3 k = R * kl;
            const double a = w / std::sqrt(k.norm());
            w1 += w;
            acc[0] += a * polarization_sym(k, 0);
            acc[1] += a * polarization_sym(k, 1);
          });
          for (int lam = 0; lam < 2; ++lam) {
            Mode& md = pair[lam];
            md.k = R * cd.kappa;
            md.lambda = lam;
            md.omega = cd.omega;
            md.cell_volume = cd.volume;
            md.cell = c;
            md.gavg = w1 > 0 ? Vec3(acc[lam] / w1) : Vec3(polarization_sym(md.k, lam) / std::sqrt(cd.omega));
          }
        }
        canon[c] = pair;
      }
  // std::map iterates lexicographically in (nu1, nu2, nu3)
  for (auto& [c, pair] : canon)
    for (int lam = 0; lam < 2; ++lam) ms.modes.push_back(pair[lam]);
  finish_partners(ms);
  return ms;
}

ModeSet build_reference_set(double m, double uv, double charge, const ReferenceOptions& opt) {
  require(uv > 0 && m >= 0 && m < uv, "build_reference_set: need 0 <= m < uv");
  require(opt.azimuthal_nodes % 2 == 0 && opt.azimuthal_nodes >= 2, "azimuthal_nodes must be even");
  ModeSet ms;
  ms.m = m;
  ms.uv = uv;
  ms.eps = 0.0;
  ms.charge = charge;
  std::vector<double> edges{m};
  for (double b : opt.radial_breaks)
    if (b > m && b < uv) edges.push_back(b);
  edges.push_back(uv);
  std::sort(edges.begin(), edges.end());
  std::vector<double> gx, gw, tx, tw;
  linalg::gauss_legendre(opt.radial_nodes, gx, gw);
  linalg::gauss_legendre(opt.polar_nodes, tx, tw);
  const int np = opt.azimuthal_nodes;
  std::vector<double> rs, rw;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double a = edges[s], b = edges[s + 1];
    for (int i = 0; i < opt.radial_nodes; ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
      rs.push_back(r);
      rw.push_back(0.5 * (b - a) * gw[i] * r * r);
    }
  }
  // cell = (radial, polar, azimuthal); partner = (r, nt-1-t, p + np/2)
  std::map<std::array<int, 3>, std::array<Mode, 2>> nodes;
  const int nt = opt.polar_nodes;
  for (int ir = 0; ir < int(rs.size()); ++ir)
    for (int it = 0; it < nt; ++it)
      for (int ip = 0; ip < np / 2; ++ip) {
        const double ct = tx[it], st = std::sqrt(1 - ct * ct);
        const double ph = (ip + 0.5) * 2 * kPi / np;
        const Vec3 k = rs[ir] * Vec3(st * std::cos(ph), st * std::sin(ph), ct);
        const double w = rw[ir] * tw[it] * 2 * kPi / np;
        std::array<Mode, 2> pair, partner;
        for (int lam = 0; lam < 2; ++lam) {
          Mode md;
          md.k = k;
          md.lambda = lam;
          md.omega = k.norm();
          md.cell_volume = w;
          md.cell = {ir, it, ip};
          md.gavg = polarization_sym(k, lam) / std::sqrt(k.norm());
          pair[lam] = md;
          md.k = -k;
          md.cell = {ir, nt - 1 - it, ip + np / 2};
          partner[lam] = md;
        }
        nodes[pair[0].cell] = pair;
        nodes[partner[0].cell] = partner;
      }
  for (auto& [c, pair] : nodes)
    for (int lam = 0; lam < 2; ++lam) ms.modes.push_back(pair[lam]);
  // reference partner map: stored through finish_partners with a custom rule
  std::map<std::pair<std::array<int, 3>, int>, int> where;
  for (std::size_t j = 0; j < ms.modes.size(); ++j) where[{ms.modes[j].cell, ms.modes[j].lambda}] = int(j);
  for (auto& md : ms.modes) {
    const auto& c = md.cell;
    std::array<int, 3> pc{c[0], nt - 1 - c[1], (c[2] + np / 2) % np};
    md.partner = where.at({pc, md.lambda});
  }
  return ms;
}

ModeSet select_subset(const ModeSet& ms, std::size_t max_modes) {
  if (max_modes == 0 || max_modes >= ms.size()) return ms;
  // cells ordered by omega, then index; keep partner-closed pairs of cells
  std::vector<std::size_t> heads;
  for (std::size_t j = 0; j < ms.size(); ++j)
    if (ms.modes[j].lambda == 0) heads.push_back(j);
  std::stable_sort(heads.begin(), heads.end(), [&](std::size_t a, std::size_t b) {
    if (ms.modes[a].omega != ms.modes[b].omega) return ms.modes[a].omega < ms.modes[b].omega;
    return ms.modes[a].cell < ms.modes[b].cell;
  });
  std::vector<char> keep(ms.size(), 0);
  std::size_t count = 0;
  for (std::size_t h : heads) {
    if (keep[h]) continue;
    const std::size_t p = std::size_t(ms.modes[h].partner);
    const std::size_t add = (p == h) ? 2 : 4;
    if (count + add > max_modes) break;
    for (std::size_t q : {h, p})
      for (std::size_t j = 0; j < ms.size(); ++j)
        if (ms.modes[j].cell == ms.modes[q].cell) keep[j] = 1;
    count += add;
  }
  ModeSet out = ms;
  out.modes.clear();
  std::vector<int> remap(ms.size(), -1);
  for (std::size_t j = 0; j < ms.size(); ++j)
    if (keep[j]) {
      remap[j] = int(out.modes.size());
      out.modes.push_back(ms.modes[j]);
    }
  for (auto& md : out.modes) md.partner = remap[md.partner];
  return out;
}

double phase_arg(const Vec3& k, const Vec3& x, int d) { return d == 1 ? k[0] * x[0] : k.dot(x); }

CVec3 continuous_coupling(const Vec3& x, const Vec3& k, int lambda, double charge, double m, double uv, Gauge g,
                          int d) {
  const double kn = k.norm();
  if (kn > uv || kn == 0.0) return CVec3::Zero();
  if (g != Gauge::standard && kn < m) return CVec3::Zero();
  const Vec3 e = polarization_sym(k, lambda);
  const double amp = -charge / (2 * kPi * std::sqrt(kn));
  const double ph = phase_arg(k, x, d);
  cplx f = std::exp(cplx(0, -ph));
  if (g == Gauge::pauli_fierz) f -= 1.0;
  return (amp * f) * e.cast<cplx>();
}

CVec3 coupling_at(const Vec3& x, const ModeSet& ms, std::size_t j, Gauge g, int d) {
  const Mode& md = ms.modes.at(j);
  const double ph = phase_arg(md.k, x, d);
  const cplx f = std::exp(cplx(0, -ph));
  switch (g) {
    case Gauge::standard:
    case Gauge::massive: {
      const double kn = md.k.norm();
      if (kn > ms.uv || (g == Gauge::massive && kn < ms.m)) return CVec3::Zero();
      const Vec3 e = polarization_sym(md.k, md.lambda);
      return (-ms.charge / (2 * kPi * std::sqrt(kn)) * f) * e.cast<cplx>();
    }
    case Gauge::discretized:
      return (-ms.charge / (2 * kPi) * f) * md.gavg.cast<cplx>();
    case Gauge::pauli_fierz:
      return (-ms.charge / (2 * kPi) * (f - 1.0)) * md.gavg.cast<cplx>();
  }
  return CVec3::Zero();
}

namespace {

// integrate a function of (k, lambda) over the region represented by every mode
template <class F>
void integrate_modes(const ModeSet& ms, F&& f) {
  const Eigen::Matrix3d& R = lattice_rotation();
  for (std::size_t j = 0; j < ms.size(); ++j) {
    const Mode& md = ms.modes[j];
    if (ms.is_reference()) {
      f(j, md.k, md.cell_volume);
      continue;
    }
    const double eps = ms.eps;
    Vec3 lo(eps * md.cell[0], eps * md.cell[1], eps * md.cell[2]);
    Vec3 hi = lo + Vec3::Constant(eps);
    const bool origin = lo.cwiseMax(Vec3::Zero()).cwiseMin(hi).norm() == 0.0;
    cell_quadrature(lo, hi, ms.m, ms.uv, origin ? 4 : 2, [&](const Vec3& kl, double w) { f(j, Vec3(R * kl), w); });
  }
}

}  // namespace

CouplingNorms coupling_norms(const ModeSet& ms, const std::vector<Vec3>& xs, Gauge g, int d) {
  CouplingNorms out;
  std::vector<Vec3> grid = xs;
  if (grid.empty()) grid.push_back(Vec3::Zero());
  double s[4] = {0, 0, 0, 0}, curl = 0;
  const double pre = ms.charge * ms.charge / (4 * kPi * kPi);
  if (g == Gauge::discretized) {
    for (const auto& md : ms.modes) {
      const double g2 = pre * md.gavg.squaredNorm();  // |phase| = 1
      const double w = md.omega;
      for (int l = -1; l <= 2; ++l) s[l + 1] += md.cell_volume * std::pow(w, l) * g2;
      curl += md.cell_volume * pre * md.k.cross(md.gavg).squaredNorm() / w;
    }
  } else {
    integrate_modes(ms, [&](std::size_t j, const Vec3& k, double w) {
      const double kn = k.norm();
      if (kn == 0 || kn > ms.uv) return;
      if (g != Gauge::standard && kn < ms.m) return;
      double sup = 1.0;
      if (g == Gauge::pauli_fierz) {
        sup = 0;
        for (const auto& x : grid) sup = std::max(sup, std::norm(std::exp(cplx(0, -phase_arg(k, x, d))) - 1.0));
      }
      const double g2 = pre / kn * sup;  // |e| = 1
      for (int l = -1; l <= 2; ++l) s[l + 1] += w * std::pow(kn, l) * g2;
      // |k ^ e|^2 = |k|^2 for transverse e, also for the gauge shifted form
      curl += w * kn * kn * (pre / kn) / kn;
      (void)j;
    });
  }
  out.d_minus1 = std::sqrt(2 * s[0]);
  out.d_0 = std::sqrt(2 * s[1]);
  out.curl = std::sqrt(2 * curl);
  out.d_1 = std::max(std::sqrt(2 * s[2]), out.curl);
  out.d_2 = std::sqrt(2 * s[3]);
  return out;
}

CouplingNorms coupling_norms(const ModeSet& ms, const ElectronBasis& eb, Gauge g) {
  std::vector<Vec3> xs;
  for (Index i = 0; i < eb.points(); ++i) xs.push_back(eb.position(i));
  return coupling_norms(ms, xs, g, eb.d);
}

namespace {

using CellMap = std::map<std::pair<std::array<int, 3>, int>, std::size_t>;

// value of the coupling function represented by a mode set at arbitrary k
CVec3 set_coupling(const ModeSet& ms, const CellMap& cells, const Vec3& x, const Vec3& k, int lambda, int d) {
  if (ms.is_reference()) return continuous_coupling(x, k, lambda, ms.charge, ms.m, ms.uv, Gauge::massive, d);
  const double kn = k.norm();
  if (kn < ms.m || kn > ms.uv) return CVec3::Zero();
  const Vec3 kl = lattice_rotation().transpose() * k;
  std::array<int, 3> c;
  for (int a = 0; a < 3; ++a) c[a] = int(std::floor(kl[a] / ms.eps));
  auto it = cells.find({c, lambda});
  if (it == cells.end()) return CVec3::Zero();
  const Mode& md = ms.modes[it->second];
  return (-ms.charge / (2 * kPi) * std::exp(cplx(0, -phase_arg(md.k, x, d)))) * md.gavg.cast<cplx>();
}

}  // namespace

double discretization_error(const ModeSet& fine, const ModeSet& coarse, const std::vector<Vec3>& xs, int d) {
  if (std::abs(fine.uv - coarse.uv) > 1e-12 * fine.uv || std::abs(fine.charge - coarse.charge) > 0)
    fail(ErrorCode::invalid_argument, "discretization_error: incompatible cutoffs or charge");
  std::vector<Vec3> grid = xs;
  if (grid.empty()) grid.push_back(Vec3::Zero());
  CellMap cells;
  for (std::size_t j = 0; j < coarse.size(); ++j) cells[{coarse.modes[j].cell, coarse.modes[j].lambda}] = j;
  double acc = 0;
  for (std::size_t j = 0; j < fine.size(); ++j) {
    const Mode& md = fine.modes[j];
    const double kn = md.k.norm();
    double sup = 0;
    for (const auto& x : grid) {
      CVec3 gf = fine.is_reference() ? continuous_coupling(x, md.k, md.lambda, fine.charge, fine.m, fine.uv,
                                                           Gauge::massive, d)
                                     : coupling_at(x, fine, j, Gauge::discretized, d);
      CVec3 gc = set_coupling(coarse, cells, x, md.k, md.lambda, d);
      sup = std::max(sup, (gf - gc).squaredNorm());
    }
    acc += (kn + 1.0 / kn) * sup * md.cell_volume;
  }
  return std::sqrt(acc);
}

std::string to_json(const ModeSet& ms) {
  json j;
  j["m"] = ms.m;
  j["uv"] = ms.uv;
  j["eps"] = ms.eps;
  j["charge"] = ms.charge;
  json arr = json::array();
  for (const auto& md : ms.modes) {
    arr.push_back({{"k", {md.k[0], md.k[1], md.k[2]}},
                   {"lambda", md.lambda},
                   {"omega", md.omega},
                   {"cell_volume", md.cell_volume},
                   {"partner", md.partner},
                   {"cell", {md.cell[0], md.cell[1], md.cell[2]}},
                   {"gavg", {md.gavg[0], md.gavg[1], md.gavg[2]}}});
  }
  j["modes"] = arr;
  return j.dump();
}

ModeSet from_json(const std::string& s) {
  json j = json::parse(s);
  ModeSet ms;
  ms.m = j.at("m");
  ms.uv = j.at("uv");
  ms.eps = j.at("eps");
  ms.charge = j.at("charge");
  for (const auto& e : j.at("modes")) {
    Mode md;
    for (int a = 0; a < 3; ++a) {
      md.k[a] = e.at("k")[a];
      md.cell[a] = e.at("cell")[a];
      md.gavg[a] = e.at("gavg")[a];
    }
    md.lambda = e.at("lambda");
    md.omega = e.at("omega");
    md.cell_volume = e.at("cell_volume");
    md.partner = e.at("partner");
    ms.modes.push_back(md);
  }
  return ms;
}

}  // namespace qedlab::modes
