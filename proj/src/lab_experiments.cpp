#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "lab_util.hpp"
#include "qedlab/lab.hpp"
#include "qedlab/linalg.hpp"

namespace qedlab::lab {

using detail::fmt;
using detail::Rows;
using detail::Stopwatch;

double rho(double a) {
  require(a >= 0 && a <= 1, "rho: rate must lie in [0, 1]");
  return 1 - std::sqrt(1 - a * a);
}

DecayFit fit_decay(const std::vector<double>& r, const std::vector<double>& f, double r_lo, double r_hi) {
  require(r.size() == f.size(), "fit_decay: size mismatch");
  DecayFit out;
  out.r_lo = r_lo;
  out.r_hi = r_hi;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  std::vector<std::array<double, 3>> pts;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < r_lo || r[i] > r_hi || !(f[i] > 0) || !(r[i] > 0)) continue;
    const double y = std::log(f[i]);
    pts.push_back({r[i], std::log(r[i]), y});
    sx += r[i];
    sy += y;
    sxx += r[i] * r[i];
    sxy += r[i] * y;
    syy += y * y;
    ++n;
  }
  out.points = n;
  if (n < 3) return out;
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  const double slope = cxy / vx;
  out.a = -slope;
  out.intercept = (sy - slope * sx) / n;
  out.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A.row(i) << 1.0, -pts[i][0], pts[i][1];
    b[i] = pts[i][2];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  out.a_coulomb = c[1];
  out.nu = c[2];
  return out;
}

double collapse_slope(const std::vector<int>& n, const std::vector<double>& e) {
  require(n.size() == e.size() && n.size() >= 3, "collapse_slope: need three rungs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n.size() - 3; i < n.size(); ++i) {
    const double x = std::log(double(n[i]));
    sx += x;
    sy += e[i];
    sxx += x * x;
    sxy += x * e[i];
  }
  return (sxy - sx * sy / 3) / (sxx - sx * sx / 3);
}

namespace {

double lowest(const LinOp& h, std::uint64_t seed, double tol = 1e-10) {
  spectral::EigOptions o;
  o.count = 1;
  o.tol = tol;
  o.seed = seed;
  return spectral::lowest_eigenpairs(h, o).eigenvalues[0];
}

// ground energy and the states of the lowest degeneracy group
struct GroundGroup {
  double e = 0;
  std::vector<cvec> states;
  int r = 2;
  Index points = 0, fock = 0;
};

GroundGroup ground_group(System& s, Model m, ham::Backend b, int count) {
  Ground g = ground(s, m, b, count);
  GroundGroup out;
  out.e = g.res.eigenvalues[0];
  out.r = g.r;
  out.points = s.eb.points();
  out.fock = s.fb.dim();
  for (Index i = 0; i < g.states.cols(); ++i)
    if (std::abs(g.res.eigenvalues[i] - out.e) < 1e-7) out.states.push_back(g.states.col(i));
  return out;
}

// fiber norm averaged over the ground group (basis independent)
rvec group_fiber_norm(const GroundGroup& g) {
  rvec acc = rvec::Zero(g.points);
  for (const auto& v : g.states) acc += fiber_norm(v, g.points, g.r, g.fock).cwiseAbs2();
  return (acc / double(g.states.size())).cwiseSqrt();
}

}  // namespace

Report run_spectrum(const ExperimentConfig& c) {
  Report rep;
  Rows rows{rep, config_hash(c)};
  Stopwatch sw;
  System s = build_system(c);
  Ground g = ground(s);
  const double ms = sw.lap();
  Series ser{"spectrum", {"index", "eigenvalue", "residual", "group"}, {}};
  const auto& r = g.res;
  for (std::size_t gi = 0; gi < r.groups.size(); ++gi)
    for (Index i : r.groups[gi]) ser.rows.push_back({double(i), r.eigenvalues[i], r.residuals[i], double(gi)});
  std::sort(ser.rows.begin(), ser.rows.end());
  rep.series.push_back(ser);
  for (Index i = 0; i < r.eigenvalues.size(); ++i) {
    const double tol = 10 * c.solver.tol * std::max(1.0, std::abs(r.eigenvalues[i]));
    rows.add("eigenvalue_" + std::to_string(i), r.eigenvalues[i], 0, 0, Check::info, i == 0 ? ms : 0);
    rows.add("residual_" + std::to_string(i), r.residuals[i], 0, tol, Check::le);
  }
  const bool even = electron::potential_is_even(s.eb, s.v);
  const auto mult = spectral::multiplicities(r.groups);
  // the last group may be cut by the requested count
  for (std::size_t gi = 0; gi + 1 < mult.size(); ++gi) {
    if (even)
      rows.add("group_multiplicity_even_" + std::to_string(gi), mult[gi] % 2, 0, 0, Check::eq, 0,
               "multiplicity " + std::to_string(mult[gi]));
    else
      rows.add("group_multiplicity_" + std::to_string(gi), mult[gi], 0, 0, Check::info);
  }
  if (c.model == Model::pf && c.potential.kind == electron::PotentialKind::none)
    rows.add("free_pf_lower_bound", r.eigenvalues[0], 1.0, 1e-9, Check::ge, 0, "|D_A| >= 1 and H_f >= 0");
  rows.add("dimension", double(g.states.rows()), 0, 0, Check::info, 0,
           "backend " + ham::to_string(auto_backend(s, c.backend)));
  return rep;
}

Report run_binding(const ExperimentConfig& c) {
  Report rep;
  Rows rows{rep, config_hash(c)};
  Stopwatch sw;
  const ElectronBasis eb = electron::build_electron_basis(c.d, c.L, c.n);
  const double ehv = lowest(electron::electronic_comparison(eb, c.potential), c.seed);
  rows.add("inf_spec_h_V", ehv, 0, 0, Check::info, sw.lap());
  if (!(ehv < 1 - 1e-9)) {
    rows.skip("binding", "h_V has no eigenvalue below 1");
    return rep;
  }
  const double gap = 1 - ehv;
  for (Model m : {Model::pf, Model::np}) {
    const std::string tag = "_" + to_string(m);
    {
      // decoupled oracle: the field only adds photon energies
      ExperimentConfig c0 = c;
      c0.model = m;
      c0.charge = 0;
      System s = build_system(c0);
      const auto b = auto_backend(s, c0.backend);
      const double e = ground(s, m, b, 2).res.eigenvalues[0];
      const double sig = ionization_threshold(ExperimentConfig(c0));
      if (m == Model::pf)
        rows.add("decoupled_binding_identity" + tag, sig - e, gap, 1e-9, Check::eq, sw.lap(),
                 "e = 0, Sigma " + fmt(sig) + ", E " + fmt(e));
      else {
        // at e = 0 the no-pair electron is Brown-Ravenhall, whose binding differs from h_V
        rows.add("decoupled_binding" + tag, sig - e, 0, 0, Check::info, sw.lap());
      }
    }
    ExperimentConfig ce = c;
    ce.model = m;
    System s = build_system(ce);
    const auto b = auto_backend(s, ce.backend);
    const auto gr = ground(s, m, b, 2);
    const double e = gr.res.eigenvalues[0];
    const double sig = ionization_threshold(ce);
    double slack = gr.res.residuals.maxCoeff();
    if (ce.n_max > 0) {
      // truncation diagnostic: the same binding one photon layer lower
      ExperimentConfig cl = ce;
      cl.n_max = ce.n_max - 1;
      System sl = build_system(cl);
      const double el = ground(sl, m, auto_backend(sl, cl.backend), 2).res.eigenvalues[0];
      const double sl_sig = ionization_threshold(cl);
      slack += std::abs((sig - e) - (sl_sig - el));
    }
    const double binding = sig - e;
    if (m == Model::pf) {
      rows.add("binding_lower_bound" + tag, binding, gap, slack, Check::ge, sw.lap(),
               "Sigma " + fmt(sig) + ", E " + fmt(e) + ", slack from photon truncation and residuals");
    } else {
      rows.add("binding_energy" + tag, binding, gap, slack, Check::info, sw.lap(),
               "Sigma " + fmt(sig) + ", E " + fmt(e));
    }
    rows.add("strict_binding" + tag, binding, 0, 0, Check::ge, 0, "Sigma - E_V > 0");
    rows.add("binding_slack" + tag, slack, 0, 0, Check::info);
  }
  return rep;
}

Report run_decay(const ExperimentConfig& c) {
  Report rep;
  Rows rows{rep, config_hash(c)};
  Series ser{"decay_profile", {"gamma", "charge", "x", "fiber_norm"}, {}};
  Series fits{"decay_fits", {"gamma", "charge", "n", "a_exp", "a_fit", "nu", "r2", "a_oracle"}, {}};
  std::vector<double> rates;
  for (double gamma : c.decay.gammas) {
    Stopwatch sw;
    ExperimentConfig cg = c;
    cg.model = Model::pf;
    cg.d = 1;
    cg.L = c.decay.L;
    cg.n = c.decay.n;
    cg.potential.gamma = gamma;
    if (cg.potential.kind == electron::PotentialKind::none) cg.potential.kind = electron::PotentialKind::soft_coulomb;
    const std::string tag = "_gamma" + fmt(gamma);
    const double r_lo = c.decay.r_lo > 0 ? c.decay.r_lo : cg.L / 8;
    const double r_hi = c.decay.r_hi > 0 ? c.decay.r_hi : 3 * cg.L / 8;
    // decoupled oracle on a grid refined twice: photons drop out at e = 0, so the vacuum sector suffices
    {
      ExperimentConfig cr = cg;
      cr.charge = 0;
      cr.n = 2 * cg.n;
      cr.n_max = 0;
      System s = build_system(cr);
      const double ehv = lowest(electron::electronic_comparison(s.eb, cr.potential), c.seed);
      const double a_star = ehv < 1 ? std::sqrt(1 - ehv * ehv) : 0;
      const auto gg = ground_group(s, Model::pf, auto_backend(s, cr.backend), 2);
      const rvec f = group_fiber_norm(gg);
      std::vector<double> r(f.size()), fv(f.data(), f.data() + f.size());
      for (Index x = 0; x < f.size(); ++x) r[x] = std::abs(s.eb.position(x)[0]);
      const DecayFit fit = fit_decay(r, fv, r_lo, r_hi);
      rows.add("decay_rate_vs_oracle" + tag, fit.a_coulomb, a_star, 0.05 * a_star, Check::eq, 0,
               "n " + std::to_string(cr.n) + ", nu " + fmt(fit.nu) + ", pure exponential a " + fmt(fit.a) +
                   "; rho(a*) = 1 - inf spec h_V");
      fits.rows.push_back({gamma, 0, double(cr.n), fit.a, fit.a_coulomb, fit.nu, fit.r2, a_star});
    }
    for (double e : {0.0, c.charge}) {
      ExperimentConfig ce = cg;
      ce.charge = e;
      const std::string t = tag + "_e" + fmt(e);
      System s = build_system(ce);
      const auto gg = ground_group(s, Model::pf, auto_backend(s, ce.backend), 2);
      const double sig = ionization_threshold(ce);
      if (!(sig - gg.e > 0)) {
        rows.skip("decay" + t, "no binding: Sigma - E <= 0");
        continue;
      }
      const rvec f = group_fiber_norm(gg);
      std::vector<double> r(f.size()), fv(f.size());
      double tail = 0;
      for (Index x = 0; x < f.size(); ++x) {
        r[x] = std::abs(s.eb.position(x)[0]);
        fv[x] = f[x];
        if (r[x] >= 0.4 * ce.L) tail += f[x] * f[x];
        ser.rows.push_back({gamma, e, s.eb.position(x)[0], f[x]});
      }
      const DecayFit fit = fit_decay(r, fv, r_lo, r_hi);
      const std::string win = "window [" + fmt(r_lo) + ", " + fmt(r_hi) + "], " + std::to_string(fit.points) + " points";
      rows.add("decay_fit_r2" + t, fit.r2, 0.99, 0, Check::ge, 0,
               fit.r2 >= 0.99 ? win : "no clean exponential window; " + win);
      rows.add("decay_rate" + t, fit.a_coulomb, 0, 0, Check::info, 0,
               "nu " + fmt(fit.nu) + ", pure exponential a " + fmt(fit.a));
      rows.add("boundary_tail_mass" + t, tail, 0, 1e-6, Check::le, 0, "mass with |x| >= 0.4 L");
      const double arg = std::min(1.0, std::max(0.0, fit.a_coulomb * (1 - c.decay.delta)));
      rows.add("decay_admissibility" + t, sig - gg.e - rho(arg), 0, 0, Check::ge, 0,
               "Sigma - E - rho(a (1 - delta))");
      if (e != 0.0) rates.push_back(fit.a_coulomb);
      fits.rows.push_back({gamma, e, double(ce.n), fit.a, fit.a_coulomb, fit.nu, fit.r2, 0});
    }
    rep.rows.back().runtime_ms = sw.ms();
  }
  if (rates.size() >= 2) {
    bool mono = true;
    for (std::size_t i = 1; i < rates.size(); ++i) mono = mono && rates[i] > rates[i - 1];
    rows.add("decay_rate_monotone_in_gamma", mono ? 1 : 0, 1, 0, Check::eq);
  }
  rep.series.push_back(ser);
  rep.series.push_back(fits);
  return rep;
}

Report run_softphoton(const ExperimentConfig& c) {
  Report rep;
  Rows rows{rep, config_hash(c)};
  Series ser{"softphoton_profile", {"m", "k", "rho_k_phi", "rho_k_gauge"}, {}};
  std::vector<double> cmax_phi, cmax_u;
  double e_free = 0;
  auto setup = [&](double m) {
    ExperimentConfig cm = c;
    cm.model = Model::pf;
    cm.d = 1;
    cm.modes.kind = "reference";
    cm.modes.m = m;
    cm.potential.kind = electron::PotentialKind::soft_coulomb;
    cm.potential.gamma = c.softphoton.gamma;
    cm.charge = c.softphoton.charge;
    return cm;
  };
  {
    // decoupled: no photons in the ground state
    Stopwatch sw;
    ExperimentConfig c0 = setup(c.softphoton.m_ladder.front());
    c0.charge = 0;
    System s = build_system(c0);
    const auto gg = ground_group(s, Model::pf, auto_backend(s, c0.backend), 2);
    e_free = gg.e;
    double occ = 0;
    for (const auto& v : gg.states) occ = std::max(occ, fock::mode_occupancies(s.fb, v).cwiseAbs().maxCoeff());
    rows.add("occupancy_at_zero_charge", occ, 0, 1e-12, Check::le, sw.ms());
  }
  for (double m : c.softphoton.m_ladder) {
    Stopwatch sw;
    ExperimentConfig cm = setup(m);
    System s = build_system(cm);
    const auto gg = ground_group(s, Model::pf, auto_backend(s, cm.backend), 2);
    const auto gt = ham::gauge_transform(s.eb, s.fb, s.ms);
    const std::size_t M = s.ms.size();
    rvec o0 = rvec::Zero(M), o1 = rvec::Zero(M);
    double n_occ = 0, n_form = 0;
    rvec ones = rvec::Ones(M);
    const rvec num = fock::dgamma_diagonal(s.fb, ones);
    for (const auto& v : gg.states) {
      const rvec a = fock::mode_occupancies(s.fb, v);
      o0 += a;
      o1 += fock::mode_occupancies(s.fb, ham::apply_scalar(gt.unitary, v, gg.r, s.fb.dim()));
      n_occ += a.sum();
      for (Index i = 0; i < v.size(); ++i) n_form += std::norm(v[i]) * num[i % s.fb.dim()];
    }
    o0 /= double(gg.states.size());
    o1 /= double(gg.states.size());
    const std::string tag = "_m" + fmt(m);
    // single photons of energy ~m sit near resonance once the coupled ground moves by a sizeable fraction of m
    rows.add("energy_shift_over_mass" + tag, std::abs(gg.e - e_free) / m, 0, 0, Check::info, 0,
             "|E_e - E_0| / m");
    rows.add("photon_number_identity" + tag, n_occ, n_form, 1e-10, Check::eq);
    // shells: distinct |k| among the nodes
    std::map<double, std::pair<double, double>> shell;
    double c0 = 0, c1 = 0;
    for (std::size_t j = 0; j < M; ++j) {
      const auto& md = s.ms.modes[j];
      const double k = md.k.norm();
      const double r0 = o0[j] / md.cell_volume * k, r1 = o1[j] / md.cell_volume * k;
      c0 = std::max(c0, r0);
      c1 = std::max(c1, r1);
      auto& sh = shell[std::round(k * 1e12) / 1e12];
      sh.first = std::max(sh.first, r0);
      sh.second = std::max(sh.second, r1);
    }
    for (const auto& [k, v] : shell) ser.rows.push_back({m, k, v.first, v.second});
    if (shell.size() < 3) {
      rows.skip("softphoton" + tag, "inconclusive: fewer than 3 momentum shells");
      continue;
    }
    cmax_phi.push_back(c0);
    cmax_u.push_back(c1);
    rows.add("soft_photon_constant" + tag, c0, 0, 0, Check::info, sw.ms(),
             "max rho|k|, " + std::to_string(M) + " modes, E " + fmt(gg.e));
    rows.add("soft_photon_constant_gauge" + tag, c1, 0, 0, Check::info, 0, "after the Pauli-Fierz transformation");
  }
  for (std::size_t i = 1; i < cmax_phi.size(); ++i) {
    const std::string tag = "_" + std::to_string(i);
    rows.add("soft_photon_drift" + tag, std::abs(cmax_phi[i] / cmax_phi[i - 1] - 1), 0, c.softphoton.drift,
             Check::le);
    rows.add("soft_photon_drift_gauge" + tag, std::abs(cmax_u[i] / cmax_u[i - 1] - 1), 0, c.softphoton.drift,
             Check::le);
  }
  rep.series.push_back(ser);
  return rep;
}

Report run_fiber(const ExperimentConfig& c) {
  Report rep;
  Rows rows{rep, config_hash(c)};
  Stopwatch sw;
  ExperimentConfig cf = c;
  cf.modes.kind = c.modes.kind;
  const auto ms = make_modes(cf);
  const auto fb = fock::build_fock_basis(int(ms.size()), cf.n_max);
  Series ser{"fiber_dispersion", {"P", "E_pf", "E_np"}, {}};
  std::map<double, std::pair<double, double>> e;
  for (double p : c.fiber.p_grid) {
    const Vec3 P(p, 0, 0);
    const double a = linalg::herm_eigvals(ham::fiber_hamiltonian(fb, ms, P, ham::FiberKind::pf, c.d))[0];
    const double b = linalg::herm_eigvals(ham::fiber_hamiltonian(fb, ms, P, ham::FiberKind::np, c.d))[0];
    e[p] = {a, b};
    ser.rows.push_back({p, a, b});
  }
  rows.add("fiber_points", double(e.size()), 0, 0, Check::info, sw.lap());
  double asym = 0;
  for (const auto& [p, v] : e) {
    auto it = e.find(-p);
    if (it == e.end()) continue;
    asym = std::max({asym, std::abs(v.first - it->second.first), std::abs(v.second - it->second.second)});
  }
  rows.add("fiber_energy_even_in_P", asym, 0, 1e-10, Check::le);
  for (Model m : {Model::pf, Model::np}) {
    double inf = 1e300;
    for (const auto& [p, v] : e) inf = std::min(inf, m == Model::pf ? v.first : v.second);
    ExperimentConfig c0 = cf;
    c0.model = m;
    const double sig = ionization_threshold(c0);
    rows.add("fiber_inf_vs_sigma_" + to_string(m), inf, sig, 1e-2, Check::eq, sw.lap(),
             "Sigma from the full V = 0 operator on the grid");
  }
  rep.series.push_back(ser);
  return rep;
}

Report run_supercritical(const ExperimentConfig& c) {
  Report rep;
  Rows rows{rep, config_hash(c)};
  const auto& sc = c.supercritical;
  Series ser{"supercritical", {"model", "gamma", "n", "E"}, {}};
  if (sc.n_ladder.size() < 4) {
    rows.skip("supercritical", "inconclusive: ladder shorter than 4 rungs");
    return rep;
  }
  auto ladder = [&](Model m, double gamma) {
    std::vector<double> es;
    for (int n : sc.n_ladder) {
      const ElectronBasis eb = electron::build_electron_basis(3, sc.L, n);
      double e;
      if (m == Model::np) {
        e = lowest(ham::brown_ravenhall(eb, gamma), c.seed, 1e-9);
      } else {
        electron::PotentialSpec p;
        p.kind = electron::PotentialKind::coulomb;
        p.gamma = gamma;
        e = lowest(electron::electronic_comparison(eb, p), c.seed, 1e-9);
      }
      es.push_back(e);
      ser.rows.push_back({double(m == Model::np), gamma, double(n), e});
    }
    return collapse_slope(sc.n_ladder, es);
  };
  auto collapsing = [&](Model m, double g) { return ladder(m, g) < sc.slope; };
  for (double g : sc.pf_gammas) {
    Stopwatch sw;
    const double sl = ladder(Model::pf, g);
    const bool expect_collapse = g > 2 / kPi;
    rows.add("pf_collapse_slope_gamma" + fmt(g), sl, sc.slope, 0, expect_collapse ? Check::le : Check::ge, sw.ms(),
             expect_collapse ? "collapsing expected above 2/pi" : "stable expected below 2/pi");
  }
  Stopwatch sw;
  double lo = sc.lo, hi = sc.hi;
  const bool lo_stable = !collapsing(Model::np, lo), hi_coll = collapsing(Model::np, hi);
  rows.add("np_bracket_endpoints_valid", double(lo_stable && hi_coll), 1, 0, Check::eq, 0,
           "stable at " + fmt(lo) + ", collapsing at " + fmt(hi));
  if (lo_stable && hi_coll) {
    while (hi - lo > sc.width) {
      const double mid = 0.5 * (lo + hi);
      (collapsing(Model::np, mid) ? hi : lo) = mid;
    }
    const double gc = 2 / (2 / kPi + kPi / 2);
    rows.add("np_bracket_width", hi - lo, 0, sc.width, Check::le);
    rows.add("np_bracket_contains_critical", 0.5 * (lo + hi), gc, 0.5 * (hi - lo), Check::eq, sw.ms(),
             "bracket [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  rep.series.push_back(ser);
  return rep;
}

}  // namespace qedlab::lab
