#include <cmath>

#include "lab_util.hpp"
#include "qedlab/lab.hpp"

namespace qedlab::lab {

using detail::fmt;
using detail::Rows;
using detail::Stopwatch;

namespace {

struct Rung {
  double param = 0;
  double e = 0;
  double sigma = 0;
  double hf2 = 0;  // <phi, H_f^2 phi>
  Index dim = 0;
  double ms = 0;
};

Rung solve(const ExperimentConfig& c, double param, bool with_sigma) {
  Stopwatch sw;
  Rung r;
  r.param = param;
  System s = build_system(c);
  const Index half = 2 * s.eb.points() * s.fb.dim();
  const Ground g = ground(s, Model::pf, auto_backend(s, c.backend), 2);
  r.e = g.res.eigenvalues[0];
  r.dim = half;
  const rvec hf = ham::field_energy_diagonal(s.eb, s.fb, s.ms, 2);
  r.hf2 = (hf.array().square() * g.states.col(0).cwiseAbs2().array()).sum();
  if (with_sigma) r.sigma = ionization_threshold(c);
  r.ms = sw.ms();
  return r;
}

void ladder(Report& rep, Rows& rows, const std::string& name, const std::vector<Rung>& rungs, double tol,
            bool checked) {
  Series ser{"converge_" + name, {"param", "E", "diff", "Sigma", "hf2", "dim"}, {}};
  std::vector<double> diffs;
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    const double d = i ? std::abs(rungs[i].e - rungs[i - 1].e) : 0;
    if (i) diffs.push_back(d);
    ser.rows.push_back({rungs[i].param, rungs[i].e, d, rungs[i].sigma, rungs[i].hf2, double(rungs[i].dim)});
    rows.add(name + "_E_" + fmt(rungs[i].param), rungs[i].e, 0, 0, Check::info, rungs[i].ms,
             "dim " + std::to_string(rungs[i].dim) + ", <H_f^2> " + fmt(rungs[i].hf2));
  }
  rep.series.push_back(ser);
  if (diffs.empty()) return;
  bool mono = true;
  for (std::size_t i = 1; i < diffs.size(); ++i) mono = mono && diffs[i] < diffs[i - 1];
  const Check ck = checked ? Check::eq : Check::info;
  rows.add(name + "_cauchy_decreasing", mono ? 1 : 0, 1, 0, ck);
  rows.add(name + "_final_difference", diffs.back(), 0, tol, checked ? Check::le : Check::info);
}

}  // namespace

Report run_converge(const ExperimentConfig& c, const std::string& parameter) {
  require(parameter == "all" || parameter == "m" || parameter == "eps" || parameter == "n_max" || parameter == "n",
          "converge: parameter must be all, m, eps, n_max or n");
  Report rep;
  Rows rows{rep, config_hash(c)};
  const auto& ld = c.ladders;
  ExperimentConfig base = c;
  base.model = Model::pf;
  base.d = 1;
  base.L = ld.L;
  auto want = [&](const char* p) { return parameter == "all" || parameter == p; };

  if (want("n_max")) {
    std::vector<Rung> r;
    for (int nm : ld.n_max) {
      ExperimentConfig cc = base;
      cc.modes.kind = "lattice";
      if (cc.modes.max_modes == 0) cc.modes.max_modes = 8;
      cc.n_max = nm;
      r.push_back(solve(cc, nm, false));
    }
    ladder(rep, rows, "n_max", r, ld.tol, true);
    if (c.charge == 0) {
      double spread = 0;
      for (const auto& q : r) spread = std::max(spread, std::abs(q.e - r.front().e));
      rows.add("n_max_decoupled_spread", spread, 0, 1e-10, Check::le);
    }
  }
  if (want("m")) {
    // massive model with omega = |k| on spherical quadrature sets
    std::vector<Rung> r;
    for (double m : ld.m) {
      ExperimentConfig cc = base;
      cc.n = ld.grid_n;
      cc.n_max = 1;
      cc.modes.kind = "reference";
      cc.modes.m = m;
      cc.modes.radial_nodes = cc.modes.polar_nodes = cc.modes.azimuthal_nodes = ld.reference_nodes;
      cc.modes.radial_ratio = 0;
      r.push_back(solve(cc, m, true));
    }
    ladder(rep, rows, "m", r, ld.tol, true);
    bool mono = true;
    for (std::size_t i = 1; i < r.size(); ++i) mono = mono && r[i].sigma <= r[i - 1].sigma + 1e-12;
    rows.add("m_sigma_decreasing", mono ? 1 : 0, 0, 0, Check::info, 0, "trend of Sigma_m, recorded only");
  }
  if (want("eps")) {
    std::vector<Rung> r;
    for (double eps : ld.eps) {
      ExperimentConfig cc = base;
      cc.n = ld.grid_n;
      cc.n_max = 1;
      cc.charge = ld.eps_charge;
      cc.modes.kind = "lattice";
      cc.modes.max_modes = 0;
      cc.modes.eps = eps;
      cc.backend = ham::Backend::quadrature;
      r.push_back(solve(cc, eps, false));
    }
    ladder(rep, rows, "eps", r, ld.tol, true);
  }
  if (want("n")) {
    std::vector<Rung> r;
    for (int n : ld.n) {
      ExperimentConfig cc = base;
      cc.n = n;
      cc.n_max = 1;
      cc.modes.kind = "lattice";
      if (cc.modes.max_modes == 0) cc.modes.max_modes = 8;
      r.push_back(solve(cc, n, false));
    }
    ladder(rep, rows, "n", r, ld.tol, true);
  }
  return rep;
}

Report run_command(const std::string& command, const ExperimentConfig& c) {
  if (command == "verify") return run_verify(c);
  if (command == "spectrum") return run_spectrum(c);
  if (command == "binding") return run_binding(c);
  if (command == "decay") return run_decay(c);
  if (command == "softphoton") return run_softphoton(c);
  if (command == "converge") return run_converge(c);
  if (command == "supercritical") return run_supercritical(c);
  if (command == "fiber") return run_fiber(c);
  if (command == "algebra") return check_algebra(c);
  if (command == "split") return check_split(c);
  if (command == "block") return check_block_identity(c);
  if (command == "diamagnetic") return check_diamagnetic(c);
  if (command == "relative_bound") return check_relative_bound(c);
  if (command == "kato") return check_kato(c);
  if (command == "kramers") return check_kramers(c);
  if (command == "gauge") return check_gauge(c);
  if (command == "modes") return check_modes(c);
  for (const char* p : {"m", "eps", "n_max", "n"})
    if (command == std::string("converge_") + p) return run_converge(c, p);
  fail(ErrorCode::invalid_argument, "unknown command '" + command + "'");
}

}  // namespace qedlab::lab
