#pragma once

#include <string>

#include "qedlab/config.hpp"
#include "qedlab/engine.hpp"
#include "qedlab/report.hpp"

namespace qedlab::lab {

// decay rate function of the localization theorem
double rho(double a);

// individual check groups; each is a pure function of the config
Report check_algebra(const ExperimentConfig& c);
Report check_split(const ExperimentConfig& c);
Report check_block_identity(const ExperimentConfig& c);
Report check_diamagnetic(const ExperimentConfig& c);
Report check_relative_bound(const ExperimentConfig& c);
Report check_kato(const ExperimentConfig& c);
Report check_kramers(const ExperimentConfig& c);
Report check_gauge(const ExperimentConfig& c);
Report check_modes(const ExperimentConfig& c);

Report run_verify(const ExperimentConfig& c);
Report run_spectrum(const ExperimentConfig& c);
Report run_binding(const ExperimentConfig& c);
Report run_decay(const ExperimentConfig& c);
Report run_softphoton(const ExperimentConfig& c);
// parameter: all | m | eps | n_max | n
Report run_converge(const ExperimentConfig& c, const std::string& parameter = "all");
Report run_supercritical(const ExperimentConfig& c);
Report run_fiber(const ExperimentConfig& c);

Report run_command(const std::string& command, const ExperimentConfig& c);

struct DecayFit {
  double a = 0, intercept = 0, r2 = 0, r_lo = 0, r_hi = 0;
  // log f = c - a r + nu log r, the asymptotic form for a Coulomb tail
  double a_coulomb = 0, nu = 0;
  int points = 0;
};
// least squares of log f against r over [r_lo, r_hi]; r2 refers to the pure exponential
DecayFit fit_decay(const std::vector<double>& r, const std::vector<double>& f, double r_lo, double r_hi);

// slope of E against log(n) over the last three rungs
double collapse_slope(const std::vector<int>& n, const std::vector<double>& e);

}  // namespace qedlab::lab
