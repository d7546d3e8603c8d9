#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qedlab/electron.hpp"
#include "qedlab/hamiltonians.hpp"
#include "qedlab/modes.hpp"

namespace qedlab::lab {

enum class Model { pf, np };
Model model_from_string(const std::string& s);
std::string to_string(Model m);

struct ModeConfig {
  double m = 0.5;
  double uv = 1.0;
  double eps = 0.5;
  int max_modes = 8;  // 0 keeps the full cell set
  // "lattice" uses the eps cells; "reference" a spherical product rule with omega = |k|
  std::string kind = "lattice";
  int radial_nodes = 2;
  int polar_nodes = 2;
  int azimuthal_nodes = 4;
  double radial_ratio = 2.0;  // reference radial breaks at m r, m r^2, ... below uv; 0 for none
};

struct SolverConfig {
  int count = 4;
  double tol = 1e-9;
  int K = 200;
};

struct Ladders {
  std::vector<double> m;
  std::vector<double> eps;
  std::vector<int> n_max;
  std::vector<int> n;
  double tol = 1e-4;
  // shared ladder geometry: d = 1 box of length L
  double L = 20;
  int grid_n = 8;            // grid for the m and eps ladders
  double eps_charge = 0.15;  // coupling for the eps ladder
  int reference_nodes = 4;   // radial, polar and azimuthal nodes of the m-ladder mode sets
};

struct SupercriticalConfig {
  std::vector<int> n_ladder{8, 12, 16, 20, 24};
  double L = 4.0;
  double lo = 0.5, hi = 1.5;
  double width = 0.1;
  double slope = -0.05;
  std::vector<double> pf_gammas{0.1, 1.5};
};

struct DecayConfig {
  std::vector<double> gammas{0.5, 0.7, 1.0};
  double L = 40;
  int n = 64;
  double r_lo = 0;  // 0 picks the window automatically
  double r_hi = 0;
  double delta = 0.05;
};

struct VerifyConfig {
  int probes = 100;
  std::vector<double> charges{0.3, 1.0};
};

struct SoftPhotonConfig {
  std::vector<double> m_ladder{0.01, 0.005, 0.0025};
  double gamma = 1.0;
  // the truncated ground energy shifts by O(e^2); keep that well below the smallest mass
  double charge = 0.05;
  double drift = 0.1;
};

struct FiberConfig {
  std::vector<double> p_grid{-0.4, -0.2, 0.0, 0.2, 0.4};
};

struct ExperimentConfig {
  int schema_version = 1;
  Model model = Model::pf;
  int d = 1;
  double L = 40;
  int n = 16;
  ModeConfig modes;
  int n_max = 1;
  double charge = 0.3;
  electron::PotentialSpec potential;
  modes::Gauge gauge = modes::Gauge::discretized;
  ham::Backend backend = ham::Backend::dense;
  SolverConfig solver;
  std::uint64_t seed = 1;
  std::string tier = "fast";
  Ladders ladders;
  SupercriticalConfig supercritical;
  DecayConfig decay;
  VerifyConfig verify;
  FiberConfig fiber;
  SoftPhotonConfig softphoton;
};

ExperimentConfig default_config(const std::string& tier = "fast");
std::string to_json(const ExperimentConfig& c, int indent = 2);
// throws invalid_argument listing every offending field
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& c, const std::string& path);
// FNV-1a over the canonical (sorted key, compact) serialization, hex
std::string config_hash(const ExperimentConfig& c);
std::vector<std::string> validate(const ExperimentConfig& c);

}  // namespace qedlab::lab
