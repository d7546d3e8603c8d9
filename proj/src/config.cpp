#include "qedlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qedlab::lab {

using nlohmann::json;

Model model_from_string(const std::string& s) {
  if (s == "pf") return Model::pf;
  if (s == "np") return Model::np;
  fail(ErrorCode::invalid_argument, "unknown model '" + s + "' (pf|np)");
}

std::string to_string(Model m) { return m == Model::pf ? "pf" : "np"; }

ExperimentConfig default_config(const std::string& tier) {
  ExperimentConfig c;
  c.tier = tier;
  c.potential.kind = electron::PotentialKind::soft_coulomb;
  c.potential.gamma = 0.3;
  c.potential.s = 1.0;
  c.ladders.m = {0.4, 0.2, 0.1, 0.05};
  c.ladders.eps = {1.0, 0.5, 1.0 / 3.0};
  c.ladders.n_max = {0, 1, 2, 3};
  c.ladders.n = {8, 16, 32};
  if (tier == "full") {
    c.n = 32;
    c.modes.max_modes = 16;
    c.n_max = 2;
    c.ladders.eps = {1.0, 0.5, 1.0 / 3.0, 0.25};
  }
  return c;
}

namespace {

json potential_json(const electron::PotentialSpec& p) {
  json j;
  j["kind"] = electron::to_string(p.kind);
  j["gamma"] = p.gamma;
  j["s"] = p.s;
  j["c"] = p.c;
  if (!p.samples.empty()) j["samples"] = p.samples;
  return j;
}

json to_j(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["model"] = to_string(c.model);
  j["d"] = c.d;
  j["L"] = c.L;
  j["n"] = c.n;
  j["modes"] = {{"m", c.modes.m}, {"uv", c.modes.uv}, {"eps", c.modes.eps}, {"max_modes", c.modes.max_modes},
                {"kind", c.modes.kind},       {"radial_nodes", c.modes.radial_nodes},
                {"polar_nodes", c.modes.polar_nodes}, {"azimuthal_nodes", c.modes.azimuthal_nodes},
                {"radial_ratio", c.modes.radial_ratio}};
  j["n_max"] = c.n_max;
  j["charge"] = c.charge;
  j["potential"] = potential_json(c.potential);
  j["gauge"] = modes::to_string(c.gauge);
  j["backend"] = ham::to_string(c.backend);
  j["solver"] = {{"count", c.solver.count}, {"tol", c.solver.tol}, {"K", c.solver.K}};
  j["seed"] = c.seed;
  j["tier"] = c.tier;
  j["ladders"] = {{"m", c.ladders.m}, {"eps", c.ladders.eps}, {"n_max", c.ladders.n_max}, {"n", c.ladders.n},
                  {"tol", c.ladders.tol}, {"L", c.ladders.L}, {"grid_n", c.ladders.grid_n},
                  {"eps_charge", c.ladders.eps_charge}, {"reference_nodes", c.ladders.reference_nodes}};
  const auto& s = c.supercritical;
  j["supercritical"] = {{"n_ladder", s.n_ladder}, {"L", s.L},       {"lo", s.lo},
                        {"hi", s.hi},             {"width", s.width}, {"slope", s.slope},
                        {"pf_gammas", s.pf_gammas}};
  j["decay"] = {{"gammas", c.decay.gammas}, {"L", c.decay.L}, {"n", c.decay.n}, {"r_lo", c.decay.r_lo}, {"r_hi", c.decay.r_hi}, {"delta", c.decay.delta}};
  j["verify"] = {{"probes", c.verify.probes}, {"charges", c.verify.charges}};
  j["fiber"] = {{"p_grid", c.fiber.p_grid}};
  j["softphoton"] = {{"m_ladder", c.softphoton.m_ladder}, {"gamma", c.softphoton.gamma},
                     {"charge", c.softphoton.charge}, {"drift", c.softphoton.drift}};
  return j;
}

// reads fields that are present, collecting type errors instead of stopping at the first
struct Reader {
  std::vector<std::string>& errors;

  template <class T>
  void get(const json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
      out = j.at(key).get<T>();
    } catch (const std::exception&) {
      errors.push_back(path + key + ": wrong type");
    }
  }

  void unknown(const json& j, const std::string& path, std::set<std::string> known) {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!known.count(it.key())) errors.push_back(path + it.key() + ": unknown field");
  }

  const json* obj(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) return nullptr;
    if (!j.at(key).is_object()) {
      errors.push_back(path + key + ": expected object");
      return nullptr;
    }
    return &j.at(key);
  }
};

}  // namespace

std::string to_json(const ExperimentConfig& c, int indent) { return to_j(c).dump(indent); }

std::vector<std::string> validate(const ExperimentConfig& c) {
  std::vector<std::string> e;
  auto strictly_monotone = [](const auto& v) {
    if (v.size() < 2) return true;
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < v.size(); ++i) {
      inc = inc && v[i] > v[i - 1];
      dec = dec && v[i] < v[i - 1];
    }
    return inc || dec;
  };
  if (c.schema_version != 1) e.push_back("schema_version: unsupported (expected 1)");
  if (c.d != 1 && c.d != 3) e.push_back("d: must be 1 or 3");
  if (!(c.L > 0)) e.push_back("L: must be > 0");
  if (c.n < 4 || c.n % 2) e.push_back("n: must be even and >= 4");
  if (!(c.modes.m > 0)) e.push_back("modes.m: must be > 0");
  if (!(c.modes.uv > c.modes.m)) e.push_back("modes.uv: must exceed modes.m");
  if (!(c.modes.eps > 0) || c.modes.eps > c.modes.uv) e.push_back("modes.eps: must be in (0, uv]");
  if (c.modes.max_modes < 0 || c.modes.max_modes % 2) e.push_back("modes.max_modes: must be even and >= 0");
  if (c.modes.kind != "lattice" && c.modes.kind != "reference") e.push_back("modes.kind: lattice or reference");
  if (c.modes.radial_nodes < 1 || c.modes.polar_nodes < 1) e.push_back("modes: node counts must be >= 1");
  if (c.modes.azimuthal_nodes < 2 || c.modes.azimuthal_nodes % 2) e.push_back("modes.azimuthal_nodes: even, >= 2");
  if (!(c.modes.radial_ratio > 1) && c.modes.radial_ratio != 0) e.push_back("modes.radial_ratio: 0 or > 1");
  if (!(c.ladders.L > 0) || c.ladders.grid_n < 4 || c.ladders.grid_n % 2 || c.ladders.reference_nodes < 1)
    e.push_back("ladders: L > 0, grid_n even >= 4, reference_nodes >= 1");
  if (!strictly_monotone(c.softphoton.m_ladder)) e.push_back("softphoton.m_ladder: not strictly monotone");
  for (double v : c.softphoton.m_ladder)
    if (!(v > 0) || v >= c.modes.uv) e.push_back("softphoton.m_ladder: entries must be in (0, uv)");
  if (!(c.softphoton.charge >= 0)) e.push_back("softphoton.charge: must be >= 0");
  if (!(c.softphoton.drift > 0)) e.push_back("softphoton.drift: must be > 0");
  if (c.n_max < 0) e.push_back("n_max: must be >= 0");
  if (c.potential.gamma < 0) e.push_back("potential.gamma: must be >= 0");
  if (c.potential.kind == electron::PotentialKind::soft_coulomb && !(c.potential.s > 0))
    e.push_back("potential.s: must be > 0");
  if (c.potential.kind == electron::PotentialKind::harmonic && c.potential.c < 0)
    e.push_back("potential.c: must be >= 0");
  if (c.solver.count < 1) e.push_back("solver.count: must be >= 1");
  if (!(c.solver.tol > 0)) e.push_back("solver.tol: must be > 0");
  if (c.solver.K < 1) e.push_back("solver.K: must be >= 1");
  if (c.tier != "fast" && c.tier != "full") e.push_back("tier: must be fast or full");
  if (!strictly_monotone(c.ladders.m)) e.push_back("ladders.m: not strictly monotone");
  if (!strictly_monotone(c.ladders.eps)) e.push_back("ladders.eps: not strictly monotone");
  if (!strictly_monotone(c.ladders.n_max)) e.push_back("ladders.n_max: not strictly monotone");
  if (!strictly_monotone(c.ladders.n)) e.push_back("ladders.n: not strictly monotone");
  for (double v : c.ladders.m)
    if (!(v > 0)) e.push_back("ladders.m: entries must be > 0");
  if (!strictly_monotone(c.supercritical.n_ladder)) e.push_back("supercritical.n_ladder: not strictly monotone");
  if (!(c.supercritical.hi > c.supercritical.lo)) e.push_back("supercritical.hi: must exceed lo");
  if (!(c.supercritical.width > 0)) e.push_back("supercritical.width: must be > 0");
  if (!(c.decay.L > 0) || c.decay.n < 8 || c.decay.n % 2) e.push_back("decay: L > 0 and even n >= 8");
  if (c.decay.delta < 0 || c.decay.delta >= 1) e.push_back("decay.delta: must be in [0, 1)");
  if (c.verify.probes < 1) e.push_back("verify.probes: must be >= 1");
  return e;
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    fail(ErrorCode::invalid_argument, std::string("config: malformed JSON: ") + ex.what());
  }
  if (!j.is_object()) fail(ErrorCode::invalid_argument, "config: expected a JSON object");
  std::vector<std::string> errors;
  if (!j.contains("schema_version")) errors.push_back("schema_version: missing");
  std::string tier = "fast";
  if (j.contains("tier") && j["tier"].is_string()) tier = j["tier"].get<std::string>();
  ExperimentConfig c = default_config(tier);
  Reader r{errors};
  r.unknown(j, "", {"schema_version", "model", "d", "L", "n", "modes", "n_max", "charge", "potential", "gauge",
                    "backend", "solver", "seed", "tier", "ladders", "supercritical", "decay", "verify", "fiber",
                    "softphoton"});
  r.get(j, "", "schema_version", c.schema_version);
  std::string s;
  if (j.contains("model")) {
    r.get(j, "", "model", s);
    try {
      c.model = model_from_string(s);
    } catch (const Error&) {
      errors.push_back("model: expected pf or np");
    }
  }
  r.get(j, "", "d", c.d);
  r.get(j, "", "L", c.L);
  r.get(j, "", "n", c.n);
  r.get(j, "", "n_max", c.n_max);
  r.get(j, "", "charge", c.charge);
  r.get(j, "", "seed", c.seed);
  r.get(j, "", "tier", c.tier);
  if (j.contains("gauge")) {
    s.clear();
    r.get(j, "", "gauge", s);
    try {
      c.gauge = modes::gauge_from_string(s);
    } catch (const Error&) {
      errors.push_back("gauge: unknown value");
    }
  }
  if (j.contains("backend")) {
    s.clear();
    r.get(j, "", "backend", s);
    try {
      c.backend = ham::backend_from_string(s);
    } catch (const Error&) {
      errors.push_back("backend: expected dense or quadrature");
    }
  }
  if (auto o = r.obj(j, "", "modes")) {
    r.unknown(*o, "modes.", {"m", "uv", "eps", "max_modes", "kind", "radial_nodes", "polar_nodes",
                             "azimuthal_nodes", "radial_ratio"});
    r.get(*o, "modes.", "kind", c.modes.kind);
    r.get(*o, "modes.", "radial_nodes", c.modes.radial_nodes);
    r.get(*o, "modes.", "polar_nodes", c.modes.polar_nodes);
    r.get(*o, "modes.", "azimuthal_nodes", c.modes.azimuthal_nodes);
    r.get(*o, "modes.", "radial_ratio", c.modes.radial_ratio);
    r.get(*o, "modes.", "m", c.modes.m);
    r.get(*o, "modes.", "uv", c.modes.uv);
    r.get(*o, "modes.", "eps", c.modes.eps);
    r.get(*o, "modes.", "max_modes", c.modes.max_modes);
  }
  if (auto o = r.obj(j, "", "potential")) {
    r.unknown(*o, "potential.", {"kind", "gamma", "s", "c", "samples"});
    if (o->contains("kind")) {
      s.clear();
      r.get(*o, "potential.", "kind", s);
      try {
        c.potential.kind = electron::potential_kind_from_string(s);
      } catch (const Error&) {
        errors.push_back("potential.kind: unknown value");
      }
    }
    r.get(*o, "potential.", "gamma", c.potential.gamma);
    r.get(*o, "potential.", "s", c.potential.s);
    r.get(*o, "potential.", "c", c.potential.c);
    r.get(*o, "potential.", "samples", c.potential.samples);
  }
  if (auto o = r.obj(j, "", "solver")) {
    r.unknown(*o, "solver.", {"count", "tol", "K"});
    r.get(*o, "solver.", "count", c.solver.count);
    r.get(*o, "solver.", "tol", c.solver.tol);
    r.get(*o, "solver.", "K", c.solver.K);
  }
  if (auto o = r.obj(j, "", "ladders")) {
    r.unknown(*o, "ladders.", {"m", "eps", "n_max", "n", "tol", "L", "grid_n", "eps_charge", "reference_nodes"});
    r.get(*o, "ladders.", "L", c.ladders.L);
    r.get(*o, "ladders.", "grid_n", c.ladders.grid_n);
    r.get(*o, "ladders.", "eps_charge", c.ladders.eps_charge);
    r.get(*o, "ladders.", "reference_nodes", c.ladders.reference_nodes);
    r.get(*o, "ladders.", "m", c.ladders.m);
    r.get(*o, "ladders.", "eps", c.ladders.eps);
    r.get(*o, "ladders.", "n_max", c.ladders.n_max);
    r.get(*o, "ladders.", "n", c.ladders.n);
    r.get(*o, "ladders.", "tol", c.ladders.tol);
  }
  if (auto o = r.obj(j, "", "supercritical")) {
    auto& sc = c.supercritical;
    r.unknown(*o, "supercritical.", {"n_ladder", "L", "lo", "hi", "width", "slope", "pf_gammas"});
    r.get(*o, "supercritical.", "n_ladder", sc.n_ladder);
    r.get(*o, "supercritical.", "L", sc.L);
    r.get(*o, "supercritical.", "lo", sc.lo);
    r.get(*o, "supercritical.", "hi", sc.hi);
    r.get(*o, "supercritical.", "width", sc.width);
    r.get(*o, "supercritical.", "slope", sc.slope);
    r.get(*o, "supercritical.", "pf_gammas", sc.pf_gammas);
  }
  if (auto o = r.obj(j, "", "decay")) {
    r.unknown(*o, "decay.", {"gammas", "L", "n", "r_lo", "r_hi", "delta"});
    r.get(*o, "decay.", "L", c.decay.L);
    r.get(*o, "decay.", "n", c.decay.n);
    r.get(*o, "decay.", "gammas", c.decay.gammas);
    r.get(*o, "decay.", "r_lo", c.decay.r_lo);
    r.get(*o, "decay.", "r_hi", c.decay.r_hi);
    r.get(*o, "decay.", "delta", c.decay.delta);
  }
  if (auto o = r.obj(j, "", "verify")) {
    r.unknown(*o, "verify.", {"probes", "charges"});
    r.get(*o, "verify.", "probes", c.verify.probes);
    r.get(*o, "verify.", "charges", c.verify.charges);
  }
  if (auto o = r.obj(j, "", "fiber")) {
    r.unknown(*o, "fiber.", {"p_grid"});
    r.get(*o, "fiber.", "p_grid", c.fiber.p_grid);
  }
  if (auto o = r.obj(j, "", "softphoton")) {
    r.unknown(*o, "softphoton.", {"m_ladder", "gamma", "charge", "drift"});
    r.get(*o, "softphoton.", "m_ladder", c.softphoton.m_ladder);
    r.get(*o, "softphoton.", "gamma", c.softphoton.gamma);
    r.get(*o, "softphoton.", "charge", c.softphoton.charge);
    r.get(*o, "softphoton.", "drift", c.softphoton.drift);
  }
  if (errors.empty()) errors = validate(c);
  if (!errors.empty()) {
    std::string msg = "config: invalid fields:";
    for (const auto& e : errors) msg += "\n  " + e;
    fail(ErrorCode::invalid_argument, msg);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ExperimentConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io, "cannot write " + path);
  out << to_json(c) << "\n";
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string s = to_j(c).dump();  // object keys are kept sorted
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qedlab::lab
