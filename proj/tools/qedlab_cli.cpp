#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qedlab.h"

namespace {

int report_error(const char* what, int code) {
  std::fprintf(stderr, "qedlab: %s: %s\n", what, qedlab_last_error());
  return code == QEDLAB_INVALID_ARGUMENT ? 2 : 3;
}

void print_rows(const qedlab_report* rep) {
  const size_t n = qedlab_report_size(rep);
  size_t pass = 0, fail = 0, skip = 0;
  for (size_t i = 0; i < n; ++i) {
    qedlab_row r;
    qedlab_report_row(rep, i, &r);
    const char* tag = r.skipped ? "SKIP" : (r.pass ? "ok  " : "FAIL");
    std::printf("%s %-48s %14.8g  target %-12.6g tol %-10.3g %s\n", tag, r.observable, r.value, r.target,
                r.tolerance, r.note);
    if (r.skipped)
      ++skip;
    else if (r.pass)
      ++pass;
    else
      ++fail;
  }
  std::printf("%zu passed, %zu failed, %zu skipped\n", pass, fail, skip);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical lab for the semi-relativistic Pauli-Fierz and no-pair operators"};
  app.require_subcommand(1);
  std::string config_path, out_dir, tier, backend, parameter = "all";
  std::uint64_t seed = 0;
  bool have_seed = false;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify", "algebraic and structural invariants"},
      {"spectrum", "lowest eigenpairs of the configured operator"},
      {"binding", "binding inequality against the electronic comparison operator"},
      {"decay", "exponential localization of the ground state"},
      {"softphoton", "occupancy density profile along a photon mass ladder"},
      {"converge", "Cauchy trends along the refinement ladders"},
      {"supercritical", "collapse classifier and critical coupling bracket"},
      {"fiber", "fiber energies E(P) and the ionization threshold"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory (default out/<command>)");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s, have_seed = true; }, "random seed");
    sub->add_option("--tier", tier, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    sub->add_option("--backend", backend, "dense or quadrature")->check(CLI::IsMember({"dense", "quadrature"}));
    if (name == "converge")
      sub->add_option("--parameter", parameter, "all, m, eps, n_max or n")
          ->check(CLI::IsMember({"all", "m", "eps", "n_max", "n"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  qedlab_config* cfg = nullptr;
  int rc = config_path.empty() ? qedlab_config_default(tier.empty() ? "fast" : tier.c_str(), &cfg)
                               : qedlab_config_load(config_path.c_str(), &cfg);
  if (rc) return report_error("config", rc);
  if (!tier.empty() && (rc = qedlab_config_set_tier(cfg, tier.c_str()))) return report_error("tier", rc);
  if (!backend.empty() && (rc = qedlab_config_set_backend(cfg, backend.c_str()))) return report_error("backend", rc);
  if (have_seed) qedlab_config_set_seed(cfg, seed);

  const std::string run = command == "converge" && parameter != "all" ? "converge_" + parameter : command;
  qedlab_report* rep = nullptr;
  if ((rc = qedlab_run(run.c_str(), cfg, &rep))) {
    qedlab_config_free(cfg);
    return report_error(command.c_str(), rc);
  }
  print_rows(rep);
  if (out_dir.empty()) out_dir = "out/" + command;
  if ((rc = qedlab_report_write(rep, out_dir.c_str(), command.c_str(), cfg))) {
    qedlab_report_free(rep);
    qedlab_config_free(cfg);
    return report_error("write", rc);
  }
  const bool ok = qedlab_report_all_pass(rep);
  qedlab_report_free(rep);
  qedlab_config_free(cfg);
  return ok ? 0 : 1;
}
