#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qedlab/lab.hpp"

using namespace qedlab;
using namespace qedlab::lab;

namespace {

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Report()> run;
};

int failing_rows(const Report& r, std::string& first) {
  int n = 0;
  for (const auto& row : r.rows)
    if (!row.skipped && !row.pass) {
      if (!n) first = row.observable + " = " + std::to_string(row.value);
      ++n;
    }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  const ExperimentConfig fast = default_config("fast");
  const ExperimentConfig full = default_config("full");
  std::vector<Criterion> all{
      {1, "algebraic exactness", 5, [&] { return check_algebra(fast); }},
      {2, "spectral split", 30, [&] { return check_split(fast); }},
      {3, "block identity", 10, [&] { return check_block_identity(fast); }},
      {4, "diamagnetic inequality", 60, [&] { return check_diamagnetic(fast); }},
      {5, "Kato and Brown-Ravenhall slack", 300, [&] { return check_kato(fast); }},
      {6, "binding bound", 120, [&] { return run_binding(fast); }},
      {7, "Kramers degeneracy and plus/minus symmetry", 300, [&] { return check_kramers(fast); }},
      {8, "convergence trends", 600,
       [&] {
         Report r = run_converge(fast, "m");
         r.append(run_converge(fast, "eps"));
         r.append(run_converge(fast, "n_max"));
         return r;
       }},
      {9, "soft photon profile", 600, [&] { return run_softphoton(fast); }},
      {10, "supercritical probe", 1800, [&] { return run_supercritical(full); }},
      {11, "exponential localization", 600, [&] { return run_decay(fast); }},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::stoi(argv[i]));
  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Report r;
    std::string err;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      err = e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string first;
    const int bad = err.empty() ? failing_rows(r, first) : 1;
    int skipped = 0;
    for (const auto& row : r.rows) skipped += row.skipped;
    const bool in_time = s <= c.budget_s;
    const bool ok = err.empty() && bad == 0 && in_time && r.rows.size() > std::size_t(skipped);
    failed += !ok;
    std::printf("criterion %2d %-44s %s  rows %3zu  failing %d  skipped %d  %.1f s / %.0f s", c.id, c.name,
                ok ? "PASS" : "FAIL", r.rows.size(), bad, skipped, s, c.budget_s);
    if (!err.empty()) std::printf("  error: %s", err.c_str());
    if (!first.empty()) std::printf("  first failure: %s", first.c_str());
    if (!in_time) std::printf("  over time budget");
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
