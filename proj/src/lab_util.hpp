#pragma once

#include <chrono>
#include <random>

#include "qedlab/config.hpp"
#include "qedlab/report.hpp"

namespace qedlab::lab::detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
  }
  double lap() {
    const double v = ms();
    t0_ = std::chrono::steady_clock::now();
    return v;
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// rows of one check group share the config hash
struct Rows {
  Report& rep;
  std::string hash;
  void add(const std::string& obs, double value, double target, double tol, Check c, double ms = 0,
           const std::string& note = "") {
    rep.add(make_row(hash, obs, value, target, tol, c, ms, note));
  }
  void skip(const std::string& obs, const std::string& why) { rep.add(skipped_row(hash, obs, why)); }
};

inline std::mt19937_64 rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq s{seed, stream, std::uint64_t(0x5eed)};
  return std::mt19937_64(s);
}

std::string fmt(double v);

}  // namespace qedlab::lab::detail
