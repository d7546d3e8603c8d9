#include <cmath>

#include "doctest.h"
#include "qedlab/electron.hpp"
#include "qedlab/modes.hpp"

using namespace qedlab;

TEST_CASE("cell volumes partition the shell") {
  const auto ms = modes::build_mode_set(0.5, 1.0, 0.4, 1.0);
  double vol = 0;
  for (const auto& m : ms.modes) vol += m.cell_volume;
  CHECK(vol / 2 == doctest::Approx(ms.shell_volume()).epsilon(1e-12));
}

TEST_CASE("modes come in +-k pairs") {
  const auto ms = modes::build_mode_set(0.3, 1.0, 0.5, 0.7);
  for (std::size_t j = 0; j < ms.size(); ++j) {
    const auto& a = ms.modes[j];
    REQUIRE(a.partner >= 0);
    const auto& b = ms.modes[a.partner];
    CHECK(b.partner == int(j));
    CHECK((a.k + b.k).norm() == 0.0);
    CHECK(a.omega == b.omega);
    CHECK(a.omega >= ms.m);
  }
}

TEST_CASE("invalid mode parameters are rejected") {
  CHECK_THROWS_AS(modes::build_mode_set(0.0, 1.0, 0.5, 1.0), Error);
  CHECK_THROWS_AS(modes::build_mode_set(0.5, 1.0, 2.0, 1.0), Error);
  CHECK_THROWS_AS(modes::build_mode_set(1.5, 1.0, 0.5, 1.0), Error);
}

TEST_CASE("subset keeps partners") {
  const auto ms = modes::select_subset(modes::build_mode_set(0.5, 1.0, 0.5, 1.0), 8);
  CHECK(ms.size() == 8);
  for (std::size_t j = 0; j < ms.size(); ++j) CHECK(ms.modes[ms.modes[j].partner].partner == int(j));
}

TEST_CASE("reference quadrature integrates the shell volume") {
  modes::ReferenceOptions o;
  o.radial_nodes = 3;
  o.polar_nodes = 4;
  o.azimuthal_nodes = 6;
  o.radial_breaks = {0.2, 0.5};
  const auto ms = modes::build_reference_set(0.1, 1.0, 1.0, o);
  double vol = 0;
  for (const auto& m : ms.modes) {
    vol += m.cell_volume;
    CHECK(m.omega == doctest::Approx(m.k.norm()));
  }
  CHECK(vol / 2 == doctest::Approx(ms.shell_volume()).epsilon(1e-12));
  CHECK(ms.is_reference());
}

TEST_CASE("coupling norms match closed forms") {
  const double e = 0.5, m = 0.2;
  const auto ms = modes::build_mode_set(m, 1.0, 0.25, e);
  const auto cn = modes::coupling_norms(ms, std::vector<Vec3>{Vec3::Zero()}, modes::Gauge::standard);
  CHECK(cn.d_minus1 * cn.d_minus1 == doctest::Approx(4 * e * e * (1 - m) / kPi).epsilon(1e-4));
  CHECK(cn.d_0 * cn.d_0 == doctest::Approx(2 * e * e * (1 - m * m) / kPi).epsilon(1e-4));
}

TEST_CASE("box ball volume limits") {
  const double R = 0.7;
  CHECK(modes::box_ball_volume(Vec3(-1, -1, -1), Vec3(1, 1, 1), R) ==
        doctest::Approx(4 * kPi / 3 * R * R * R).epsilon(1e-13));
  CHECK(modes::box_ball_volume(Vec3(0, 0, 0), Vec3(1, 1, 1), R) ==
        doctest::Approx(kPi / 6 * R * R * R).epsilon(1e-13));
  CHECK(modes::box_ball_volume(Vec3(0.1, 0.1, 0.1), Vec3(0.2, 0.3, 0.2), 5.0) == doctest::Approx(0.1 * 0.2 * 0.1));
  CHECK(modes::box_ball_volume(Vec3(2, 2, 2), Vec3(3, 3, 3), 1.0) == 0.0);
}

TEST_CASE("coupling vanishes outside the shell and conjugates under k -> -k") {
  const Vec3 x(0.3, -0.2, 0.5), k(0.2, 0.3, -0.1);
  CHECK(modes::continuous_coupling(x, Vec3(2, 0, 0), 0, 1.0, 0.1, 1.0, modes::Gauge::massive).norm() == 0.0);
  CHECK(modes::continuous_coupling(x, Vec3(0.05, 0, 0), 0, 1.0, 0.1, 1.0, modes::Gauge::massive).norm() == 0.0);
  const auto ms = modes::build_mode_set(0.5, 1.0, 0.5, 1.0);
  for (std::size_t j = 0; j < ms.size(); ++j) {
    const auto a = modes::coupling_at(x, ms, j, modes::Gauge::discretized);
    const auto b = modes::coupling_at(x, ms, ms.modes[j].partner, modes::Gauge::discretized);
    CHECK((a - b.conjugate()).norm() < 1e-15);
  }
  (void)k;
}

TEST_CASE("mode set json round trip") {
  const auto ms = modes::build_mode_set(0.5, 1.0, 0.5, 0.3);
  const auto back = modes::from_json(modes::to_json(ms));
  REQUIRE(back.size() == ms.size());
  for (std::size_t j = 0; j < ms.size(); ++j) {
    CHECK(back.modes[j].k == ms.modes[j].k);
    CHECK(back.modes[j].cell_volume == ms.modes[j].cell_volume);
  }
}
