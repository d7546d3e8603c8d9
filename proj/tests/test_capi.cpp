#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "qedlab.h"

TEST_CASE("config handles") {
  qedlab_config* c = nullptr;
  REQUIRE(qedlab_config_default("fast", &c) == QEDLAB_OK);
  char* h = nullptr;
  REQUIRE(qedlab_config_hash(c, &h) == QEDLAB_OK);
  CHECK(std::strlen(h) == 16);
  char* j = nullptr;
  REQUIRE(qedlab_config_json(c, &j) == QEDLAB_OK);
  qedlab_config* d = nullptr;
  REQUIRE(qedlab_config_parse(j, &d) == QEDLAB_OK);
  char* h2 = nullptr;
  qedlab_config_hash(d, &h2);
  CHECK(std::string(h) == h2);
  CHECK(qedlab_config_set_seed(d, 99) == QEDLAB_OK);
  char* h3 = nullptr;
  qedlab_config_hash(d, &h3);
  CHECK(std::string(h) != h3);
  CHECK(qedlab_config_set_backend(d, "quadrature") == QEDLAB_OK);
  CHECK(qedlab_config_set_backend(d, "magic") == QEDLAB_INVALID_ARGUMENT);
  CHECK(std::string(qedlab_last_error()).size() > 0);
  CHECK(qedlab_config_set_tier(d, "slow") == QEDLAB_INVALID_ARGUMENT);
  qedlab_string_free(h);
  qedlab_string_free(h2);
  qedlab_string_free(h3);
  qedlab_string_free(j);
  qedlab_config_free(c);
  qedlab_config_free(d);
}

TEST_CASE("errors are reported through codes") {
  qedlab_config* c = nullptr;
  CHECK(qedlab_config_parse("{\"schema_version\": 1, \"n\": -3}", &c) == QEDLAB_INVALID_ARGUMENT);
  CHECK(std::string(qedlab_last_error()).find("n:") != std::string::npos);
  CHECK(qedlab_config_load("/nonexistent/cfg.json", &c) == QEDLAB_IO);
  CHECK(qedlab_config_default("fast", nullptr) == QEDLAB_INVALID_ARGUMENT);
  CHECK(qedlab_config_default("medium", &c) == QEDLAB_INVALID_ARGUMENT);
  REQUIRE(qedlab_config_default("fast", &c) == QEDLAB_OK);
  qedlab_report* r = nullptr;
  CHECK(qedlab_run("nonsense", c, &r) == QEDLAB_INVALID_ARGUMENT);
  CHECK(r == nullptr);
  CHECK(qedlab_report_size(nullptr) == 0);
  qedlab_config_free(c);
}

TEST_CASE("run a check group and persist it") {
  qedlab_config* c = nullptr;
  REQUIRE(qedlab_config_parse("{\"schema_version\": 1, \"n\": 8, \"modes\": {\"max_modes\": 4}}", &c) == QEDLAB_OK);
  qedlab_report* r = nullptr;
  REQUIRE(qedlab_run("algebra", c, &r) == QEDLAB_OK);
  const size_t n = qedlab_report_size(r);
  CHECK(n > 5);
  qedlab_row row;
  REQUIRE(qedlab_report_row(r, 0, &row) == QEDLAB_OK);
  CHECK(std::string(row.observable) == "clifford_residual");
  CHECK(row.pass == 1);
  CHECK(qedlab_report_row(r, n, &row) == QEDLAB_INVALID_ARGUMENT);
  CHECK(qedlab_report_all_pass(r) == 1);
  char* csv = nullptr;
  REQUIRE(qedlab_report_csv(r, &csv) == QEDLAB_OK);
  CHECK(std::string(csv).rfind("config_hash,observable,value,target,tolerance,pass,runtime_ms", 0) == 0);
  qedlab_string_free(csv);
  const auto dir = std::filesystem::temp_directory_path() / "qedlab_capi_out";
  REQUIRE(qedlab_report_write(r, dir.c_str(), "algebra", c) == QEDLAB_OK);
  CHECK(std::filesystem::exists(dir / "report.csv"));
  CHECK(std::filesystem::exists(dir / "report.json"));
  qedlab_report_free(r);
  qedlab_config_free(c);
}
