#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qedlab::lab {

enum class Check { eq, le, ge, info };

struct Row {
  std::string config_hash;
  std::string observable;
  double value = 0;
  double target = 0;
  double tolerance = 0;
  Check check = Check::info;
  bool pass = true;
  bool skipped = false;
  double runtime_ms = 0;
  std::string note;
};

// eq: |value - target| <= tol; le: value <= target + tol; ge: value >= target - tol; info: always passes
Row make_row(const std::string& hash, const std::string& obs, double value, double target, double tol, Check c,
             double ms = 0, const std::string& note = "");
Row skipped_row(const std::string& hash, const std::string& obs, const std::string& why);
bool all_pass(const std::vector<Row>& rows);

struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::vector<Row> rows;
  std::vector<Series> series;
  void add(Row r) { rows.push_back(std::move(r)); }
  void append(const Report& o);
};

std::string csv(const std::vector<Row>& rows);
std::string json(const Report& r, const std::string& command, const std::string& config_json);
std::string series_csv(const Series& s);
// report.csv, report.json and one csv per series under dir
void persist_report(const Report& r, const std::string& dir, const std::string& command,
                    const std::string& config_json);

}  // namespace qedlab::lab
