#include "qedlab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "qedlab/types.hpp"

namespace qedlab::lab {

Row make_row(const std::string& hash, const std::string& obs, double value, double target, double tol, Check c,
             double ms, const std::string& note) {
  Row r;
  r.config_hash = hash;
  r.observable = obs;
  r.value = value;
  r.target = target;
  r.tolerance = tol;
  r.check = c;
  r.runtime_ms = ms;
  r.note = note;
  switch (c) {
    case Check::eq: r.pass = std::abs(value - target) <= tol; break;
    case Check::le: r.pass = value <= target + tol; break;
    case Check::ge: r.pass = value >= target - tol; break;
    case Check::info: r.pass = true; break;
  }
  if (!std::isfinite(value) && c != Check::info) r.pass = false;
  return r;
}

Row skipped_row(const std::string& hash, const std::string& obs, const std::string& why) {
  Row r;
  r.config_hash = hash;
  r.observable = obs;
  r.value = std::nan("");
  r.skipped = true;
  r.pass = true;
  r.note = why;
  return r;
}

bool all_pass(const std::vector<Row>& rows) {
  for (const auto& r : rows)
    if (!r.skipped && !r.pass) return false;
  return true;
}

void Report::append(const Report& o) {
  rows.insert(rows.end(), o.rows.begin(), o.rows.end());
  series.insert(series.end(), o.series.begin(), o.series.end());
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream ss;
  ss << std::setprecision(12) << v;
  return ss.str();
}

const char* check_name(Check c) {
  switch (c) {
    case Check::eq: return "eq";
    case Check::le: return "le";
    case Check::ge: return "ge";
    default: return "info";
  }
}

}  // namespace

std::string csv(const std::vector<Row>& rows) {
  std::ostringstream ss;
  ss << "config_hash,observable,value,target,tolerance,pass,runtime_ms\n";
  for (const auto& r : rows)
    ss << r.config_hash << ',' << r.observable << ',' << num(r.value) << ',' << num(r.target) << ','
       << num(r.tolerance) << ',' << (r.skipped ? "skip" : (r.pass ? "true" : "false")) << ','
       << num(r.runtime_ms) << '\n';
  return ss.str();
}

std::string json(const Report& rep, const std::string& command, const std::string& config_json) {
  nlohmann::json j;
  j["command"] = command;
  try {
    j["config"] = nlohmann::json::parse(config_json);
  } catch (...) {
    j["config"] = config_json;
  }
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rep.rows) {
    nlohmann::json x;
    x["config_hash"] = r.config_hash;
    x["observable"] = r.observable;
    x["value"] = std::isfinite(r.value) ? nlohmann::json(r.value) : nlohmann::json(nullptr);
    x["target"] = std::isfinite(r.target) ? nlohmann::json(r.target) : nlohmann::json(nullptr);
    x["tolerance"] = r.tolerance;
    x["check"] = check_name(r.check);
    x["pass"] = r.pass;
    x["skipped"] = r.skipped;
    x["runtime_ms"] = r.runtime_ms;
    if (!r.note.empty()) x["note"] = r.note;
    j["rows"].push_back(x);
  }
  j["series"] = nlohmann::json::array();
  for (const auto& s : rep.series) j["series"].push_back(s.name);
  j["pass"] = all_pass(rep.rows);
  return j.dump(2);
}

std::string series_csv(const Series& s) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < s.columns.size(); ++i) ss << (i ? "," : "") << s.columns[i];
  ss << '\n';
  for (const auto& r : s.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) ss << (i ? "," : "") << num(r[i]);
    ss << '\n';
  }
  return ss.str();
}

void persist_report(const Report& r, const std::string& dir, const std::string& command,
                    const std::string& config_json) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io, "cannot create " + dir + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) fail(ErrorCode::io, "cannot write " + name);
    out << text;
  };
  write("report.csv", csv(r.rows));
  write("report.json", json(r, command, config_json));
  for (const auto& s : r.series) write(s.name + ".csv", series_csv(s));
}

}  // namespace qedlab::lab
