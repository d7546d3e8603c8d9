#include <cstdlib>
#include <cstring>
#include <string>

#include "qedlab.h"
#include "qedlab/lab.hpp"

using namespace qedlab;

struct qedlab_config {
  lab::ExperimentConfig cfg;
};

struct qedlab_report {
  lab::Report rep;
};

namespace {

thread_local std::string last_error;

template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return QEDLAB_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return int(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QEDLAB_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QEDLAB_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
}

}  // namespace

extern "C" {

const char* qedlab_last_error(void) { return last_error.c_str(); }

const char* qedlab_version(void) { return "0.1.0"; }

int qedlab_config_default(const char* tier, qedlab_config** out) {
  return guarded([&] {
    need(out, "out");
    const std::string t = tier ? tier : "fast";
    if (t != "fast" && t != "full") fail(ErrorCode::invalid_argument, "tier must be fast or full");
    *out = new qedlab_config{lab::default_config(t)};
  });
}

int qedlab_config_load(const char* path, qedlab_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new qedlab_config{lab::load_config(path)};
  });
}

int qedlab_config_parse(const char* json, qedlab_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new qedlab_config{lab::config_from_json(json)};
  });
}

int qedlab_config_save(const qedlab_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "config");
    need(path, "path");
    lab::save_config(cfg->cfg, path);
  });
}

int qedlab_config_set_seed(qedlab_config* cfg, uint64_t seed) {
  return guarded([&] {
    need(cfg, "config");
    cfg->cfg.seed = seed;
  });
}

int qedlab_config_set_tier(qedlab_config* cfg, const char* tier) {
  return guarded([&] {
    need(cfg, "config");
    need(tier, "tier");
    const std::string t = tier;
    if (t != "fast" && t != "full") fail(ErrorCode::invalid_argument, "tier must be fast or full");
    cfg->cfg.tier = t;
  });
}

int qedlab_config_set_backend(qedlab_config* cfg, const char* backend) {
  return guarded([&] {
    need(cfg, "config");
    need(backend, "backend");
    cfg->cfg.backend = ham::backend_from_string(backend);
  });
}

int qedlab_config_json(const qedlab_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = dup(lab::to_json(cfg->cfg));
  });
}

int qedlab_config_hash(const qedlab_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "config");
    need(out, "out");
    *out = dup(lab::config_hash(cfg->cfg));
  });
}

void qedlab_config_free(qedlab_config* cfg) { delete cfg; }

void qedlab_string_free(char* s) { std::free(s); }

int qedlab_run(const char* command, const qedlab_config* cfg, qedlab_report** out) {
  return guarded([&] {
    need(command, "command");
    need(cfg, "config");
    need(out, "out");
    *out = new qedlab_report{lab::run_command(command, cfg->cfg)};
  });
}

size_t qedlab_report_size(const qedlab_report* rep) { return rep ? rep->rep.rows.size() : 0; }

int qedlab_report_row(const qedlab_report* rep, size_t i, qedlab_row* out) {
  return guarded([&] {
    need(rep, "report");
    need(out, "out");
    if (i >= rep->rep.rows.size()) fail(ErrorCode::invalid_argument, "row index out of range");
    const auto& r = rep->rep.rows[i];
    *out = qedlab_row{r.config_hash.c_str(), r.observable.c_str(), r.value, r.target, r.tolerance,
                      r.runtime_ms, r.pass ? 1 : 0, r.skipped ? 1 : 0, r.note.c_str()};
  });
}

int qedlab_report_all_pass(const qedlab_report* rep) { return rep && lab::all_pass(rep->rep.rows) ? 1 : 0; }

int qedlab_report_csv(const qedlab_report* rep, char** out) {
  return guarded([&] {
    need(rep, "report");
    need(out, "out");
    *out = dup(lab::csv(rep->rep.rows));
  });
}

int qedlab_report_write(const qedlab_report* rep, const char* dir, const char* command, const qedlab_config* cfg) {
  return guarded([&] {
    need(rep, "report");
    need(dir, "dir");
    need(cfg, "config");
    lab::persist_report(rep->rep, dir, command ? command : "", lab::to_json(cfg->cfg));
  });
}

void qedlab_report_free(qedlab_report* rep) { delete rep; }

}  // extern "C"
