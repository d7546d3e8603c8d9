#ifndef QEDLAB_H
#define QEDLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(QEDLAB_BUILD)
#define QEDLAB_API __attribute__((visibility("default")))
#else
#define QEDLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qedlab_status {
  QEDLAB_OK = 0,
  QEDLAB_INVALID_ARGUMENT = 1,
  QEDLAB_PRECONDITION = 2,
  QEDLAB_NOT_CONVERGED = 3,
  QEDLAB_IO = 4,
  QEDLAB_INTERNAL = 5
} qedlab_status;

typedef struct qedlab_config qedlab_config;
typedef struct qedlab_report qedlab_report;

/* pointers stay valid until the owning report is freed */
typedef struct qedlab_row {
  const char* config_hash;
  const char* observable;
  double value;
  double target;
  double tolerance;
  double runtime_ms;
  int pass;
  int skipped;
  const char* note;
} qedlab_row;

/* message of the last failing call on this thread, "" if none */
QEDLAB_API const char* qedlab_last_error(void);
QEDLAB_API const char* qedlab_version(void);

QEDLAB_API int qedlab_config_default(const char* tier, qedlab_config** out);
QEDLAB_API int qedlab_config_load(const char* path, qedlab_config** out);
QEDLAB_API int qedlab_config_parse(const char* json, qedlab_config** out);
QEDLAB_API int qedlab_config_save(const qedlab_config* cfg, const char* path);
QEDLAB_API int qedlab_config_set_seed(qedlab_config* cfg, uint64_t seed);
/* "fast" or "full"; only the tier label is changed */
QEDLAB_API int qedlab_config_set_tier(qedlab_config* cfg, const char* tier);
QEDLAB_API int qedlab_config_set_backend(qedlab_config* cfg, const char* backend);
/* strings returned through char** are released with qedlab_string_free */
QEDLAB_API int qedlab_config_json(const qedlab_config* cfg, char** out);
QEDLAB_API int qedlab_config_hash(const qedlab_config* cfg, char** out);
QEDLAB_API void qedlab_config_free(qedlab_config* cfg);
QEDLAB_API void qedlab_string_free(char* s);

/* command: verify spectrum binding decay softphoton converge supercritical fiber,
   or a single check group (algebra split block diamagnetic relative_bound kato kramers gauge modes
   converge_m converge_eps converge_n_max converge_n) */
QEDLAB_API int qedlab_run(const char* command, const qedlab_config* cfg, qedlab_report** out);

QEDLAB_API size_t qedlab_report_size(const qedlab_report* rep);
QEDLAB_API int qedlab_report_row(const qedlab_report* rep, size_t i, qedlab_row* out);
/* 1 when every non-skipped row passes */
QEDLAB_API int qedlab_report_all_pass(const qedlab_report* rep);
QEDLAB_API int qedlab_report_csv(const qedlab_report* rep, char** out);
/* report.csv, report.json and the plot series under dir */
QEDLAB_API int qedlab_report_write(const qedlab_report* rep, const char* dir, const char* command,
                                   const qedlab_config* cfg);
QEDLAB_API void qedlab_report_free(qedlab_report* rep);

#ifdef __cplusplus
}
#endif

#endif
