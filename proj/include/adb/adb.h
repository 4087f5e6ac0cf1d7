/* adb — admission decision-boundary kernel and race harness.
 *
 * C API over the C++ core: opaque handles, status codes, caller-freed
 * strings. Every entry point is thread-safe for distinct handles; a scenario
 * handle is immutable after creation and may be shared across threads.
 */
#ifndef ADB_ADB_H
#define ADB_ADB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct adb_scenario adb_scenario;
typedef struct adb_report adb_report;

typedef enum adb_status {
  ADB_OK = 0,
  ADB_ERR_INVALID_ARG = 1,
  ADB_ERR_PARSE = 2,
  ADB_ERR_VALIDATION = 3,
  ADB_ERR_UNKNOWN_SCENARIO = 4,
  ADB_ERR_PROTOCOL = 5,
  ADB_ERR_INTERNAL = 6
} adb_status;

typedef enum adb_mode {
  ADB_MODE_ATOMIC = 0,
  ADB_MODE_SPLIT = 1
} adb_mode;

typedef enum adb_verify_kind {
  ADB_VERIFY_THEOREM = 0,
  ADB_VERIFY_ESCALATION = 1,
  ADB_VERIFY_EXTERNAL = 2
} adb_verify_kind;

const char* adb_status_str(adb_status status);

/* Human-readable detail for the last error on this thread; empty string when
 * the last call succeeded. The pointer stays valid until the next API call
 * on the same thread. */
const char* adb_last_error(void);

/* ---- scenarios ---------------------------------------------------------- */

adb_status adb_scenario_builtin(const char* name, adb_scenario** out);
adb_status adb_scenario_load(const char* path, adb_scenario** out);
adb_status adb_scenario_load_string(const char* text, adb_scenario** out);
void adb_scenario_free(adb_scenario* scenario);

const char* adb_scenario_name(const adb_scenario* scenario);
uint32_t adb_scenario_num_states(const adb_scenario* scenario);
int adb_scenario_has_partition(const adb_scenario* scenario);
int adb_scenario_has_external(const adb_scenario* scenario);

/* Canonical text-format serialization; free with adb_string_free. */
adb_status adb_scenario_serialize(const adb_scenario* scenario, char** out_text);

/* Newline-separated builtin names; free with adb_string_free. */
adb_status adb_builtin_names(char** out_text);

/* ---- verification runs -------------------------------------------------- */

/* depth <= 0 selects the scenario default (state count + 2). */
adb_status adb_verify(const adb_scenario* scenario, adb_verify_kind which, int depth,
                      adb_report** out);

typedef struct adb_race_config {
  int live;              /* 0 stochastic, 1 live race */
  double p;              /* env probability, stochastic only, in [0,1] */
  uint64_t trials;
  uint64_t seed;
  int yield_injection;   /* live only */
  uint32_t agent_workers; /* live only; 0 = default */
  uint32_t env_workers;   /* live only */
  uint32_t retry_budget;  /* 0 = default */
} adb_race_config;

adb_status adb_race(const adb_scenario* scenario, adb_mode mode,
                    const adb_race_config* config, adb_report** out);

/* mode_override: ADB_MODE_* to force a construction, or -1 to classify via
 * the scenario's partition descriptor. adm_local_only rebuilds the scenario
 * with admissibility localized to the partition's local attributes first. */
adb_status adb_classify(const adb_scenario* scenario, int mode_override, int depth,
                        int adm_local_only, adb_report** out);

/* ---- reports ------------------------------------------------------------ */

void adb_report_free(adb_report* report);

/* Command echo carried into both output formats. */
adb_status adb_report_set_command(adb_report* report, const char* command);

/* Structured JSON document (one object per run); free with adb_string_free. */
adb_status adb_report_to_json(const adb_report* report, char** out_text);

/* Human-readable rendering; free with adb_string_free. */
adb_status adb_report_render(const adb_report* report, char** out_text);

/* 0 every verification matched its expected class, 1 mismatch,
 * 3 inconclusive. */
int adb_report_exit_code(const adb_report* report);

void adb_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* ADB_ADB_H */
