#include "adb/adb.h"

#include <cstring>
#include <string>

#include "harness.hpp"
#include "report.hpp"
#include "scenario.hpp"

using namespace adb;

struct adb_scenario {
  ScenarioSpec spec;
};

struct adb_report {
  RunReport report;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
adb_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    return fn();
  } catch (const ParseError& e) {
    g_last_error = e.what();
    return ADB_ERR_PARSE;
  } catch (const ProtocolError& e) {
    g_last_error = e.what();
    return ADB_ERR_PROTOCOL;
  } catch (const ValidationError& e) {
    g_last_error = e.what();
    return ADB_ERR_VALIDATION;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ADB_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* adb_status_str(adb_status status) {
  switch (status) {
    case ADB_OK: return "ok";
    case ADB_ERR_INVALID_ARG: return "invalid argument";
    case ADB_ERR_PARSE: return "parse error";
    case ADB_ERR_VALIDATION: return "validation error";
    case ADB_ERR_UNKNOWN_SCENARIO: return "unknown scenario";
    case ADB_ERR_PROTOCOL: return "protocol error";
    case ADB_ERR_INTERNAL: return "internal error";
  }
  return "?";
}

const char* adb_last_error(void) { return g_last_error.c_str(); }

adb_status adb_scenario_builtin(const char* name, adb_scenario** out) {
  if (!name || !out) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    const auto& names = builtin_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      g_last_error = "unknown builtin scenario: " + std::string(name);
      return ADB_ERR_UNKNOWN_SCENARIO;
    }
    *out = new adb_scenario{builtin(name)};
    return ADB_OK;
  });
}

adb_status adb_scenario_load(const char* path, adb_scenario** out) {
  if (!path || !out) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    *out = new adb_scenario{load_scenario(path)};
    return ADB_OK;
  });
}

adb_status adb_scenario_load_string(const char* text, adb_scenario** out) {
  if (!text || !out) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    *out = new adb_scenario{load_scenario_text(text)};
    return ADB_OK;
  });
}

void adb_scenario_free(adb_scenario* scenario) { delete scenario; }

const char* adb_scenario_name(const adb_scenario* scenario) {
  return scenario ? scenario->spec.name.c_str() : "";
}

uint32_t adb_scenario_num_states(const adb_scenario* scenario) {
  return scenario ? scenario->spec.num_states() : 0;
}

int adb_scenario_has_partition(const adb_scenario* scenario) {
  return scenario && scenario->spec.partition ? 1 : 0;
}

int adb_scenario_has_external(const adb_scenario* scenario) {
  return scenario && scenario->spec.external ? 1 : 0;
}

adb_status adb_scenario_serialize(const adb_scenario* scenario, char** out_text) {
  if (!scenario || !out_text) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    *out_text = dup_string(serialize_scenario(scenario->spec));
    return ADB_OK;
  });
}

adb_status adb_builtin_names(char** out_text) {
  if (!out_text) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    std::string joined;
    for (const std::string& n : builtin_names()) {
      joined += n;
      joined += "\n";
    }
    *out_text = dup_string(joined);
    return ADB_OK;
  });
}

adb_status adb_verify(const adb_scenario* scenario, adb_verify_kind which, int depth,
                      adb_report** out) {
  if (!scenario || !out) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    VerifyKind kind;
    switch (which) {
      case ADB_VERIFY_THEOREM: kind = VerifyKind::Theorem; break;
      case ADB_VERIFY_ESCALATION: kind = VerifyKind::Escalation; break;
      case ADB_VERIFY_EXTERNAL: kind = VerifyKind::External; break;
      default: return ADB_ERR_INVALID_ARG;
    }
    *out = new adb_report{run_verify(scenario->spec, kind, depth)};
    return ADB_OK;
  });
}

adb_status adb_race(const adb_scenario* scenario, adb_mode mode,
                    const adb_race_config* config, adb_report** out) {
  if (!scenario || !config || !out) return ADB_ERR_INVALID_ARG;
  if (config->p < 0.0 || config->p > 1.0 || config->trials < 1) return ADB_ERR_INVALID_ARG;
  if (mode != ADB_MODE_ATOMIC && mode != ADB_MODE_SPLIT) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    SchedulerConfig sc;
    sc.kind = config->live ? SchedulerConfig::Kind::LiveRace : SchedulerConfig::Kind::Stochastic;
    sc.env_probability = config->p;
    sc.trials = config->trials;
    sc.seed = config->seed;
    sc.yield_injection = config->yield_injection != 0;
    if (config->agent_workers > 0) sc.agent_workers = config->agent_workers;
    sc.env_workers = config->env_workers;
    if (config->retry_budget > 0) sc.retry_budget = config->retry_budget;
    SystemMode m = mode == ADB_MODE_ATOMIC ? kAtomicMode : kSplitMode;
    *out = new adb_report{run_race(scenario->spec, m, sc)};
    return ADB_OK;
  });
}

adb_status adb_classify(const adb_scenario* scenario, int mode_override, int depth,
                        int adm_local_only, adb_report** out) {
  if (!scenario || !out) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    std::optional<SystemMode> mode;
    if (mode_override == ADB_MODE_ATOMIC) mode = kAtomicMode;
    else if (mode_override == ADB_MODE_SPLIT) mode = kSplitMode;
    else if (mode_override >= 0) return ADB_ERR_INVALID_ARG;
    *out = new adb_report{
        run_classify(scenario->spec, mode, depth, adm_local_only != 0)};
    return ADB_OK;
  });
}

void adb_report_free(adb_report* report) { delete report; }

adb_status adb_report_set_command(adb_report* report, const char* command) {
  if (!report || !command) return ADB_ERR_INVALID_ARG;
  report->report.command = command;
  return ADB_OK;
}

adb_status adb_report_to_json(const adb_report* report, char** out_text) {
  if (!report || !out_text) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    *out_text = dup_string(to_json(report->report).dump(2));
    return ADB_OK;
  });
}

adb_status adb_report_render(const adb_report* report, char** out_text) {
  if (!report || !out_text) return ADB_ERR_INVALID_ARG;
  return guarded([&] {
    *out_text = dup_string(render_human(report->report));
    return ADB_OK;
  });
}

int adb_report_exit_code(const adb_report* report) {
  return report ? report->report.exit_code() : 2;
}

void adb_string_free(char* text) { delete[] text; }

}  // extern "C"
