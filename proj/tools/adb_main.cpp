// adb CLI: verify theorem/corollary reproductions, drive stochastic and live
// race experiments, and classify scenarios. Talks to the core only through
// the public C API.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "adb/adb.h"

namespace {

struct ScenarioHandle {
  adb_scenario* ptr = nullptr;
  ~ScenarioHandle() { adb_scenario_free(ptr); }
};

struct ReportHandle {
  adb_report* ptr = nullptr;
  ~ReportHandle() { adb_report_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { adb_string_free(ptr); }
};

// Builtin name first, file path second.
int resolve_scenario(const std::string& name, ScenarioHandle& out) {
  adb_status st = adb_scenario_builtin(name.c_str(), &out.ptr);
  if (st == ADB_OK) return 0;
  if (st == ADB_ERR_UNKNOWN_SCENARIO && std::filesystem::exists(name)) {
    st = adb_scenario_load(name.c_str(), &out.ptr);
    if (st == ADB_OK) return 0;
  }
  std::fprintf(stderr, "error: cannot resolve scenario '%s': %s\n", name.c_str(),
               *adb_last_error() ? adb_last_error() : adb_status_str(st));
  return 2;
}

uint64_t seed_fallback(uint64_t cli_seed, bool seed_given) {
  if (seed_given) return cli_seed;
  if (const char* env = std::getenv("ADB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

int emit(ReportHandle& report, const std::string& command, const std::string& format) {
  adb_report_set_command(report.ptr, command.c_str());
  OwnedString text;
  adb_status st = format == "structured" ? adb_report_to_json(report.ptr, &text.ptr)
                                         : adb_report_render(report.ptr, &text.ptr);
  if (st != ADB_OK) {
    std::fprintf(stderr, "error: %s\n", adb_last_error());
    return 2;
  }
  std::fputs(text.ptr, stdout);
  if (format == "structured") std::fputc('\n', stdout);
  return adb_report_exit_code(report.ptr);
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"admission decision-boundary kernel and race harness"};
  app.require_subcommand(1);
  std::string command_echo = join_args(argc, argv);

  std::string scenario_name, format = "human", which = "theorem", mode_str;
  int depth = 0;
  bool live = false, stochastic = false;
  double p = 0.5;
  uint64_t trials = 10000, seed = 1;
  bool seed_given = false;
  bool yield_injection = false, no_yield = false, adm_local_only = false;
  uint32_t workers = 0, env_workers = 2;

  CLI::App* verify = app.add_subcommand("verify", "reproduce the non-equivalence results");
  verify->add_option("--scenario", scenario_name, "builtin name or scenario file")->required();
  verify->add_option("--depth", depth, "trace depth bound (default: state count + 2)");
  verify->add_option("--which", which, "theorem|escalation|external")
      ->check(CLI::IsMember({"theorem", "escalation", "external"}));
  verify->add_option("--format", format, "human|structured")
      ->check(CLI::IsMember({"human", "structured"}));

  CLI::App* race = app.add_subcommand("race", "stochastic or live concurrent admission runs");
  race->add_option("--scenario", scenario_name, "builtin name or scenario file")->required();
  race->add_option("--mode", mode_str, "atomic|split")
      ->required()
      ->check(CLI::IsMember({"atomic", "split"}));
  race->add_flag("--live", live, "run concurrent workers on a shared versioned cell");
  race->add_flag("--stochastic", stochastic, "run seeded random walks (default)");
  race->add_option("--p", p, "env step probability per decision window [0,1]");
  race->add_option("--trials", trials, "number of admit attempts");
  race->add_option("--seed", seed, "PRNG seed (fallback: ADB_SEED env, then 1)")
      ->each([&](const std::string&) { seed_given = true; });
  race->add_flag("--yield", yield_injection, "inject a pause between dec and exec (live)");
  race->add_flag("--no-yield", no_yield, "disable yield injection (live)");
  race->add_option("--workers", workers, "agent workers (live)");
  race->add_option("--env-workers", env_workers, "environment workers (live)");
  race->add_option("--format", format, "human|structured")
      ->check(CLI::IsMember({"human", "structured"}));

  CLI::App* classify = app.add_subcommand("classify", "atomic / partially-atomic / split");
  classify->add_option("--scenario", scenario_name, "builtin name or scenario file")->required();
  classify->add_option("--depth", depth, "trace depth bound");
  classify->add_option("--mode", mode_str, "force a construction instead of the partition")
      ->check(CLI::IsMember({"atomic", "split"}));
  classify->add_flag("--adm-local-only", adm_local_only,
                     "localize admissibility to the partition's local attributes first");
  classify->add_option("--format", format, "human|structured")
      ->check(CLI::IsMember({"human", "structured"}));

  CLI::App* show = app.add_subcommand("show", "print the canonical scenario serialization");
  show->add_option("--scenario", scenario_name, "builtin name or scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ScenarioHandle scenario;
  if (int rc = resolve_scenario(scenario_name, scenario)) return rc;

  if (verify->parsed()) {
    adb_verify_kind kind = which == "theorem"      ? ADB_VERIFY_THEOREM
                           : which == "escalation" ? ADB_VERIFY_ESCALATION
                                                   : ADB_VERIFY_EXTERNAL;
    ReportHandle report;
    if (adb_verify(scenario.ptr, kind, depth, &report.ptr) != ADB_OK) {
      std::fprintf(stderr, "error: %s\n", adb_last_error());
      return 2;
    }
    return emit(report, command_echo, format);
  }

  if (race->parsed()) {
    if (live && stochastic) {
      std::fprintf(stderr, "error: choose one of --live / --stochastic\n");
      return 2;
    }
    if (p < 0.0 || p > 1.0 || trials < 1) {
      std::fprintf(stderr, "error: need p in [0,1] and trials >= 1\n");
      return 2;
    }
    adb_race_config config{};
    config.live = live ? 1 : 0;
    config.p = p;
    config.trials = trials;
    config.seed = seed_fallback(seed, seed_given);
    config.yield_injection = (yield_injection && !no_yield) ? 1 : 0;
    config.agent_workers = workers;
    config.env_workers = env_workers;
    ReportHandle report;
    adb_mode mode = mode_str == "atomic" ? ADB_MODE_ATOMIC : ADB_MODE_SPLIT;
    adb_status st = adb_race(scenario.ptr, mode, &config, &report.ptr);
    if (st == ADB_ERR_INVALID_ARG) {
      std::fprintf(stderr, "error: invalid race configuration\n");
      return 2;
    }
    if (st != ADB_OK) {
      std::fprintf(stderr, "error: %s\n", adb_last_error());
      return 2;
    }
    return emit(report, command_echo, format);
  }

  if (classify->parsed()) {
    int mode_override = -1;
    if (mode_str == "atomic") mode_override = ADB_MODE_ATOMIC;
    if (mode_str == "split") mode_override = ADB_MODE_SPLIT;
    if (mode_override < 0 && !adb_scenario_has_partition(scenario.ptr)) {
      std::fprintf(stderr, "error: scenario '%s' has no partition block; pass --mode\n",
                   adb_scenario_name(scenario.ptr));
      return 2;
    }
    ReportHandle report;
    if (adb_classify(scenario.ptr, mode_override, depth, adm_local_only ? 1 : 0,
                     &report.ptr) != ADB_OK) {
      std::fprintf(stderr, "error: %s\n", adb_last_error());
      return 2;
    }
    return emit(report, command_echo, format);
  }

  if (show->parsed()) {
    OwnedString text;
    if (adb_scenario_serialize(scenario.ptr, &text.ptr) != ADB_OK) {
      std::fprintf(stderr, "error: %s\n", adb_last_error());
      return 2;
    }
    std::fputs(text.ptr, stdout);
    return 0;
  }

  return 2;
}
