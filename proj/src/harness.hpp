#pragma once

#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "scenario.hpp"
#include "system.hpp"
#include "types.hpp"

namespace adb {

// Per-step view of a trace against the system it came from; self-contained
// so reports carry everything rendering needs.
struct TraceRendering {
  std::vector<std::string> states;   // node names, size n+1
  std::vector<std::string> labels;   // rendered labels, size n
  std::vector<std::string> kinds;    // label kinds, size n
  std::vector<uint8_t> fires;        // size n
  std::vector<int8_t> adm_before;    // Adm(source, wrapped action); -1 for env steps
};

TraceRendering render_trace(const SystemLts& system, const Trace& trace);

struct WitnessReport {
  std::string scenario;
  std::string construction;
  int depth = 0;

  enum class Outcome : uint8_t { Witness, AbsentUpTo, Inconclusive };
  Outcome outcome = Outcome::Inconclusive;

  Trace trace;                 // Witness only
  TraceRendering rendering;    // Witness only
  size_t violation_index = 0;  // 1-based step, Witness only
  uint64_t traces_explored = 0;
  std::string reason;          // Inconclusive only

  bool witness() const { return outcome == Outcome::Witness; }
  bool absent() const { return outcome == Outcome::AbsentUpTo; }
  bool inconclusive() const { return outcome == Outcome::Inconclusive; }
};

std::string_view to_string(WitnessReport::Outcome o);

// Minimal-witness search plus absence certification in one pass family:
// iterative deepening (breadth-ordered) until `depth`; a Witness is the
// shortest violating trace, lexicographically first in arc order; AbsentUpTo
// is emitted only after the full enumeration at `depth` completes.
WitnessReport verify_construction(const ScenarioSpec& spec, const SystemLts& system,
                                  const std::string& construction, int depth,
                                  uint64_t cap = kDefaultTraceCap);

struct TheoremResult {
  WitnessReport split_report;
  WitnessReport atomic_report;
  bool matched() const { return split_report.witness() && atomic_report.absent(); }
  bool inconclusive() const {
    return split_report.inconclusive() || atomic_report.inconclusive();
  }
};

// Theorem: the split construction yields a violating witness; the atomic
// construction certifies absence at the same depth. Inconclusive when the
// non-triviality assumption fails.
TheoremResult verify_theorem(const ScenarioSpec& spec, int depth,
                             uint64_t cap = kDefaultTraceCap);

struct EscalationClosureResult {
  WitnessReport split_resolution;
  WitnessReport atomic_resolution;
  bool matched() const {
    return split_resolution.witness() && atomic_resolution.absent();
  }
  bool inconclusive() const {
    return split_resolution.inconclusive() || atomic_resolution.inconclusive();
  }
};

// Corollary: with an atomic primary boundary, a split supervisor resolution
// still admits a violation at the post-resolution exec; an atomic resolution
// does not. Inconclusive when no Escalate decision is reachable, or when the
// depth cannot reach a resolution's exec step.
EscalationClosureResult verify_escalation_closure(const ScenarioSpec& spec, int depth,
                                                  uint64_t cap = kDefaultTraceCap);

// Corollary: the split construction over the store-augmented decision still
// has a witness; fusing the external read with the commit (the atomic
// construction) certifies absence.
WitnessReport verify_external_state(const ScenarioSpec& spec, int depth, bool fused,
                                    uint64_t cap = kDefaultTraceCap);

enum class SystemClass : uint8_t { Atomic, PartiallyAtomic, Split, Unknown };
std::string_view to_string(SystemClass c);

struct ClassificationResult {
  SystemClass cls = SystemClass::Unknown;
  std::string rationale;
  std::vector<WitnessReport> evidence;
};

// Partial-atomicity classifier over the scenario's partition descriptor (or
// a forced construction mode). See the partially-atomic window construction
// in system.hpp.
ClassificationResult classify_partial_atomicity(const ScenarioSpec& spec, int depth,
                                                std::optional<SystemMode> mode_override,
                                                uint64_t cap = kDefaultTraceCap);

struct SchedulerConfig {
  enum class Kind : uint8_t { Exhaustive, Stochastic, LiveRace };
  Kind kind = Kind::Stochastic;
  double env_probability = 0.5;  // p, Stochastic only
  uint64_t trials = 10000;
  uint64_t seed = 1;
  bool yield_injection = true;   // LiveRace only
  uint32_t agent_workers = 4;    // LiveRace only
  uint32_t env_workers = 2;      // LiveRace only
  uint32_t retry_budget = 64;
};

struct ViolationStats {
  std::string scenario;
  std::string mode;
  std::string kind;
  double env_probability = 0.0;
  uint64_t trials = 0;
  uint64_t seed = 0;
  bool yield_injection = false;
  uint64_t violations = 0;
  uint64_t admissible_fires = 0;
  uint64_t refusals = 0;
  uint64_t escalations = 0;
  uint64_t env_steps = 0;
  uint64_t starved = 0;
  // Live mode: the committed history replayed through the sequential oracle.
  bool replay_checked = false;
  bool replay_ok = false;
  uint64_t replay_violations = 0;
  uint64_t history_commits = 0;
};

// Seeded random walks; one Bernoulli(p) draw per decision window, one env
// arc per success. Violation counts are per-trial and reproducible per seed.
ViolationStats run_stochastic(const ScenarioSpec& spec, SystemMode mode,
                              const SchedulerConfig& config);

// Concurrent workers over one versioned cell; commits are optimistic and the
// committed history is replayed through the pure constructions afterwards.
ViolationStats run_live_race(const ScenarioSpec& spec, SystemMode mode,
                             const SchedulerConfig& config);

int default_depth(const ScenarioSpec& spec);

// ---------------------------------------------------------------------------
// Run-level report consumed by the CLI and the C API.

enum class VerifyKind : uint8_t { Theorem, Escalation, External };
std::string_view to_string(VerifyKind k);

struct RunReport {
  std::string command;  // echo, set by the caller
  std::string tool = "adb";
  std::string scenario;
  std::string kind;  // "verify:theorem", "race:stochastic", "classify", ...
  std::string mode;
  int depth = 0;
  std::vector<WitnessReport> witness_reports;
  std::vector<ViolationStats> stats;
  std::optional<ClassificationResult> classification;
  bool matched = false;
  bool inconclusive = false;
  std::string detail;

  // 0 expected classes matched, 1 mismatch, 3 inconclusive.
  int exit_code() const { return inconclusive ? 3 : (matched ? 0 : 1); }
};

RunReport run_verify(const ScenarioSpec& spec, VerifyKind which, int depth);
RunReport run_race(const ScenarioSpec& spec, SystemMode mode, const SchedulerConfig& config);
RunReport run_classify(const ScenarioSpec& spec, std::optional<SystemMode> mode_override,
                       int depth, bool adm_local_only);

}  // namespace adb
