// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "atomic.hpp"
#include "harness.hpp"
#include "kernel.hpp"
#include "model.hpp"
#include "scenario.hpp"
#include "split.hpp"
#include "system.hpp"

using namespace adb;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Theorem reproduction: minimal split witness is dec . env . exec for
//    every split-class builtin, atomic absence alongside, <1s at depth <= 8.
void criterion1() {
  bool pass = true;
  std::string detail;
  for (const std::string name : {"filelock", "rbac-revoke", "opa-quota", "iam-bucket"}) {
    ScenarioSpec spec = builtin(name);
    int depth = std::min(default_depth(spec), 8);
    Clock::time_point start = Clock::now();
    TheoremResult r = verify_theorem(spec, depth);
    double elapsed = seconds_since(start);
    bool witness_shape =
        r.split_report.witness() && r.split_report.trace.length() == 3 &&
        r.split_report.rendering.kinds == std::vector<std::string>{"dec", "env", "exec"} &&
        r.split_report.violation_index == 3;
    bool ok = witness_shape && r.atomic_report.absent() && elapsed < 1.0;
    if (!ok) pass = false;
    detail += name + "(" + (ok ? "ok" : "FAIL") + " " + std::to_string(elapsed) + "s) ";
  }
  report(1, pass, "three-step witness + atomic absence per split builtin: " + detail);
}

// 2. Atomic absence at the full reachable diameter, cross-checked by
//    replaying every enumerated trace through check_preservation.
void criterion2() {
  bool pass = true;
  std::string detail;
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    SystemLts sys = build_system(spec, kAtomicMode);
    int diameter = reachable_eccentricity(sys);
    WitnessReport absence = verify_construction(spec, sys, "atomic", diameter);
    uint64_t replayed = 0, violated = 0;
    enumerate_traces(sys.table, sys.initial, diameter, kDefaultTraceCap, [&](const Trace& t) {
      ++replayed;
      if (!check_preservation(t, sys.adm).preserved) ++violated;
      return true;
    });
    bool ok = absence.absent() && violated == 0 && replayed == absence.traces_explored;
    if (!ok) pass = false;
    detail += name + "(d=" + std::to_string(diameter) + ",n=" + std::to_string(replayed) +
              (ok ? ") " : ",FAIL) ");
  }
  report(2, pass, "atomic absence at reachable diameter, oracle-replayed: " + detail);
}

// 3. Escalation closure at one shared depth.
void criterion3() {
  ScenarioSpec spec = builtin("filelock-escalate");
  int depth = default_depth(spec);
  EscalationClosureResult r = verify_escalation_closure(spec, depth);
  bool split_ok = r.split_resolution.witness() &&
                  r.split_resolution.rendering.kinds[r.split_resolution.violation_index - 1] ==
                      "exec";
  bool ok = split_ok && r.atomic_resolution.absent() && r.atomic_resolution.depth == depth;
  report(3, ok,
         "filelock-escalate: split resolution Witness at post-resolution exec, atomic "
         "resolution AbsentUpTo(" +
             std::to_string(depth) + ")");
}

// 4. External-state corollary and its fused fix.
void criterion4() {
  ScenarioSpec spec = builtin("opa-quota-store");
  int depth = default_depth(spec);
  WitnessReport split = verify_external_state(spec, depth, false);
  WitnessReport fused = verify_external_state(spec, depth, true);
  bool ok = split.witness() && fused.absent();
  report(4, ok, "opa-quota-store: split+store Witness, fused store+commit AbsentUpTo");
}

// 5. Consistency conditions over randomized tables plus single-cell mutations.
void criterion5() {
  bool pass = true;
  uint64_t samples = 0, mutations = 0;
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    std::mt19937_64 rng(0xACCE5500u + spec.num_states());
    for (int round = 0; round < 1000; ++round) {
      AdmissibilityTable adm(spec.num_states(), spec.agent_actions);
      for (uint32_t s = 0; s < spec.num_states(); ++s) {
        for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
          adm.set(StateId{s}, a, (rng() & 1) != 0);
        }
      }
      uint64_t mask = rng();
      DecisionTable derived = derive_decision_from_adm(adm, [&](StateId s, ActionIndex a) {
        return ((mask >> ((s.value * 5 + a) % 64)) & 1) != 0;
      });
      ++samples;
      if (!check_consistency(derived, adm).consistent()) {
        pass = false;
        continue;
      }
      // flip one non-Escalate cell against Adm and require the right tag
      uint32_t s = uint32_t(rng() % spec.num_states());
      ActionIndex a = ActionIndex(rng() % spec.agent_actions.size());
      if (derived.at(StateId{s}, a) == Disposition::Escalate) continue;
      bool admissible = adm.at(StateId{s}, a);
      derived.set(StateId{s}, a, admissible ? Disposition::Refuse : Disposition::Allow);
      ConsistencyVerdict v = check_consistency(derived, adm);
      ++mutations;
      bool tagged = false;
      for (const ConsistencyViolation& viol : v.violations) {
        if (viol.state == StateId{s} && viol.action == a &&
            viol.condition ==
                (admissible ? ConsistencyCondition::III : ConsistencyCondition::IV)) {
          tagged = true;
        }
      }
      if (!tagged) pass = false;
    }
    // and exhaustively: every non-Escalate cell of the builtin's own table
    for (uint32_t s = 0; s < spec.num_states(); ++s) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        if (spec.decision.at(StateId{s}, a) == Disposition::Escalate) continue;
        DecisionTable mutated = spec.decision;
        bool admissible = spec.adm.at(StateId{s}, a);
        mutated.set(StateId{s}, a, admissible ? Disposition::Refuse : Disposition::Allow);
        ConsistencyVerdict v = check_consistency(mutated, spec.adm);
        ++mutations;
        bool tagged = false;
        for (const ConsistencyViolation& viol : v.violations) {
          if (viol.state == StateId{s} && viol.action == a &&
              viol.condition ==
                  (admissible ? ConsistencyCondition::III : ConsistencyCondition::IV)) {
            tagged = true;
          }
        }
        if (!tagged) pass = false;
      }
    }
  }
  report(5, pass,
         "derived tables consistent over " + std::to_string(samples) +
             " randomized samples; all " + std::to_string(mutations) +
             " single-cell mutations (random + exhaustive) caught with the correct tag");
}

// 6. Stochastic degradation (seed 42, 10,000 trials). Counts pinned after the
//    first run; monotone in p, zero at p=0, atomic zero everywhere.
void criterion6() {
  const uint64_t kSeed = 42;
  const uint64_t kTrials = 10000;
  // Pinned on first run of this suite (mt19937_64 streams, stable here).
  const std::vector<std::pair<double, uint64_t>> pinned = {
      {0.0, 0}, {0.1, 955}, {0.5, 4965}, {1.0, 10000}};
  bool pass = true;
  std::string detail = "split counts:";
  uint64_t prev = 0;
  bool first = true;
  for (auto [p, expected] : pinned) {
    SchedulerConfig config;
    config.kind = SchedulerConfig::Kind::Stochastic;
    config.env_probability = p;
    config.trials = kTrials;
    config.seed = kSeed;
    ViolationStats split = run_stochastic(builtin("filelock"), kSplitMode, config);
    ViolationStats atomic = run_stochastic(builtin("filelock"), kAtomicMode, config);
    bool ok = split.violations == expected && atomic.violations == 0 &&
              (p == 0.0 ? split.violations == 0 : split.violations > prev);
    if (!first && split.violations <= prev) ok = false;
    if (p == 0.0 && split.violations != 0) ok = false;
    if (!ok) pass = false;
    detail += " p=" + std::to_string(p).substr(0, 3) + "->" + std::to_string(split.violations);
    prev = split.violations;
    first = false;
  }
  report(6, pass, detail + " (pinned, strictly increasing; atomic 0 throughout)");
}

// 7. Live race: 10,000 admit attempts with yield injection, <30s, split > 0,
//    atomic == 0, atomic history replays through the sequential oracle.
void criterion7() {
  ScenarioSpec spec = builtin("filelock");
  SchedulerConfig config;
  config.kind = SchedulerConfig::Kind::LiveRace;
  config.trials = 10000;
  config.seed = 3;
  config.yield_injection = true;
  Clock::time_point start = Clock::now();
  ViolationStats split = run_live_race(spec, kSplitMode, config);
  ViolationStats atomic = run_live_race(spec, kAtomicMode, config);
  double elapsed = seconds_since(start);
  bool ok = split.violations > 0 && split.replay_ok && atomic.violations == 0 &&
            atomic.replay_ok && atomic.replay_violations == 0 && elapsed < 30.0;
  report(7, ok,
         "live: split violations=" + std::to_string(split.violations) +
             " atomic violations=" + std::to_string(atomic.violations) +
             ", histories replay clean, " + std::to_string(elapsed) + "s");
}

// 8. Partial atomicity and the adm-dependency flip.
void criterion8() {
  ScenarioSpec spec = builtin("k8s-quota");
  ClassificationResult as_is = classify_partial_atomicity(spec, default_depth(spec), std::nullopt);
  ClassificationResult flipped =
      classify_partial_atomicity(with_local_only_adm(spec), default_depth(spec), std::nullopt);
  bool ok = as_is.cls == SystemClass::PartiallyAtomic && flipped.cls == SystemClass::Atomic;
  report(8, ok,
         "k8s-quota partially-atomic; local-only admissibility flips the class to atomic");
}

// 9. Non-pending resolution is a protocol error and mutates nothing.
void criterion9() {
  ScenarioSpec spec = builtin("filelock-escalate");
  PendingRequest ghost{spec.state_by_name("u0"), 0};
  bool atomic_ok = false, split_ok = false;

  ExtendedState ext{spec.state_by_name("u1"), {}};
  ExtendedState ext_snapshot = ext;
  try {
    resolve_atomic(spec, ext, ghost, Disposition::Allow);
  } catch (const ProtocolError&) {
    atomic_ok = ext == ext_snapshot;
  }

  SplitState split{spec.state_by_name("u1"), std::nullopt, {}};
  SplitState split_snapshot = split;
  try {
    resolve_split(spec, split, ghost, Disposition::Refuse);
  } catch (const ProtocolError&) {
    split_ok = split == split_snapshot;
  }
  report(9, atomic_ok && split_ok,
         "non-pending resolution raises ProtocolError in both variants without mutation");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 9 acceptance criteria PASSED\n");
  return 0;
}
