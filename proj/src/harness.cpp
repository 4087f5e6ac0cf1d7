#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>

#include "atomic.hpp"
#include "kernel.hpp"

namespace adb {

std::string_view to_string(WitnessReport::Outcome o) {
  switch (o) {
    case WitnessReport::Outcome::Witness: return "witness";
    case WitnessReport::Outcome::AbsentUpTo: return "absent-up-to";
    case WitnessReport::Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string_view to_string(SystemClass c) {
  switch (c) {
    case SystemClass::Atomic: return "atomic";
    case SystemClass::PartiallyAtomic: return "partially-atomic";
    case SystemClass::Split: return "split";
    case SystemClass::Unknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(VerifyKind k) {
  switch (k) {
    case VerifyKind::Theorem: return "theorem";
    case VerifyKind::Escalation: return "escalation";
    case VerifyKind::External: return "external";
  }
  return "?";
}

TraceRendering render_trace(const SystemLts& system, const Trace& trace) {
  TraceRendering out;
  for (StateId s : trace.states) out.states.push_back(system.node_names.at(s.value));
  for (size_t i = 0; i < trace.labels.size(); ++i) {
    const ActionLabel& label = trace.labels[i];
    out.labels.push_back(label.render());
    out.kinds.emplace_back(to_string(label.kind));
    out.fires.push_back(label.fires ? 1 : 0);
    if (label.kind == LabelKind::Env) {
      out.adm_before.push_back(-1);
    } else {
      out.adm_before.push_back(
          system.adm.at(trace.states[i], system.adm.action_index(label.name)) ? 1 : 0);
    }
  }
  return out;
}

int default_depth(const ScenarioSpec& spec) { return int(spec.num_states()) + 2; }

// ---------------------------------------------------------------------------
// Witness search

namespace {

struct SearchOutcome {
  bool found = false;
  Trace witness;
  size_t violation_index = 0;
  uint64_t explored = 0;     // cumulative over deepening iterations
  uint64_t final_count = 0;  // full enumeration count at the last depth
  bool truncated = false;
  bool saw_exec = false;
};

// Iterative deepening: iteration L enumerates all traces with <= L steps, so
// the first trace ending in a violating step is a minimal witness and is the
// breadth-first one under the fixed arc order.
SearchOutcome search_violations(const SystemLts& sys, int depth, uint64_t cap) {
  SearchOutcome out;
  for (int level = 0; level <= depth && !out.found; ++level) {
    EnumerationResult res =
        enumerate_traces(sys.table, sys.initial, level, cap, [&](const Trace& t) {
          if (t.labels.empty()) return true;
          const ActionLabel& last = t.labels.back();
          if (last.kind == LabelKind::Exec) out.saw_exec = true;
          if (last.fires &&
              !sys.adm.at(t.states[t.states.size() - 2], sys.adm.action_index(last.name))) {
            out.found = true;
            out.witness = t;
            out.violation_index = t.length();
            return false;
          }
          return true;
        });
    out.explored += res.traces;
    if (res.truncated) {
      out.truncated = true;
      return out;
    }
    if (level == depth) out.final_count = res.traces;
  }
  return out;
}

WitnessReport inconclusive_report(const ScenarioSpec& spec, const std::string& construction,
                                  int depth, std::string reason) {
  WitnessReport r;
  r.scenario = spec.name;
  r.construction = construction;
  r.depth = depth;
  r.outcome = WitnessReport::Outcome::Inconclusive;
  r.reason = std::move(reason);
  return r;
}

WitnessReport assemble_report(const ScenarioSpec& spec, const SystemLts& sys,
                              const std::string& construction, int depth,
                              const SearchOutcome& s) {
  WitnessReport r;
  r.scenario = spec.name;
  r.construction = construction;
  r.depth = depth;
  if (s.truncated) {
    r.outcome = WitnessReport::Outcome::Inconclusive;
    r.traces_explored = s.explored;
    r.reason = "trace cap exceeded; aborted with partial count";
    return r;
  }
  if (s.found) {
    r.outcome = WitnessReport::Outcome::Witness;
    r.trace = s.witness;
    r.rendering = render_trace(sys, s.witness);
    r.violation_index = s.violation_index;
    r.traces_explored = s.explored;
  } else {
    r.outcome = WitnessReport::Outcome::AbsentUpTo;
    r.traces_explored = s.final_count;
  }
  return r;
}

}  // namespace

WitnessReport verify_construction(const ScenarioSpec& spec, const SystemLts& system,
                                  const std::string& construction, int depth, uint64_t cap) {
  return assemble_report(spec, system, construction, depth,
                         search_violations(system, depth, cap));
}

TheoremResult verify_theorem(const ScenarioSpec& spec, int depth, uint64_t cap) {
  TheoremResult out;
  NontrivialityVerdict nv = check_nontriviality(spec);
  if (!nv.pass()) {
    out.split_report = inconclusive_report(spec, "split", depth, nv.failure_reason());
    out.atomic_report = inconclusive_report(spec, "atomic", depth, nv.failure_reason());
    return out;
  }
  out.split_report =
      verify_construction(spec, build_system(spec, kSplitMode), "split", depth, cap);
  out.atomic_report =
      verify_construction(spec, build_system(spec, kAtomicMode), "atomic", depth, cap);
  return out;
}

EscalationClosureResult verify_escalation_closure(const ScenarioSpec& spec, int depth,
                                                  uint64_t cap) {
  EscalationClosureResult out;

  SystemLts atomic_sys = build_system(spec, kAtomicMode);
  bool reachable_escalate = false;
  for (const SystemNode& node : atomic_sys.nodes) {
    for (ActionIndex a = 0; a < spec.agent_actions.size() && !reachable_escalate; ++a) {
      if (spec.decision.at(node.base, a) == Disposition::Escalate) reachable_escalate = true;
    }
    if (reachable_escalate) break;
  }
  if (!reachable_escalate) {
    std::string reason = "resolution unreachable: no reachable Escalate decision";
    out.split_resolution = inconclusive_report(spec, "split-resolution", depth, reason);
    out.atomic_resolution = inconclusive_report(spec, "atomic-resolution", depth, reason);
    return out;
  }

  SystemMode split_res{BoundaryMode::Atomic, ResolutionMode::Split};
  SystemLts split_sys = build_system(spec, split_res);
  SearchOutcome s = search_violations(split_sys, depth, cap);
  if (!s.found && !s.truncated && !s.saw_exec) {
    out.split_resolution = inconclusive_report(
        spec, "split-resolution", depth,
        "resolution unreachable at depth " + std::to_string(depth));
  } else {
    out.split_resolution = assemble_report(spec, split_sys, "split-resolution", depth, s);
  }

  out.atomic_resolution = verify_construction(
      spec, build_system(spec, {BoundaryMode::Atomic, ResolutionMode::Atomic}),
      "atomic-resolution", depth, cap);
  return out;
}

WitnessReport verify_external_state(const ScenarioSpec& spec, int depth, bool fused,
                                    uint64_t cap) {
  std::string construction = fused ? "atomic+store-fused" : "split+store";
  if (!spec.external) {
    return inconclusive_report(spec, construction, depth,
                               "scenario declares no external state");
  }
  SystemLts sys = build_system(spec, fused ? kAtomicMode : kSplitMode);
  return verify_construction(spec, sys, construction, depth, cap);
}

ClassificationResult classify_partial_atomicity(const ScenarioSpec& spec, int depth,
                                                std::optional<SystemMode> mode_override,
                                                uint64_t cap) {
  ClassificationResult out;
  if (mode_override) {
    WitnessReport rep = verify_construction(spec, build_system(spec, *mode_override),
                                            to_string(*mode_override), depth, cap);
    out.evidence.push_back(rep);
    if (rep.inconclusive()) {
      out.cls = SystemClass::Unknown;
      out.rationale = rep.reason;
    } else if (rep.witness()) {
      out.cls = SystemClass::Split;
      out.rationale = "the forced " + to_string(*mode_override) +
                      " construction admits a violating trace";
    } else {
      out.cls = SystemClass::Atomic;
      out.rationale = "no violating trace in the forced " + to_string(*mode_override) +
                      " construction up to depth " + std::to_string(depth);
    }
    return out;
  }

  if (!spec.partition) throw ValidationError("scenario has no partition descriptor");
  const PartitionDescriptor& part = *spec.partition;

  BuildOptions window;
  window.window_globals_only = true;
  WitnessReport w = verify_construction(spec, build_system(spec, kSplitMode, window),
                                        "partial-window", depth, cap);
  out.evidence.push_back(w);
  if (w.inconclusive()) {
    out.cls = SystemClass::Unknown;
    out.rationale = w.reason;
    return out;
  }
  if (w.absent()) {
    out.cls = SystemClass::Atomic;
    out.rationale = "no violating trace up to depth " + std::to_string(depth) +
                    " even with env actions free to move global attributes in the window";
    return out;
  }

  BuildOptions closed;
  closed.window_closed = true;
  WitnessReport probe = verify_construction(spec, build_system(spec, kSplitMode, closed),
                                            "closed-window-probe", depth, cap);
  out.evidence.push_back(probe);

  std::vector<uint32_t> dep = spec.derived_adm_dependency();
  bool dep_hits_global = false;
  for (uint32_t attr : dep) {
    if (std::find(part.global_attrs.begin(), part.global_attrs.end(), attr) !=
        part.global_attrs.end()) {
      dep_hits_global = true;
    }
  }

  if (probe.absent() && !part.local_attrs.empty() && dep_hits_global) {
    out.cls = SystemClass::PartiallyAtomic;
    out.rationale =
        "violations occur exactly through the global-attribute window: the closed-window "
        "probe is clean and the admissibility predicate reads a global attribute";
  } else if (!probe.absent()) {
    out.cls = SystemClass::Split;
    out.rationale = "violations persist even with the window closed";
  } else {
    out.cls = SystemClass::Split;
    out.rationale = "no genuine local fusion: every attribute sits in the global component";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stochastic scheduler

namespace {

// Deterministic across standard libraries: raw mt19937_64 outputs mapped by
// multiply-shift, no distribution objects.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  uint64_t next() { return eng_(); }
  double unit() { return double(next() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return unit() < p; }
  uint32_t below(uint32_t n) {
    return n == 0 ? 0 : uint32_t((unsigned __int128)(next()) * n >> 64);
  }

 private:
  std::mt19937_64 eng_;
};

uint64_t mix_seed(uint64_t seed, uint64_t lane) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (lane + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct NodeArcs {
  std::vector<TransitionRow> env;
  std::vector<TransitionRow> agent;  // boundary or dec arcs, by action index order
  std::optional<TransitionRow> exec;
};

std::vector<NodeArcs> index_arcs(const ScenarioSpec& spec, const SystemLts& sys) {
  std::vector<NodeArcs> out(sys.nodes.size());
  for (uint32_t n = 0; n < sys.nodes.size(); ++n) {
    NodeArcs& arcs = out[n];
    arcs.agent.resize(spec.agent_actions.size());
    for (const TransitionRow& row : sys.table.outgoing(StateId{n})) {
      switch (row.label.kind) {
        case LabelKind::Env:
          arcs.env.push_back(row);
          break;
        case LabelKind::Exec:
          arcs.exec = row;
          break;
        case LabelKind::Agent:
        case LabelKind::Dec:
          if (row.label.text.rfind("resolve(", 0) == 0) break;  // pending resolutions
          arcs.agent[spec.agent_index(row.label.name)] = row;
          break;
      }
    }
  }
  return out;
}

}  // namespace

ViolationStats run_stochastic(const ScenarioSpec& spec, SystemMode mode,
                              const SchedulerConfig& config) {
  if (config.env_probability < 0.0 || config.env_probability > 1.0) {
    throw ValidationError("env probability must be in [0,1]");
  }
  if (config.trials < 1) throw ValidationError("trials must be >= 1");

  SystemLts sys = build_system(spec, mode);
  std::vector<NodeArcs> arcs = index_arcs(spec, sys);

  ViolationStats stats;
  stats.scenario = spec.name;
  stats.mode = to_string(mode);
  stats.kind = "stochastic";
  stats.env_probability = config.env_probability;
  stats.trials = config.trials;
  stats.seed = config.seed;

  Rng rng(config.seed);
  const uint32_t num_actions = uint32_t(spec.agent_actions.size());

  for (uint64_t trial = 0; trial < config.trials; ++trial) {
    uint32_t node = sys.initial.value;
    ActionIndex action = rng.below(num_actions);

    if (mode.boundary == BoundaryMode::Atomic) {
      // The environment may race ahead of the single indivisible step.
      if (rng.bernoulli(config.env_probability) && !arcs[node].env.empty()) {
        node = arcs[node].env[rng.below(uint32_t(arcs[node].env.size()))].target.value;
        ++stats.env_steps;
      }
      const TransitionRow& row = arcs[node].agent[action];
      if (row.label.fires) {
        if (sys.adm.at(StateId{node}, action)) {
          ++stats.admissible_fires;
        } else {
          ++stats.violations;  // only possible with an inconsistent decision table
        }
      } else if (row.label.text.rfind("escalate(", 0) == 0) {
        ++stats.escalations;
      } else {
        ++stats.refusals;
      }
    } else {
      const TransitionRow& dec = arcs[node].agent[action];
      node = dec.target.value;
      if (dec.label.text.rfind("dec(", 0) == 0 &&
          dec.label.text.find(":escalate") != std::string::npos) {
        ++stats.escalations;
        continue;
      }
      // One Bernoulli draw per window, one env arc on success.
      if (rng.bernoulli(config.env_probability) && !arcs[node].env.empty()) {
        node = arcs[node].env[rng.below(uint32_t(arcs[node].env.size()))].target.value;
        ++stats.env_steps;
      }
      if (!arcs[node].exec) continue;  // records always expose an exec arc
      const TransitionRow& exec = *arcs[node].exec;
      if (exec.label.fires) {
        if (sys.adm.at(StateId{node}, spec.agent_index(exec.label.name))) {
          ++stats.admissible_fires;
        } else {
          ++stats.violations;
        }
      } else {
        ++stats.refusals;
      }
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Live race

namespace {

struct CommitEvent {
  uint64_t version = 0;
  ActionLabel label;
  SystemNode post;
};

class History {
 public:
  void append(uint64_t version, ActionLabel label, SystemNode post) {
    std::lock_guard<std::mutex> g(m_);
    events_.push_back({version, std::move(label), std::move(post)});
  }
  std::vector<CommitEvent> sorted() {
    std::lock_guard<std::mutex> g(m_);
    std::vector<CommitEvent> out = events_;
    std::sort(out.begin(), out.end(),
              [](const CommitEvent& a, const CommitEvent& b) { return a.version < b.version; });
    return out;
  }

 private:
  std::mutex m_;
  std::vector<CommitEvent> events_;
};

struct ReplayCheck {
  bool ok = false;
  uint64_t violations = 0;
  uint64_t commits = 0;
};

// The committed history, ordered by version, must be a valid trace of the
// constructed system; its violation count is the sequential oracle's answer.
ReplayCheck replay_history(const SystemLts& sys, std::vector<CommitEvent> events) {
  ReplayCheck out;
  out.commits = events.size();
  Trace trace;
  trace.states.push_back(sys.initial);
  for (CommitEvent& ev : events) {
    auto it = sys.index.find(ev.post);
    if (it == sys.index.end()) return out;
    trace.push(ev.label, StateId{it->second});
  }
  if (!validate_trace(trace, sys.table, uint32_t(sys.nodes.size()))) return out;
  out.ok = true;
  out.violations = preservation_violations(trace, sys.adm).size();
  return out;
}

void pause_briefly(bool yield_injection) {
  if (yield_injection) {
    std::this_thread::sleep_for(std::chrono::microseconds(50));
  } else {
    std::this_thread::yield();
  }
}

ViolationStats live_stats_base(const ScenarioSpec& spec, SystemMode mode,
                               const SchedulerConfig& config) {
  ViolationStats stats;
  stats.scenario = spec.name;
  stats.mode = to_string(mode);
  stats.kind = "live";
  stats.trials = config.trials;
  stats.seed = config.seed;
  stats.yield_injection = config.yield_injection;
  return stats;
}

ViolationStats run_live_atomic(const ScenarioSpec& spec, const SchedulerConfig& config) {
  SystemLts sys = build_system(spec, kAtomicMode);
  ViolationStats stats = live_stats_base(spec, kAtomicMode, config);

  VersionedStateCell cell({spec.initial, {}});
  History history;
  std::atomic<uint64_t> attempts{0}, violations{0}, admissible{0}, refusals{0},
      escalations{0}, starved{0}, env_steps{0};
  std::atomic<bool> stop{false};

  auto agent = [&](uint32_t lane) {
    Rng rng(mix_seed(config.seed, lane));
    const uint32_t num_actions = uint32_t(spec.agent_actions.size());
    while (true) {
      uint64_t i = attempts.fetch_add(1);
      if (i >= config.trials) break;
      ActionIndex action = rng.below(num_actions);
      // One injected pause per attempt opens the race window; retries after a
      // version conflict only yield.
      bool first_window = true;
      LiveOutcome out = live_admit_and_commit(cell, spec, action, config.retry_budget, [&] {
        if (first_window) {
          first_window = false;
          pause_briefly(config.yield_injection);
        } else {
          std::this_thread::yield();
        }
      });
      if (out.starved) {
        ++starved;
        continue;
      }
      switch (out.outcome.disposition) {
        case Disposition::Allow:
          if (spec.adm.at(out.evaluated_in.base, action)) {
            ++admissible;
          } else {
            ++violations;
          }
          break;
        case Disposition::Refuse:
          ++refusals;
          break;
        case Disposition::Escalate:
          ++escalations;
          break;
      }
      history.append(out.committed_version,
                     boundary_label(spec, action, out.outcome.disposition),
                     {out.outcome.next.base, std::nullopt, out.outcome.next.pending});
    }
  };

  auto env = [&](uint32_t lane) {
    Rng rng(mix_seed(config.seed, 1000 + lane));
    while (!stop.load(std::memory_order_relaxed)) {
      auto [snapshot, version] = cell.read();
      std::vector<EnvRow> rows = spec.env_from(snapshot.base);
      if (rows.empty()) {
        std::this_thread::yield();
        continue;
      }
      const EnvRow& row = rows[rng.below(uint32_t(rows.size()))];
      ExtendedState next{row.target, snapshot.pending};
      if (auto ver = cell.try_commit(version, next)) {
        ++env_steps;
        history.append(*ver, env_label(spec, row),
                       {row.target, std::nullopt, snapshot.pending});
      }
      std::this_thread::sleep_for(std::chrono::microseconds(30));
    }
  };

  std::vector<std::thread> agents, envs;
  for (uint32_t w = 0; w < std::max<uint32_t>(1, config.agent_workers); ++w) {
    agents.emplace_back(agent, w);
  }
  for (uint32_t w = 0; w < config.env_workers; ++w) envs.emplace_back(env, w);
  for (std::thread& t : agents) t.join();
  stop = true;
  for (std::thread& t : envs) t.join();

  stats.violations = violations;
  stats.admissible_fires = admissible;
  stats.refusals = refusals;
  stats.escalations = escalations;
  stats.starved = starved;
  stats.env_steps = env_steps;

  ReplayCheck replay = replay_history(sys, history.sorted());
  stats.replay_checked = true;
  stats.replay_ok = replay.ok && replay.violations == stats.violations;
  stats.replay_violations = replay.violations;
  stats.history_commits = replay.commits;
  return stats;
}

ViolationStats run_live_split(const ScenarioSpec& spec, const SchedulerConfig& config) {
  SystemLts sys = build_system(spec, kSplitMode);
  ViolationStats stats = live_stats_base(spec, kSplitMode, config);

  VersionedCell<SplitState> cell(SplitState{spec.initial, std::nullopt, {}});
  History history;
  std::atomic<uint64_t> attempts{0}, violations{0}, admissible{0}, refusals{0},
      escalations{0}, starved{0}, env_steps{0};
  std::atomic<bool> stop{false};

  auto agent = [&](uint32_t lane) {
    Rng rng(mix_seed(config.seed, lane));
    const uint32_t num_actions = uint32_t(spec.agent_actions.size());
    while (true) {
      uint64_t i = attempts.fetch_add(1);
      if (i >= config.trials) break;
      ActionIndex action = rng.below(num_actions);

      // Phase 1: commit the recorded decision (or the escalation).
      bool committed = false;
      Disposition d = Disposition::Refuse;
      for (uint32_t retry = 0; retry <= config.retry_budget; ++retry) {
        auto [snapshot, version] = cell.read();
        if (snapshot.recorded) {  // another request is mid-pipeline
          pause_briefly(config.yield_injection);
          continue;
        }
        SplitState next = split_dec(spec, snapshot, action);
        d = spec.decision.at(snapshot.base, action);
        if (auto ver = cell.try_commit(version, next)) {
          history.append(*ver, dec_label(spec, action, d),
                         {next.base, next.recorded, next.pending});
          committed = true;
          break;
        }
      }
      if (!committed) {
        ++starved;
        continue;
      }
      if (d == Disposition::Escalate) {
        ++escalations;
        continue;
      }

      // The exploitable window: the record is in, T has not fired.
      pause_briefly(config.yield_injection);

      // Phase 2: fire (or drop) against whatever state now holds. We own the
      // record, so this must complete; starvation past the budget is
      // reported but the commit is still driven home.
      uint32_t tries = 0;
      while (true) {
        auto [snapshot, version] = cell.read();
        auto [next, event] = split_exec(spec, snapshot);
        ActionLabel label = exec_label(spec, *snapshot.recorded, event);
        if (auto ver = cell.try_commit(version, next)) {
          history.append(*ver, label, {next.base, next.recorded, next.pending});
          if (event == PreservationEvent::Violated) {
            ++violations;
          } else if (event == PreservationEvent::Admissible) {
            ++admissible;
          } else {
            ++refusals;
          }
          break;
        }
        if (++tries == config.retry_budget) ++starved;
        std::this_thread::yield();
      }
    }
  };

  auto env = [&](uint32_t lane) {
    Rng rng(mix_seed(config.seed, 1000 + lane));
    while (!stop.load(std::memory_order_relaxed)) {
      auto [snapshot, version] = cell.read();
      std::vector<EnvRow> rows = spec.env_from(snapshot.base);
      if (rows.empty()) {
        std::this_thread::yield();
        continue;
      }
      const EnvRow& row = rows[rng.below(uint32_t(rows.size()))];
      SplitState next = snapshot;
      next.base = row.target;  // record and pending ride through
      if (auto ver = cell.try_commit(version, next)) {
        ++env_steps;
        history.append(*ver, env_label(spec, row),
                       {next.base, next.recorded, next.pending});
      }
      std::this_thread::sleep_for(std::chrono::microseconds(30));
    }
  };

  std::vector<std::thread> agents, envs;
  for (uint32_t w = 0; w < std::max<uint32_t>(1, config.agent_workers); ++w) {
    agents.emplace_back(agent, w);
  }
  for (uint32_t w = 0; w < config.env_workers; ++w) envs.emplace_back(env, w);
  for (std::thread& t : agents) t.join();
  stop = true;
  for (std::thread& t : envs) t.join();

  stats.violations = violations;
  stats.admissible_fires = admissible;
  stats.refusals = refusals;
  stats.escalations = escalations;
  stats.starved = starved;
  stats.env_steps = env_steps;

  ReplayCheck replay = replay_history(sys, history.sorted());
  stats.replay_checked = true;
  stats.replay_ok = replay.ok && replay.violations == stats.violations;
  stats.replay_violations = replay.violations;
  stats.history_commits = replay.commits;
  return stats;
}

}  // namespace

ViolationStats run_live_race(const ScenarioSpec& spec, SystemMode mode,
                             const SchedulerConfig& config) {
  if (config.trials < 1) throw ValidationError("trials must be >= 1");
  if (mode == kAtomicMode) return run_live_atomic(spec, config);
  if (mode == kSplitMode) return run_live_split(spec, config);
  throw ValidationError("live race runs the atomic or the split construction");
}

// ---------------------------------------------------------------------------
// Run-level assembly

RunReport run_verify(const ScenarioSpec& spec, VerifyKind which, int depth) {
  if (depth <= 0) depth = default_depth(spec);
  RunReport r;
  r.scenario = spec.name;
  r.depth = depth;
  r.kind = "verify:" + std::string(to_string(which));
  switch (which) {
    case VerifyKind::Theorem: {
      TheoremResult t = verify_theorem(spec, depth);
      r.witness_reports = {t.split_report, t.atomic_report};
      r.matched = t.matched();
      r.inconclusive = t.inconclusive();
      break;
    }
    case VerifyKind::Escalation: {
      EscalationClosureResult e = verify_escalation_closure(spec, depth);
      r.witness_reports = {e.split_resolution, e.atomic_resolution};
      r.matched = e.matched();
      r.inconclusive = e.inconclusive();
      break;
    }
    case VerifyKind::External: {
      WitnessReport split = verify_external_state(spec, depth, false);
      WitnessReport fused = verify_external_state(spec, depth, true);
      r.matched = split.witness() && fused.absent();
      r.inconclusive = split.inconclusive() || fused.inconclusive();
      r.witness_reports = {std::move(split), std::move(fused)};
      break;
    }
  }
  if (r.inconclusive) {
    for (const WitnessReport& w : r.witness_reports) {
      if (w.inconclusive()) {
        r.detail = w.reason;
        break;
      }
    }
  }
  return r;
}

RunReport run_race(const ScenarioSpec& spec, SystemMode mode, const SchedulerConfig& config) {
  RunReport r;
  r.scenario = spec.name;
  r.mode = to_string(mode);
  r.kind = config.kind == SchedulerConfig::Kind::LiveRace ? "race:live" : "race:stochastic";
  ViolationStats stats = config.kind == SchedulerConfig::Kind::LiveRace
                             ? run_live_race(spec, mode, config)
                             : run_stochastic(spec, mode, config);
  if (mode == kAtomicMode) {
    r.matched = stats.violations == 0;
  } else if (config.kind == SchedulerConfig::Kind::LiveRace) {
    r.matched = config.yield_injection ? stats.violations > 0 : true;
  } else {
    r.matched = config.env_probability > 0.0 ? stats.violations > 0 : stats.violations == 0;
  }
  if (stats.replay_checked && !stats.replay_ok) r.matched = false;
  r.stats.push_back(std::move(stats));
  return r;
}

RunReport run_classify(const ScenarioSpec& spec, std::optional<SystemMode> mode_override,
                       int depth, bool adm_local_only) {
  ScenarioSpec working = adm_local_only ? with_local_only_adm(spec) : spec;
  if (depth <= 0) depth = default_depth(working);
  RunReport r;
  r.scenario = working.name;
  r.depth = depth;
  r.kind = "classify";
  if (mode_override) r.mode = to_string(*mode_override);
  ClassificationResult c = classify_partial_atomicity(working, depth, mode_override);
  r.matched = c.cls != SystemClass::Unknown;
  r.inconclusive = c.cls == SystemClass::Unknown;
  if (r.inconclusive) r.detail = c.rationale;
  r.classification = std::move(c);
  return r;
}

}  // namespace adb
