#include "system.hpp"

#include <deque>
#include <set>

#include "atomic.hpp"

namespace adb {

std::string to_string(SystemMode mode) {
  if (mode == kAtomicMode) return "atomic";
  if (mode == kSplitMode) return "split";
  std::string b = mode.boundary == BoundaryMode::Atomic ? "atomic" : "split";
  std::string r = mode.resolution == ResolutionMode::Atomic ? "atomic" : "split";
  return b + "-boundary/" + r + "-resolution";
}

ActionLabel boundary_label(const ScenarioSpec& spec, ActionIndex action, Disposition d) {
  const std::string& name = spec.agent_actions.at(action);
  switch (d) {
    case Disposition::Allow:
      return {LabelKind::Agent, name, name, true};
    case Disposition::Refuse:
      return {LabelKind::Agent, name, "refuse(" + name + ")", false};
    case Disposition::Escalate:
      return {LabelKind::Agent, name, "escalate(" + name + ")", false};
  }
  throw ValidationError("unreachable disposition");
}

ActionLabel env_label(const ScenarioSpec& spec, const EnvRow& row) {
  const std::string& name = spec.env_actions.at(row.env_action);
  for (const EnvRow& other : spec.env_transitions) {
    if (other.source == row.source && other.env_action == row.env_action &&
        other.target != row.target) {
      return {LabelKind::Env, name, name + "->" + spec.state_name(row.target), false};
    }
  }
  return {LabelKind::Env, name, name, false};
}

ActionLabel dec_label(const ScenarioSpec& spec, ActionIndex action, Disposition d) {
  const std::string& name = spec.agent_actions.at(action);
  if (d == Disposition::Escalate) {
    return {LabelKind::Dec, name, "dec(" + name + "):escalate", false};
  }
  return {LabelKind::Dec, name, "dec(" + name + ")", false};
}

ActionLabel exec_label(const ScenarioSpec& spec, const RecordedDecision& rec,
                       PreservationEvent event_kind) {
  const std::string& name = spec.agent_actions.at(rec.action);
  if (event_kind == PreservationEvent::NoFire) {
    return {LabelKind::Exec, name, "drop(" + name + ")", false};
  }
  return {LabelKind::Exec, name, "exec(" + name + ")", true};
}

ActionLabel resolve_label(const ScenarioSpec& spec, const PendingRequest& request,
                          Disposition verdict, bool atomic_resolution) {
  const std::string& name = spec.agent_actions.at(request.action);
  std::string text = "resolve(" + name + "@" + spec.state_name(request.origin_state) +
                     "):" + std::string(to_string(verdict));
  LabelKind kind = atomic_resolution ? LabelKind::Agent : LabelKind::Dec;
  bool fires = atomic_resolution && verdict == Disposition::Allow;
  return {kind, name, text, fires};
}

uint32_t SystemLts::node_id(const SystemNode& node) const {
  auto it = index.find(node);
  if (it == index.end()) throw ValidationError("state is not a node of the constructed system");
  return it->second;
}

namespace {

std::string node_name(const ScenarioSpec& spec, const SystemNode& node) {
  std::string out = spec.state_name(node.base);
  if (node.recorded) {
    const RecordedDecision& rec = *node.recorded;
    out += "[";
    if (rec.resolved_origin) {
      out += "resolve " + spec.agent_actions[rec.action] + "@" +
             spec.state_name(*rec.resolved_origin) + "=" + std::string(to_string(rec.disposition));
    } else {
      out += spec.agent_actions[rec.action] + "=" + std::string(to_string(rec.disposition)) +
             "@" + spec.state_name(rec.evaluated_in);
    }
    out += "]";
  }
  if (!node.pending.empty()) {
    out += "{";
    for (size_t i = 0; i < node.pending.size(); ++i) {
      if (i) out += ",";
      out += spec.agent_actions[node.pending[i].action] + "@" +
             spec.state_name(node.pending[i].origin_state);
    }
    out += "}";
  }
  return out;
}

// Env rows admitted out of `node`; the window restrictions only bite while a
// decision is recorded.
std::vector<EnvRow> admitted_env_rows(const ScenarioSpec& spec, const SystemNode& node,
                                      const BuildOptions& options) {
  std::vector<EnvRow> rows = spec.env_from(node.base);
  if (!node.recorded) return rows;
  if (options.window_closed) return {};
  if (options.window_globals_only) {
    if (!spec.partition) throw ValidationError("window restriction needs a partition");
    std::set<uint32_t> globals(spec.partition->global_attrs.begin(),
                               spec.partition->global_attrs.end());
    std::vector<EnvRow> kept;
    for (const EnvRow& row : rows) {
      const auto& src = spec.states[row.source.value].attr_values;
      const auto& dst = spec.states[row.target.value].attr_values;
      bool local_touch = false;
      for (uint32_t attr = 0; attr < spec.attrs.size(); ++attr) {
        if (src[attr] != dst[attr] && !globals.count(attr)) {
          local_touch = true;
          break;
        }
      }
      if (!local_touch) kept.push_back(row);
    }
    return kept;
  }
  return rows;
}

std::vector<std::pair<ActionLabel, SystemNode>> successors(const ScenarioSpec& spec,
                                                           SystemMode mode,
                                                           const BuildOptions& options,
                                                           const SystemNode& node) {
  std::vector<std::pair<ActionLabel, SystemNode>> out;

  if (node.recorded) {
    // The only agent-side move is discharging the record.
    const RecordedDecision& rec = *node.recorded;
    SplitState cur{node.base, rec, node.pending};
    auto [next, event] = split_exec(spec, cur);
    out.push_back({exec_label(spec, rec, event), {next.base, next.recorded, next.pending}});
  } else {
    if (mode.boundary == BoundaryMode::Atomic) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        AtomicOutcome outcome = atomic_step(spec, {node.base, node.pending}, a);
        out.push_back({boundary_label(spec, a, outcome.disposition),
                       {outcome.next.base, std::nullopt, outcome.next.pending}});
      }
    } else {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        SplitState next = split_dec(spec, {node.base, std::nullopt, node.pending}, a);
        out.push_back({dec_label(spec, a, spec.decision.at(node.base, a)),
                       {next.base, next.recorded, next.pending}});
      }
    }
    for (const PendingRequest& req : node.pending) {
      bool allow_ok = options.supervisor_allow && spec.adm.at(node.base, req.action);
      if (mode.resolution == ResolutionMode::Atomic) {
        ExtendedState cur{node.base, node.pending};
        if (allow_ok) {
          ExtendedState next = resolve_atomic(spec, cur, req, Disposition::Allow);
          out.push_back({resolve_label(spec, req, Disposition::Allow, true),
                         {next.base, std::nullopt, next.pending}});
        }
        ExtendedState next = resolve_atomic(spec, cur, req, Disposition::Refuse);
        out.push_back({resolve_label(spec, req, Disposition::Refuse, true),
                       {next.base, std::nullopt, next.pending}});
      } else {
        SplitState cur{node.base, std::nullopt, node.pending};
        if (allow_ok) {
          SplitState next = resolve_split(spec, cur, req, Disposition::Allow);
          out.push_back({resolve_label(spec, req, Disposition::Allow, false),
                         {next.base, next.recorded, next.pending}});
        }
        SplitState next = resolve_split(spec, cur, req, Disposition::Refuse);
        out.push_back({resolve_label(spec, req, Disposition::Refuse, false),
                       {next.base, next.recorded, next.pending}});
      }
    }
  }

  for (const EnvRow& row : admitted_env_rows(spec, node, options)) {
    out.push_back({env_label(spec, row), {row.target, node.recorded, node.pending}});
  }
  return out;
}

}  // namespace

SystemLts build_system(const ScenarioSpec& spec, SystemMode mode, BuildOptions options) {
  SystemLts sys;
  sys.scenario_name = spec.name;
  sys.mode = mode;
  sys.options = options;

  SystemNode initial{spec.initial, std::nullopt, {}};
  sys.nodes.push_back(initial);
  sys.node_names.push_back(node_name(spec, initial));
  sys.index[initial] = 0;

  std::deque<uint32_t> work{0};
  while (!work.empty()) {
    uint32_t id = work.front();
    work.pop_front();
    SystemNode node = sys.nodes[id];  // copy; nodes may reallocate below
    for (auto& [label, target] : successors(spec, mode, options, node)) {
      auto [it, inserted] = sys.index.try_emplace(target, uint32_t(sys.nodes.size()));
      if (inserted) {
        sys.nodes.push_back(target);
        sys.node_names.push_back(node_name(spec, target));
        work.push_back(it->second);
      }
      sys.table.add({StateId{id}, label, StateId{it->second}});
    }
  }

  sys.adm = AdmissibilityTable(uint32_t(sys.nodes.size()), spec.agent_actions);
  for (uint32_t n = 0; n < sys.nodes.size(); ++n) {
    for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
      sys.adm.set(StateId{n}, a, spec.adm.at(sys.nodes[n].base, a));
    }
  }
  return sys;
}

EnumerationResult enumerate_traces(const ScenarioSpec& spec, SystemMode mode, int depth,
                                   uint64_t cap, const TraceVisitor& visit,
                                   BuildOptions options) {
  SystemLts sys = build_system(spec, mode, options);
  return enumerate_traces(sys.table, sys.initial, depth, cap, visit);
}

int reachable_eccentricity(const SystemLts& system) {
  std::vector<int> dist(system.nodes.size(), -1);
  std::deque<uint32_t> work{system.initial.value};
  dist[system.initial.value] = 0;
  int ecc = 0;
  while (!work.empty()) {
    uint32_t id = work.front();
    work.pop_front();
    for (const TransitionRow& row : system.table.outgoing(StateId{id})) {
      if (dist[row.target.value] < 0) {
        dist[row.target.value] = dist[id] + 1;
        ecc = std::max(ecc, dist[row.target.value]);
        work.push_back(row.target.value);
      }
    }
  }
  return ecc;
}

}  // namespace adb
