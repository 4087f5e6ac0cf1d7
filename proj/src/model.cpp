#include "model.hpp"

namespace adb {

TraceCheck validate_trace(const Trace& trace, const TransitionTable& table,
                          uint32_t num_states) {
  if (trace.states.empty()) return {false, 0, "trace has no states"};
  if (trace.states.size() != trace.labels.size() + 1) {
    return {false, 0, "trace is not alternating"};
  }
  if (trace.states[0].value >= num_states) {
    return {false, 0, "undeclared initial state"};
  }
  for (size_t i = 0; i < trace.labels.size(); ++i) {
    size_t step = i + 1;
    if (trace.states[i + 1].value >= num_states) {
      return {false, step, "undeclared state id " + std::to_string(trace.states[i + 1].value)};
    }
    TransitionRow row{trace.states[i], trace.labels[i], trace.states[i + 1]};
    if (!table.contains(row)) {
      return {false, step, "step is not a declared transition: " + trace.labels[i].render()};
    }
  }
  return {};
}

std::vector<size_t> preservation_violations(const Trace& trace,
                                            const AdmissibilityTable& adm) {
  std::vector<size_t> out;
  for (size_t i = 0; i < trace.labels.size(); ++i) {
    const ActionLabel& label = trace.labels[i];
    if (!label.fires) continue;  // Dec/Env steps and non-committing arcs
    if (!adm.at(trace.states[i], adm.action_index(label.name))) {
      out.push_back(i + 1);
    }
  }
  return out;
}

PreservationVerdict check_preservation(const Trace& trace, const AdmissibilityTable& adm) {
  for (size_t i = 0; i < trace.labels.size(); ++i) {
    const ActionLabel& label = trace.labels[i];
    if (!label.fires) continue;
    if (!adm.at(trace.states[i], adm.action_index(label.name))) {
      return {false, i + 1, trace.states[i], label.name};
    }
  }
  return {};
}

namespace {

struct Walker {
  const TransitionTable& table;
  int depth;
  uint64_t cap;
  const TraceVisitor& visit;
  EnumerationResult result;
  Trace trace;

  // Outgoing rows per source, resolved once; table.outgoing is sorted.
  std::vector<std::vector<TransitionRow>>* arcs;

  bool walk(StateId s, int remaining) {
    if (result.traces >= cap) {
      result.truncated = true;
      return false;
    }
    ++result.traces;
    if (!visit(trace)) {
      result.stopped = true;
      return false;
    }
    if (remaining == 0) return true;
    for (const TransitionRow& row : (*arcs)[s.value]) {
      trace.push(row.label, row.target);
      bool keep_going = walk(row.target, remaining - 1);
      trace.pop();
      if (!keep_going) return false;
    }
    return true;
  }
};

}  // namespace

EnumerationResult enumerate_traces(const TransitionTable& table, StateId initial,
                                   int depth, uint64_t cap, const TraceVisitor& visit) {
  if (depth < 0) throw ValidationError("negative enumeration depth");
  uint32_t max_state = 0;
  for (const TransitionRow& r : table.rows()) {
    max_state = std::max({max_state, r.source.value + 1, r.target.value + 1});
  }
  max_state = std::max(max_state, initial.value + 1);
  std::vector<std::vector<TransitionRow>> arcs(max_state);
  for (uint32_t s = 0; s < max_state; ++s) arcs[s] = table.outgoing(StateId{s});

  Walker w{table, depth, cap, visit, {}, {}, &arcs};
  w.trace.states.push_back(initial);
  w.walk(initial, depth);
  return w.result;
}

}  // namespace adb
