#pragma once

#include <functional>
#include <string>

#include "types.hpp"

namespace adb {

struct TraceCheck {
  bool ok = true;
  size_t index = 0;  // 1-based failing step when !ok
  std::string reason;
  explicit operator bool() const { return ok; }
};

// True iff every step of the trace is a declared transition and every state
// id is in range. Rejects with the offending 1-based step index otherwise.
TraceCheck validate_trace(const Trace& trace, const TransitionTable& table,
                          uint32_t num_states);

struct PreservationVerdict {
  bool preserved = true;
  size_t index = 0;        // 1-based step of the first violation
  StateId state;           // state the violating step fired in
  std::string action;      // governed agent action
};

// First agent-action step that fires in a state where admissibility is
// false. Dec steps, Env steps, and non-firing arcs (refusals, escalations,
// dropped records) are never violations.
PreservationVerdict check_preservation(const Trace& trace, const AdmissibilityTable& adm);

// All violating step indices (1-based); used by replay counting.
std::vector<size_t> preservation_violations(const Trace& trace, const AdmissibilityTable& adm);

struct EnumerationResult {
  uint64_t traces = 0;
  bool truncated = false;   // hit the cap; counts are partial
  bool stopped = false;     // visitor asked to stop
};

// Visit every trace (the zero-step trace included) with at most `depth`
// transitions, depth-first, arcs in table order, each exactly once.
// Returning false from the visitor stops the walk.
using TraceVisitor = std::function<bool(const Trace&)>;

inline constexpr uint64_t kDefaultTraceCap = 20'000'000;

EnumerationResult enumerate_traces(const TransitionTable& table, StateId initial,
                                   int depth, uint64_t cap, const TraceVisitor& visit);

}  // namespace adb
