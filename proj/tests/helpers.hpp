#pragma once

#include <string>
#include <vector>

#include "scenario.hpp"
#include "system.hpp"
#include "types.hpp"

namespace adb::test {

// Admissibility never false: passes Assumption 2.1(i), fails 2.1(ii).
inline const char kAlwaysAdmissible[] = R"(
scenario always-adm
attr x a b
state s0 x=a
state s1 x=b
initial s0
agent go
env flip
adm s0 go true
adm s1 go true
decision derived
trans s0 go s1
trans s1 go s1
envtrans s0 flip s1
envtrans s1 flip s0
)";

// Decision table escalates everywhere: fails Assumption 2.1(i).
inline const char kAllEscalate[] = R"(
scenario all-escalate
attr x a b
state s0 x=a
state s1 x=b
initial s0
agent go
env flip
adm s0 go true
adm s1 go false
decision derived
escalate s0 go
escalate s1 go
trans s0 go s1
trans s1 go s1
envtrans s0 flip s1
)";

// One state, one action, one env self-loop.
inline const char kOneState[] = R"(
scenario one-state
attr x a
state s0 x=a
initial s0
agent go
env tick
adm s0 go true
decision derived
trans s0 go s0
envtrans s0 tick s0
)";

// Walks the system along rendered label texts; throws if an arc is missing.
inline Trace trace_along(const SystemLts& sys, const std::vector<std::string>& texts) {
  Trace trace;
  trace.states.push_back(sys.initial);
  StateId at = sys.initial;
  for (const std::string& text : texts) {
    bool found = false;
    for (const TransitionRow& row : sys.table.outgoing(at)) {
      if (row.label.text == text) {
        trace.push(row.label, row.target);
        at = row.target;
        found = true;
        break;
      }
    }
    if (!found) throw ValidationError("no arc labeled " + text + " out of node " +
                                      sys.node_names.at(at.value));
  }
  return trace;
}

}  // namespace adb::test
