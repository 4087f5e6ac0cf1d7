#pragma once

#include <optional>
#include <utility>

#include "atomic.hpp"
#include "scenario.hpp"
#include "types.hpp"

namespace adb {

struct RecordedDecision {
  ActionIndex action = 0;
  Disposition disposition = Disposition::Refuse;
  StateId evaluated_in;
  // Set when this record came from a supervisor resolution rather than a
  // primary dec; remembers the resolved request's origin.
  std::optional<StateId> resolved_origin;
  auto operator<=>(const RecordedDecision&) const = default;
};

// Split-system configuration between dec and exec. At most one recorded
// decision is outstanding at a time.
struct SplitState {
  StateId base;
  std::optional<RecordedDecision> recorded;
  PendingSet pending;
  auto operator<=>(const SplitState&) const = default;
};

enum class PreservationEvent : uint8_t { Admissible, Violated, NoFire };

std::string_view to_string(PreservationEvent e);

// Decision transition: records (action, D(base, action), base); Escalate
// instead grows pending and leaves no record. Throws ValidationError when a
// record is already outstanding.
SplitState split_dec(const ScenarioSpec& spec, const SplitState& current, ActionIndex action);

// Environment transition: moves base along a declared env row; record and
// pending ride through untouched. This is the exploitable interleaving
// point. When several rows exist for (base, env_action), `target` selects
// one; it must name a declared row.
SplitState split_env(const ScenarioSpec& spec, const SplitState& current, uint32_t env_action,
                     std::optional<StateId> target = std::nullopt);

// Execution transition, contingent on the recorded disposition. Allow fires
// T against the *current* base and reports admissibility at fire time;
// Refuse clears the record without firing. Throws ValidationError without a
// record.
std::pair<SplitState, PreservationEvent> split_exec(const ScenarioSpec& spec,
                                                    const SplitState& current);

// Split supervisor resolution: records the verdict in one step; the later
// split_exec applies T against whatever base then holds. Throws
// ProtocolError when the request is not pending.
SplitState resolve_split(const ScenarioSpec& spec, const SplitState& current,
                         const PendingRequest& request, Disposition verdict);

// Decision computed by D'(base, action, read(base)); structurally identical
// to split_dec afterwards. Requires the scenario's external-state block.
SplitState split_dec_augmented(const ScenarioSpec& spec, const SplitState& current,
                               ActionIndex action);

}  // namespace adb
