#include "split.hpp"

namespace adb {

std::string_view to_string(PreservationEvent e) {
  switch (e) {
    case PreservationEvent::Admissible: return "admissible";
    case PreservationEvent::Violated: return "violated";
    case PreservationEvent::NoFire: return "no-fire";
  }
  return "?";
}

namespace {

SplitState record_disposition(const SplitState& current, ActionIndex action, Disposition d,
                              std::optional<StateId> resolved_origin) {
  if (d == Disposition::Escalate) {
    SplitState next = current;
    next.pending = pending_add(next.pending, {current.base, action});
    return next;  // no record; the request is parked for the supervisor
  }
  SplitState next = current;
  next.recorded = RecordedDecision{action, d, current.base, resolved_origin};
  return next;
}

}  // namespace

SplitState split_dec(const ScenarioSpec& spec, const SplitState& current, ActionIndex action) {
  if (current.recorded) {
    throw ValidationError("a decision is already recorded; one outstanding record at a time");
  }
  if (action >= spec.agent_actions.size()) throw ValidationError("unknown agent action index");
  return record_disposition(current, action, spec.decision.at(current.base, action),
                            std::nullopt);
}

SplitState split_env(const ScenarioSpec& spec, const SplitState& current, uint32_t env_action,
                     std::optional<StateId> target) {
  std::optional<StateId> chosen;
  for (const EnvRow& row : spec.env_transitions) {
    if (row.source != current.base || row.env_action != env_action) continue;
    if (target && row.target != *target) continue;
    if (chosen && *chosen != row.target) {
      throw ValidationError("ambiguous env transition; pass an explicit target");
    }
    chosen = row.target;
  }
  if (!chosen) {
    throw ValidationError("undeclared env transition from " + spec.state_name(current.base));
  }
  SplitState next = current;
  next.base = *chosen;  // record and pending ride through untouched
  return next;
}

std::pair<SplitState, PreservationEvent> split_exec(const ScenarioSpec& spec,
                                                    const SplitState& current) {
  if (!current.recorded) throw ValidationError("exec without a recorded decision");
  const RecordedDecision rec = *current.recorded;
  SplitState next = current;
  next.recorded.reset();
  if (rec.disposition == Disposition::Refuse) {
    return {next, PreservationEvent::NoFire};
  }
  bool admissible_now = spec.adm.at(current.base, rec.action);
  next.base = spec.transition.at(current.base, rec.action);
  return {next, admissible_now ? PreservationEvent::Admissible : PreservationEvent::Violated};
}

SplitState resolve_split(const ScenarioSpec&, const SplitState& current,
                         const PendingRequest& request, Disposition verdict) {
  if (verdict == Disposition::Escalate) {
    throw ValidationError("supervisor verdicts are Allow or Refuse");
  }
  if (!pending_contains(current.pending, request)) {
    throw ProtocolError("resolution of a request not in the pending set");
  }
  if (current.recorded) {
    throw ValidationError("a decision is already recorded; one outstanding record at a time");
  }
  SplitState next = current;
  next.pending = pending_remove(next.pending, request);
  next.recorded = RecordedDecision{request.action, verdict, current.base, request.origin_state};
  return next;
}

SplitState split_dec_augmented(const ScenarioSpec& spec, const SplitState& current,
                               ActionIndex action) {
  if (!spec.external || !spec.decision_ext) {
    throw ValidationError("scenario declares no external state");
  }
  if (current.recorded) {
    throw ValidationError("a decision is already recorded; one outstanding record at a time");
  }
  uint32_t value = spec.external->read.at(current.base.value);
  Disposition d = spec.decision_ext->at(current.base, action, value);
  return record_disposition(current, action, d, std::nullopt);
}

}  // namespace adb
