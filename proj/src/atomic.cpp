#include "atomic.hpp"

namespace adb {

PendingSet pending_add(PendingSet set, PendingRequest req) {
  auto it = std::lower_bound(set.begin(), set.end(), req);
  if (it == set.end() || *it != req) set.insert(it, req);
  return set;
}

PendingSet pending_remove(PendingSet set, const PendingRequest& req) {
  auto it = std::lower_bound(set.begin(), set.end(), req);
  if (it != set.end() && *it == req) set.erase(it);
  return set;
}

bool pending_contains(const PendingSet& set, const PendingRequest& req) {
  return std::binary_search(set.begin(), set.end(), req);
}

AtomicOutcome atomic_step(const ScenarioSpec& spec, const ExtendedState& current,
                          ActionIndex action) {
  if (action >= spec.agent_actions.size()) throw ValidationError("unknown agent action index");
  if (current.base.value >= spec.num_states()) throw ValidationError("undeclared base state");

  Disposition d = spec.decision.at(current.base, action);
  switch (d) {
    case Disposition::Allow:
      return {d, {spec.transition.at(current.base, action), current.pending}};
    case Disposition::Refuse:
      return {d, current};
    case Disposition::Escalate:
      return {d, {current.base, pending_add(current.pending, {current.base, action})}};
  }
  throw ValidationError("unreachable disposition");
}

ExtendedState resolve_atomic(const ScenarioSpec& spec, const ExtendedState& current,
                             const PendingRequest& request, Disposition verdict) {
  if (verdict == Disposition::Escalate) {
    throw ValidationError("supervisor verdicts are Allow or Refuse");
  }
  if (!pending_contains(current.pending, request)) {
    throw ProtocolError("resolution of a request not in the pending set");
  }
  PendingSet rest = pending_remove(current.pending, request);
  if (verdict == Disposition::Allow) {
    return {spec.transition.at(current.base, request.action), std::move(rest)};
  }
  return {current.base, std::move(rest)};
}

LiveOutcome live_admit_and_commit(VersionedStateCell& cell, const ScenarioSpec& spec,
                                  ActionIndex action, uint32_t retry_budget,
                                  const std::function<void()>& between_read_and_commit) {
  LiveOutcome result;
  for (uint32_t attempt = 0; attempt <= retry_budget; ++attempt) {
    auto [snapshot, version] = cell.read();
    AtomicOutcome outcome = atomic_step(spec, snapshot, action);
    if (between_read_and_commit) between_read_and_commit();
    if (auto committed = cell.try_commit(version, outcome.next)) {
      result.outcome = outcome;
      result.evaluated_in = snapshot;
      result.retries = attempt;
      result.committed_version = *committed;
      return result;
    }
    ++result.retries;
  }
  result.starved = true;
  return result;
}

}  // namespace adb
