#pragma once

#include <algorithm>
#include <functional>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "scenario.hpp"
#include "types.hpp"

namespace adb {

struct PendingRequest {
  StateId origin_state;
  ActionIndex action = 0;
  auto operator<=>(const PendingRequest&) const = default;
};

// Finite set semantics: sorted, unique. A second escalation of an identical
// (origin, action) pair collapses into the existing entry.
using PendingSet = std::vector<PendingRequest>;

PendingSet pending_add(PendingSet set, PendingRequest req);
PendingSet pending_remove(PendingSet set, const PendingRequest& req);
bool pending_contains(const PendingSet& set, const PendingRequest& req);

// Escalation-extended state (base, pending).
struct ExtendedState {
  StateId base;
  PendingSet pending;
  auto operator<=>(const ExtendedState&) const = default;
};

struct AtomicOutcome {
  Disposition disposition = Disposition::Refuse;
  ExtendedState next;
  bool operator==(const AtomicOutcome&) const = default;
};

// The boundary function F as one indivisible step:
//   Allow    -> (T(base, a), pending)
//   Refuse   -> unchanged
//   Escalate -> (base, pending + {(base, a)})
AtomicOutcome atomic_step(const ScenarioSpec& spec, const ExtendedState& current,
                          ActionIndex action);

// Supervisor resolution against the current state, one indivisible step.
// verdict must be Allow or Refuse; resolving a request not in the pending
// set throws ProtocolError and mutates nothing.
ExtendedState resolve_atomic(const ScenarioSpec& spec, const ExtendedState& current,
                             const PendingRequest& request, Disposition verdict);

// Shared mutable cell with optimistic versioned commits. The version
// strictly increases on every successful commit; a commit conditioned on a
// stale version never takes effect.
template <class S>
class VersionedCell {
 public:
  explicit VersionedCell(S initial) : state_(std::move(initial)) {}

  std::pair<S, uint64_t> read() const {
    std::lock_guard<std::mutex> g(m_);
    return {state_, version_};
  }

  // Returns the new version on success, nullopt when `expected` is stale.
  std::optional<uint64_t> try_commit(uint64_t expected, S next) {
    std::lock_guard<std::mutex> g(m_);
    if (version_ != expected) return std::nullopt;
    state_ = std::move(next);
    return ++version_;
  }

  uint64_t version() const {
    std::lock_guard<std::mutex> g(m_);
    return version_;
  }

 private:
  mutable std::mutex m_;
  S state_;
  uint64_t version_ = 0;
};

using VersionedStateCell = VersionedCell<ExtendedState>;

struct LiveOutcome {
  AtomicOutcome outcome;
  ExtendedState evaluated_in;  // snapshot the committed decision was computed against
  bool starved = false;        // retry budget exhausted; outcome not committed
  uint32_t retries = 0;
  uint64_t committed_version = 0;
};

inline constexpr uint32_t kDefaultRetryBudget = 64;

// Read-evaluate-commit loop: computes atomic_step against a snapshot and
// commits it only if the version is unchanged; otherwise retries from the
// fresh state, so the decision is always recomputed against the state the
// commit lands on. `between_read_and_commit` runs in the race window (test
// hook / yield injection).
LiveOutcome live_admit_and_commit(VersionedStateCell& cell, const ScenarioSpec& spec,
                                  ActionIndex action,
                                  uint32_t retry_budget = kDefaultRetryBudget,
                                  const std::function<void()>& between_read_and_commit = {});

}  // namespace adb
