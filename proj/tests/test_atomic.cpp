#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "atomic.hpp"
#include "helpers.hpp"
#include "kernel.hpp"
#include "scenario.hpp"
#include "system.hpp"

using namespace adb;

TEST_CASE("allow: F fires T and carries pending through") {
  ScenarioSpec spec = builtin("filelock");
  ExtendedState u0{spec.state_by_name("u0"), {}};
  AtomicOutcome out = atomic_step(spec, u0, 0);
  CHECK(out.disposition == Disposition::Allow);
  CHECK(out.next.base == spec.state_by_name("u1"));
  CHECK(out.next.pending.empty());
}

TEST_CASE("refuse: F leaves the extended state unchanged") {
  ScenarioSpec spec = builtin("filelock");
  ExtendedState locked{spec.state_by_name("l0"), {}};
  AtomicOutcome out = atomic_step(spec, locked, 0);
  CHECK(out.disposition == Disposition::Refuse);
  CHECK(out.next == locked);
}

TEST_CASE("escalate: F parks the request and keeps the base") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  AtomicOutcome out = atomic_step(spec, {u1, {}}, 0);
  CHECK(out.disposition == Disposition::Escalate);
  CHECK(out.next.base == u1);
  REQUIRE(out.next.pending.size() == 1);
  CHECK(out.next.pending[0] == PendingRequest{u1, 0});
}

TEST_CASE("a duplicate escalation collapses into the existing pending entry") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  AtomicOutcome once = atomic_step(spec, {u1, {}}, 0);
  AtomicOutcome twice = atomic_step(spec, once.next, 0);
  CHECK(twice.next.pending.size() == 1);
}

TEST_CASE("refuse resolution clears the request and keeps the base") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  StateId l1 = spec.state_by_name("l1");
  PendingRequest req{u1, 0};
  ExtendedState current{l1, {req}};
  ExtendedState next = resolve_atomic(spec, current, req, Disposition::Refuse);
  CHECK(next.base == l1);
  CHECK(next.pending.empty());
}

TEST_CASE("allow resolution fires T against the current state, not the origin") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u0 = spec.state_by_name("u0");
  StateId u1 = spec.state_by_name("u1");
  PendingRequest req{u0, 0};
  ExtendedState current{u1, {req}};  // drifted since the escalation
  ExtendedState next = resolve_atomic(spec, current, req, Disposition::Allow);
  CHECK(next.base == spec.transition.at(u1, 0));
  CHECK(next.pending.empty());
}

TEST_CASE("resolving a non-pending request is a protocol error and mutates nothing") {
  ScenarioSpec spec = builtin("filelock-escalate");
  ExtendedState current{spec.state_by_name("u1"), {}};
  ExtendedState snapshot = current;
  CHECK_THROWS_AS(
      resolve_atomic(spec, current, PendingRequest{spec.state_by_name("u0"), 0},
                     Disposition::Allow),
      ProtocolError);
  CHECK(current == snapshot);
}

TEST_CASE("supervisor verdicts are binary") {
  ScenarioSpec spec = builtin("filelock-escalate");
  PendingRequest req{spec.state_by_name("u1"), 0};
  ExtendedState current{spec.state_by_name("u1"), {req}};
  CHECK_THROWS_AS(resolve_atomic(spec, current, req, Disposition::Escalate), ValidationError);
}

TEST_CASE("shape law holds exhaustively over every builtin") {
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    SystemLts sys = build_system(spec, kAtomicMode);
    for (const SystemNode& node : sys.nodes) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        ExtendedState cur{node.base, node.pending};
        AtomicOutcome out = atomic_step(spec, cur, a);
        switch (out.disposition) {
          case Disposition::Allow:
            CHECK(out.next.base == spec.transition.at(node.base, a));
            CHECK(out.next.pending == node.pending);
            break;
          case Disposition::Refuse:
            CHECK(out.next == cur);
            break;
          case Disposition::Escalate:
            CHECK(out.next.base == node.base);
            CHECK(out.next.pending == pending_add(node.pending, {node.base, a}));
            break;
        }
        // escalation monotonicity: F never removes pending entries
        for (const PendingRequest& req : node.pending) {
          CHECK(pending_contains(out.next.pending, req));
        }
      }
    }
  }
}

TEST_CASE("allow-soundness: consistent tables never allow inadmissible actions") {
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    REQUIRE(check_consistency(spec.decision, spec.adm).consistent());
    SystemLts sys = build_system(spec, kAtomicMode);
    for (const SystemNode& node : sys.nodes) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        AtomicOutcome out = atomic_step(spec, {node.base, node.pending}, a);
        if (out.disposition == Disposition::Allow) CHECK(spec.adm.at(node.base, a));
      }
    }
  }
}

TEST_CASE("versioned cell: stale commits never take effect, versions increase") {
  ScenarioSpec spec = builtin("filelock");
  VersionedStateCell cell({spec.state_by_name("u0"), {}});
  auto [s0, v0] = cell.read();
  CHECK(v0 == 0);
  auto committed = cell.try_commit(v0, {spec.state_by_name("u1"), {}});
  REQUIRE(committed);
  CHECK(*committed == 1);
  // the old version is now stale
  CHECK_FALSE(cell.try_commit(v0, {spec.state_by_name("u2"), {}}));
  auto [s1, v1] = cell.read();
  CHECK(v1 == 1);
  CHECK(s1.base == spec.state_by_name("u1"));
}

TEST_CASE("single-threaded live commit equals atomic_step") {
  ScenarioSpec spec = builtin("filelock");
  VersionedStateCell cell({spec.initial, {}});
  LiveOutcome live = live_admit_and_commit(cell, spec, 0);
  AtomicOutcome pure = atomic_step(spec, {spec.initial, {}}, 0);
  CHECK_FALSE(live.starved);
  CHECK(live.retries == 0);
  CHECK(live.outcome == pure);
  CHECK(cell.read().first == pure.next);
}

TEST_CASE("an env commit inside the race window forces a retry against the fresh state") {
  ScenarioSpec spec = builtin("filelock");
  VersionedStateCell cell({spec.state_by_name("u0"), {}});
  bool injected = false;
  LiveOutcome live = live_admit_and_commit(cell, spec, 0, kDefaultRetryBudget, [&] {
    if (injected) return;
    injected = true;  // lock(f) slips in between the read and the commit
    auto [s, v] = cell.read();
    REQUIRE(cell.try_commit(v, {spec.state_by_name("l0"), s.pending}));
  });
  CHECK_FALSE(live.starved);
  CHECK(live.retries == 1);
  // the decision was recomputed against the post-mutation state
  CHECK(live.outcome.disposition == Disposition::Refuse);
  CHECK(live.evaluated_in.base == spec.state_by_name("l0"));
  CHECK(cell.read().first.base == spec.state_by_name("l0"));
}

TEST_CASE("a hostile window exhausts the retry budget into Starved") {
  ScenarioSpec spec = builtin("filelock");
  VersionedStateCell cell({spec.state_by_name("u0"), {}});
  LiveOutcome live = live_admit_and_commit(cell, spec, 0, 4, [&] {
    auto [s, v] = cell.read();  // every window gets poisoned
    StateId flip = s.base == spec.state_by_name("u0") ? spec.state_by_name("l0")
                                                      : spec.state_by_name("u0");
    cell.try_commit(v, {flip, s.pending});
  });
  CHECK(live.starved);
}

TEST_CASE("concurrent hammering keeps the cell linearizable") {
  ScenarioSpec spec = builtin("filelock");
  VersionedStateCell cell({spec.initial, {}});
  std::atomic<uint64_t> commits{0};
  auto worker = [&](int lane) {
    for (int i = 0; i < 2000; ++i) {
      auto [s, v] = cell.read();
      AtomicOutcome out = atomic_step(spec, s, 0);
      ExtendedState next = lane % 2 == 0
                               ? out.next
                               : ExtendedState{spec.env_from(s.base)[0].target, s.pending};
      if (cell.try_commit(v, next)) ++commits;
    }
  };
  std::vector<std::thread> threads;
  for (int lane = 0; lane < 4; ++lane) threads.emplace_back(worker, lane);
  for (std::thread& t : threads) t.join();
  CHECK(cell.version() == commits.load());
}
