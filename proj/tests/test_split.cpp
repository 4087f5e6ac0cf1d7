#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "scenario.hpp"
#include "split.hpp"
#include "system.hpp"

using namespace adb;

TEST_CASE("dec records the disposition together with the evaluation state") {
  ScenarioSpec spec = builtin("filelock");
  SplitState s0{spec.state_by_name("u0"), std::nullopt, {}};
  SplitState next = split_dec(spec, s0, 0);
  REQUIRE(next.recorded);
  CHECK(next.recorded->action == 0);
  CHECK(next.recorded->disposition == Disposition::Allow);
  CHECK(next.recorded->evaluated_in == spec.state_by_name("u0"));
  CHECK(next.base == s0.base);
}

TEST_CASE("dec in a locked state records Refuse") {
  ScenarioSpec spec = builtin("filelock");
  SplitState locked{spec.state_by_name("l0"), std::nullopt, {}};
  SplitState next = split_dec(spec, locked, 0);
  REQUIRE(next.recorded);
  CHECK(next.recorded->disposition == Disposition::Refuse);
}

TEST_CASE("dec on an escalating cell parks the request and leaves no record") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  SplitState next = split_dec(spec, {u1, std::nullopt, {}}, 0);
  CHECK_FALSE(next.recorded);
  REQUIRE(next.pending.size() == 1);
  CHECK(next.pending[0] == PendingRequest{u1, 0});
}

TEST_CASE("a second dec while one is outstanding is rejected") {
  ScenarioSpec spec = builtin("filelock");
  SplitState once = split_dec(spec, {spec.state_by_name("u0"), std::nullopt, {}}, 0);
  CHECK_THROWS_AS(split_dec(spec, once, 0), ValidationError);
}

TEST_CASE("env moves the base and rides the record through") {
  ScenarioSpec spec = builtin("filelock");
  SplitState recorded = split_dec(spec, {spec.state_by_name("u0"), std::nullopt, {}}, 0);
  SplitState after = split_env(spec, recorded, spec.env_index("lock(f)"));
  CHECK(after.base == spec.state_by_name("l0"));
  REQUIRE(after.recorded);
  CHECK(after.recorded->disposition == Disposition::Allow);
  CHECK(after.recorded->evaluated_in == spec.state_by_name("u0"));
}

TEST_CASE("an env self-loop leaves base and record intact") {
  ScenarioSpec spec = load_scenario_text(adb::test::kOneState);
  SplitState recorded = split_dec(spec, {spec.initial, std::nullopt, {}}, 0);
  SplitState after = split_env(spec, recorded, spec.env_index("tick"));
  CHECK(after == recorded);
}

TEST_CASE("two successive env steps apply in order (k = 2)") {
  ScenarioSpec spec = builtin("filelock");
  SplitState recorded = split_dec(spec, {spec.state_by_name("u0"), std::nullopt, {}}, 0);
  SplitState one = split_env(spec, recorded, spec.env_index("lock(f)"));
  SplitState two = split_env(spec, one, spec.env_index("unlock(f)"));
  CHECK(one.base == spec.state_by_name("l0"));
  CHECK(two.base == spec.state_by_name("u0"));
  CHECK(two.recorded == recorded.recorded);
}

TEST_CASE("undeclared env transitions are rejected") {
  ScenarioSpec spec = builtin("filelock");
  SplitState at_u0{spec.state_by_name("u0"), std::nullopt, {}};
  CHECK_THROWS_AS(split_env(spec, at_u0, spec.env_index("unlock(f)")), ValidationError);
}

TEST_CASE("exec fires a stale Allow in the mutated state and reports the violation") {
  ScenarioSpec spec = builtin("filelock");
  SplitState recorded = split_dec(spec, {spec.state_by_name("u0"), std::nullopt, {}}, 0);
  SplitState drifted = split_env(spec, recorded, spec.env_index("lock(f)"));
  auto [next, event] = split_exec(spec, drifted);
  CHECK(event == PreservationEvent::Violated);
  CHECK(next.base == spec.transition.at(spec.state_by_name("l0"), 0));
  CHECK_FALSE(next.recorded);
}

TEST_CASE("exec with no interleaving is admissible (k = 0)") {
  ScenarioSpec spec = builtin("filelock");
  SplitState recorded = split_dec(spec, {spec.state_by_name("u0"), std::nullopt, {}}, 0);
  auto [next, event] = split_exec(spec, recorded);
  CHECK(event == PreservationEvent::Admissible);
  CHECK(next.base == spec.state_by_name("u1"));
}

TEST_CASE("exec over a Refuse record never fires") {
  ScenarioSpec spec = builtin("filelock");
  SplitState recorded = split_dec(spec, {spec.state_by_name("l0"), std::nullopt, {}}, 0);
  auto [next, event] = split_exec(spec, recorded);
  CHECK(event == PreservationEvent::NoFire);
  CHECK(next.base == spec.state_by_name("l0"));
  CHECK_FALSE(next.recorded);
}

TEST_CASE("exec without a record is rejected") {
  ScenarioSpec spec = builtin("filelock");
  CHECK_THROWS_AS(split_exec(spec, {spec.state_by_name("u0"), std::nullopt, {}}),
                  ValidationError);
}

TEST_CASE("split resolution records the verdict; the later exec hits the drifted state") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  PendingRequest req{u1, 0};
  // supervisor records Allow in u1, environment locks the file, exec fires
  SplitState resolved = resolve_split(spec, {u1, std::nullopt, {req}}, req, Disposition::Allow);
  REQUIRE(resolved.recorded);
  CHECK(resolved.recorded->resolved_origin == u1);
  CHECK(resolved.pending.empty());
  SplitState drifted = split_env(spec, resolved, spec.env_index("lock(f)"));
  auto [next, event] = split_exec(spec, drifted);
  CHECK(event == PreservationEvent::Violated);
  CHECK(next.base == spec.state_by_name("l2"));
}

TEST_CASE("refuse resolution shrinks pending and never fires") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  PendingRequest req{u1, 0};
  SplitState resolved = resolve_split(spec, {u1, std::nullopt, {req}}, req, Disposition::Refuse);
  CHECK(resolved.pending.empty());
  auto [next, event] = split_exec(spec, resolved);
  CHECK(event == PreservationEvent::NoFire);
  CHECK(next.base == u1);
}

TEST_CASE("allow resolution with no interleaving fires admissibly") {
  ScenarioSpec spec = builtin("filelock-escalate");
  StateId u1 = spec.state_by_name("u1");
  PendingRequest req{u1, 0};
  SplitState resolved = resolve_split(spec, {u1, std::nullopt, {req}}, req, Disposition::Allow);
  auto [next, event] = split_exec(spec, resolved);
  CHECK(event == PreservationEvent::Admissible);
  CHECK(next.base == spec.state_by_name("u2"));
}

TEST_CASE("resolving a non-pending request is a protocol error in the split variant too") {
  ScenarioSpec spec = builtin("filelock-escalate");
  SplitState current{spec.state_by_name("u1"), std::nullopt, {}};
  SplitState snapshot = current;
  CHECK_THROWS_AS(resolve_split(spec, current, PendingRequest{spec.state_by_name("u1"), 0},
                                Disposition::Allow),
                  ProtocolError);
  CHECK(current == snapshot);
}

TEST_CASE("augmented dec reads the external store") {
  ScenarioSpec spec = builtin("opa-quota-store");
  // store value 1 at q1: D' allows; consume exhausts quota before exec
  SplitState recorded = split_dec_augmented(spec, {spec.state_by_name("q1"), std::nullopt, {}}, 0);
  REQUIRE(recorded.recorded);
  CHECK(recorded.recorded->disposition == Disposition::Allow);
  SplitState drifted = split_env(spec, recorded, spec.env_index("consume"));
  auto [next, event] = split_exec(spec, drifted);
  CHECK(event == PreservationEvent::Violated);
}

TEST_CASE("a store already reflecting exhaustion refuses at dec") {
  ScenarioSpec spec = builtin("opa-quota-store");
  SplitState recorded = split_dec_augmented(spec, {spec.state_by_name("q2"), std::nullopt, {}}, 0);
  REQUIRE(recorded.recorded);
  CHECK(recorded.recorded->disposition == Disposition::Refuse);
}

TEST_CASE("augmented dec without interleaving is admissible") {
  ScenarioSpec spec = builtin("opa-quota-store");
  SplitState recorded = split_dec_augmented(spec, {spec.state_by_name("q1"), std::nullopt, {}}, 0);
  auto [next, event] = split_exec(spec, recorded);
  CHECK(event == PreservationEvent::Admissible);
}

TEST_CASE("augmented dec composes to the plain decision table when the store mirrors state") {
  ScenarioSpec spec = builtin("opa-quota-store");
  for (uint32_t s = 0; s < spec.num_states(); ++s) {
    SplitState cur{StateId{s}, std::nullopt, {}};
    SplitState via_cube = split_dec_augmented(spec, cur, 0);
    SplitState via_table = split_dec(spec, cur, 0);
    CHECK(via_cube == via_table);
  }
}

TEST_CASE("augmented dec requires an external block") {
  ScenarioSpec spec = builtin("opa-quota");
  CHECK_THROWS_AS(split_dec_augmented(spec, {spec.initial, std::nullopt, {}}, 0),
                  ValidationError);
}

TEST_CASE("no-bypass: exec arcs fire only over Allow records") {
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    SystemLts sys = build_system(spec, kSplitMode);
    for (const TransitionRow& row : sys.table.rows()) {
      if (row.label.kind != LabelKind::Exec) continue;
      const SystemNode& source = sys.nodes[row.source.value];
      REQUIRE(source.recorded);
      if (row.label.fires) {
        CHECK(source.recorded->disposition == Disposition::Allow);
      } else {
        CHECK(source.recorded->disposition == Disposition::Refuse);
      }
    }
  }
}

TEST_CASE("fusing dec and exec into one arc removes the window") {
  // the closed-window configuration is definitionally the atomic boundary
  ScenarioSpec spec = builtin("filelock");
  BuildOptions fused;
  fused.window_closed = true;
  SystemLts sys = build_system(spec, kSplitMode, fused);
  bool violating_arc = false;
  for (const TransitionRow& row : sys.table.rows()) {
    if (row.label.fires &&
        !sys.adm.at(row.source, sys.adm.action_index(row.label.name))) {
      violating_arc = true;
    }
  }
  CHECK_FALSE(violating_arc);
}
