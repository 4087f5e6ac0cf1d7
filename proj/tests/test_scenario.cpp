#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "kernel.hpp"
#include "scenario.hpp"

using namespace adb;

#ifndef ADB_SOURCE_DIR
#define ADB_SOURCE_DIR "."
#endif

TEST_CASE("the builtin filelock matches the paper-scale product 2 x 3") {
  ScenarioSpec spec = builtin("filelock");
  CHECK(spec.num_states() == 6);
  CHECK(spec.agent_actions == std::vector<std::string>{"write(f)"});
  CHECK(spec.state_name(spec.initial) == "u0");
  // quota_max = 2: admissible iff unlocked and quota < 2
  for (uint32_t s = 0; s < 6; ++s) {
    bool unlocked = spec.states[s].attr_values[0] == 0;
    bool headroom = spec.states[s].attr_values[1] < 2;
    CHECK(spec.adm.at(StateId{s}, 0) == (unlocked && headroom));
  }
}

TEST_CASE("every builtin loads, validates, and passes the kernel checks") {
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    CHECK(spec.name == name);
    CHECK(check_consistency(spec.decision, spec.adm).consistent());
    CHECK(check_nontriviality(spec).pass());
  }
}

TEST_CASE("rbac-revoke declares the revoke environment action") {
  ScenarioSpec spec = builtin("rbac-revoke");
  CHECK(spec.attrs[0].name == "role");
  CHECK_NOTHROW(spec.env_index("revoke"));
  // revocation breaks admissibility from every editor state
  StateId e0 = spec.state_by_name("e0");
  StateId n0 = spec.state_by_name("n0");
  CHECK(spec.adm.at(e0, 0));
  CHECK_FALSE(spec.adm.at(n0, 0));
}

TEST_CASE("a missing adm row is reported by name") {
  std::string text = R"(
scenario gap
attr x a b
state s0 x=a
state s1 x=b
initial s0
agent go
adm s0 go true
decision explicit
dec s0 go allow
dec s1 go refuse
trans s0 go s1
trans s1 go s1
)";
  try {
    load_scenario_text(text);
    FAIL("expected a totality error");
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    CHECK(msg.find("missing adm row (s1, go)") != std::string::npos);
  }
}

TEST_CASE("parse errors carry line and column") {
  std::string text = "scenario broken\nattr x a\nstate s0 x=a\nbogus-keyword 1 2\n";
  try {
    load_scenario_text(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
    CHECK(e.column == 1);
  }
}

TEST_CASE("agent/env name collisions are rejected") {
  std::string text = R"(
scenario clash
attr x a
state s0 x=a
initial s0
agent go
env go
adm s0 go true
decision derived
trans s0 go s0
)";
  CHECK_THROWS_AS(load_scenario_text(text), ValidationError);
}

TEST_CASE("undeclared states in tables are rejected at parse time") {
  std::string text = R"(
scenario dangling
attr x a
state s0 x=a
initial s0
agent go
adm s9 go true
decision derived
trans s0 go s0
)";
  CHECK_THROWS_AS(load_scenario_text(text), ParseError);
}

TEST_CASE("serialize/load round-trips every builtin semantically") {
  for (const std::string& name : builtin_names()) {
    ScenarioSpec spec = builtin(name);
    ScenarioSpec reloaded = load_scenario_text(serialize_scenario(spec));
    CHECK(scenario_equal(spec, reloaded));
    // and the canonical form is a fixpoint
    CHECK(serialize_scenario(spec) == serialize_scenario(reloaded));
  }
}

TEST_CASE("the shipped scenario files equal the compiled-in builtins") {
  for (const std::string& name : builtin_names()) {
    std::string path = std::string(ADB_SOURCE_DIR) + "/scenarios/" + name + ".scn";
    ScenarioSpec from_file = load_scenario(path);
    CHECK(scenario_equal(from_file, builtin(name)));
  }
}

TEST_CASE("the cedar variant file is opa-quota under different names") {
  ScenarioSpec cedar = load_scenario(std::string(ADB_SOURCE_DIR) + "/scenarios/cedar-entity.scn");
  ScenarioSpec opa = builtin("opa-quota");
  CHECK(cedar.num_states() == opa.num_states());
  CHECK(check_nontriviality(cedar).pass());
  for (uint32_t s = 0; s < cedar.num_states(); ++s) {
    CHECK(cedar.adm.at(StateId{s}, 0) == opa.adm.at(StateId{s}, 0));
  }
}

TEST_CASE("unknown builtin names are rejected") {
  CHECK_THROWS_AS(builtin("no-such-scenario"), ValidationError);
}

TEST_CASE("states product generates the full attribute product") {
  std::string text = R"(
scenario product
attr a x y
attr b 0 1 2
states product
initial a=x,b=0
agent go
env nudge
adm a=x,b=0 go true
adm a=x,b=1 go true
adm a=x,b=2 go true
adm a=y,b=0 go false
adm a=y,b=1 go false
adm a=y,b=2 go false
decision derived
trans a=x,b=0 go a=x,b=1
trans a=x,b=1 go a=x,b=2
trans a=x,b=2 go a=x,b=2
trans a=y,b=0 go a=y,b=1
trans a=y,b=1 go a=y,b=2
trans a=y,b=2 go a=y,b=2
envtrans a=x,b=0 nudge a=y,b=0
)";
  ScenarioSpec spec = load_scenario_text(text);
  CHECK(spec.num_states() == 6);
  CHECK(spec.state_name(StateId{0}) == "a=x,b=0");
  CHECK(check_nontriviality(spec).pass());
}

TEST_CASE("the external store must stay coupled to env transitions") {
  // reset moves quota to 0 but the store effect is missing entirely
  std::string text = R"(
scenario decoupled
attr used 0 1
state q0 used=0
state q1 used=1
initial q0
agent write
env consume
adm q0 write true
adm q1 write false
trans q0 write q1
trans q1 write q1
envtrans q0 consume q1
external values 0 1
external read q0 0
external read q1 1
decx q0 write 0 allow
decx q0 write 1 refuse
decx q1 write 0 allow
decx q1 write 1 refuse
)";
  try {
    load_scenario_text(text);
    FAIL("expected a coupling error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("decouples") != std::string::npos);
  }
}

TEST_CASE("partition admdep must cover what the adm table actually reads") {
  std::string text = R"(
scenario underdeclared
attr locked no yes
state u locked=no
state l locked=yes
initial u
agent go
env lock
adm u go true
adm l go false
decision derived
trans u go u
trans l go l
envtrans u lock l
partition local
partition global locked
partition admdep
)";
  CHECK_THROWS_AS(load_scenario_text(text), ValidationError);
}

TEST_CASE("derived adm dependency reads the tables, not the declarations") {
  ScenarioSpec k8s = builtin("k8s-quota");
  std::vector<uint32_t> dep = k8s.derived_adm_dependency();
  CHECK(dep == std::vector<uint32_t>{0, 1});  // pod and quota
  ScenarioSpec rbac = builtin("rbac-revoke");
  CHECK(rbac.derived_adm_dependency() == std::vector<uint32_t>{0});  // role only
}

TEST_CASE("with_local_only_adm projects the global attributes away") {
  ScenarioSpec spec = with_local_only_adm(builtin("k8s-quota"));
  // admissibility now reads only the pod attribute
  for (uint32_t s = 0; s < spec.num_states(); ++s) {
    bool pod_absent = spec.states[s].attr_values[0] == 0;
    CHECK(spec.adm.at(StateId{s}, 0) == pod_absent);
  }
  CHECK(spec.derived_adm_dependency() == std::vector<uint32_t>{0});
  CHECK(check_consistency(spec.decision, spec.adm).consistent());
}

TEST_CASE("loading a missing file fails cleanly") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/path.scn"), ValidationError);
}
