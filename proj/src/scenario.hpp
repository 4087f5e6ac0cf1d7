#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace adb {

struct AttrDecl {
  std::string name;
  std::vector<std::string> values;  // finite domain
  bool operator==(const AttrDecl&) const = default;
};

struct ScenarioState {
  std::string name;
  std::vector<uint32_t> attr_values;  // one value index per declared attribute
  bool operator==(const ScenarioState&) const = default;
};

struct EnvRow {
  StateId source;
  uint32_t env_action;
  StateId target;
  auto operator<=>(const EnvRow&) const = default;
};

// External store read by an augmented decision function.  The store value is
// a view of the base state (the paper's epsilon_s); coupled effects declare
// how env actions move it, and the loader checks the two stay consistent.
struct ExternalStateSpec {
  std::vector<std::string> values;
  std::vector<uint32_t> read;                          // state -> value index, total
  std::map<uint32_t, std::map<uint32_t, uint32_t>> effects;  // env action -> (value -> value)
  bool operator==(const ExternalStateSpec&) const = default;
};

// Augmented decision function D' : S x A x E -> Dispositions, total.
class DecisionCube {
 public:
  DecisionCube() = default;
  DecisionCube(uint32_t num_states, uint32_t num_actions, uint32_t num_values);
  void set(StateId s, ActionIndex a, uint32_t value, Disposition d);
  Disposition at(StateId s, ActionIndex a, uint32_t value) const;
  bool is_set(StateId s, ActionIndex a, uint32_t value) const;
  std::vector<std::tuple<StateId, ActionIndex, uint32_t>> missing_rows() const;
  bool total() const { return missing_rows().empty(); }
  bool operator==(const DecisionCube&) const = default;

 private:
  uint32_t num_states_ = 0, num_actions_ = 0, num_values_ = 0;
  std::vector<int8_t> cells_;
};

// Local/global split of the state attributes (partial atomicity).
struct PartitionDescriptor {
  std::vector<uint32_t> local_attrs;
  std::vector<uint32_t> global_attrs;
  std::vector<uint32_t> adm_dependency;  // attrs the admissibility predicate reads
  bool operator==(const PartitionDescriptor&) const = default;
};

// Fully tabulated scenario: the single source of truth for every check.
struct ScenarioSpec {
  std::string name;
  std::vector<AttrDecl> attrs;
  std::vector<ScenarioState> states;
  std::vector<std::string> agent_actions;
  std::vector<std::string> env_actions;
  std::vector<EnvRow> env_transitions;  // relational; may be nondeterministic per (s,e)
  AdmissibilityTable adm;
  DecisionTable decision;  // composed from decision_ext + external read when present
  bool decision_derived = false;
  std::vector<std::pair<StateId, ActionIndex>> escalate_rows;  // when derived
  TransitionFunctionTable transition;
  StateId initial;
  std::optional<ExternalStateSpec> external;
  std::optional<DecisionCube> decision_ext;
  std::optional<PartitionDescriptor> partition;

  uint32_t num_states() const { return uint32_t(states.size()); }
  const std::string& state_name(StateId s) const { return states.at(s.value).name; }
  StateId state_by_name(std::string_view name) const;
  ActionIndex agent_index(std::string_view name) const;
  uint32_t env_index(std::string_view name) const;
  std::vector<EnvRow> env_from(StateId s) const;
  // True when the env action's transitions change any attribute in `attrs`.
  bool env_touches_attrs(uint32_t env_action, const std::vector<uint32_t>& attr_set) const;
  // Attributes whose value can change some admissibility row, derived from the
  // tables themselves (pairs of states differing in exactly one attribute).
  std::vector<uint32_t> derived_adm_dependency() const;
};

// Well-formedness: table totality, reference validity, action disjointness,
// external-store coupling, partition coverage. Throws ValidationError listing
// every gap found.
void validate_scenario(const ScenarioSpec& spec);

// Semantic equality: same tables up to row order (names must match).
bool scenario_equal(const ScenarioSpec& a, const ScenarioSpec& b);

ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec load_scenario_text(const std::string& text, const std::string& origin = "<string>");
std::string serialize_scenario(const ScenarioSpec& spec);

const std::vector<std::string>& builtin_names();
ScenarioSpec builtin(const std::string& name);  // throws ValidationError on unknown name

// k8s-style counterfactual: admissibility localized to the partition's local
// attributes (global attrs projected to their initial values), decision table
// re-derived canonically, adm_dependency restricted accordingly.
ScenarioSpec with_local_only_adm(const ScenarioSpec& spec);

}  // namespace adb
