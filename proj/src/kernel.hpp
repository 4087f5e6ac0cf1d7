#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scenario.hpp"
#include "types.hpp"

namespace adb {

// Consistency conditions between a decision table and an admissibility table:
//   (i)   D = Allow  implies  Adm
//   (ii)  D = Refuse implies !Adm
//   (iii) Adm  implies D != Refuse
//   (iv)  !Adm implies D != Allow
// A cell that breaks the biconditional breaks two of them; one entry is
// reported per violated condition.
enum class ConsistencyCondition : uint8_t { I, II, III, IV };

std::string_view to_string(ConsistencyCondition c);

struct ConsistencyViolation {
  ConsistencyCondition condition;
  StateId state;
  ActionIndex action;
  bool operator==(const ConsistencyViolation&) const = default;
};

struct ConsistencyVerdict {
  std::vector<ConsistencyViolation> violations;
  bool consistent() const { return violations.empty(); }
};

// Throws ValidationError if the tables cover different domains.
ConsistencyVerdict check_consistency(const DecisionTable& decision,
                                     const AdmissibilityTable& adm);

struct NontrivialityVerdict {
  // (i) some (s, a) with Adm true and D = Allow
  bool grants_admissible_action = false;
  StateId allow_state;
  ActionIndex allow_action = 0;
  // (ii) some (s, a, e) with s -e-> s* and Adm(s*, a) false
  bool env_can_break_admissibility = false;
  StateId break_state;
  ActionIndex break_action = 0;
  uint32_t break_env = 0;
  StateId break_target;

  bool pass() const { return grants_admissible_action && env_can_break_admissibility; }
  std::string failure_reason() const;
};

NontrivialityVerdict check_nontriviality(const ScenarioSpec& spec);

using EscalatePredicate = std::function<bool(StateId, ActionIndex)>;

// Escalate where the predicate holds, otherwise Allow iff Adm, Refuse
// otherwise. The result always passes check_consistency.
DecisionTable derive_decision_from_adm(const AdmissibilityTable& adm,
                                       const EscalatePredicate& escalate_on);

}  // namespace adb
