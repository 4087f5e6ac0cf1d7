#include "kernel.hpp"

namespace adb {

std::string_view to_string(ConsistencyCondition c) {
  switch (c) {
    case ConsistencyCondition::I: return "i";
    case ConsistencyCondition::II: return "ii";
    case ConsistencyCondition::III: return "iii";
    case ConsistencyCondition::IV: return "iv";
  }
  return "?";
}

ConsistencyVerdict check_consistency(const DecisionTable& decision,
                                     const AdmissibilityTable& adm) {
  if (decision.num_states() != adm.num_states() || decision.actions() != adm.actions()) {
    throw ValidationError("decision/admissibility domain mismatch");
  }
  ConsistencyVerdict verdict;
  for (uint32_t s = 0; s < adm.num_states(); ++s) {
    for (ActionIndex a = 0; a < adm.actions().size(); ++a) {
      StateId sid{s};
      bool admissible = adm.at(sid, a);
      Disposition d = decision.at(sid, a);
      if (d == Disposition::Allow && !admissible) {
        verdict.violations.push_back({ConsistencyCondition::I, sid, a});
        verdict.violations.push_back({ConsistencyCondition::IV, sid, a});
      }
      if (d == Disposition::Refuse && admissible) {
        verdict.violations.push_back({ConsistencyCondition::II, sid, a});
        verdict.violations.push_back({ConsistencyCondition::III, sid, a});
      }
    }
  }
  return verdict;
}

std::string NontrivialityVerdict::failure_reason() const {
  if (pass()) return "";
  if (!grants_admissible_action && !env_can_break_admissibility) {
    return "Assumption 2.1 unmet: no admissible Allow and no admissibility-breaking env step";
  }
  if (!grants_admissible_action) {
    return "Assumption 2.1(i) unmet: decision function grants no admissible action";
  }
  return "Assumption 2.1(ii) unmet: no environment step makes any action inadmissible";
}

NontrivialityVerdict check_nontriviality(const ScenarioSpec& spec) {
  NontrivialityVerdict v;
  for (uint32_t s = 0; s < spec.num_states() && !v.grants_admissible_action; ++s) {
    for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
      StateId sid{s};
      if (spec.adm.at(sid, a) && spec.decision.at(sid, a) == Disposition::Allow) {
        v.grants_admissible_action = true;
        v.allow_state = sid;
        v.allow_action = a;
        break;
      }
    }
  }
  for (const EnvRow& row : spec.env_transitions) {
    for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
      if (!spec.adm.at(row.target, a)) {
        v.env_can_break_admissibility = true;
        v.break_state = row.source;
        v.break_action = a;
        v.break_env = row.env_action;
        v.break_target = row.target;
        break;
      }
    }
    if (v.env_can_break_admissibility) break;
  }
  return v;
}

DecisionTable derive_decision_from_adm(const AdmissibilityTable& adm,
                                       const EscalatePredicate& escalate_on) {
  DecisionTable out(adm.num_states(), adm.actions());
  for (uint32_t s = 0; s < adm.num_states(); ++s) {
    for (ActionIndex a = 0; a < adm.actions().size(); ++a) {
      StateId sid{s};
      if (escalate_on && escalate_on(sid, a)) {
        out.set(sid, a, Disposition::Escalate);
      } else {
        out.set(sid, a, adm.at(sid, a) ? Disposition::Allow : Disposition::Refuse);
      }
    }
  }
  return out;
}

}  // namespace adb
