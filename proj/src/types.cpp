#include "types.hpp"

#include <algorithm>

namespace adb {

std::string_view to_string(LabelKind k) {
  switch (k) {
    case LabelKind::Agent: return "agent";
    case LabelKind::Env: return "env";
    case LabelKind::Dec: return "dec";
    case LabelKind::Exec: return "exec";
  }
  return "?";
}

std::string_view to_string(Disposition d) {
  switch (d) {
    case Disposition::Allow: return "allow";
    case Disposition::Refuse: return "refuse";
    case Disposition::Escalate: return "escalate";
  }
  return "?";
}

Disposition disposition_from_string(std::string_view s) {
  if (s == "allow") return Disposition::Allow;
  if (s == "refuse") return Disposition::Refuse;
  if (s == "escalate") return Disposition::Escalate;
  throw ValidationError("unknown disposition: " + std::string(s));
}

namespace {

template <class Cell>
std::vector<std::pair<StateId, ActionIndex>> missing_cells(
    const std::vector<Cell>& cells, uint32_t num_states, uint32_t num_actions, Cell unset) {
  std::vector<std::pair<StateId, ActionIndex>> out;
  for (uint32_t s = 0; s < num_states; ++s) {
    for (uint32_t a = 0; a < num_actions; ++a) {
      if (cells[size_t(s) * num_actions + a] == unset) {
        out.push_back({StateId{s}, a});
      }
    }
  }
  return out;
}

}  // namespace

AdmissibilityTable::AdmissibilityTable(uint32_t num_states, std::vector<std::string> actions)
    : num_states_(num_states),
      actions_(std::move(actions)),
      cells_(size_t(num_states) * actions_.size(), -1) {}

size_t AdmissibilityTable::cell(StateId s, ActionIndex a) const {
  if (s.value >= num_states_ || a >= actions_.size()) {
    throw ValidationError("admissibility lookup out of range");
  }
  return size_t(s.value) * actions_.size() + a;
}

void AdmissibilityTable::set(StateId s, ActionIndex a, bool admissible) {
  cells_[cell(s, a)] = admissible ? 1 : 0;
}

bool AdmissibilityTable::at(StateId s, ActionIndex a) const {
  int8_t v = cells_[cell(s, a)];
  if (v < 0) throw ValidationError("admissibility row unset");
  return v == 1;
}

bool AdmissibilityTable::is_set(StateId s, ActionIndex a) const {
  return cells_[cell(s, a)] >= 0;
}

std::vector<std::pair<StateId, ActionIndex>> AdmissibilityTable::missing_rows() const {
  return missing_cells<int8_t>(cells_, num_states_, uint32_t(actions_.size()), -1);
}

ActionIndex AdmissibilityTable::action_index(std::string_view name) const {
  for (size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i] == name) return ActionIndex(i);
  }
  throw ValidationError("unknown agent action: " + std::string(name));
}

DecisionTable::DecisionTable(uint32_t num_states, std::vector<std::string> actions)
    : num_states_(num_states),
      actions_(std::move(actions)),
      cells_(size_t(num_states) * actions_.size(), -1) {}

size_t DecisionTable::cell(StateId s, ActionIndex a) const {
  if (s.value >= num_states_ || a >= actions_.size()) {
    throw ValidationError("decision lookup out of range");
  }
  return size_t(s.value) * actions_.size() + a;
}

void DecisionTable::set(StateId s, ActionIndex a, Disposition d) {
  cells_[cell(s, a)] = int8_t(d);
}

Disposition DecisionTable::at(StateId s, ActionIndex a) const {
  int8_t v = cells_[cell(s, a)];
  if (v < 0) throw ValidationError("decision row unset");
  return Disposition(v);
}

bool DecisionTable::is_set(StateId s, ActionIndex a) const {
  return cells_[cell(s, a)] >= 0;
}

std::vector<std::pair<StateId, ActionIndex>> DecisionTable::missing_rows() const {
  return missing_cells<int8_t>(cells_, num_states_, uint32_t(actions_.size()), -1);
}

TransitionFunctionTable::TransitionFunctionTable(uint32_t num_states,
                                                 std::vector<std::string> actions)
    : num_states_(num_states),
      actions_(std::move(actions)),
      cells_(size_t(num_states) * actions_.size(), kUnset) {}

size_t TransitionFunctionTable::cell(StateId s, ActionIndex a) const {
  if (s.value >= num_states_ || a >= actions_.size()) {
    throw ValidationError("transition lookup out of range");
  }
  return size_t(s.value) * actions_.size() + a;
}

void TransitionFunctionTable::set(StateId s, ActionIndex a, StateId target) {
  if (target.value >= num_states_) throw ValidationError("transition target out of range");
  cells_[cell(s, a)] = target.value;
}

StateId TransitionFunctionTable::at(StateId s, ActionIndex a) const {
  uint32_t v = cells_[cell(s, a)];
  if (v == kUnset) throw ValidationError("transition row unset");
  return StateId{v};
}

bool TransitionFunctionTable::is_set(StateId s, ActionIndex a) const {
  return cells_[cell(s, a)] != kUnset;
}

std::vector<std::pair<StateId, ActionIndex>> TransitionFunctionTable::missing_rows() const {
  return missing_cells<uint32_t>(cells_, num_states_, uint32_t(actions_.size()), kUnset);
}

void TransitionTable::add(TransitionRow row) {
  for (const TransitionRow& r : rows_) {
    if (r.source == row.source && r.label == row.label) {
      if (r.target == row.target) return;  // idempotent
      throw ValidationError("nondeterministic rows for (" + std::to_string(row.source.value) +
                            ", " + row.label.render() + ")");
    }
  }
  rows_.push_back(std::move(row));
  sorted_ = false;
}

void TransitionTable::ensure_sorted() const {
  if (!sorted_) {
    std::sort(rows_.begin(), rows_.end());
    const_cast<TransitionTable*>(this)->sorted_ = true;
  }
}

bool TransitionTable::contains(const TransitionRow& row) const {
  ensure_sorted();
  return std::binary_search(rows_.begin(), rows_.end(), row);
}

std::vector<TransitionRow> TransitionTable::outgoing(StateId s) const {
  ensure_sorted();
  std::vector<TransitionRow> out;
  auto lo = std::lower_bound(rows_.begin(), rows_.end(), s,
                             [](const TransitionRow& r, StateId v) { return r.source < v; });
  for (auto it = lo; it != rows_.end() && it->source == s; ++it) out.push_back(*it);
  return out;
}

}  // namespace adb
