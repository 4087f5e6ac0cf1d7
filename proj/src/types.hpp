#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adb {

// Index into a finite state table. The same type serves scenario base states
// and the nodes of a constructed system: both are explicit, finite, and
// addressed positionally.
struct StateId {
  uint32_t value = 0;
  auto operator<=>(const StateId&) const = default;
};

using ActionIndex = uint32_t;

enum class LabelKind : uint8_t { Agent = 0, Env = 1, Dec = 2, Exec = 3 };

enum class Disposition : uint8_t { Allow = 0, Refuse = 1, Escalate = 2 };

std::string_view to_string(LabelKind k);
std::string_view to_string(Disposition d);
Disposition disposition_from_string(std::string_view s);

// One arc label.  `name` is the governed agent action for Agent/Dec/Exec
// kinds and the environment action for Env.  `text` is the full rendered
// symbol and disambiguates arcs sharing a name (refusals, escalations,
// supervisor resolutions).  `fires` marks the arcs that commit T(name);
// only those steps are admissibility-relevant.
struct ActionLabel {
  LabelKind kind = LabelKind::Agent;
  std::string name;
  std::string text;
  bool fires = false;

  auto operator<=>(const ActionLabel&) const = default;
  const std::string& render() const { return text; }
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolution of a request that is not in the pending set (Def. 3.9 precondition).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, int line, int column)
      : std::runtime_error(std::move(msg)), line(line), column(column) {}
  int line;
  int column;
};

// Total map (state, agent action) -> bool.  Cells start unset so loaders can
// report totality gaps before use.
class AdmissibilityTable {
 public:
  AdmissibilityTable() = default;
  AdmissibilityTable(uint32_t num_states, std::vector<std::string> actions);

  void set(StateId s, ActionIndex a, bool admissible);
  bool at(StateId s, ActionIndex a) const;
  bool is_set(StateId s, ActionIndex a) const;
  std::vector<std::pair<StateId, ActionIndex>> missing_rows() const;
  bool total() const { return missing_rows().empty(); }

  uint32_t num_states() const { return num_states_; }
  const std::vector<std::string>& actions() const { return actions_; }
  ActionIndex action_index(std::string_view name) const;

  bool operator==(const AdmissibilityTable&) const = default;

 private:
  size_t cell(StateId s, ActionIndex a) const;
  uint32_t num_states_ = 0;
  std::vector<std::string> actions_;
  std::vector<int8_t> cells_;  // -1 unset, else 0/1
};

// Total map (state, agent action) -> Disposition.
class DecisionTable {
 public:
  DecisionTable() = default;
  DecisionTable(uint32_t num_states, std::vector<std::string> actions);

  void set(StateId s, ActionIndex a, Disposition d);
  Disposition at(StateId s, ActionIndex a) const;
  bool is_set(StateId s, ActionIndex a) const;
  std::vector<std::pair<StateId, ActionIndex>> missing_rows() const;
  bool total() const { return missing_rows().empty(); }

  uint32_t num_states() const { return num_states_; }
  const std::vector<std::string>& actions() const { return actions_; }

  bool operator==(const DecisionTable&) const = default;

 private:
  size_t cell(StateId s, ActionIndex a) const;
  uint32_t num_states_ = 0;
  std::vector<std::string> actions_;
  std::vector<int8_t> cells_;  // -1 unset, else Disposition
};

// Total map (state, agent action) -> state.
class TransitionFunctionTable {
 public:
  TransitionFunctionTable() = default;
  TransitionFunctionTable(uint32_t num_states, std::vector<std::string> actions);

  void set(StateId s, ActionIndex a, StateId target);
  StateId at(StateId s, ActionIndex a) const;
  bool is_set(StateId s, ActionIndex a) const;
  std::vector<std::pair<StateId, ActionIndex>> missing_rows() const;
  bool total() const { return missing_rows().empty(); }

  uint32_t num_states() const { return num_states_; }
  const std::vector<std::string>& actions() const { return actions_; }

  bool operator==(const TransitionFunctionTable&) const = default;

 private:
  size_t cell(StateId s, ActionIndex a) const;
  static constexpr uint32_t kUnset = UINT32_MAX;
  uint32_t num_states_ = 0;
  std::vector<std::string> actions_;
  std::vector<uint32_t> cells_;
};

struct TransitionRow {
  StateId source;
  ActionLabel label;
  StateId target;
  auto operator<=>(const TransitionRow&) const = default;
};

// Relational transition table; at most one target per (source, label).
// Rows are kept sorted by (source, label kind, label name, label text,
// target), which fixes the enumeration order.
class TransitionTable {
 public:
  void add(TransitionRow row);  // throws ValidationError on a (source,label) clash
  bool contains(const TransitionRow& row) const;
  // Outgoing rows of `s`, in deterministic order.
  std::vector<TransitionRow> outgoing(StateId s) const;
  const std::vector<TransitionRow>& rows() const { return rows_; }
  size_t size() const { return rows_.size(); }

 private:
  bool sorted_ = true;
  void ensure_sorted() const;
  mutable std::vector<TransitionRow> rows_;
};

// Alternating sequence s0 a1 s1 ... an sn; a lone initial state is a valid
// zero-step trace.
struct Trace {
  std::vector<StateId> states;   // size n+1
  std::vector<ActionLabel> labels;  // size n

  size_t length() const { return labels.size(); }
  void push(const ActionLabel& label, StateId target) {
    labels.push_back(label);
    states.push_back(target);
  }
  void pop() {
    labels.pop_back();
    states.pop_back();
  }
  bool operator==(const Trace&) const = default;
};

}  // namespace adb
