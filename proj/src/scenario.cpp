#include "scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "kernel.hpp"

namespace adb {

DecisionCube::DecisionCube(uint32_t num_states, uint32_t num_actions, uint32_t num_values)
    : num_states_(num_states),
      num_actions_(num_actions),
      num_values_(num_values),
      cells_(size_t(num_states) * num_actions * num_values, -1) {}

void DecisionCube::set(StateId s, ActionIndex a, uint32_t value, Disposition d) {
  if (s.value >= num_states_ || a >= num_actions_ || value >= num_values_) {
    throw ValidationError("decision-cube cell out of range");
  }
  cells_[(size_t(s.value) * num_actions_ + a) * num_values_ + value] = int8_t(d);
}

Disposition DecisionCube::at(StateId s, ActionIndex a, uint32_t value) const {
  if (s.value >= num_states_ || a >= num_actions_ || value >= num_values_) {
    throw ValidationError("decision-cube cell out of range");
  }
  int8_t v = cells_[(size_t(s.value) * num_actions_ + a) * num_values_ + value];
  if (v < 0) throw ValidationError("decision-cube cell unset");
  return Disposition(v);
}

bool DecisionCube::is_set(StateId s, ActionIndex a, uint32_t value) const {
  return cells_[(size_t(s.value) * num_actions_ + a) * num_values_ + value] >= 0;
}

std::vector<std::tuple<StateId, ActionIndex, uint32_t>> DecisionCube::missing_rows() const {
  std::vector<std::tuple<StateId, ActionIndex, uint32_t>> out;
  for (uint32_t s = 0; s < num_states_; ++s) {
    for (uint32_t a = 0; a < num_actions_; ++a) {
      for (uint32_t v = 0; v < num_values_; ++v) {
        if (cells_[(size_t(s) * num_actions_ + a) * num_values_ + v] < 0) {
          out.push_back({StateId{s}, a, v});
        }
      }
    }
  }
  return out;
}

StateId ScenarioSpec::state_by_name(std::string_view name) const {
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i].name == name) return StateId{uint32_t(i)};
  }
  throw ValidationError("unknown state: " + std::string(name));
}

ActionIndex ScenarioSpec::agent_index(std::string_view name) const {
  for (size_t i = 0; i < agent_actions.size(); ++i) {
    if (agent_actions[i] == name) return ActionIndex(i);
  }
  throw ValidationError("unknown agent action: " + std::string(name));
}

uint32_t ScenarioSpec::env_index(std::string_view name) const {
  for (size_t i = 0; i < env_actions.size(); ++i) {
    if (env_actions[i] == name) return uint32_t(i);
  }
  throw ValidationError("unknown env action: " + std::string(name));
}

std::vector<EnvRow> ScenarioSpec::env_from(StateId s) const {
  std::vector<EnvRow> out;
  for (const EnvRow& row : env_transitions) {
    if (row.source == s) out.push_back(row);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool ScenarioSpec::env_touches_attrs(uint32_t env_action,
                                     const std::vector<uint32_t>& attr_set) const {
  for (const EnvRow& row : env_transitions) {
    if (row.env_action != env_action) continue;
    const auto& src = states[row.source.value].attr_values;
    const auto& dst = states[row.target.value].attr_values;
    for (uint32_t attr : attr_set) {
      if (src.at(attr) != dst.at(attr)) return true;
    }
  }
  return false;
}

std::vector<uint32_t> ScenarioSpec::derived_adm_dependency() const {
  std::vector<uint32_t> dep;
  for (uint32_t attr = 0; attr < attrs.size(); ++attr) {
    bool reads = false;
    for (size_t i = 0; i < states.size() && !reads; ++i) {
      for (size_t j = i + 1; j < states.size() && !reads; ++j) {
        // states differing in exactly this attribute
        bool only_this = states[i].attr_values[attr] != states[j].attr_values[attr];
        for (uint32_t other = 0; only_this && other < attrs.size(); ++other) {
          if (other != attr && states[i].attr_values[other] != states[j].attr_values[other]) {
            only_this = false;
          }
        }
        if (!only_this) continue;
        for (ActionIndex a = 0; a < agent_actions.size(); ++a) {
          if (adm.at(StateId{uint32_t(i)}, a) != adm.at(StateId{uint32_t(j)}, a)) {
            reads = true;
            break;
          }
        }
      }
    }
    if (reads) dep.push_back(attr);
  }
  return dep;
}

namespace {

std::string quote(std::string_view s) { return "'" + std::string(s) + "'"; }

void require(bool cond, std::vector<std::string>& problems, std::string msg) {
  if (!cond) problems.push_back(std::move(msg));
}

}  // namespace

void validate_scenario(const ScenarioSpec& spec) {
  std::vector<std::string> problems;

  require(!spec.name.empty(), problems, "scenario has no name");
  require(!spec.states.empty(), problems, "scenario declares no states");
  require(!spec.agent_actions.empty(), problems, "scenario declares no agent actions");

  std::set<std::string> attr_names;
  for (const AttrDecl& a : spec.attrs) {
    require(attr_names.insert(a.name).second, problems, "duplicate attribute " + quote(a.name));
    require(!a.values.empty(), problems, "attribute " + quote(a.name) + " has an empty domain");
  }

  std::set<std::string> state_names;
  std::set<std::vector<uint32_t>> tuples;
  for (const ScenarioState& s : spec.states) {
    require(state_names.insert(s.name).second, problems, "duplicate state " + quote(s.name));
    require(s.attr_values.size() == spec.attrs.size(), problems,
            "state " + quote(s.name) + " does not assign every attribute");
    for (size_t i = 0; i < s.attr_values.size() && i < spec.attrs.size(); ++i) {
      require(s.attr_values[i] < spec.attrs[i].values.size(), problems,
              "state " + quote(s.name) + " has out-of-domain value for " +
                  quote(spec.attrs[i].name));
    }
    if (!spec.attrs.empty() && s.attr_values.size() == spec.attrs.size()) {
      require(tuples.insert(s.attr_values).second, problems,
              "state " + quote(s.name) + " duplicates another state's attribute values");
    }
  }

  std::set<std::string> agent_set(spec.agent_actions.begin(), spec.agent_actions.end());
  std::set<std::string> env_set(spec.env_actions.begin(), spec.env_actions.end());
  require(agent_set.size() == spec.agent_actions.size(), problems, "duplicate agent action");
  require(env_set.size() == spec.env_actions.size(), problems, "duplicate env action");
  for (const std::string& a : spec.agent_actions) {
    require(!env_set.count(a), problems,
            "action " + quote(a) + " is both an agent action and an env action");
  }

  require(spec.initial.value < spec.states.size(), problems, "initial state undeclared");

  for (const EnvRow& row : spec.env_transitions) {
    require(row.source.value < spec.states.size() && row.target.value < spec.states.size() &&
                row.env_action < spec.env_actions.size(),
            problems, "env transition references undeclared state or action");
  }

  auto check_table = [&](const auto& table, std::string_view which) {
    if (table.num_states() != spec.states.size() || table.actions() != spec.agent_actions) {
      problems.push_back(std::string(which) + " table domain does not match the scenario");
      return;
    }
    for (auto [s, a] : table.missing_rows()) {
      problems.push_back("missing " + std::string(which) + " row (" + spec.state_name(s) +
                         ", " + spec.agent_actions[a] + ")");
    }
  };
  check_table(spec.adm, "adm");
  check_table(spec.decision, "dec");
  check_table(spec.transition, "trans");

  require(bool(spec.external) == bool(spec.decision_ext), problems,
          "external block and decx rows must come together");
  if (spec.external) {
    const ExternalStateSpec& ext = *spec.external;
    require(!ext.values.empty(), problems, "external store has no values");
    require(ext.read.size() == spec.states.size(), problems,
            "external read map is not total over states");
    for (uint32_t v : ext.read) {
      require(v < ext.values.size(), problems, "external read maps to an undeclared value");
    }
    for (const auto& [env_action, updates] : ext.effects) {
      require(env_action < spec.env_actions.size(), problems,
              "external effect names an undeclared env action");
      for (const auto& [from, to] : updates) {
        require(from < ext.values.size() && to < ext.values.size(), problems,
                "external effect references an undeclared value");
      }
    }
    // Coupling: the store view commutes with every declared env transition.
    for (const EnvRow& row : spec.env_transitions) {
      if (row.source.value >= spec.states.size() || row.target.value >= spec.states.size() ||
          ext.read.size() != spec.states.size()) {
        continue;
      }
      uint32_t before = ext.read[row.source.value];
      uint32_t expected = before;
      auto eff = ext.effects.find(row.env_action);
      if (eff != ext.effects.end()) {
        auto up = eff->second.find(before);
        if (up == eff->second.end()) {
          problems.push_back("external effect for " + quote(spec.env_actions[row.env_action]) +
                             " undefined at value " + quote(ext.values[before]));
          continue;
        }
        expected = up->second;
      }
      if (ext.read[row.target.value] != expected) {
        problems.push_back("external store decouples from env transition " +
                           quote(spec.env_actions[row.env_action]) + " out of " +
                           quote(spec.state_name(row.source)));
      }
    }
    if (spec.decision_ext) {
      for (auto [s, a, v] : spec.decision_ext->missing_rows()) {
        problems.push_back("missing decx row (" + spec.state_name(s) + ", " +
                           spec.agent_actions[a] + ", " + ext.values[v] + ")");
      }
    }
  }

  if (spec.partition) {
    const PartitionDescriptor& p = *spec.partition;
    std::vector<bool> seen(spec.attrs.size(), false);
    for (uint32_t a : p.local_attrs) {
      if (a >= spec.attrs.size() || seen[a]) {
        problems.push_back("partition local attrs are out of range or overlap");
      } else {
        seen[a] = true;
      }
    }
    for (uint32_t a : p.global_attrs) {
      if (a >= spec.attrs.size() || seen[a]) {
        problems.push_back("partition global attrs are out of range or overlap local attrs");
      } else {
        seen[a] = true;
      }
    }
    for (bool b : seen) {
      require(b, problems, "partition does not cover every attribute");
    }
    for (uint32_t a : p.adm_dependency) {
      require(a < spec.attrs.size(), problems, "adm_dependency attr out of range");
    }
    for (uint32_t attr : spec.derived_adm_dependency()) {
      require(std::find(p.adm_dependency.begin(), p.adm_dependency.end(), attr) !=
                  p.adm_dependency.end(),
              problems,
              "adm_dependency omits attribute " + quote(spec.attrs[attr].name) +
                  " although the adm table reads it");
    }
  }

  for (auto [s, a] : spec.escalate_rows) {
    require(s.value < spec.states.size() && a < spec.agent_actions.size(), problems,
            "escalate row references undeclared state or action");
  }

  if (!problems.empty()) {
    std::string msg = "scenario " + quote(spec.name) + " is ill-formed:";
    for (const std::string& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
}

bool scenario_equal(const ScenarioSpec& a, const ScenarioSpec& b) {
  auto sorted = [](std::vector<EnvRow> rows) {
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  auto sorted_rows = [](std::vector<std::pair<StateId, ActionIndex>> rows) {
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  return a.name == b.name && a.attrs == b.attrs && a.states == b.states &&
         a.agent_actions == b.agent_actions && a.env_actions == b.env_actions &&
         sorted(a.env_transitions) == sorted(b.env_transitions) && a.adm == b.adm &&
         a.decision == b.decision && a.decision_derived == b.decision_derived &&
         sorted_rows(a.escalate_rows) == sorted_rows(b.escalate_rows) &&
         a.transition == b.transition && a.initial == b.initial && a.external == b.external &&
         a.decision_ext == b.decision_ext && a.partition == b.partition;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::vector<Token> toks;
    size_t i = 0;
    while (i < raw.size()) {
      if (raw[i] == '#') break;
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) &&
             raw[i] != '#') {
        ++i;
      }
      toks.push_back({raw.substr(start, i - start), lineno, int(start) + 1});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

[[noreturn]] void fail(const Token& tok, const std::string& msg) {
  throw ParseError(msg + " (line " + std::to_string(tok.line) + ", column " +
                       std::to_string(tok.column) + ")",
                   tok.line, tok.column);
}

struct RawScenario {
  ScenarioSpec spec;
  bool product_states = false;
  bool explicit_decision = false;
  std::vector<std::vector<Token>> adm_rows, dec_rows, trans_rows, envtrans_rows, decx_rows,
      escalate_rows, state_rows, read_rows, effect_rows;
  std::optional<Token> initial_tok;
  std::vector<Token> ext_values;
  std::optional<std::vector<Token>> part_local, part_global, part_admdep;
};

uint32_t attr_value_index(const AttrDecl& attr, const Token& tok) {
  for (size_t i = 0; i < attr.values.size(); ++i) {
    if (attr.values[i] == tok.text) return uint32_t(i);
  }
  fail(tok, "value " + quote(tok.text) + " is not in the domain of " + quote(attr.name));
}

uint32_t find_attr(const ScenarioSpec& spec, const Token& tok) {
  for (size_t i = 0; i < spec.attrs.size(); ++i) {
    if (spec.attrs[i].name == tok.text) return uint32_t(i);
  }
  fail(tok, "unknown attribute " + quote(tok.text));
}

StateId find_state(const ScenarioSpec& spec, const Token& tok) {
  for (size_t i = 0; i < spec.states.size(); ++i) {
    if (spec.states[i].name == tok.text) return StateId{uint32_t(i)};
  }
  fail(tok, "unknown state " + quote(tok.text));
}

ActionIndex find_agent(const ScenarioSpec& spec, const Token& tok) {
  for (size_t i = 0; i < spec.agent_actions.size(); ++i) {
    if (spec.agent_actions[i] == tok.text) return ActionIndex(i);
  }
  fail(tok, "unknown agent action " + quote(tok.text));
}

uint32_t find_env(const ScenarioSpec& spec, const Token& tok) {
  for (size_t i = 0; i < spec.env_actions.size(); ++i) {
    if (spec.env_actions[i] == tok.text) return uint32_t(i);
  }
  fail(tok, "unknown env action " + quote(tok.text));
}

uint32_t find_ext_value(const ExternalStateSpec& ext, const Token& tok) {
  for (size_t i = 0; i < ext.values.size(); ++i) {
    if (ext.values[i] == tok.text) return uint32_t(i);
  }
  fail(tok, "unknown external value " + quote(tok.text));
}

bool parse_bool(const Token& tok) {
  if (tok.text == "true") return true;
  if (tok.text == "false") return false;
  fail(tok, "expected true or false, got " + quote(tok.text));
}

Disposition parse_disposition(const Token& tok) {
  if (tok.text == "allow") return Disposition::Allow;
  if (tok.text == "refuse") return Disposition::Refuse;
  if (tok.text == "escalate") return Disposition::Escalate;
  fail(tok, "expected allow/refuse/escalate, got " + quote(tok.text));
}

void expect_arity(const std::vector<Token>& line, size_t n, const std::string& usage) {
  if (line.size() != n) fail(line[0], "expected: " + usage);
}

}  // namespace

ScenarioSpec load_scenario_text(const std::string& text, const std::string& origin) {
  RawScenario raw;
  ScenarioSpec& spec = raw.spec;

  for (const auto& line : tokenize(text)) {
    const std::string& kw = line[0].text;
    if (kw == "scenario") {
      expect_arity(line, 2, "scenario <name>");
      spec.name = line[1].text;
    } else if (kw == "attr") {
      if (line.size() < 3) fail(line[0], "expected: attr <name> <value>+");
      AttrDecl attr{line[1].text, {}};
      for (size_t i = 2; i < line.size(); ++i) attr.values.push_back(line[i].text);
      spec.attrs.push_back(std::move(attr));
    } else if (kw == "state") {
      raw.state_rows.push_back(line);
    } else if (kw == "states") {
      expect_arity(line, 2, "states product");
      if (line[1].text != "product") fail(line[1], "only 'states product' is supported");
      raw.product_states = true;
    } else if (kw == "initial") {
      expect_arity(line, 2, "initial <state>");
      raw.initial_tok = line[1];
    } else if (kw == "agent") {
      for (size_t i = 1; i < line.size(); ++i) spec.agent_actions.push_back(line[i].text);
    } else if (kw == "env") {
      for (size_t i = 1; i < line.size(); ++i) spec.env_actions.push_back(line[i].text);
    } else if (kw == "adm") {
      expect_arity(line, 4, "adm <state> <action> true|false");
      raw.adm_rows.push_back(line);
    } else if (kw == "decision") {
      expect_arity(line, 2, "decision derived|explicit");
      if (line[1].text == "derived") {
        raw.explicit_decision = false;
      } else if (line[1].text == "explicit") {
        raw.explicit_decision = true;
      } else {
        fail(line[1], "expected derived or explicit");
      }
    } else if (kw == "escalate") {
      expect_arity(line, 3, "escalate <state> <action>");
      raw.escalate_rows.push_back(line);
    } else if (kw == "dec") {
      expect_arity(line, 4, "dec <state> <action> allow|refuse|escalate");
      raw.dec_rows.push_back(line);
      raw.explicit_decision = true;
    } else if (kw == "trans") {
      expect_arity(line, 4, "trans <state> <action> <state>");
      raw.trans_rows.push_back(line);
    } else if (kw == "envtrans") {
      expect_arity(line, 4, "envtrans <state> <env-action> <state>");
      raw.envtrans_rows.push_back(line);
    } else if (kw == "external") {
      if (line.size() >= 2 && line[1].text == "values") {
        for (size_t i = 2; i < line.size(); ++i) raw.ext_values.push_back(line[i]);
      } else if (line.size() == 4 && line[1].text == "read") {
        raw.read_rows.push_back(line);
      } else if (line.size() == 5 && line[1].text == "effect") {
        raw.effect_rows.push_back(line);
      } else {
        fail(line[0], "expected: external values|read|effect ...");
      }
    } else if (kw == "decx") {
      expect_arity(line, 5, "decx <state> <action> <value> allow|refuse|escalate");
      raw.decx_rows.push_back(line);
    } else if (kw == "partition") {
      if (line.size() < 2) fail(line[0], "expected: partition local|global|admdep <attr>*");
      std::vector<Token> attrs(line.begin() + 2, line.end());
      if (line[1].text == "local") {
        raw.part_local = attrs;
      } else if (line[1].text == "global") {
        raw.part_global = attrs;
      } else if (line[1].text == "admdep") {
        raw.part_admdep = attrs;
      } else {
        fail(line[1], "expected local, global, or admdep");
      }
    } else {
      fail(line[0], "unknown keyword " + quote(kw) + " in " + origin);
    }
  }

  // States: explicit rows or the full attribute product.
  if (raw.product_states) {
    if (spec.attrs.empty()) throw ValidationError("states product needs attributes");
    std::vector<uint32_t> tuple(spec.attrs.size(), 0);
    bool done = false;
    while (!done) {
      std::string name;
      for (size_t i = 0; i < spec.attrs.size(); ++i) {
        if (i) name += ",";
        name += spec.attrs[i].name + "=" + spec.attrs[i].values[tuple[i]];
      }
      spec.states.push_back({name, tuple});
      size_t i = spec.attrs.size();
      while (i > 0) {
        --i;
        if (++tuple[i] < spec.attrs[i].values.size()) break;
        tuple[i] = 0;
        if (i == 0) done = true;
      }
      if (spec.attrs.empty()) done = true;
    }
  }
  for (const auto& line : raw.state_rows) {
    if (line.size() < 2) fail(line[0], "expected: state <name> <attr>=<value>*");
    ScenarioState st{line[1].text, std::vector<uint32_t>(spec.attrs.size(), UINT32_MAX)};
    for (size_t i = 2; i < line.size(); ++i) {
      const std::string& t = line[i].text;
      size_t eq = t.find('=');
      if (eq == std::string::npos) fail(line[i], "expected <attr>=<value>");
      Token attr_tok{t.substr(0, eq), line[i].line, line[i].column};
      Token val_tok{t.substr(eq + 1), line[i].line, line[i].column + int(eq) + 1};
      uint32_t attr = find_attr(spec, attr_tok);
      st.attr_values[attr] = attr_value_index(spec.attrs[attr], val_tok);
    }
    for (size_t i = 0; i < st.attr_values.size(); ++i) {
      if (st.attr_values[i] == UINT32_MAX) {
        fail(line[1], "state " + quote(st.name) + " does not assign attribute " +
                          quote(spec.attrs[i].name));
      }
    }
    spec.states.push_back(std::move(st));
  }

  if (spec.states.empty()) throw ValidationError("scenario declares no states");
  if (!raw.initial_tok) throw ValidationError("scenario declares no initial state");
  spec.initial = find_state(spec, *raw.initial_tok);

  uint32_t n = spec.num_states();
  spec.adm = AdmissibilityTable(n, spec.agent_actions);
  spec.transition = TransitionFunctionTable(n, spec.agent_actions);

  for (const auto& line : raw.adm_rows) {
    spec.adm.set(find_state(spec, line[1]), find_agent(spec, line[2]), parse_bool(line[3]));
  }
  for (const auto& line : raw.trans_rows) {
    spec.transition.set(find_state(spec, line[1]), find_agent(spec, line[2]),
                        find_state(spec, line[3]));
  }
  for (const auto& line : raw.envtrans_rows) {
    spec.env_transitions.push_back(
        {find_state(spec, line[1]), find_env(spec, line[2]), find_state(spec, line[3])});
  }

  if (!raw.ext_values.empty() || !raw.read_rows.empty() || !raw.effect_rows.empty() ||
      !raw.decx_rows.empty()) {
    ExternalStateSpec ext;
    for (const Token& t : raw.ext_values) ext.values.push_back(t.text);
    ext.read.assign(n, UINT32_MAX);
    for (const auto& line : raw.read_rows) {
      ext.read[find_state(spec, line[2]).value] = find_ext_value(ext, line[3]);
    }
    for (uint32_t i = 0; i < n; ++i) {
      if (ext.read[i] == UINT32_MAX) {
        throw ValidationError("external read is missing state " + spec.states[i].name);
      }
    }
    for (const auto& line : raw.effect_rows) {
      ext.effects[find_env(spec, line[2])][find_ext_value(ext, line[3])] =
          find_ext_value(ext, line[4]);
    }
    DecisionCube cube(n, uint32_t(spec.agent_actions.size()), uint32_t(ext.values.size()));
    for (const auto& line : raw.decx_rows) {
      cube.set(find_state(spec, line[1]), find_agent(spec, line[2]),
               find_ext_value(ext, line[3]), parse_disposition(line[4]));
    }
    spec.external = std::move(ext);
    spec.decision_ext = std::move(cube);
  }

  for (const auto& line : raw.escalate_rows) {
    spec.escalate_rows.push_back({find_state(spec, line[1]), find_agent(spec, line[2])});
  }

  // Decision table: composed from the cube, explicit rows, or derived from adm.
  if (spec.decision_ext) {
    if (raw.explicit_decision || !raw.dec_rows.empty()) {
      throw ValidationError("decx rows and dec rows cannot be mixed");
    }
    spec.decision = DecisionTable(n, spec.agent_actions);
    spec.decision_derived = false;
    for (auto [s, a, v] : spec.decision_ext->missing_rows()) {
      throw ValidationError("missing decx row (" + spec.state_name(s) + ", " +
                            spec.agent_actions[a] + ", " + spec.external->values[v] + ")");
    }
    for (uint32_t s = 0; s < n; ++s) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        spec.decision.set(StateId{s}, a,
                          spec.decision_ext->at(StateId{s}, a, spec.external->read[s]));
      }
    }
  } else if (raw.explicit_decision) {
    spec.decision = DecisionTable(n, spec.agent_actions);
    spec.decision_derived = false;
    if (!raw.escalate_rows.empty()) {
      throw ValidationError("escalate rows require the derived decision mode");
    }
    for (const auto& line : raw.dec_rows) {
      spec.decision.set(find_state(spec, line[1]), find_agent(spec, line[2]),
                        parse_disposition(line[3]));
    }
  } else {
    spec.decision_derived = true;
    std::set<std::pair<uint32_t, ActionIndex>> esc;
    for (auto [s, a] : spec.escalate_rows) esc.insert({s.value, a});
    for (auto [s, a] : spec.adm.missing_rows()) {
      throw ValidationError("missing adm row (" + spec.state_name(s) + ", " +
                            spec.agent_actions[a] + "); cannot derive the decision table");
    }
    spec.decision = derive_decision_from_adm(
        spec.adm, [&](StateId s, ActionIndex a) { return esc.count({s.value, a}) > 0; });
  }

  if (raw.part_local || raw.part_global || raw.part_admdep) {
    PartitionDescriptor part;
    auto fill = [&](const std::optional<std::vector<Token>>& toks, std::vector<uint32_t>& out) {
      if (!toks) return;
      for (const Token& t : *toks) out.push_back(find_attr(spec, t));
    };
    fill(raw.part_local, part.local_attrs);
    fill(raw.part_global, part.global_attrs);
    fill(raw.part_admdep, part.adm_dependency);
    spec.partition = std::move(part);
  }

  validate_scenario(spec);
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scenario_text(buf.str(), path);
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "scenario " << spec.name << "\n";
  for (const AttrDecl& a : spec.attrs) {
    out << "attr " << a.name;
    for (const std::string& v : a.values) out << " " << v;
    out << "\n";
  }
  for (const ScenarioState& s : spec.states) {
    out << "state " << s.name;
    for (size_t i = 0; i < s.attr_values.size(); ++i) {
      out << " " << spec.attrs[i].name << "=" << spec.attrs[i].values[s.attr_values[i]];
    }
    out << "\n";
  }
  out << "initial " << spec.state_name(spec.initial) << "\n";
  out << "agent";
  for (const std::string& a : spec.agent_actions) out << " " << a;
  out << "\n";
  if (!spec.env_actions.empty()) {
    out << "env";
    for (const std::string& e : spec.env_actions) out << " " << e;
    out << "\n";
  }
  for (uint32_t s = 0; s < spec.num_states(); ++s) {
    for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
      out << "adm " << spec.state_name(StateId{s}) << " " << spec.agent_actions[a] << " "
          << (spec.adm.at(StateId{s}, a) ? "true" : "false") << "\n";
    }
  }
  if (spec.decision_ext) {
    // decision carried by the decx cube
  } else if (spec.decision_derived) {
    out << "decision derived\n";
    auto rows = spec.escalate_rows;
    std::sort(rows.begin(), rows.end());
    for (auto [s, a] : rows) {
      out << "escalate " << spec.state_name(s) << " " << spec.agent_actions[a] << "\n";
    }
  } else {
    out << "decision explicit\n";
    for (uint32_t s = 0; s < spec.num_states(); ++s) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        out << "dec " << spec.state_name(StateId{s}) << " " << spec.agent_actions[a] << " "
            << to_string(spec.decision.at(StateId{s}, a)) << "\n";
      }
    }
  }
  for (uint32_t s = 0; s < spec.num_states(); ++s) {
    for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
      out << "trans " << spec.state_name(StateId{s}) << " " << spec.agent_actions[a] << " "
          << spec.state_name(spec.transition.at(StateId{s}, a)) << "\n";
    }
  }
  auto env_rows = spec.env_transitions;
  std::sort(env_rows.begin(), env_rows.end(), [](const EnvRow& a, const EnvRow& b) {
    return std::tie(a.source.value, a.env_action, a.target.value) <
           std::tie(b.source.value, b.env_action, b.target.value);
  });
  for (const EnvRow& row : env_rows) {
    out << "envtrans " << spec.state_name(row.source) << " " << spec.env_actions[row.env_action]
        << " " << spec.state_name(row.target) << "\n";
  }
  if (spec.external) {
    const ExternalStateSpec& ext = *spec.external;
    out << "external values";
    for (const std::string& v : ext.values) out << " " << v;
    out << "\n";
    for (uint32_t s = 0; s < spec.num_states(); ++s) {
      out << "external read " << spec.state_name(StateId{s}) << " " << ext.values[ext.read[s]]
          << "\n";
    }
    for (const auto& [env_action, updates] : ext.effects) {
      for (const auto& [from, to] : updates) {
        out << "external effect " << spec.env_actions[env_action] << " " << ext.values[from]
            << " " << ext.values[to] << "\n";
      }
    }
    for (uint32_t s = 0; s < spec.num_states(); ++s) {
      for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
        for (uint32_t v = 0; v < ext.values.size(); ++v) {
          out << "decx " << spec.state_name(StateId{s}) << " " << spec.agent_actions[a] << " "
              << ext.values[v] << " " << to_string(spec.decision_ext->at(StateId{s}, a, v))
              << "\n";
        }
      }
    }
  }
  if (spec.partition) {
    auto emit = [&](std::string_view which, const std::vector<uint32_t>& attrs) {
      out << "partition " << which;
      for (uint32_t a : attrs) out << " " << spec.attrs[a].name;
      out << "\n";
    };
    emit("local", spec.partition->local_attrs);
    emit("global", spec.partition->global_attrs);
    emit("admdep", spec.partition->adm_dependency);
  }
  return out.str();
}

ScenarioSpec with_local_only_adm(const ScenarioSpec& spec) {
  if (!spec.partition) throw ValidationError("scenario has no partition descriptor");
  ScenarioSpec out = spec;
  out.name = spec.name + "+local-adm";

  // Project every state's global attributes down to the initial state's
  // values and read admissibility there.
  const std::vector<uint32_t>& init = spec.states[spec.initial.value].attr_values;
  std::set<uint32_t> globals(spec.partition->global_attrs.begin(),
                             spec.partition->global_attrs.end());
  out.adm = AdmissibilityTable(spec.num_states(), spec.agent_actions);
  for (uint32_t s = 0; s < spec.num_states(); ++s) {
    std::vector<uint32_t> projected = spec.states[s].attr_values;
    for (uint32_t g : globals) projected[g] = init[g];
    StateId source = spec.initial;
    bool found = false;
    for (uint32_t t = 0; t < spec.num_states(); ++t) {
      if (spec.states[t].attr_values == projected) {
        source = StateId{t};
        found = true;
        break;
      }
    }
    if (!found) {
      throw ValidationError("cannot localize adm: no state matches the projection of " +
                            spec.states[s].name);
    }
    for (ActionIndex a = 0; a < spec.agent_actions.size(); ++a) {
      out.adm.set(StateId{s}, a, spec.adm.at(source, a));
    }
  }
  out.decision = derive_decision_from_adm(out.adm, nullptr);
  out.decision_derived = true;
  out.escalate_rows.clear();
  out.external.reset();
  out.decision_ext.reset();
  out.partition->adm_dependency = out.derived_adm_dependency();
  validate_scenario(out);
  return out;
}

// ---------------------------------------------------------------------------
// Builtins. Kept in the file format so every construction goes through the
// loader; the same texts are shipped under scenarios/.

namespace {

const char kFilelock[] = R"(# Shared-file writes: admissible while the file is unlocked and quota remains.
scenario filelock
attr locked no yes
attr quota 0 1 2
state u0 locked=no quota=0
state u1 locked=no quota=1
state u2 locked=no quota=2
state l0 locked=yes quota=0
state l1 locked=yes quota=1
state l2 locked=yes quota=2
initial u0
agent write(f)
env lock(f) unlock(f) reclaim
adm u0 write(f) true
adm u1 write(f) true
adm u2 write(f) false
adm l0 write(f) false
adm l1 write(f) false
adm l2 write(f) false
decision derived
trans u0 write(f) u1
trans u1 write(f) u2
trans u2 write(f) u2
trans l0 write(f) l1
trans l1 write(f) l2
trans l2 write(f) l2
envtrans u0 lock(f) l0
envtrans u1 lock(f) l1
envtrans u2 lock(f) l2
envtrans l0 unlock(f) u0
envtrans l1 unlock(f) u1
envtrans l2 unlock(f) u2
envtrans u1 reclaim u0
envtrans u2 reclaim u0
envtrans l1 reclaim l0
envtrans l2 reclaim l0
partition local
partition global locked quota
partition admdep locked quota
)";

const char kFilelockEscalate[] = R"(# Filelock with quota-1 requests parked for supervisor review.
scenario filelock-escalate
attr locked no yes
attr quota 0 1 2
state u0 locked=no quota=0
state u1 locked=no quota=1
state u2 locked=no quota=2
state l0 locked=yes quota=0
state l1 locked=yes quota=1
state l2 locked=yes quota=2
initial u0
agent write(f)
env lock(f) unlock(f) reclaim
adm u0 write(f) true
adm u1 write(f) true
adm u2 write(f) false
adm l0 write(f) false
adm l1 write(f) false
adm l2 write(f) false
decision derived
escalate u1 write(f)
escalate l1 write(f)
trans u0 write(f) u1
trans u1 write(f) u2
trans u2 write(f) u2
trans l0 write(f) l1
trans l1 write(f) l2
trans l2 write(f) l2
envtrans u0 lock(f) l0
envtrans u1 lock(f) l1
envtrans u2 lock(f) l2
envtrans l0 unlock(f) u0
envtrans l1 unlock(f) u1
envtrans l2 unlock(f) u2
envtrans u1 reclaim u0
envtrans u2 reclaim u0
envtrans l1 reclaim l0
envtrans l2 reclaim l0
partition local
partition global locked quota
partition admdep locked quota
)";

const char kRbacRevoke[] = R"(# Role check decoupled from the write it authorizes; revocation races it.
scenario rbac-revoke
attr role editor none
attr doc v0 v1
state e0 role=editor doc=v0
state e1 role=editor doc=v1
state n0 role=none doc=v0
state n1 role=none doc=v1
initial e0
agent write(r)
env revoke regrant
adm e0 write(r) true
adm e1 write(r) true
adm n0 write(r) false
adm n1 write(r) false
decision derived
trans e0 write(r) e1
trans e1 write(r) e1
trans n0 write(r) n1
trans n1 write(r) n1
envtrans e0 revoke n0
envtrans e1 revoke n1
envtrans n0 regrant e0
envtrans n1 regrant e1
partition local
partition global role doc
partition admdep role
)";

const char kOpaQuota[] = R"(# Policy-engine quota check evaluated apart from the API write it admits.
scenario opa-quota
attr used 0 1 2
state q0 used=0
state q1 used=1
state q2 used=2
initial q1
agent write
env consume reset
adm q0 write true
adm q1 write true
adm q2 write false
decision derived
trans q0 write q1
trans q1 write q2
trans q2 write q2
envtrans q0 consume q1
envtrans q1 consume q2
envtrans q1 reset q0
envtrans q2 reset q0
partition local
partition global used
partition admdep used
)";

const char kOpaQuotaStore[] = R"(# Quota pipeline where the decision reads a coupled external store.
scenario opa-quota-store
attr used 0 1 2
state q0 used=0
state q1 used=1
state q2 used=2
initial q1
agent write
env consume reset
adm q0 write true
adm q1 write true
adm q2 write false
trans q0 write q1
trans q1 write q2
trans q2 write q2
envtrans q0 consume q1
envtrans q1 consume q2
envtrans q1 reset q0
envtrans q2 reset q0
external values 0 1 2
external read q0 0
external read q1 1
external read q2 2
external effect consume 0 1
external effect consume 1 2
external effect reset 1 0
external effect reset 2 0
decx q0 write 0 allow
decx q0 write 1 allow
decx q0 write 2 refuse
decx q1 write 0 allow
decx q1 write 1 allow
decx q1 write 2 refuse
decx q2 write 0 allow
decx q2 write 1 allow
decx q2 write 2 refuse
partition local
partition global used
partition admdep used
)";

const char kIamBucket[] = R"(# Upstream authorization separated from the storage service's execution.
scenario iam-bucket
attr policy open closed
attr object absent written
state o0 policy=open object=absent
state o1 policy=open object=written
state c0 policy=closed object=absent
state c1 policy=closed object=written
initial o0
agent write
env close-policy open-policy
adm o0 write true
adm o1 write true
adm c0 write false
adm c1 write false
decision derived
trans o0 write o1
trans o1 write o1
trans c0 write c1
trans c1 write c1
envtrans o0 close-policy c0
envtrans o1 close-policy c1
envtrans c0 open-policy o0
envtrans c1 open-policy o1
partition local
partition global policy object
partition admdep policy
)";

const char kK8sQuota[] = R"(# Per-object admission fused with the object write; namespace quota is not.
scenario k8s-quota
attr pod absent created
attr quota 0 1 2
state a0 pod=absent quota=0
state a1 pod=absent quota=1
state a2 pod=absent quota=2
state c0 pod=created quota=0
state c1 pod=created quota=1
state c2 pod=created quota=2
initial a1
agent create-pod
env ns-consume ns-release delete-pod
adm a0 create-pod true
adm a1 create-pod true
adm a2 create-pod false
adm c0 create-pod false
adm c1 create-pod false
adm c2 create-pod false
decision derived
trans a0 create-pod c1
trans a1 create-pod c2
trans a2 create-pod c2
trans c0 create-pod c1
trans c1 create-pod c2
trans c2 create-pod c2
envtrans a0 ns-consume a1
envtrans a1 ns-consume a2
envtrans c0 ns-consume c1
envtrans c1 ns-consume c2
envtrans a1 ns-release a0
envtrans a2 ns-release a1
envtrans c1 ns-release c0
envtrans c2 ns-release c1
envtrans c0 delete-pod a0
envtrans c1 delete-pod a1
envtrans c2 delete-pod a2
partition local pod
partition global quota
partition admdep pod quota
)";

const std::vector<std::pair<std::string, const char*>>& builtin_table() {
  static const std::vector<std::pair<std::string, const char*>> table = {
      {"filelock", kFilelock},
      {"filelock-escalate", kFilelockEscalate},
      {"rbac-revoke", kRbacRevoke},
      {"opa-quota", kOpaQuota},
      {"opa-quota-store", kOpaQuotaStore},
      {"iam-bucket", kIamBucket},
      {"k8s-quota", kK8sQuota},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : builtin_table()) out.push_back(name);
    return out;
  }();
  return names;
}

ScenarioSpec builtin(const std::string& name) {
  for (const auto& [key, text] : builtin_table()) {
    if (key == name) return load_scenario_text(text, "builtin:" + name);
  }
  throw ValidationError("unknown builtin scenario: " + name);
}

}  // namespace adb
