#include "report.hpp"

#include <iomanip>
#include <sstream>

namespace adb {

using nlohmann::json;

namespace {

json trace_to_json(const Trace& trace, const TraceRendering& rendering) {
  json steps = json::array();
  for (size_t i = 0; i < rendering.labels.size(); ++i) {
    json step{{"label", rendering.labels[i]},
              {"kind", rendering.kinds[i]},
              {"fires", rendering.fires[i] != 0},
              {"from", rendering.states[i]},
              {"to", rendering.states[i + 1]}};
    if (rendering.adm_before[i] >= 0) step["adm_before"] = rendering.adm_before[i] == 1;
    steps.push_back(std::move(step));
  }
  json labels = json::array();
  for (const ActionLabel& l : trace.labels) {
    labels.push_back({{"kind", std::string(to_string(l.kind))},
                      {"name", l.name},
                      {"text", l.text},
                      {"fires", l.fires}});
  }
  json state_ids = json::array();
  for (StateId s : trace.states) state_ids.push_back(s.value);
  return json{{"states", rendering.states},
              {"state_ids", state_ids},
              {"steps", std::move(steps)},
              {"labels", std::move(labels)}};
}

LabelKind kind_from_string(std::string_view s) {
  if (s == "agent") return LabelKind::Agent;
  if (s == "env") return LabelKind::Env;
  if (s == "dec") return LabelKind::Dec;
  if (s == "exec") return LabelKind::Exec;
  throw ValidationError("unknown label kind: " + std::string(s));
}

void trace_from_json(const json& j, Trace& trace, TraceRendering& rendering) {
  trace = {};
  rendering = {};
  for (const auto& s : j.at("state_ids")) trace.states.push_back(StateId{s.get<uint32_t>()});
  for (const auto& l : j.at("labels")) {
    trace.labels.push_back({kind_from_string(l.at("kind").get<std::string>()),
                            l.at("name").get<std::string>(), l.at("text").get<std::string>(),
                            l.at("fires").get<bool>()});
  }
  rendering.states = j.at("states").get<std::vector<std::string>>();
  for (const auto& step : j.at("steps")) {
    rendering.labels.push_back(step.at("label").get<std::string>());
    rendering.kinds.push_back(step.at("kind").get<std::string>());
    rendering.fires.push_back(step.at("fires").get<bool>() ? 1 : 0);
    rendering.adm_before.push_back(step.contains("adm_before")
                                       ? (step.at("adm_before").get<bool>() ? 1 : 0)
                                       : -1);
  }
}

}  // namespace

json to_json(const WitnessReport& report) {
  json j{{"scenario", report.scenario},
         {"construction", report.construction},
         {"depth", report.depth},
         {"outcome", std::string(to_string(report.outcome))},
         {"traces_explored", report.traces_explored}};
  if (report.witness()) {
    j["violation_index"] = report.violation_index;
    j["trace"] = trace_to_json(report.trace, report.rendering);
  }
  if (report.inconclusive()) j["reason"] = report.reason;
  return j;
}

WitnessReport witness_report_from_json(const json& j) {
  WitnessReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.construction = j.at("construction").get<std::string>();
  r.depth = j.at("depth").get<int>();
  std::string outcome = j.at("outcome").get<std::string>();
  r.traces_explored = j.at("traces_explored").get<uint64_t>();
  if (outcome == "witness") {
    r.outcome = WitnessReport::Outcome::Witness;
    r.violation_index = j.at("violation_index").get<size_t>();
    trace_from_json(j.at("trace"), r.trace, r.rendering);
  } else if (outcome == "absent-up-to") {
    r.outcome = WitnessReport::Outcome::AbsentUpTo;
  } else {
    r.outcome = WitnessReport::Outcome::Inconclusive;
    r.reason = j.value("reason", "");
  }
  return r;
}

json to_json(const ViolationStats& stats) {
  return json{{"scenario", stats.scenario},
              {"mode", stats.mode},
              {"kind", stats.kind},
              {"p", stats.env_probability},
              {"trials", stats.trials},
              {"seed", stats.seed},
              {"yield_injection", stats.yield_injection},
              {"violations", stats.violations},
              {"admissible_fires", stats.admissible_fires},
              {"refusals", stats.refusals},
              {"escalations", stats.escalations},
              {"env_steps", stats.env_steps},
              {"starved", stats.starved},
              {"replay_checked", stats.replay_checked},
              {"replay_ok", stats.replay_ok},
              {"replay_violations", stats.replay_violations},
              {"history_commits", stats.history_commits}};
}

ViolationStats violation_stats_from_json(const json& j) {
  ViolationStats s;
  s.scenario = j.at("scenario").get<std::string>();
  s.mode = j.at("mode").get<std::string>();
  s.kind = j.at("kind").get<std::string>();
  s.env_probability = j.at("p").get<double>();
  s.trials = j.at("trials").get<uint64_t>();
  s.seed = j.at("seed").get<uint64_t>();
  s.yield_injection = j.at("yield_injection").get<bool>();
  s.violations = j.at("violations").get<uint64_t>();
  s.admissible_fires = j.at("admissible_fires").get<uint64_t>();
  s.refusals = j.at("refusals").get<uint64_t>();
  s.escalations = j.at("escalations").get<uint64_t>();
  s.env_steps = j.at("env_steps").get<uint64_t>();
  s.starved = j.at("starved").get<uint64_t>();
  s.replay_checked = j.at("replay_checked").get<bool>();
  s.replay_ok = j.at("replay_ok").get<bool>();
  s.replay_violations = j.at("replay_violations").get<uint64_t>();
  s.history_commits = j.at("history_commits").get<uint64_t>();
  return s;
}

json to_json(const ClassificationResult& result) {
  json evidence = json::array();
  for (const WitnessReport& w : result.evidence) evidence.push_back(to_json(w));
  return json{{"class", std::string(to_string(result.cls))},
              {"rationale", result.rationale},
              {"evidence", std::move(evidence)}};
}

ClassificationResult classification_from_json(const json& j) {
  ClassificationResult c;
  std::string cls = j.at("class").get<std::string>();
  if (cls == "atomic") {
    c.cls = SystemClass::Atomic;
  } else if (cls == "partially-atomic") {
    c.cls = SystemClass::PartiallyAtomic;
  } else if (cls == "split") {
    c.cls = SystemClass::Split;
  } else {
    c.cls = SystemClass::Unknown;
  }
  c.rationale = j.at("rationale").get<std::string>();
  for (const auto& e : j.at("evidence")) c.evidence.push_back(witness_report_from_json(e));
  return c;
}

json to_json(const RunReport& report) {
  json reports = json::array();
  for (const WitnessReport& w : report.witness_reports) reports.push_back(to_json(w));
  json stats = json::array();
  for (const ViolationStats& s : report.stats) stats.push_back(to_json(s));
  json j{{"tool", report.tool},
         {"command", report.command},
         {"scenario", report.scenario},
         {"kind", report.kind},
         {"mode", report.mode},
         {"depth", report.depth},
         {"reports", std::move(reports)},
         {"stats", std::move(stats)},
         {"matched", report.matched},
         {"inconclusive", report.inconclusive},
         {"detail", report.detail},
         {"exit", report.exit_code()}};
  if (report.classification) j["classification"] = to_json(*report.classification);
  return j;
}

RunReport run_report_from_json(const json& j) {
  RunReport r;
  r.tool = j.at("tool").get<std::string>();
  r.command = j.at("command").get<std::string>();
  r.scenario = j.at("scenario").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.depth = j.at("depth").get<int>();
  for (const auto& w : j.at("reports")) r.witness_reports.push_back(witness_report_from_json(w));
  for (const auto& s : j.at("stats")) r.stats.push_back(violation_stats_from_json(s));
  if (j.contains("classification")) {
    r.classification = classification_from_json(j.at("classification"));
  }
  r.matched = j.at("matched").get<bool>();
  r.inconclusive = j.at("inconclusive").get<bool>();
  r.detail = j.at("detail").get<std::string>();
  return r;
}

namespace {

void render_witness(std::ostream& out, const WitnessReport& report) {
  out << "  [" << report.construction << "] ";
  switch (report.outcome) {
    case WitnessReport::Outcome::Witness: {
      out << "WITNESS: violating trace of length " << report.trace.length()
          << " (violation at step " << report.violation_index << ", " << report.traces_explored
          << " traces searched)\n";
      const TraceRendering& r = report.rendering;
      out << "      " << r.states[0] << "\n";
      for (size_t i = 0; i < r.labels.size(); ++i) {
        std::ostringstream line;
        line << "   " << std::setw(2) << (i + 1) << ". " << r.labels[i] << "  [" << r.kinds[i]
             << (r.fires[i] ? ", fires" : "") << "]";
        if (r.adm_before[i] >= 0) {
          line << "  Adm = " << (r.adm_before[i] ? "true" : "false");
        }
        if (i + 1 == report.violation_index) {
          line << "   <-- INADMISSIBLE COMMIT";
        }
        out << line.str() << "\n";
        out << "      " << r.states[i + 1] << "\n";
      }
      break;
    }
    case WitnessReport::Outcome::AbsentUpTo:
      out << "ABSENT-UP-TO depth " << report.depth << ": no violating trace among "
          << report.traces_explored << " traces\n";
      break;
    case WitnessReport::Outcome::Inconclusive:
      out << "INCONCLUSIVE: " << report.reason << "\n";
      break;
  }
}

void render_stats(std::ostream& out, const ViolationStats& s) {
  out << "  [" << s.mode << ", " << s.kind << "] trials=" << s.trials << " seed=" << s.seed;
  if (s.kind == "stochastic") out << " p=" << s.env_probability;
  if (s.kind == "live") out << " yield_injection=" << (s.yield_injection ? "on" : "off");
  out << "\n";
  out << "    violations=" << s.violations << " admissible_fires=" << s.admissible_fires
      << " refusals=" << s.refusals << " escalations=" << s.escalations
      << " env_steps=" << s.env_steps << " starved=" << s.starved << "\n";
  if (s.replay_checked) {
    out << "    history: " << s.history_commits << " commits, sequential replay "
        << (s.replay_ok ? "clean" : "MISMATCH") << " (replayed violations "
        << s.replay_violations << ")\n";
  }
}

}  // namespace

std::string render_human(const RunReport& report) {
  std::ostringstream out;
  out << "== " << report.kind << " scenario=" << report.scenario;
  if (!report.mode.empty()) out << " mode=" << report.mode;
  if (report.depth > 0) out << " depth=" << report.depth;
  out << "\n";
  if (!report.command.empty()) out << "   $ " << report.command << "\n";
  for (const WitnessReport& w : report.witness_reports) render_witness(out, w);
  for (const ViolationStats& s : report.stats) render_stats(out, s);
  if (report.classification) {
    out << "  classification: " << to_string(report.classification->cls) << "\n";
    out << "    " << report.classification->rationale << "\n";
    for (const WitnessReport& w : report.classification->evidence) render_witness(out, w);
  }
  if (report.inconclusive) {
    out << "  result: INCONCLUSIVE (" << report.detail << ")\n";
  } else {
    out << "  result: " << (report.matched ? "OK" : "MISMATCH")
        << " (exit " << report.exit_code() << ")\n";
  }
  return out.str();
}

}  // namespace adb
