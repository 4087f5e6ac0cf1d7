#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "scenario.hpp"
#include "split.hpp"
#include "types.hpp"

namespace adb {

enum class BoundaryMode : uint8_t { Atomic, Split };
enum class ResolutionMode : uint8_t { Atomic, Split };

struct SystemMode {
  BoundaryMode boundary = BoundaryMode::Atomic;
  ResolutionMode resolution = ResolutionMode::Atomic;
  auto operator<=>(const SystemMode&) const = default;
};

inline constexpr SystemMode kAtomicMode{BoundaryMode::Atomic, ResolutionMode::Atomic};
inline constexpr SystemMode kSplitMode{BoundaryMode::Split, ResolutionMode::Split};

std::string to_string(SystemMode mode);

struct BuildOptions {
  // While a decision is recorded, admit only env arcs that touch no local
  // attribute (partial-atomicity window).
  bool window_globals_only = false;
  // While a decision is recorded, admit no env arcs at all (classifier probe;
  // degenerates the split pipeline to an effectively atomic one).
  bool window_closed = false;
  // Expose supervisor Allow verdicts (in admissible states). Disabling
  // models an always-refusing supervisor.
  bool supervisor_allow = true;
  bool operator==(const BuildOptions&) const = default;
};

// One state of a constructed system. Atomic constructions never populate
// `recorded`.
struct SystemNode {
  StateId base;
  std::optional<RecordedDecision> recorded;
  PendingSet pending;
  auto operator<=>(const SystemNode&) const = default;
};

// Explicit reachable LTS of a scenario under a construction mode, with the
// admissibility predicate lifted from base states to nodes. Node 0 is the
// initial node.
struct SystemLts {
  std::string scenario_name;
  SystemMode mode;
  BuildOptions options;
  std::vector<SystemNode> nodes;
  std::vector<std::string> node_names;
  TransitionTable table;
  AdmissibilityTable adm;  // over nodes x agent actions
  StateId initial{0};

  uint32_t node_id(const SystemNode& node) const;  // throws ValidationError if absent
  std::map<SystemNode, uint32_t> index;
};

// Label constructors shared by the graph builder and the live-race runners,
// so committed histories replay against the same table.
ActionLabel boundary_label(const ScenarioSpec& spec, ActionIndex action, Disposition d);
// Env labels stay deterministic per (source, label): when the scenario has
// several targets for this (source, env action), the text names the target.
ActionLabel env_label(const ScenarioSpec& spec, const EnvRow& row);
ActionLabel dec_label(const ScenarioSpec& spec, ActionIndex action, Disposition d);
ActionLabel exec_label(const ScenarioSpec& spec, const RecordedDecision& rec,
                       PreservationEvent event_kind);
ActionLabel resolve_label(const ScenarioSpec& spec, const PendingRequest& request,
                          Disposition verdict, bool atomic_resolution);

SystemLts build_system(const ScenarioSpec& spec, SystemMode mode, BuildOptions options = {});

// Spec-facing enumeration: all traces of the chosen construction with at
// most `depth` transitions.
EnumerationResult enumerate_traces(const ScenarioSpec& spec, SystemMode mode, int depth,
                                   uint64_t cap, const TraceVisitor& visit,
                                   BuildOptions options = {});

// Longest shortest-path distance from the initial node over reachable nodes.
int reachable_eccentricity(const SystemLts& system);

}  // namespace adb
