#ifndef TMKIT_MODEL_HPP
#define TMKIT_MODEL_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Static model of a Thinging Machine: machines built from a subset of the
// five stages (create, process, release, transfer, receive), typed flow arcs,
// guarded trigger arcs, global integer variables, stage actions, event
// regions and a chronology over event names. Models are immutable values
// once built; ModelBuilder does the interning and cross-linking.

namespace tmkit {

enum class StageKind : std::uint8_t { Create, Process, Release, Transfer, Receive };

inline constexpr std::array<StageKind, 5> kAllStageKinds = {
    StageKind::Create, StageKind::Process, StageKind::Release,
    StageKind::Transfer, StageKind::Receive};

inline const char* to_string(StageKind k) {
  switch (k) {
    case StageKind::Create: return "create";
    case StageKind::Process: return "process";
    case StageKind::Release: return "release";
    case StageKind::Transfer: return "transfer";
    case StageKind::Receive: return "receive";
  }
  return "?";
}

inline std::optional<StageKind> stage_kind_from(std::string_view s) {
  for (StageKind k : kAllStageKinds)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

/// Legal conceptual movements between stages. Intra-machine edges:
/// transfer->receive, receive->process, receive->release, process->release,
/// create->process, create->release, release->transfer. The only edge that
/// crosses a machine boundary is transfer->transfer.
inline bool legal_stage_edge(StageKind from, StageKind to, bool cross_machine) {
  using K = StageKind;
  if (cross_machine) return from == K::Transfer && to == K::Transfer;
  switch (from) {
    case K::Create: return to == K::Process || to == K::Release;
    case K::Receive: return to == K::Process || to == K::Release;
    case K::Process: return to == K::Release;
    case K::Release: return to == K::Transfer;
    case K::Transfer: return to == K::Receive;
  }
  return false;
}

using StageId = std::int32_t;
using MachineId = std::int32_t;
using ThingId = std::int32_t;
inline constexpr std::int32_t kNone = -1;

/// Position of a construct in DSL source. line/column are 1-based;
/// {0,0,0} marks programmatically built elements.
struct SourceSpan {
  int line = 0;
  int column = 0;
  int length = 0;
  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

struct ThingType {
  std::string name;
  friend bool operator==(const ThingType&, const ThingType&) = default;
};

struct GlobalVar {
  std::string name;
  long initial = 0;  // unspecified initials default to zero
  friend bool operator==(const GlobalVar&, const GlobalVar&) = default;
};

struct Stage {
  StageId id = kNone;
  MachineId machine = kNone;
  StageKind kind = StageKind::Create;
  // Thing stream this stage carries, bound by the first flow arc that
  // touches it; kNone when no flow uses the stage.
  ThingId stream = kNone;
  friend bool operator==(const Stage&, const Stage&) = default;
};

struct Machine {
  MachineId id = kNone;
  std::string name;
  MachineId parent = kNone;
  std::vector<MachineId> submachines;
  // At most one stage of each kind per machine; kNone when absent.
  std::array<StageId, 5> stage_of = {kNone, kNone, kNone, kNone, kNone};
  std::string path;  // dotted path from root, e.g. "Inventory.Check"
  friend bool operator==(const Machine&, const Machine&) = default;
};

struct FlowArc {
  ThingId thing = kNone;
  StageId from = kNone;
  StageId to = kNone;
  friend bool operator==(const FlowArc&, const FlowArc&) = default;
};

enum class CmpOp : std::uint8_t { Lt, Le, Eq, Ge, Gt };

inline const char* to_string(CmpOp c) {
  switch (c) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

/// Comparison over global variables: `lhs cmp rhs` where rhs is a variable
/// name or an integer literal. Names are kept as written; tm-check flags
/// references to undeclared variables.
struct Guard {
  std::string lhs;
  CmpOp cmp = CmpOp::Lt;
  bool rhs_is_literal = false;
  std::string rhs_name;
  long rhs_literal = 0;
  friend bool operator==(const Guard&, const Guard&) = default;
};

struct TriggerArc {
  StageId from = kNone;
  StageId to = kNone;
  std::optional<Guard> guard;
  friend bool operator==(const TriggerArc&, const TriggerArc&) = default;
};

/// One side of an assignment: an integer literal or a name. Names resolve
/// against declared globals first, then against the payload of the token
/// at hand.
struct Operand {
  bool is_literal = false;
  long literal = 0;
  std::string name;
  friend bool operator==(const Operand&, const Operand&) = default;

  static Operand lit(long v) { return Operand{true, v, {}}; }
  static Operand ref(std::string n) { return Operand{false, 0, std::move(n)}; }
};

/// `target = a` or `target = a + b` or `target = a - b`.
struct Assignment {
  std::string target;
  Operand first;
  char op = 0;  // 0, '+' or '-'
  Operand second;
  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Spawn of a fresh token executed after an action's assignments.
struct EmitSpec {
  ThingId thing = kNone;
  StageId at = kNone;
  std::vector<Assignment> payload;
  friend bool operator==(const EmitSpec&, const EmitSpec&) = default;
};

/// Effects attached to a Process or Create stage, executed when a token
/// arrives there (before any trigger sourced at the stage is evaluated).
struct ActionSpec {
  StageId stage = kNone;
  std::vector<Assignment> effects;
  std::optional<EmitSpec> emits;
  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

/// Region element: a stage, or a flow/trigger arc identified by index.
struct RegionElem {
  enum class Kind : std::uint8_t { Stage, Flow, Trigger };
  Kind kind = Kind::Stage;
  std::int32_t index = kNone;
  friend bool operator==(const RegionElem&, const RegionElem&) = default;
};

struct EventSpec {
  std::string name;
  std::string description;
  std::vector<RegionElem> region;
  friend bool operator==(const EventSpec&, const EventSpec&) = default;
};

struct ChronoEdge {
  std::string before;
  std::string after;
  friend bool operator==(const ChronoEdge&, const ChronoEdge&) = default;
};

struct ParallelGroup {
  std::vector<std::string> members;
  bool then_loop = false;
  friend bool operator==(const ParallelGroup&, const ParallelGroup&) = default;
};

struct Chronology {
  std::vector<ChronoEdge> edges;
  std::vector<ParallelGroup> groups;
  bool empty() const { return edges.empty() && groups.empty(); }
  friend bool operator==(const Chronology&, const Chronology&) = default;
};

class Model {
 public:
  std::string name;
  std::vector<ThingType> things;
  std::vector<GlobalVar> vars;
  std::vector<Machine> machines;       // tree nodes, declaration order
  std::vector<MachineId> roots;        // top-level machines
  std::vector<Stage> stages;
  std::vector<FlowArc> flows;
  std::vector<TriggerArc> triggers;
  std::vector<ActionSpec> actions;
  std::vector<EventSpec> events;
  Chronology chronology;

  ThingId thing_index(std::string_view n) const {
    for (std::size_t i = 0; i < things.size(); ++i)
      if (things[i].name == n) return static_cast<ThingId>(i);
    return kNone;
  }

  int var_index(std::string_view n) const {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == n) return static_cast<int>(i);
    return kNone;
  }

  int event_index(std::string_view n) const {
    for (std::size_t i = 0; i < events.size(); ++i)
      if (events[i].name == n) return static_cast<int>(i);
    return kNone;
  }

  /// Full dotted stage path, e.g. "Inventory.Check.process".
  std::string stage_path(StageId s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= stages.size()) return "?";
    const Stage& st = stages[s];
    return machines[st.machine].path + "." + to_string(st.kind);
  }

  /// Resolve "Machine.Sub.kind" to a stage; kNone when any segment fails.
  StageId find_stage(std::string_view path) const {
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return kNone;
    auto kind = stage_kind_from(path.substr(dot + 1));
    if (!kind) return kNone;
    MachineId m = find_machine(path.substr(0, dot));
    if (m == kNone) return kNone;
    return machines[m].stage_of[static_cast<int>(*kind)];
  }

  MachineId find_machine(std::string_view path) const {
    MachineId cur = kNone;
    std::size_t pos = 0;
    while (pos <= path.size()) {
      auto dot = path.find('.', pos);
      std::string_view seg = path.substr(pos, dot == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : dot - pos);
      const std::vector<MachineId>& scope =
          cur == kNone ? roots : machines[cur].submachines;
      MachineId next = kNone;
      for (MachineId c : scope)
        if (machines[c].name == seg) { next = c; break; }
      if (next == kNone) return kNone;
      cur = next;
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
    return cur;
  }

  const ActionSpec* action_at(StageId s) const {
    for (const ActionSpec& a : actions)
      if (a.stage == s) return &a;
    return nullptr;
  }

  friend bool operator==(const Model&, const Model&) = default;
};

}  // namespace tmkit

#endif  // TMKIT_MODEL_HPP
