#ifndef TMKIT_BUILDER_HPP
#define TMKIT_BUILDER_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tmkit/model.hpp"

namespace tmkit {

struct BuildIssue {
  std::string code;     // DuplicateIdentifier, UnresolvedReference, EmptyModel, InvalidActionStage
  std::string message;
  SourceSpan span;
};

struct BuildResult {
  std::optional<Model> model;
  std::vector<BuildIssue> issues;
  bool ok() const { return model.has_value(); }
};

/// Accumulates declarations in source order, then build() resolves every
/// name, interns stages and binds flow streams. Identical call sequences
/// produce structurally identical models.
class ModelBuilder {
 public:
  ModelBuilder& set_name(std::string n) {
    name_ = std::move(n);
    return *this;
  }

  ModelBuilder& add_thing(std::string n, SourceSpan s = {}) {
    things_.push_back({std::move(n), s});
    return *this;
  }

  ModelBuilder& add_var(std::string n, long initial = 0, SourceSpan s = {}) {
    vars_.push_back({std::move(n), initial, s});
    return *this;
  }

  /// Opens a machine block; subsequent begin_machine calls nest until the
  /// matching end_machine.
  ModelBuilder& begin_machine(std::string n, SourceSpan s = {}) {
    MachDecl d;
    d.name = std::move(n);
    d.parent = open_.empty() ? -1 : open_.back();
    d.span = s;
    machs_.push_back(std::move(d));
    int idx = static_cast<int>(machs_.size()) - 1;
    if (!open_.empty()) machs_[open_.back()].children.push_back(idx);
    open_.push_back(idx);
    return *this;
  }

  ModelBuilder& stage(StageKind k, SourceSpan s = {}) {
    machs_[open_.back()].stages.push_back({k, s});
    return *this;
  }

  ModelBuilder& stages(std::initializer_list<StageKind> ks) {
    for (StageKind k : ks) stage(k);
    return *this;
  }

  ModelBuilder& end_machine() {
    open_.pop_back();
    return *this;
  }

  /// A chain "a -> b -> c" yields arcs (a,b) and (b,c) in order.
  ModelBuilder& add_flow(std::string thing, std::vector<std::string> chain,
                         SourceSpan s = {}) {
    flows_.push_back({std::move(thing), std::move(chain), s});
    return *this;
  }

  ModelBuilder& add_trigger(std::string from, std::string to,
                            std::optional<Guard> guard = std::nullopt,
                            SourceSpan s = {}) {
    triggers_.push_back({std::move(from), std::move(to), std::move(guard), s});
    return *this;
  }

  struct EmitDecl {
    std::string thing;
    std::string at_path;
    std::vector<Assignment> payload;
  };

  ModelBuilder& add_action(std::string stage_path,
                           std::vector<Assignment> effects,
                           std::optional<EmitDecl> emits = std::nullopt,
                           SourceSpan s = {}) {
    actions_.push_back({std::move(stage_path), std::move(effects),
                        std::move(emits), s});
    return *this;
  }

  ModelBuilder& add_event(std::string ev_name, std::string description,
                          std::vector<std::string> region_paths,
                          SourceSpan s = {}) {
    events_.push_back({std::move(ev_name), std::move(description),
                       std::move(region_paths), s});
    return *this;
  }

  ModelBuilder& add_chrono_edge(std::string before, std::string after,
                                SourceSpan s = {}) {
    chrono_edges_.push_back({std::move(before), std::move(after), s});
    return *this;
  }

  ModelBuilder& add_parallel_group(std::vector<std::string> members,
                                   bool then_loop, SourceSpan s = {}) {
    chrono_groups_.push_back({std::move(members), then_loop, s});
    return *this;
  }

  BuildResult build() const {
    BuildResult out;
    std::vector<BuildIssue> issues;
    Model m;
    m.name = name_;

    if (machs_.empty())
      issues.push_back({"EmptyModel", "a model must contain at least one machine", {}});

    std::set<std::string> seen;
    for (const auto& t : things_) {
      if (!seen.insert(t.name).second)
        issues.push_back({"DuplicateIdentifier",
                          "thing '" + t.name + "' declared twice", t.span});
      else
        m.things.push_back({t.name});
    }
    seen.clear();
    for (const auto& v : vars_) {
      if (!seen.insert(v.name).second)
        issues.push_back({"DuplicateIdentifier",
                          "var '" + v.name + "' declared twice", v.span});
      else
        m.vars.push_back({v.name, v.initial});
    }

    // Machine tree with per-scope name uniqueness, stages interned in
    // declaration order of machines, kind order within a machine.
    for (std::size_t i = 0; i < machs_.size(); ++i) {
      const MachDecl& d = machs_[i];
      Machine node;
      node.id = static_cast<MachineId>(i);
      node.name = d.name;
      node.parent = d.parent;
      m.machines.push_back(node);
    }
    for (std::size_t i = 0; i < machs_.size(); ++i) {
      const MachDecl& d = machs_[i];
      Machine& node = m.machines[i];
      for (int c : d.children) node.submachines.push_back(c);
      if (d.parent < 0) {
        m.roots.push_back(node.id);
        node.path = node.name;
      } else {
        node.path = "";  // filled after parents are known
      }
      const auto& scope =
          d.parent < 0 ? top_level_names(machs_) : sibling_names(machs_, d.parent);
      if (std::count(scope.begin(), scope.end(), d.name) > 1)
        issues.push_back({"DuplicateIdentifier",
                          "machine '" + d.name + "' declared twice in the same scope",
                          d.span});
      // Stages intern in fixed kind order so declaration order never leaks
      // into stage identity.
      std::set<StageKind> kinds;
      for (const auto& [k, span] : d.stages)
        if (!kinds.insert(k).second)
          issues.push_back({"DuplicateIdentifier",
                            "stage '" + std::string(to_string(k)) +
                                "' declared twice in machine '" + d.name + "'",
                            span});
      for (StageKind k : kAllStageKinds) {
        if (!kinds.count(k)) continue;
        Stage st;
        st.id = static_cast<StageId>(m.stages.size());
        st.machine = node.id;
        st.kind = k;
        m.machines[i].stage_of[static_cast<int>(k)] = st.id;
        m.stages.push_back(st);
      }
    }
    for (Machine& node : m.machines)
      if (node.parent >= 0) node.path = full_path(m, node.id);

    auto resolve_stage = [&](const std::string& path, SourceSpan span) -> StageId {
      StageId s = m.find_stage(path);
      if (s == kNone)
        issues.push_back({"UnresolvedReference",
                          "no stage named '" + path + "'", span});
      return s;
    };

    for (const auto& f : flows_) {
      ThingId th = m.thing_index(f.thing);
      if (th == kNone) {
        issues.push_back({"UnresolvedReference",
                          "no thing named '" + f.thing + "'", f.span});
        continue;
      }
      std::vector<StageId> pts;
      bool all_ok = true;
      for (const std::string& p : f.chain) {
        StageId s = resolve_stage(p, f.span);
        all_ok = all_ok && s != kNone;
        pts.push_back(s);
      }
      if (!all_ok) continue;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        m.flows.push_back({th, pts[i], pts[i + 1]});
    }

    // Streams bind to the first flow that touches a stage; conflicting
    // bindings are left for tm-check to report as MIXED_STREAMS.
    for (const FlowArc& a : m.flows) {
      if (m.stages[a.from].stream == kNone) m.stages[a.from].stream = a.thing;
      if (m.stages[a.to].stream == kNone) m.stages[a.to].stream = a.thing;
    }

    for (const auto& t : triggers_) {
      StageId from = resolve_stage(t.from, t.span);
      StageId to = resolve_stage(t.to, t.span);
      if (from == kNone || to == kNone) continue;
      m.triggers.push_back({from, to, t.guard});
    }

    for (const auto& a : actions_) {
      StageId s = resolve_stage(a.stage_path, a.span);
      if (s == kNone) continue;
      StageKind k = m.stages[s].kind;
      if (k != StageKind::Process && k != StageKind::Create) {
        issues.push_back({"InvalidActionStage",
                          "action attached to '" + a.stage_path +
                              "'; actions are only allowed on process and create stages",
                          a.span});
        continue;
      }
      ActionSpec spec;
      spec.stage = s;
      spec.effects = a.effects;
      if (a.emits) {
        EmitSpec e;
        e.thing = m.thing_index(a.emits->thing);
        if (e.thing == kNone) {
          issues.push_back({"UnresolvedReference",
                            "no thing named '" + a.emits->thing + "'", a.span});
          continue;
        }
        e.at = resolve_stage(a.emits->at_path, a.span);
        if (e.at == kNone) continue;
        e.payload = a.emits->payload;
        spec.emits = std::move(e);
      }
      m.actions.push_back(std::move(spec));
    }

    seen.clear();
    for (const auto& e : events_) {
      if (!seen.insert(e.name).second) {
        issues.push_back({"DuplicateIdentifier",
                          "event '" + e.name + "' declared twice", e.span});
        continue;
      }
      EventSpec spec;
      spec.name = e.name;
      spec.description = e.description;
      bool all_ok = true;
      for (const std::string& p : e.region) {
        StageId s = resolve_stage(p, e.span);
        all_ok = all_ok && s != kNone;
        if (s != kNone)
          spec.region.push_back({RegionElem::Kind::Stage, s});
      }
      if (all_ok) m.events.push_back(std::move(spec));
    }

    auto check_event_name = [&](const std::string& n, SourceSpan span) {
      if (m.event_index(n) == kNone)
        issues.push_back({"UnresolvedReference",
                          "chronology references undeclared event '" + n + "'",
                          span});
    };
    for (const auto& e : chrono_edges_) {
      check_event_name(e.before, e.span);
      check_event_name(e.after, e.span);
      m.chronology.edges.push_back({e.before, e.after});
    }
    for (const auto& g : chrono_groups_) {
      for (const std::string& n : g.members) check_event_name(n, g.span);
      m.chronology.groups.push_back({g.members, g.then_loop});
    }

    out.issues = std::move(issues);
    if (out.issues.empty()) out.model = std::move(m);
    return out;
  }

 private:
  struct NamedDecl {
    std::string name;
    SourceSpan span;
  };
  struct VarDecl {
    std::string name;
    long initial;
    SourceSpan span;
  };
  struct MachDecl {
    std::string name;
    int parent = -1;
    std::vector<int> children;
    std::vector<std::pair<StageKind, SourceSpan>> stages;
    SourceSpan span;
  };
  struct FlowDecl {
    std::string thing;
    std::vector<std::string> chain;
    SourceSpan span;
  };
  struct TriggerDecl {
    std::string from, to;
    std::optional<Guard> guard;
    SourceSpan span;
  };
  struct ActionDecl {
    std::string stage_path;
    std::vector<Assignment> effects;
    std::optional<EmitDecl> emits;
    SourceSpan span;
  };
  struct EventDecl {
    std::string name, description;
    std::vector<std::string> region;
    SourceSpan span;
  };
  struct EdgeDecl {
    std::string before, after;
    SourceSpan span;
  };
  struct GroupDecl {
    std::vector<std::string> members;
    bool then_loop;
    SourceSpan span;
  };

  static std::vector<std::string> top_level_names(const std::vector<MachDecl>& ms) {
    std::vector<std::string> out;
    for (const auto& d : ms)
      if (d.parent < 0) out.push_back(d.name);
    return out;
  }
  static std::vector<std::string> sibling_names(const std::vector<MachDecl>& ms,
                                                int parent) {
    std::vector<std::string> out;
    for (int c : ms[parent].children) out.push_back(ms[c].name);
    return out;
  }
  static std::string full_path(const Model& m, MachineId id) {
    const Machine& node = m.machines[id];
    if (node.parent < 0) return node.name;
    return full_path(m, node.parent) + "." + node.name;
  }

  std::string name_;
  std::vector<NamedDecl> things_;
  std::vector<VarDecl> vars_;
  std::vector<MachDecl> machs_;
  std::vector<int> open_;
  std::vector<FlowDecl> flows_;
  std::vector<TriggerDecl> triggers_;
  std::vector<ActionDecl> actions_;
  std::vector<EventDecl> events_;
  std::vector<EdgeDecl> chrono_edges_;
  std::vector<GroupDecl> chrono_groups_;
};

}  // namespace tmkit

#endif  // TMKIT_BUILDER_HPP
