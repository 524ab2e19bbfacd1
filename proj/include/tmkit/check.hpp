#ifndef TMKIT_CHECK_HPP
#define TMKIT_CHECK_HPP

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <vector>

#include "tmkit/diagnostics.hpp"
#include "tmkit/model.hpp"

// Well-formedness checks over a built model. validate() is pure and its
// output order is deterministic: (machine, declaration order, code).

namespace tmkit {

enum class CheckCode {
  IllegalStageEdge,
  MixedStreams,
  NonTransferBoundary,
  TriggerSameFlow,
  DanglingStage,
  UnreachableStage,
  GuardUndeclaredVar,
  EventEmptyRegion,
};

inline const char* to_string(CheckCode c) {
  switch (c) {
    case CheckCode::IllegalStageEdge: return "ILLEGAL_STAGE_EDGE";
    case CheckCode::MixedStreams: return "MIXED_STREAMS";
    case CheckCode::NonTransferBoundary: return "NON_TRANSFER_BOUNDARY";
    case CheckCode::TriggerSameFlow: return "TRIGGER_SAME_FLOW";
    case CheckCode::DanglingStage: return "DANGLING_STAGE";
    case CheckCode::UnreachableStage: return "UNREACHABLE_STAGE";
    case CheckCode::GuardUndeclaredVar: return "GUARD_UNDECLARED_VAR";
    case CheckCode::EventEmptyRegion: return "EVENT_EMPTY_REGION";
  }
  return "?";
}

struct CheckDiagnostic {
  CheckCode code;
  Severity severity;
  std::string subject;   // stage path, arc "a->b", or event name
  std::string message;

  // sort fields
  std::string machine;
  int order = 0;

  std::string render() const {
    return std::string(to_string(code)) + " " + to_string(severity) + " " +
           subject + " " + message;
  }
};

namespace detail {

inline std::string thing_name(const Model& m, ThingId t) {
  return t == kNone ? std::string("?") : m.things[t].name;
}

}  // namespace detail

inline std::vector<CheckDiagnostic> validate(const Model& m) {
  std::vector<CheckDiagnostic> out;
  auto add = [&](CheckCode code, Severity sev, std::string subject,
                 std::string message, std::string machine, int order) {
    out.push_back({code, sev, std::move(subject), std::move(message),
                   std::move(machine), order});
  };
  auto machine_of = [&](StageId s) { return m.machines[m.stages[s].machine].path; };
  auto arc_subject = [&](StageId a, StageId b) {
    return m.stage_path(a) + "->" + m.stage_path(b);
  };

  // Flow arc legality. Boundary violations are reported as
  // NON_TRANSFER_BOUNDARY; the adjacency table covers intra-machine arcs
  // and the transfer->transfer crossing.
  for (std::size_t i = 0; i < m.flows.size(); ++i) {
    const FlowArc& f = m.flows[i];
    const Stage& from = m.stages[f.from];
    const Stage& to = m.stages[f.to];
    bool cross = from.machine != to.machine;
    if (cross && !(from.kind == StageKind::Transfer && to.kind == StageKind::Transfer)) {
      add(CheckCode::NonTransferBoundary, Severity::Error, arc_subject(f.from, f.to),
          "a flow may only cross machines transfer to transfer",
          machine_of(f.from), static_cast<int>(i));
    } else if (!legal_stage_edge(from.kind, to.kind, cross)) {
      add(CheckCode::IllegalStageEdge, Severity::Error, arc_subject(f.from, f.to),
          std::string("no conceptual movement from ") + to_string(from.kind) +
              " to " + to_string(to.kind),
          machine_of(f.from), static_cast<int>(i));
    }
  }

  // Stream separation: each stage carries exactly one thing stream.
  for (const Stage& s : m.stages) {
    std::vector<ThingId> seen;
    for (const FlowArc& f : m.flows) {
      if (f.from != s.id && f.to != s.id) continue;
      if (std::find(seen.begin(), seen.end(), f.thing) == seen.end())
        seen.push_back(f.thing);
    }
    if (seen.size() > 1) {
      std::string names;
      for (std::size_t i = 0; i < seen.size(); ++i)
        names += (i ? ", " : "") + detail::thing_name(m, seen[i]);
      add(CheckCode::MixedStreams, Severity::Error, m.stage_path(s.id),
          "stage is used by more than one stream (" + names + ")",
          machine_of(s.id), s.id);
    }
  }

  // Triggers transform one flow into another; staying on the same stream
  // inside the same machine is just a flow in disguise.
  for (std::size_t i = 0; i < m.triggers.size(); ++i) {
    const TriggerArc& t = m.triggers[i];
    const Stage& from = m.stages[t.from];
    const Stage& to = m.stages[t.to];
    if (from.machine == to.machine && from.stream != kNone &&
        from.stream == to.stream)
      add(CheckCode::TriggerSameFlow, Severity::Error, arc_subject(t.from, t.to),
          "trigger endpoints lie on the same stream of machine '" +
              m.machines[from.machine].path + "'",
          machine_of(t.from), static_cast<int>(m.flows.size() + i));
    if (t.guard) {
      if (m.var_index(t.guard->lhs) == kNone)
        add(CheckCode::GuardUndeclaredVar, Severity::Error, arc_subject(t.from, t.to),
            "guard references undeclared var '" + t.guard->lhs + "'",
            machine_of(t.from), static_cast<int>(m.flows.size() + i));
      if (!t.guard->rhs_is_literal && m.var_index(t.guard->rhs_name) == kNone)
        add(CheckCode::GuardUndeclaredVar, Severity::Error, arc_subject(t.from, t.to),
            "guard references undeclared var '" + t.guard->rhs_name + "'",
            machine_of(t.from), static_cast<int>(m.flows.size() + i));
    }
  }

  // A receive or process stage nothing feeds is suspicious but legal.
  // Incoming counts both flow arcs and triggers arriving from its own
  // stream; a cross-stream trigger pulls rather than feeds.
  for (const Stage& s : m.stages) {
    if (s.kind != StageKind::Receive && s.kind != StageKind::Process) continue;
    bool fed = false;
    for (const FlowArc& f : m.flows)
      if (f.to == s.id) { fed = true; break; }
    if (!fed)
      for (const TriggerArc& t : m.triggers) {
        if (t.to != s.id) continue;
        ThingId src_stream = m.stages[t.from].stream;
        if (s.stream == kNone || src_stream == s.stream) { fed = true; break; }
      }
    if (!fed)
      add(CheckCode::DanglingStage, Severity::Warning, m.stage_path(s.id),
          std::string(to_string(s.kind)) + " stage has no incoming arc of its stream",
          machine_of(s.id), s.id);
  }

  // Reachability over flows and triggers, rooted at create stages and at
  // transfer stages fed from another machine.
  {
    std::vector<char> seen(m.stages.size(), 0);
    std::deque<StageId> work;
    for (const Stage& s : m.stages) {
      bool root = s.kind == StageKind::Create;
      if (!root && s.kind == StageKind::Transfer)
        for (const FlowArc& f : m.flows)
          if (f.to == s.id && m.stages[f.from].machine != s.machine) { root = true; break; }
      if (root) { seen[s.id] = 1; work.push_back(s.id); }
    }
    while (!work.empty()) {
      StageId cur = work.front();
      work.pop_front();
      auto visit = [&](StageId nxt) {
        if (!seen[nxt]) { seen[nxt] = 1; work.push_back(nxt); }
      };
      for (const FlowArc& f : m.flows)
        if (f.from == cur) visit(f.to);
      for (const TriggerArc& t : m.triggers)
        if (t.from == cur) visit(t.to);
    }
    for (const Stage& s : m.stages)
      if (!seen[s.id])
        add(CheckCode::UnreachableStage, Severity::Warning, m.stage_path(s.id),
            "stage is not reachable from any create stage or machine boundary",
            machine_of(s.id), s.id);
  }

  for (std::size_t i = 0; i < m.events.size(); ++i)
    if (m.events[i].region.empty())
      add(CheckCode::EventEmptyRegion, Severity::Error, m.events[i].name,
          "event region is empty", m.events[i].name, static_cast<int>(i));

  std::stable_sort(out.begin(), out.end(),
                   [](const CheckDiagnostic& a, const CheckDiagnostic& b) {
                     if (a.machine != b.machine) return a.machine < b.machine;
                     if (a.order != b.order) return a.order < b.order;
                     return static_cast<int>(a.code) < static_cast<int>(b.code);
                   });
  return out;
}

inline bool has_errors(const std::vector<CheckDiagnostic>& diags) {
  for (const CheckDiagnostic& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace tmkit

#endif  // TMKIT_CHECK_HPP
