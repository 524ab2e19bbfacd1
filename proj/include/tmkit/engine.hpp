#ifndef TMKIT_ENGINE_HPP
#define TMKIT_ENGINE_HPP

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmkit/diagnostics.hpp"
#include "tmkit/model.hpp"
#include "tmkit/text.hpp"

// Deterministic token-flow simulator.
//
// One step is one conceptual movement: a token moves along one arc, is
// created, or is de-created; the logical clock advances by one per step.
// Moves are chosen in a fixed priority: scheduled injections, pending
// trigger firings (FIFO), then flow arcs in declaration order with FIFO
// stage queues. Given identical inputs the trace is byte-identical.
//
// Trigger firing depends on the destination stage:
//   - create stage            -> a fresh token of the destination stream
//                                emerges there ("ignition"),
//   - same stream as source   -> the enabling token is moved across
//                                ("transformation of the flow"),
//   - different stream        -> the oldest token resting at the
//                                destination is released along its first
//                                outgoing arc ("pull", one per firing).
// A stage targeted by a pull trigger is gated: tokens rest there until
// pulled, which is how queues (stored released things) are modeled.
//
// At a transfer stage, tokens that entered from outside the machine
// continue inward (intra-machine arcs) and tokens coming from inside
// leave (cross-machine arcs); the transfer stage is the boundary gateway.
//
// A token reaching a release or transfer stage with no outgoing flow arc
// departs the modeled world and is de-created.

namespace tmkit {

struct SimError : std::runtime_error {
  std::string code;
  SimError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

struct SimToken {
  long id = 0;
  ThingId thing = kNone;
  StageId at = kNone;
  long since = 0;
  bool from_outside = true;  // arrived via cross-machine arc, trigger or injection
  std::vector<std::pair<std::string, long>> payload;  // sorted by key

  long field(std::string_view k) const {
    for (const auto& [n, v] : payload)
      if (n == k) return v;
    return 0;
  }
  void set_field(const std::string& k, long v) {
    for (auto& [n, val] : payload)
      if (n == k) { val = v; return; }
    payload.emplace_back(k, v);
    std::sort(payload.begin(), payload.end());
  }
};

enum class Verb { Arrive, Depart, Create, Decreate };

inline const char* to_string(Verb v) {
  switch (v) {
    case Verb::Arrive: return "arrive";
    case Verb::Depart: return "depart";
    case Verb::Create: return "create";
    case Verb::Decreate: return "decreate";
  }
  return "?";
}

struct TraceRecord {
  long tick = 0;
  long token = 0;
  ThingId thing = kNone;
  StageId stage = kNone;
  Verb verb = Verb::Arrive;
  std::vector<long> vars;  // snapshot, indexed like Model::vars
};

using Trace = std::vector<TraceRecord>;

// ---------------------------------------------------------------------------
// Scenarios (.tmrun)

struct Injection {
  long tick = 0;
  ThingId thing = kNone;
  StageId at = kNone;
  std::vector<std::pair<std::string, long>> payload;
};

struct Scenario {
  std::vector<std::pair<std::string, long>> sets;
  std::vector<Injection> injections;
};

struct ScenarioResult {
  std::optional<Scenario> scenario;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return scenario.has_value(); }
};

/// Parses `set <var> = <int>` and
/// `inject <thing> at <path> t=<int> [payload {k:v, ...}]` statements.
inline ScenarioResult parse_scenario(std::string_view text, const Model& m) {
  ScenarioResult out;
  Lexer lex(text);
  std::vector<Token> toks = lex.run(out.diagnostics);
  if (!out.diagnostics.empty()) return out;

  Scenario sc;
  std::size_t i = 0;
  auto fail = [&](SourceSpan s, const std::string& msg) {
    out.diagnostics.push_back({Severity::Error, "ScenarioError", msg, s});
  };
  auto is_word = [&](std::string_view w) {
    return toks[i].kind == TokKind::Ident && toks[i].text == w;
  };
  auto take_int = [&](long& v) {
    bool neg = false;
    if (toks[i].kind == TokKind::Minus) { neg = true; ++i; }
    if (toks[i].kind != TokKind::Int) { fail(toks[i].span, "expected an integer"); return false; }
    v = neg ? -toks[i].value : toks[i].value;
    ++i;
    return true;
  };

  while (toks[i].kind != TokKind::End) {
    if (is_word("set")) {
      ++i;
      if (toks[i].kind != TokKind::Ident) { fail(toks[i].span, "expected a var name"); return out; }
      std::string name = toks[i].text;
      ++i;
      if (toks[i].kind != TokKind::Assign) { fail(toks[i].span, "expected '='"); return out; }
      ++i;
      long v = 0;
      if (!take_int(v)) return out;
      sc.sets.emplace_back(std::move(name), v);
    } else if (is_word("inject")) {
      SourceSpan at_span = toks[i].span;
      ++i;
      Injection inj;
      if (toks[i].kind != TokKind::Ident) { fail(toks[i].span, "expected a thing name"); return out; }
      inj.thing = m.thing_index(toks[i].text);
      if (inj.thing == kNone) { fail(toks[i].span, "no thing named '" + toks[i].text + "'"); return out; }
      ++i;
      if (!is_word("at")) { fail(toks[i].span, "expected 'at'"); return out; }
      ++i;
      std::string path;
      while (toks[i].kind == TokKind::Ident) {
        path += toks[i].text;
        ++i;
        if (toks[i].kind == TokKind::Dot) { path += "."; ++i; } else break;
      }
      inj.at = m.find_stage(path);
      if (inj.at == kNone) { fail(at_span, "no stage named '" + path + "'"); return out; }
      if (!is_word("t")) { fail(toks[i].span, "expected 't=<tick>'"); return out; }
      ++i;
      if (toks[i].kind != TokKind::Assign) { fail(toks[i].span, "expected '='"); return out; }
      ++i;
      if (!take_int(inj.tick)) return out;
      if (inj.tick < 0) { fail(toks[i].span, "injection tick must be non-negative"); return out; }
      if (is_word("payload")) {
        ++i;
        if (toks[i].kind != TokKind::LBrace) { fail(toks[i].span, "expected '{'"); return out; }
        ++i;
        while (toks[i].kind != TokKind::RBrace) {
          if (toks[i].kind != TokKind::Ident) { fail(toks[i].span, "expected a payload key"); return out; }
          std::string key = toks[i].text;
          ++i;
          if (toks[i].kind != TokKind::Colon) { fail(toks[i].span, "expected ':'"); return out; }
          ++i;
          long v = 0;
          if (!take_int(v)) return out;
          inj.payload.emplace_back(std::move(key), v);
          if (toks[i].kind == TokKind::Comma) ++i;
          else break;
        }
        if (toks[i].kind != TokKind::RBrace) { fail(toks[i].span, "expected '}'"); return out; }
        ++i;
        std::sort(inj.payload.begin(), inj.payload.end());
      }
      sc.injections.push_back(std::move(inj));
    } else {
      fail(toks[i].span, "expected 'set' or 'inject'");
      return out;
    }
  }
  out.scenario = std::move(sc);
  return out;
}

// ---------------------------------------------------------------------------
// Simulation state

enum class TriggerMode { Ignite, Move, Pull };

struct SimState {
  const Model* model = nullptr;
  long clock = 0;
  long next_token = 1;
  std::vector<long> vars;
  std::vector<std::deque<SimToken>> queues;  // one per stage

  struct PendingWork {
    bool is_emit = false;
    int trigger = kNone;  // firing: trigger index
    long token = 0;       // firing: enabling token
    ThingId emit_thing = kNone;
    StageId emit_at = kNone;
    std::vector<std::pair<std::string, long>> emit_payload;
  };
  std::deque<PendingWork> pending;

  std::vector<Injection> injections;  // sorted by tick, file order within
  std::size_t next_injection = 0;

  // immutable routing plan
  std::vector<std::vector<int>> out_flows;     // per stage, declaration order
  std::vector<bool> has_intra_out, has_cross_out;
  std::vector<std::vector<int>> out_triggers;  // per stage
  std::vector<int> action_of;                  // per stage, kNone if none
  std::vector<bool> gated;                     // pull-trigger targets
  std::vector<TriggerMode> trigger_mode;

  long live_tokens() const {
    long n = 0;
    for (const auto& q : queues) n += static_cast<long>(q.size());
    return n;
  }
  long var(std::string_view name) const {
    int i = model->var_index(name);
    return i == kNone ? 0 : vars[i];
  }
};

namespace detail {

inline bool eval_guard(const Guard& g, const Model& m, const std::vector<long>& vars) {
  auto value = [&](const std::string& n) -> long {
    int i = m.var_index(n);
    return i == kNone ? 0 : vars[i];
  };
  long l = value(g.lhs);
  long r = g.rhs_is_literal ? g.rhs_literal : value(g.rhs_name);
  switch (g.cmp) {
    case CmpOp::Lt: return l < r;
    case CmpOp::Le: return l <= r;
    case CmpOp::Eq: return l == r;
    case CmpOp::Ge: return l >= r;
    case CmpOp::Gt: return l > r;
  }
  return false;
}

inline long eval_operand(const Operand& o, const Model& m,
                         const std::vector<long>& vars, const SimToken& tok) {
  if (o.is_literal) return o.literal;
  int i = m.var_index(o.name);
  if (i != kNone) return vars[i];
  return tok.field(o.name);
}

}  // namespace detail

/// Builds the initial state: empty stage queues, clock zero, globals at
/// their declared initials unless the scenario overrides them. The model
/// must be error-free under validate(); the CLI enforces this before
/// simulating. Throws SimError ScenarioVarUnknown for overrides of
/// undeclared vars.
inline SimState init_simulation(const Model& m, const Scenario& sc) {
  SimState st;
  st.model = &m;
  st.vars.resize(m.vars.size());
  for (std::size_t i = 0; i < m.vars.size(); ++i) st.vars[i] = m.vars[i].initial;
  for (const auto& [name, value] : sc.sets) {
    int i = m.var_index(name);
    if (i == kNone)
      throw SimError("ScenarioVarUnknown",
                     "scenario sets undeclared var '" + name + "'");
    st.vars[i] = value;
  }
  for (const Injection& inj : sc.injections) {
    if (inj.thing == kNone || inj.at == kNone)
      throw SimError("ScenarioInjectionInvalid",
                     "scenario injection references an unknown thing or stage");
    st.injections.push_back(inj);
  }
  std::stable_sort(st.injections.begin(), st.injections.end(),
                   [](const Injection& a, const Injection& b) { return a.tick < b.tick; });

  st.queues.resize(m.stages.size());
  st.out_flows.resize(m.stages.size());
  st.has_intra_out.assign(m.stages.size(), false);
  st.has_cross_out.assign(m.stages.size(), false);
  st.out_triggers.resize(m.stages.size());
  st.action_of.assign(m.stages.size(), kNone);
  st.gated.assign(m.stages.size(), false);

  for (std::size_t i = 0; i < m.flows.size(); ++i) {
    const FlowArc& f = m.flows[i];
    st.out_flows[f.from].push_back(static_cast<int>(i));
    bool cross = m.stages[f.from].machine != m.stages[f.to].machine;
    (cross ? st.has_cross_out : st.has_intra_out)[f.from] = true;
  }
  for (std::size_t i = 0; i < m.triggers.size(); ++i) {
    const TriggerArc& t = m.triggers[i];
    st.out_triggers[t.from].push_back(static_cast<int>(i));
    const Stage& from = m.stages[t.from];
    const Stage& to = m.stages[t.to];
    TriggerMode mode;
    if (to.kind == StageKind::Create) mode = TriggerMode::Ignite;
    else if (from.stream != kNone && from.stream == to.stream) mode = TriggerMode::Move;
    else mode = TriggerMode::Pull;
    st.trigger_mode.push_back(mode);
    if (mode == TriggerMode::Pull) st.gated[t.to] = true;
  }
  for (std::size_t i = 0; i < m.actions.size(); ++i)
    if (st.action_of[m.actions[i].stage] == kNone)
      st.action_of[m.actions[i].stage] = static_cast<int>(i);
  return st;
}

namespace detail {

inline TraceRecord make_record(const SimState& st, const SimToken& tok,
                               StageId stage, Verb verb) {
  TraceRecord r;
  r.tick = st.clock;
  r.token = tok.id;
  r.thing = tok.thing;
  r.stage = stage;
  r.verb = verb;
  r.vars = st.vars;
  return r;
}

/// Runs the destination stage's effects on the arriving token, queues an
/// emit if the action has one, then arms triggers sourced at the stage
/// whose guards hold under the post-action values (edge-triggered).
inline void on_arrival(SimState& st, SimToken& tok, StageId stage) {
  const Model& m = *st.model;
  if (int ai = st.action_of[stage]; ai != kNone) {
    const ActionSpec& a = m.actions[ai];
    for (const Assignment& e : a.effects) {
      long v = eval_operand(e.first, m, st.vars, tok);
      if (e.op == '+') v += eval_operand(e.second, m, st.vars, tok);
      else if (e.op == '-') v -= eval_operand(e.second, m, st.vars, tok);
      int vi = m.var_index(e.target);
      if (vi != kNone) st.vars[vi] = v;
      else tok.set_field(e.target, v);
    }
    if (a.emits) {
      SimState::PendingWork w;
      w.is_emit = true;
      w.emit_thing = a.emits->thing;
      w.emit_at = a.emits->at;
      for (const Assignment& e : a.emits->payload) {
        long v = eval_operand(e.first, m, st.vars, tok);
        if (e.op == '+') v += eval_operand(e.second, m, st.vars, tok);
        else if (e.op == '-') v -= eval_operand(e.second, m, st.vars, tok);
        w.emit_payload.emplace_back(e.target, v);
      }
      std::sort(w.emit_payload.begin(), w.emit_payload.end());
      st.pending.push_back(std::move(w));
    }
  }
  for (int ti : st.out_triggers[stage]) {
    const TriggerArc& t = m.triggers[ti];
    if (t.guard && !eval_guard(*t.guard, m, st.vars)) continue;
    SimState::PendingWork w;
    w.trigger = ti;
    w.token = tok.id;
    st.pending.push_back(std::move(w));
  }
}

inline SimToken* find_token(SimState& st, StageId stage, long id) {
  for (SimToken& t : st.queues[stage])
    if (t.id == id) return &t;
  return nullptr;
}

/// Moves a specific token to `dest`; emits depart/arrive records and runs
/// arrival effects. `from_outside` records how it entered for transfer
/// routing.
inline void move_token(SimState& st, StageId src, long token_id, StageId dest,
                       bool from_outside, std::vector<TraceRecord>& records) {
  auto& q = st.queues[src];
  auto it = std::find_if(q.begin(), q.end(),
                         [&](const SimToken& t) { return t.id == token_id; });
  SimToken tok = std::move(*it);
  q.erase(it);
  records.push_back(make_record(st, tok, src, Verb::Depart));
  tok.at = dest;
  tok.since = st.clock;
  tok.from_outside = from_outside;
  st.queues[dest].push_back(std::move(tok));
  SimToken& landed = st.queues[dest].back();
  on_arrival(st, landed, dest);
  records.push_back(make_record(st, landed, dest, Verb::Arrive));
}

inline void create_token(SimState& st, ThingId thing, StageId at,
                         std::vector<std::pair<std::string, long>> payload,
                         std::vector<TraceRecord>& records) {
  SimToken tok;
  tok.id = st.next_token++;
  tok.thing = thing;
  tok.at = at;
  tok.since = st.clock;
  tok.from_outside = true;
  tok.payload = std::move(payload);
  st.queues[at].push_back(std::move(tok));
  SimToken& landed = st.queues[at].back();
  on_arrival(st, landed, at);
  records.push_back(make_record(st, landed, at, Verb::Create));
}

}  // namespace detail

/// Performs one step; returns the records it produced, or nullopt when no
/// move is enabled (terminal state). Steps that only advance the clock
/// toward a scheduled injection return an empty record list.
inline std::optional<std::vector<TraceRecord>> step(SimState& st) {
  const Model& m = *st.model;
  std::vector<TraceRecord> records;

  // Scheduled injection due now.
  if (st.next_injection < st.injections.size() &&
      st.injections[st.next_injection].tick <= st.clock) {
    const Injection& inj = st.injections[st.next_injection++];
    detail::create_token(st, inj.thing, inj.at, inj.payload, records);
    st.clock += 1;
    return records;
  }

  // Pending trigger firings and emits, oldest first. Stale entries (guard
  // no longer true, enabling token gone, nothing to pull) are dropped
  // without consuming the step.
  while (!st.pending.empty()) {
    SimState::PendingWork w = std::move(st.pending.front());
    st.pending.pop_front();
    if (w.is_emit) {
      if (w.emit_thing == kNone || w.emit_at == kNone) continue;
      detail::create_token(st, w.emit_thing, w.emit_at, std::move(w.emit_payload), records);
      st.clock += 1;
      return records;
    }
    const TriggerArc& t = m.triggers[w.trigger];
    if (t.guard && !detail::eval_guard(*t.guard, m, st.vars)) continue;
    switch (st.trigger_mode[w.trigger]) {
      case TriggerMode::Ignite: {
        ThingId stream = m.stages[t.to].stream;
        if (stream == kNone) continue;
        detail::create_token(st, stream, t.to, {}, records);
        st.clock += 1;
        return records;
      }
      case TriggerMode::Move: {
        if (!detail::find_token(st, t.from, w.token)) continue;
        detail::move_token(st, t.from, w.token, t.to, true, records);
        st.clock += 1;
        return records;
      }
      case TriggerMode::Pull: {
        if (st.queues[t.to].empty() || st.out_flows[t.to].empty()) continue;
        const FlowArc& arc = m.flows[st.out_flows[t.to].front()];
        long id = st.queues[t.to].front().id;
        bool cross = m.stages[arc.from].machine != m.stages[arc.to].machine;
        detail::move_token(st, arc.from, id, arc.to, cross, records);
        st.clock += 1;
        return records;
      }
    }
  }

  // Flow arcs in declaration order, FIFO within each stage queue.
  for (std::size_t i = 0; i < m.flows.size(); ++i) {
    const FlowArc& arc = m.flows[i];
    if (st.gated[arc.from]) continue;
    auto& q = st.queues[arc.from];
    if (q.empty()) continue;
    const SimToken& head = q.front();
    bool cross = m.stages[arc.from].machine != m.stages[arc.to].machine;
    if (m.stages[arc.from].kind == StageKind::Transfer) {
      // Boundary gateway: entered-from-outside continues inward, otherwise
      // outward; fall back to the other side when the preferred one has no
      // arcs.
      bool prefer_cross = !head.from_outside;
      if (cross != prefer_cross &&
          (prefer_cross ? st.has_cross_out : st.has_intra_out)[arc.from])
        continue;
    }
    detail::move_token(st, arc.from, head.id, arc.to, cross, records);
    st.clock += 1;
    return records;
  }

  // De-creation: a token resting at a release/transfer stage with no
  // outgoing flow arc leaves the modeled world.
  for (const Stage& s : m.stages) {
    if (s.kind != StageKind::Release && s.kind != StageKind::Transfer) continue;
    if (!st.out_flows[s.id].empty() || st.gated[s.id]) continue;
    auto& q = st.queues[s.id];
    if (q.empty()) continue;
    SimToken tok = std::move(q.front());
    q.pop_front();
    records.push_back(detail::make_record(st, tok, s.id, Verb::Decreate));
    st.clock += 1;
    return records;
  }

  // Nothing enabled now, but an injection is still scheduled.
  if (st.next_injection < st.injections.size()) {
    st.clock += 1;
    return records;  // empty
  }

  return std::nullopt;
}

/// Steps until the clock reaches max_ticks or no move is enabled.
inline Trace run(SimState& st, long max_ticks) {
  Trace trace;
  while (st.clock < max_ticks) {
    auto recs = step(st);
    if (!recs) break;
    for (TraceRecord& r : *recs) trace.push_back(std::move(r));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Trace text format

inline std::string format_record(const TraceRecord& r, const Model& m) {
  std::ostringstream os;
  os << "t=" << r.tick << " tok=" << r.token << " thing="
     << (r.thing == kNone ? "?" : m.things[r.thing].name)
     << " stage=" << m.stage_path(r.stage) << " verb=" << to_string(r.verb)
     << " vars={";
  std::vector<int> order(m.vars.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return m.vars[a].name < m.vars[b].name;
  });
  for (std::size_t i = 0; i < order.size(); ++i)
    os << (i ? "," : "") << m.vars[order[i]].name << ":" << r.vars[order[i]];
  os << "}";
  return os.str();
}

inline std::string format_trace(const Trace& trace, const Model& m) {
  std::string out;
  for (const TraceRecord& r : trace) {
    out += format_record(r, m);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Event detection

struct EventOccurrence {
  int spec = kNone;  // index into the spec list passed to detect_events
  std::string name;
  long time = 0;                     // tick of the closing witness
  std::vector<std::size_t> witnesses;  // record indices, in trace order
};

/// One occurrence per maximal activation window in which every region
/// element is witnessed. A window opens at the first witness, closes when
/// all elements have been seen, and restarts when an element repeats
/// before the window completes. Witnesses are arrive/create records for
/// stage elements and completed traversals for arc elements.
inline std::vector<EventOccurrence> detect_events(const Trace& trace,
                                                  const Model& m,
                                                  std::span<const EventSpec> specs) {
  std::vector<EventOccurrence> out;
  for (std::size_t si = 0; si < specs.size(); ++si) {
    const EventSpec& spec = specs[si];
    if (spec.region.empty()) continue;
    std::vector<std::optional<std::size_t>> seen(spec.region.size());
    auto clear = [&] { for (auto& s : seen) s.reset(); };

    auto witnessed_by = [&](const RegionElem& e, std::size_t ri) -> bool {
      const TraceRecord& r = trace[ri];
      switch (e.kind) {
        case RegionElem::Kind::Stage:
          return (r.verb == Verb::Arrive || r.verb == Verb::Create) &&
                 r.stage == e.index;
        case RegionElem::Kind::Flow: {
          if (r.verb != Verb::Arrive || ri == 0) return false;
          const FlowArc& a = m.flows[e.index];
          const TraceRecord& prev = trace[ri - 1];
          return r.stage == a.to && prev.verb == Verb::Depart &&
                 prev.stage == a.from && prev.token == r.token &&
                 prev.tick == r.tick;
        }
        case RegionElem::Kind::Trigger: {
          if (r.verb != Verb::Arrive || ri == 0) return false;
          const TriggerArc& a = m.triggers[e.index];
          const TraceRecord& prev = trace[ri - 1];
          return r.stage == a.to && prev.verb == Verb::Depart &&
                 prev.stage == a.from && prev.token == r.token &&
                 prev.tick == r.tick;
        }
      }
      return false;
    };

    for (std::size_t ri = 0; ri < trace.size(); ++ri) {
      for (std::size_t ei = 0; ei < spec.region.size(); ++ei) {
        if (!witnessed_by(spec.region[ei], ri)) continue;
        if (seen[ei].has_value()) clear();  // repeat starts a new window
        seen[ei] = ri;
        bool complete = true;
        for (const auto& s : seen) complete = complete && s.has_value();
        if (complete) {
          EventOccurrence occ;
          occ.spec = static_cast<int>(si);
          occ.name = spec.name;
          occ.time = trace[ri].tick;
          for (const auto& s : seen) occ.witnesses.push_back(*s);
          std::sort(occ.witnesses.begin(), occ.witnesses.end());
          out.push_back(std::move(occ));
          clear();
        }
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EventOccurrence& a, const EventOccurrence& b) {
                     if (a.time != b.time) return a.time < b.time;
                     return a.spec < b.spec;
                   });
  return out;
}

inline std::vector<EventOccurrence> detect_events(const Trace& trace, const Model& m) {
  return detect_events(trace, m, std::span<const EventSpec>(m.events));
}

// ---------------------------------------------------------------------------
// Chronology checking

struct ChronologyViolation {
  bool is_group = false;
  std::string subject;  // "E1->E2" or "par{E5,E6,E7}"
  std::string message;
};

/// Sequence edge A->B is violated when both events occur and the first A
/// occurs after the first B. A parallel group's k-th round must be fully
/// over before any member starts round k+1. Occurrence names outside the
/// chronology's alphabet are ignored.
inline std::vector<ChronologyViolation> check_chronology(
    const std::vector<EventOccurrence>& occurrences, const Chronology& chron) {
  std::map<std::string, std::vector<long>> times;
  for (const EventOccurrence& o : occurrences) times[o.name].push_back(o.time);
  for (auto& [name, ts] : times) std::sort(ts.begin(), ts.end());

  std::vector<ChronologyViolation> out;
  for (const ChronoEdge& e : chron.edges) {
    auto a = times.find(e.before);
    auto b = times.find(e.after);
    if (a == times.end() || b == times.end()) continue;
    if (a->second.front() > b->second.front())
      out.push_back({false, e.before + "->" + e.after,
                     "'" + e.after + "' occurred before '" + e.before + "'"});
  }
  for (const ParallelGroup& g : chron.groups) {
    std::string subject = "par{";
    for (std::size_t i = 0; i < g.members.size(); ++i)
      subject += (i ? "," : "") + g.members[i];
    subject += "}";
    std::size_t rounds = 0;
    for (const std::string& name : g.members) {
      auto it = times.find(name);
      if (it != times.end()) rounds = std::max(rounds, it->second.size());
    }
    for (std::size_t k = 0; k + 1 < rounds; ++k) {
      long round_end = std::numeric_limits<long>::min();
      long next_start = std::numeric_limits<long>::max();
      for (const std::string& name : g.members) {
        auto it = times.find(name);
        if (it == times.end()) continue;
        if (it->second.size() > k) round_end = std::max(round_end, it->second[k]);
        if (it->second.size() > k + 1) next_start = std::min(next_start, it->second[k + 1]);
      }
      if (next_start <= round_end) {
        out.push_back({true, subject,
                       "round " + std::to_string(k + 2) +
                           " starts before round " + std::to_string(k + 1) +
                           " has finished"});
        break;
      }
    }
  }
  return out;
}

}  // namespace tmkit

#endif  // TMKIT_ENGINE_HPP
