#ifndef TMKIT_TEXT_HPP
#define TMKIT_TEXT_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tmkit/builder.hpp"
#include "tmkit/diagnostics.hpp"
#include "tmkit/model.hpp"

// Textual surface for TM models (.tm files). parse() is total: any input
// yields either a Model or at least one Diagnostic. emit() produces the
// canonical form, and parse(emit(m)) reconstructs a structurally identical
// model.

namespace tmkit {

// ---------------------------------------------------------------------------
// Tokens

enum class TokKind {
  Ident, Int, String,
  LBrace, RBrace, Semi, Colon, Comma, Dot,
  Arrow, Assign, Plus, Minus,
  Lt, Le, EqEq, Ge, Gt,
  End
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  long value = 0;
  SourceSpan span;
};

inline bool is_reserved_word(std::string_view s) {
  static constexpr std::string_view words[] = {
      "model", "machine", "stages", "thing", "var", "flow", "trigger",
      "when", "event", "over", "chronology", "par", "then", "loop",
      "action", "at", "emit"};
  for (auto w : words)
    if (s == w) return true;
  return false;
}

/// Tokenizes .tm and .tmrun sources. Never throws: bad input is reported
/// through the diagnostics list and skipped.
class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run(std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      SourceSpan at{line_, col_, 1};
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          advance();
        at.length = static_cast<int>(pos_ - start);
        out.push_back({TokKind::Ident, std::string(src_.substr(start, pos_ - start)), 0, at});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
        at.length = static_cast<int>(pos_ - start);
        Token t{TokKind::Int, std::string(src_.substr(start, pos_ - start)), 0, at};
        try {
          t.value = std::stol(t.text);
        } catch (...) {
          diags.push_back({Severity::Error, "LexError",
                           "integer literal '" + t.text + "' out of range", at});
          t.value = 0;
        }
        out.push_back(std::move(t));
        continue;
      }
      if (c == '"') {
        std::string text;
        advance();
        bool closed = false;
        while (pos_ < src_.size()) {
          char d = src_[pos_];
          if (d == '"') { advance(); closed = true; break; }
          if (d == '\n') break;
          if (d == '\\' && pos_ + 1 < src_.size()) { advance(); d = src_[pos_]; }
          text.push_back(d);
          advance();
        }
        at.length = col_ - at.column;
        if (!closed)
          diags.push_back({Severity::Error, "LexError", "unterminated string literal", at});
        out.push_back({TokKind::String, std::move(text), 0, at});
        continue;
      }
      auto two = src_.substr(pos_, 2);
      if (two == "->") { advance(); advance(); at.length = 2; out.push_back({TokKind::Arrow, "->", 0, at}); continue; }
      if (two == "<=") { advance(); advance(); at.length = 2; out.push_back({TokKind::Le, "<=", 0, at}); continue; }
      if (two == ">=") { advance(); advance(); at.length = 2; out.push_back({TokKind::Ge, ">=", 0, at}); continue; }
      if (two == "==") { advance(); advance(); at.length = 2; out.push_back({TokKind::EqEq, "==", 0, at}); continue; }
      TokKind k;
      switch (c) {
        case '{': k = TokKind::LBrace; break;
        case '}': k = TokKind::RBrace; break;
        case ';': k = TokKind::Semi; break;
        case ':': k = TokKind::Colon; break;
        case ',': k = TokKind::Comma; break;
        case '.': k = TokKind::Dot; break;
        case '=': k = TokKind::Assign; break;
        case '+': k = TokKind::Plus; break;
        case '-': k = TokKind::Minus; break;
        case '<': k = TokKind::Lt; break;
        case '>': k = TokKind::Gt; break;
        default:
          diags.push_back({Severity::Error, "LexError",
                           std::string("unexpected character '") + c + "'", at});
          advance();
          continue;
      }
      advance();
      out.push_back({k, std::string(1, c), 0, at});
    }
    out.push_back({TokKind::End, "", 0, SourceSpan{line_, col_, 0}});
    return out;
  }

 private:
  void advance() {
    if (pos_ < src_.size() && src_[pos_] == '\n') { ++line_; col_ = 1; }
    else ++col_;
    ++pos_;
  }
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

struct ParseResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return model.has_value(); }
};

namespace detail {

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  void parse_model(ModelBuilder& b) {
    expect_word("model");
    b.set_name(expect_ident("model name"));
    expect(TokKind::LBrace, "'{'");
    while (!failed_ && !at(TokKind::RBrace) && !at(TokKind::End)) parse_item(b);
    expect(TokKind::RBrace, "'}'");
    if (!failed_ && !at(TokKind::End))
      error("expected end of input after model block");
  }

  bool failed() const { return failed_; }

 private:
  void parse_item(ModelBuilder& b) {
    const Token& t = cur();
    if (word("thing")) {
      SourceSpan s = t.span;
      next();
      b.add_thing(expect_ident("thing name"), s);
      expect(TokKind::Semi, "';'");
    } else if (word("var")) {
      SourceSpan s = t.span;
      next();
      std::string name = expect_ident("var name");
      long init = 0;
      if (at(TokKind::Assign)) { next(); init = expect_int(); }
      b.add_var(std::move(name), init, s);
      expect(TokKind::Semi, "';'");
    } else if (word("machine")) {
      parse_machine(b);
    } else if (word("flow")) {
      SourceSpan s = t.span;
      next();
      std::string thing = expect_ident("thing name");
      expect(TokKind::Colon, "':'");
      std::vector<std::string> chain;
      chain.push_back(parse_path());
      while (at(TokKind::Arrow)) { next(); chain.push_back(parse_path()); }
      if (!failed_ && chain.size() < 2) error("flow needs at least two stages");
      b.add_flow(std::move(thing), std::move(chain), s);
      expect(TokKind::Semi, "';'");
    } else if (word("trigger")) {
      SourceSpan s = t.span;
      next();
      std::string from = parse_path();
      expect(TokKind::Arrow, "'->'");
      std::string to = parse_path();
      std::optional<Guard> g;
      if (word("when")) { next(); g = parse_guard(); }
      b.add_trigger(std::move(from), std::move(to), std::move(g), s);
      expect(TokKind::Semi, "';'");
    } else if (word("action")) {
      parse_action(b);
    } else if (word("event")) {
      SourceSpan s = t.span;
      next();
      std::string name = expect_ident("event name");
      std::string desc;
      if (at(TokKind::String)) { desc = cur().text; next(); }
      else error("expected event description string");
      expect_word("over");
      expect(TokKind::LBrace, "'{'");
      std::vector<std::string> region;
      if (!at(TokKind::RBrace)) {
        region.push_back(parse_path());
        while (at(TokKind::Comma)) { next(); region.push_back(parse_path()); }
      }
      expect(TokKind::RBrace, "'}'");
      expect(TokKind::Semi, "';'");
      b.add_event(std::move(name), std::move(desc), std::move(region), s);
    } else if (word("chronology")) {
      parse_chronology(b);
    } else {
      error("expected a declaration (thing, var, machine, flow, trigger, action, event or chronology)");
    }
  }

  void parse_machine(ModelBuilder& b) {
    SourceSpan s = cur().span;
    next();  // machine
    b.begin_machine(expect_ident("machine name"), s);
    expect(TokKind::LBrace, "'{'");
    if (word("stages")) {
      next();
      parse_kind(b);
      while (at(TokKind::Comma)) { next(); parse_kind(b); }
      expect(TokKind::Semi, "';'");
    }
    while (!failed_ && word("machine")) parse_machine(b);
    expect(TokKind::RBrace, "'}'");
    b.end_machine();
  }

  void parse_kind(ModelBuilder& b) {
    SourceSpan s = cur().span;
    std::string w = expect_ident("stage kind");
    if (failed_) return;
    auto k = stage_kind_from(w);
    if (!k) { error_at(s, "'" + w + "' is not a stage kind"); return; }
    b.stage(*k, s);
  }

  void parse_action(ModelBuilder& b) {
    SourceSpan s = cur().span;
    next();  // action
    expect_word("at");
    std::string path = parse_path();
    expect(TokKind::LBrace, "'{'");
    std::vector<Assignment> effects;
    std::optional<ModelBuilder::EmitDecl> emits;
    while (!failed_ && !at(TokKind::RBrace) && !at(TokKind::End)) {
      if (word("emit")) {
        next();
        ModelBuilder::EmitDecl e;
        e.thing = expect_ident("thing name");
        expect_word("at");
        e.at_path = parse_path();
        if (at(TokKind::LBrace)) {
          next();
          while (!failed_ && !at(TokKind::RBrace) && !at(TokKind::End))
            e.payload.push_back(parse_assignment());
          expect(TokKind::RBrace, "'}'");
        }
        expect(TokKind::Semi, "';'");
        if (emits) error_at(s, "an action may emit at most one token");
        emits = std::move(e);
      } else {
        effects.push_back(parse_assignment());
      }
    }
    expect(TokKind::RBrace, "'}'");
    b.add_action(std::move(path), std::move(effects), std::move(emits), s);
  }

  Assignment parse_assignment() {
    Assignment a;
    a.target = expect_ident("assignment target");
    expect(TokKind::Assign, "'='");
    a.first = parse_operand();
    if (at(TokKind::Plus) || at(TokKind::Minus)) {
      a.op = at(TokKind::Plus) ? '+' : '-';
      next();
      a.second = parse_operand();
    }
    expect(TokKind::Semi, "';'");
    return a;
  }

  Operand parse_operand() {
    if (at(TokKind::Minus)) { next(); return Operand::lit(-expect_int_raw()); }
    if (at(TokKind::Int)) return Operand::lit(expect_int_raw());
    return Operand::ref(expect_ident("operand"));
  }

  Guard parse_guard() {
    Guard g;
    g.lhs = expect_ident("guard variable");
    switch (cur().kind) {
      case TokKind::Lt: g.cmp = CmpOp::Lt; break;
      case TokKind::Le: g.cmp = CmpOp::Le; break;
      case TokKind::EqEq: g.cmp = CmpOp::Eq; break;
      case TokKind::Ge: g.cmp = CmpOp::Ge; break;
      case TokKind::Gt: g.cmp = CmpOp::Gt; break;
      default:
        error("expected a comparison operator");
        return g;
    }
    next();
    if (at(TokKind::Int) || at(TokKind::Minus)) {
      g.rhs_is_literal = true;
      g.rhs_literal = at(TokKind::Minus) ? (next(), -expect_int_raw()) : expect_int_raw();
    } else {
      g.rhs_name = expect_ident("guard operand");
    }
    return g;
  }

  void parse_chronology(ModelBuilder& b) {
    next();  // chronology
    expect(TokKind::LBrace, "'{'");
    while (!failed_ && !at(TokKind::RBrace) && !at(TokKind::End)) {
      SourceSpan s = cur().span;
      if (word("par")) {
        next();
        expect(TokKind::LBrace, "'{'");
        std::vector<std::string> members;
        members.push_back(expect_ident("event name"));
        while (at(TokKind::Comma)) { next(); members.push_back(expect_ident("event name")); }
        expect(TokKind::RBrace, "'}'");
        expect_word("then");
        expect_word("loop");
        expect(TokKind::Semi, "';'");
        b.add_parallel_group(std::move(members), true, s);
      } else {
        std::string before = expect_ident("event name");
        expect(TokKind::Arrow, "'->'");
        std::string after = expect_ident("event name");
        expect(TokKind::Semi, "';'");
        b.add_chrono_edge(std::move(before), std::move(after), s);
      }
    }
    expect(TokKind::RBrace, "'}'");
  }

  std::string parse_path() {
    std::string p = expect_ident("stage path");
    while (at(TokKind::Dot)) {
      next();
      p += ".";
      p += expect_ident("path segment");
    }
    return p;
  }

  // --- token helpers -------------------------------------------------------

  const Token& cur() const { return toks_[idx_]; }
  bool at(TokKind k) const { return cur().kind == k; }
  bool word(std::string_view w) const {
    return cur().kind == TokKind::Ident && cur().text == w;
  }
  void next() {
    if (idx_ + 1 < toks_.size()) ++idx_;
  }

  std::string expect_ident(const std::string& what) {
    if (failed_) return "_";
    if (cur().kind != TokKind::Ident) {
      error("expected " + what);
      return "_";
    }
    if (is_reserved_word(cur().text)) {
      error("'" + cur().text + "' is a reserved word");
      return "_";
    }
    std::string t = cur().text;
    next();
    return t;
  }

  long expect_int() {
    if (at(TokKind::Minus)) { next(); return -expect_int_raw(); }
    return expect_int_raw();
  }

  long expect_int_raw() {
    if (failed_) return 0;
    if (cur().kind != TokKind::Int) {
      error("expected an integer");
      return 0;
    }
    long v = cur().value;
    next();
    return v;
  }

  void expect(TokKind k, const std::string& what) {
    if (failed_) return;
    if (cur().kind != k) {
      error("expected " + what);
      return;
    }
    next();
  }

  void expect_word(std::string_view w) {
    if (failed_) return;
    if (!word(w)) {
      error("expected '" + std::string(w) + "'");
      return;
    }
    next();
  }

  void error(const std::string& msg) { error_at(cur().span, msg); }

  void error_at(SourceSpan s, const std::string& msg) {
    if (failed_) return;
    failed_ = true;
    diags_.push_back({Severity::Error, "SyntaxError", msg, s});
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t idx_ = 0;
  bool failed_ = false;
};

}  // namespace detail

/// Parses a .tm source. Build-time problems (duplicate names, unresolved
/// references) are forwarded as diagnostics with the declaring span.
inline ParseResult parse(std::string_view text) {
  ParseResult out;
  Lexer lex(text);
  std::vector<Token> toks = lex.run(out.diagnostics);
  if (!out.diagnostics.empty()) return out;

  ModelBuilder b;
  detail::Parser p(std::move(toks), out.diagnostics);
  p.parse_model(b);
  if (p.failed() || !out.diagnostics.empty()) return out;

  BuildResult built = b.build();
  for (const BuildIssue& i : built.issues)
    out.diagnostics.push_back({Severity::Error, i.code, i.message, i.span});
  if (built.ok()) out.model = std::move(*built.model);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical emitter

namespace detail {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string operand_text(const Operand& o) {
  return o.is_literal ? std::to_string(o.literal) : o.name;
}

inline std::string assignment_text(const Assignment& a) {
  std::string s = a.target + " = " + operand_text(a.first);
  if (a.op) {
    s += ' ';
    s += a.op;
    s += ' ';
    s += operand_text(a.second);
  }
  return s + ";";
}

inline std::string guard_text(const Guard& g) {
  std::string rhs = g.rhs_is_literal ? std::to_string(g.rhs_literal) : g.rhs_name;
  return g.lhs + " " + to_string(g.cmp) + " " + rhs;
}

inline void emit_machine(const Model& m, MachineId id, int depth,
                         std::ostringstream& os) {
  std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
  const Machine& node = m.machines[id];
  os << ind << "machine " << node.name << " {\n";
  std::vector<std::string> kinds;
  for (StageKind k : kAllStageKinds)
    if (node.stage_of[static_cast<int>(k)] != kNone) kinds.push_back(to_string(k));
  if (!kinds.empty()) {
    os << ind << "  stages ";
    for (std::size_t i = 0; i < kinds.size(); ++i)
      os << (i ? ", " : "") << kinds[i];
    os << ";\n";
  }
  for (MachineId sub : node.submachines) emit_machine(m, sub, depth + 1, os);
  os << ind << "}\n";
}

}  // namespace detail

/// Canonical text for a model: two-space indent per nesting level, one arc
/// per flow line, stage kinds in fixed order, LF line endings.
inline std::string emit(const Model& m) {
  std::ostringstream os;
  os << "model " << m.name << " {\n";
  for (const ThingType& t : m.things) os << "  thing " << t.name << ";\n";
  for (const GlobalVar& v : m.vars) {
    os << "  var " << v.name;
    if (v.initial != 0) os << " = " << v.initial;
    os << ";\n";
  }
  for (MachineId r : m.roots) detail::emit_machine(m, r, 1, os);
  for (const FlowArc& f : m.flows)
    os << "  flow " << m.things[f.thing].name << ": " << m.stage_path(f.from)
       << " -> " << m.stage_path(f.to) << ";\n";
  for (const TriggerArc& t : m.triggers) {
    os << "  trigger " << m.stage_path(t.from) << " -> " << m.stage_path(t.to);
    if (t.guard) os << " when " << detail::guard_text(*t.guard);
    os << ";\n";
  }
  for (const ActionSpec& a : m.actions) {
    os << "  action at " << m.stage_path(a.stage) << " {\n";
    for (const Assignment& e : a.effects)
      os << "    " << detail::assignment_text(e) << "\n";
    if (a.emits) {
      os << "    emit " << m.things[a.emits->thing].name << " at "
         << m.stage_path(a.emits->at);
      if (!a.emits->payload.empty()) {
        os << " {";
        for (const Assignment& e : a.emits->payload)
          os << " " << detail::assignment_text(e);
        os << " }";
      }
      os << ";\n";
    }
    os << "  }\n";
  }
  for (const EventSpec& e : m.events) {
    os << "  event " << e.name << " " << detail::quote(e.description) << " over { ";
    for (std::size_t i = 0; i < e.region.size(); ++i) {
      const RegionElem& r = e.region[i];
      os << (i ? ", " : "");
      if (r.kind == RegionElem::Kind::Stage) os << m.stage_path(r.index);
    }
    os << " };\n";
  }
  if (!m.chronology.empty()) {
    os << "  chronology {\n";
    for (const ChronoEdge& e : m.chronology.edges)
      os << "    " << e.before << " -> " << e.after << ";\n";
    for (const ParallelGroup& g : m.chronology.groups) {
      os << "    par { ";
      for (std::size_t i = 0; i < g.members.size(); ++i)
        os << (i ? ", " : "") << g.members[i];
      os << " } then loop;\n";
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tmkit

#endif  // TMKIT_TEXT_HPP
