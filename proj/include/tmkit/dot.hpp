#ifndef TMKIT_DOT_HPP
#define TMKIT_DOT_HPP

#include <sstream>
#include <string>

#include "tmkit/model.hpp"

// Graphviz rendering: machines as nested clusters, stages as nodes, flows
// as solid edges and triggers as dashed ones. Output depends only on the
// model, byte for byte.

namespace tmkit {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void dot_machine(const Model& m, MachineId id, int depth,
                        std::ostringstream& os) {
  std::string ind(static_cast<std::size_t>(depth) * 2, ' ');
  const Machine& node = m.machines[id];
  os << ind << "subgraph " << dot_quote("cluster_" + node.path) << " {\n";
  os << ind << "  label=" << dot_quote(node.name) << ";\n";
  for (StageKind k : kAllStageKinds) {
    StageId s = node.stage_of[static_cast<int>(k)];
    if (s == kNone) continue;
    os << ind << "  " << dot_quote(m.stage_path(s)) << " [label="
       << dot_quote(to_string(k)) << "];\n";
  }
  for (MachineId sub : node.submachines) dot_machine(m, sub, depth + 1, os);
  os << ind << "}\n";
}

inline std::string guard_label(const Guard& g) {
  std::string rhs = g.rhs_is_literal ? std::to_string(g.rhs_literal) : g.rhs_name;
  return "when " + g.lhs + " " + to_string(g.cmp) + " " + rhs;
}

}  // namespace detail

inline std::string export_dot(const Model& m) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(m.name.empty() ? "model" : m.name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box,fontsize=10];\n";
  for (MachineId r : m.roots) detail::dot_machine(m, r, 1, os);
  for (const FlowArc& f : m.flows)
    os << "  " << detail::dot_quote(m.stage_path(f.from)) << " -> "
       << detail::dot_quote(m.stage_path(f.to)) << " [label="
       << detail::dot_quote(m.things[f.thing].name) << "];\n";
  for (const TriggerArc& t : m.triggers) {
    os << "  " << detail::dot_quote(m.stage_path(t.from)) << " -> "
       << detail::dot_quote(m.stage_path(t.to)) << " [style=dashed";
    if (t.guard) os << ",label=" << detail::dot_quote(detail::guard_label(*t.guard));
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

/// Chronology as a DAG; each parallel group joins through a bar node kept
/// on its own rank, the loop groups annotated as such.
inline std::string export_chronology_dot(const Chronology& c) {
  std::ostringstream os;
  os << "digraph \"chronology\" {\n";
  os << "  rankdir=TB;\n";
  os << "  node [shape=ellipse,fontsize=10];\n";
  for (const ChronoEdge& e : c.edges)
    os << "  " << detail::dot_quote(e.before) << " -> " << detail::dot_quote(e.after)
       << ";\n";
  for (std::size_t i = 0; i < c.groups.size(); ++i) {
    const ParallelGroup& g = c.groups[i];
    std::string join = "join" + std::to_string(i);
    os << "  " << detail::dot_quote(join)
       << " [shape=box,style=filled,fillcolor=black,height=0.06,width=1.2,label="
       << (g.then_loop ? "\"\",xlabel=\"loop\"" : "\"\"") << "];\n";
    os << "  { rank=same;";
    for (const std::string& mname : g.members) os << " " << detail::dot_quote(mname) << ";";
    os << " }\n";
    for (const std::string& mname : g.members)
      os << "  " << detail::dot_quote(mname) << " -> " << detail::dot_quote(join)
         << " [arrowhead=none];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tmkit

#endif  // TMKIT_DOT_HPP
