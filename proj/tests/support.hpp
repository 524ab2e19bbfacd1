#ifndef TMKIT_TESTS_SUPPORT_HPP
#define TMKIT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmkit/builder.hpp"
#include "tmkit/model.hpp"

namespace tmtest {

inline std::string source_dir() {
#ifdef TMKIT_SOURCE_DIR
  return TMKIT_SOURCE_DIR;
#else
  return ".";
#endif
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Random well-built models (resolvable references, not necessarily clean
// under validate) for round-trip properties.

class ModelGen {
 public:
  explicit ModelGen(unsigned seed) : rng_(seed) {}

  tmkit::Model operator()() {
    using tmkit::StageKind;
    tmkit::ModelBuilder b;
    b.set_name("G" + std::to_string(pick(0, 999)));

    int n_things = pick(1, 4);
    std::vector<std::string> things;
    for (int i = 0; i < n_things; ++i) things.push_back("T" + std::to_string(i));
    for (const auto& t : things) b.add_thing(t);

    int n_vars = pick(0, 4);
    std::vector<std::string> vars;
    for (int i = 0; i < n_vars; ++i) {
      vars.push_back("v" + std::to_string(i));
      b.add_var(vars.back(), pick(-20, 20));
    }

    stage_paths_.clear();
    stage_kinds_.clear();
    int machines = 0;
    int n_roots = pick(1, 4);
    for (int i = 0; i < n_roots; ++i) gen_machine(b, "", machines, 0);

    int n_flows = pick(0, 8);
    for (int i = 0; i < n_flows && stage_paths_.size() >= 2; ++i) {
      std::vector<std::string> chain;
      int len = pick(2, 4);
      for (int j = 0; j < len; ++j) chain.push_back(any_stage());
      b.add_flow(things[static_cast<std::size_t>(pick(0, n_things - 1))], chain);
    }

    int n_triggers = pick(0, 4);
    for (int i = 0; i < n_triggers && stage_paths_.size() >= 2; ++i) {
      std::optional<tmkit::Guard> g;
      if (!vars.empty() && pick(0, 1)) {
        tmkit::Guard guard;
        guard.lhs = vars[static_cast<std::size_t>(pick(0, n_vars - 1))];
        guard.cmp = static_cast<tmkit::CmpOp>(pick(0, 4));
        if (pick(0, 1)) {
          guard.rhs_is_literal = true;
          guard.rhs_literal = pick(-50, 50);
        } else {
          guard.rhs_name = vars[static_cast<std::size_t>(pick(0, n_vars - 1))];
        }
        g = guard;
      }
      b.add_trigger(any_stage(), any_stage(), g);
    }

    int n_actions = pick(0, 3);
    std::vector<std::string> action_sites;
    for (const auto& [path, kind] : stage_kinds_)
      if (kind == StageKind::Process || kind == StageKind::Create)
        action_sites.push_back(path);
    std::sort(action_sites.begin(), action_sites.end());
    for (int i = 0; i < n_actions && static_cast<std::size_t>(i) < action_sites.size(); ++i) {
      std::vector<tmkit::Assignment> effects;
      int n_eff = pick(1, 3);
      for (int j = 0; j < n_eff; ++j) {
        tmkit::Assignment a;
        a.target = pick(0, 1) && !vars.empty()
                       ? vars[static_cast<std::size_t>(pick(0, n_vars - 1))]
                       : "p" + std::to_string(pick(0, 2));
        a.first = operand(vars);
        if (pick(0, 1)) {
          a.op = pick(0, 1) ? '+' : '-';
          a.second = operand(vars);
        }
        effects.push_back(std::move(a));
      }
      std::optional<tmkit::ModelBuilder::EmitDecl> emit;
      if (pick(0, 3) == 0) {
        tmkit::ModelBuilder::EmitDecl e;
        e.thing = things[static_cast<std::size_t>(pick(0, n_things - 1))];
        e.at_path = any_stage();
        if (pick(0, 1))
          e.payload.push_back({"p0", operand(vars), 0, {}});
        emit = std::move(e);
      }
      b.add_action(action_sites[static_cast<std::size_t>(i)], std::move(effects),
                   std::move(emit));
    }

    int n_events = pick(0, 3);
    std::vector<std::string> events;
    for (int i = 0; i < n_events && !stage_paths_.empty(); ++i) {
      events.push_back("E" + std::to_string(i));
      std::vector<std::string> region;
      int n_region = pick(1, 3);
      for (int j = 0; j < n_region; ++j) region.push_back(any_stage());
      b.add_event(events.back(), "event " + std::to_string(i), region);
    }
    if (events.size() >= 2) {
      int n_edges = pick(0, 3);
      for (int i = 0; i < n_edges; ++i)
        b.add_chrono_edge(events[static_cast<std::size_t>(pick(0, static_cast<int>(events.size()) - 1))],
                          events[static_cast<std::size_t>(pick(0, static_cast<int>(events.size()) - 1))]);
      if (pick(0, 1)) b.add_parallel_group(events, true);
    }

    tmkit::BuildResult r = b.build();
    if (!r.ok())
      throw std::runtime_error("generator produced an unbuildable model: " +
                               r.issues.front().message);
    return std::move(*r.model);
  }

 private:
  void gen_machine(tmkit::ModelBuilder& b, const std::string& prefix, int& counter,
                   int depth) {
    std::string name = "M" + std::to_string(counter++);
    std::string path = prefix.empty() ? name : prefix + "." + name;
    b.begin_machine(name);
    int n_kinds = pick(1, 5);
    std::vector<int> kinds = {0, 1, 2, 3, 4};
    std::shuffle(kinds.begin(), kinds.end(), rng_);
    kinds.resize(static_cast<std::size_t>(n_kinds));
    std::sort(kinds.begin(), kinds.end());
    for (int k : kinds) {
      auto kind = static_cast<tmkit::StageKind>(k);
      b.stage(kind);
      std::string sp = path + "." + tmkit::to_string(kind);
      stage_paths_.push_back(sp);
      stage_kinds_.emplace_back(sp, kind);
    }
    if (depth < 2) {
      int n_subs = pick(0, 2);
      for (int i = 0; i < n_subs; ++i) gen_machine(b, path, counter, depth + 1);
    }
    b.end_machine();
  }

  tmkit::Operand operand(const std::vector<std::string>& vars) {
    int c = pick(0, 2);
    if (c == 0) return tmkit::Operand::lit(pick(-30, 30));
    if (c == 1 && !vars.empty())
      return tmkit::Operand::ref(vars[static_cast<std::size_t>(pick(0, static_cast<int>(vars.size()) - 1))]);
    return tmkit::Operand::ref("p" + std::to_string(pick(0, 2)));
  }

  std::string any_stage() {
    return stage_paths_[static_cast<std::size_t>(pick(0, static_cast<int>(stage_paths_.size()) - 1))];
  }

  int pick(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  std::mt19937 rng_;
  std::vector<std::string> stage_paths_;
  std::vector<std::pair<std::string, tmkit::StageKind>> stage_kinds_;
};

inline std::string random_bytes(std::mt19937& rng, std::size_t max_len) {
  std::uniform_int_distribution<int> len_dist(0, static_cast<int>(max_len));
  std::uniform_int_distribution<int> byte_dist(0, 255);
  std::string s(static_cast<std::size_t>(len_dist(rng)), '\0');
  for (char& c : s) c = static_cast<char>(byte_dist(rng));
  return s;
}

}  // namespace tmtest

#endif  // TMKIT_TESTS_SUPPORT_HPP
