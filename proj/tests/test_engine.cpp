#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "support.hpp"
#include "tmkit/check.hpp"
#include "tmkit/engine.hpp"
#include "tmkit/inventory.hpp"
#include "tmkit/text.hpp"

using namespace tmkit;

namespace {

Model corpus() { return inventory::build_inventory_model(); }

Scenario scenario_file(const Model& m, const std::string& name) {
  auto sr = parse_scenario(
      tmtest::read_file(tmtest::source_dir() + "/scenarios/" + name), m);
  REQUIRE(sr.ok());
  return *sr.scenario;
}

std::vector<std::string> event_names(const std::vector<EventOccurrence>& occ) {
  std::vector<std::string> out;
  for (const auto& o : occ) out.push_back(o.name);
  return out;
}

}  // namespace

TEST_CASE("init applies overrides and leaves queues empty") {
  Model m = corpus();
  Scenario sc;
  sc.sets = {{"current_stock", 100}, {"minimum", 20}};
  SimState st = init_simulation(m, sc);
  CHECK(st.clock == 0);
  CHECK(st.var("current_stock") == 100);
  CHECK(st.var("minimum") == 20);
  CHECK(st.live_tokens() == 0);
}

TEST_CASE("vars default to their declared initials") {
  Model m = corpus();
  SimState st = init_simulation(m, Scenario{});
  for (const GlobalVar& v : m.vars) CHECK(st.var(v.name) == v.initial);
}

TEST_CASE("setting an undeclared var is refused") {
  Model m = corpus();
  Scenario sc;
  sc.sets = {{"bogus", 1}};
  try {
    init_simulation(m, sc);
    FAIL("expected SimError");
  } catch (const SimError& e) {
    CHECK(e.code == "ScenarioVarUnknown");
  }
}

TEST_CASE("one step moves one token and records depart then arrive") {
  auto pr = parse(
      "model M { thing T; machine A { stages transfer, receive; }\n"
      "flow T: A.transfer -> A.receive; }");
  REQUIRE(pr.ok());
  Scenario sc;
  sc.injections.push_back({0, 0, pr.model->find_stage("A.transfer"), {}});
  SimState st = init_simulation(*pr.model, sc);
  auto created = step(st);
  REQUIRE(created);
  REQUIRE(created->size() == 1);
  CHECK((*created)[0].verb == Verb::Create);
  auto moved = step(st);
  REQUIRE(moved);
  REQUIRE(moved->size() == 2);
  CHECK((*moved)[0].verb == Verb::Depart);
  CHECK((*moved)[1].verb == Verb::Arrive);
  CHECK((*moved)[1].stage == pr.model->find_stage("A.receive"));
  CHECK(st.clock == 2);
}

TEST_CASE("of two enabled moves the first-declared arc wins") {
  auto pr = parse(
      "model M { thing T; machine A { stages create, process, release; }\n"
      "flow T: A.create -> A.release;\n"
      "flow T: A.create -> A.process; }");
  REQUIRE(pr.ok());
  Scenario sc;
  sc.injections.push_back({0, 0, pr.model->find_stage("A.create"), {}});
  SimState st = init_simulation(*pr.model, sc);
  step(st);
  auto moved = step(st);
  REQUIRE(moved);
  CHECK((*moved)[1].stage == pr.model->find_stage("A.release"));
}

TEST_CASE("actions compute from globals and payload on arrival") {
  auto pr = parse(
      "model M { thing T; var current_stock = 100; var new_stock;\n"
      "machine A { stages create, process; }\n"
      "flow T: A.create -> A.process;\n"
      "action at A.process { new_stock = current_stock - qty; } }");
  REQUIRE(pr.ok());
  Scenario sc;
  sc.injections.push_back({0, 0, pr.model->find_stage("A.create"), {{"qty", 30}}});
  SimState st = init_simulation(*pr.model, sc);
  step(st);
  auto moved = step(st);
  REQUIRE(moved);
  CHECK(st.var("new_stock") == 70);
  CHECK((*moved)[1].vars[pr.model->var_index("new_stock")] == 70);
}

TEST_CASE("an action emit spawns a fresh token as its own step") {
  auto pr = parse(
      "model M { thing T; thing U; var x = 4;\n"
      "machine A { stages create, process; } machine B { stages create; }\n"
      "flow T: A.create -> A.process;\n"
      "action at A.process { emit U at B.create { q = x; }; } }");
  REQUIRE(pr.ok());
  Scenario sc;
  sc.injections.push_back({0, 0, pr.model->find_stage("A.create"), {}});
  SimState st = init_simulation(*pr.model, sc);
  Trace tr = run(st, 50);
  REQUIRE(tr.size() == 4);  // create, depart+arrive, create
  CHECK(tr.back().verb == Verb::Create);
  CHECK(tr.back().stage == pr.model->find_stage("B.create"));
  const auto& q = st.queues[pr.model->find_stage("B.create")];
  REQUIRE(q.size() == 1);
  CHECK(q.front().field("q") == 4);
}

TEST_CASE("zero max_ticks yields an empty trace") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "above_min.tmrun"));
  CHECK(run(st, 0).empty());
}

TEST_CASE("the same state run twice gives identical traces") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "partial.tmrun"));
  SimState copy = st;
  Trace a = run(st, 300);
  Trace b = run(copy, 300);
  CHECK(format_trace(a, m) == format_trace(b, m));
}

TEST_CASE("the above-minimum run ends with items reaching the requester") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "above_min.tmrun"));
  Trace tr = run(st, 300);
  REQUIRE_FALSE(tr.empty());
  CHECK(tr.back().verb == Verb::Arrive);
  CHECK(m.stage_path(tr.back().stage) == "RequestingDepartment.Delivery.receive");
  CHECK(st.var("current_stock") == 70);
}

TEST_CASE("tokens flow only on stages of their own stream") {
  Model m = corpus();
  for (const char* sc : {"above_min.tmrun", "partial.tmrun", "below_min.tmrun",
                         "replenish.tmrun"}) {
    SimState st = init_simulation(m, scenario_file(m, sc));
    Trace tr = run(st, 400);
    for (const TraceRecord& r : tr) {
      ThingId stream = m.stages[r.stage].stream;
      if (stream != kNone) CHECK(r.thing == stream);
    }
  }
}

TEST_CASE("creates minus decreates equals live tokens for every prefix") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "replenish.tmrun"));
  Trace tr = run(st, 400);
  long created = 0, decreated = 0;
  for (const TraceRecord& r : tr) {
    if (r.verb == Verb::Create) ++created;
    if (r.verb == Verb::Decreate) ++decreated;
    CHECK(created - decreated >= 0);
  }
  CHECK(created - decreated == st.live_tokens());
}

TEST_CASE("record times never decrease and share the step tick") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "replenish.tmrun"));
  long last = 0;
  while (true) {
    long before = st.clock;
    auto recs = step(st);
    if (!recs) break;
    CHECK(st.clock == before + 1);
    for (const TraceRecord& r : *recs) {
      CHECK(r.tick == before);
      CHECK(r.tick >= last);
      last = r.tick;
    }
  }
}

TEST_CASE("guarded branch stages are only entered when their guard held") {
  Model m = corpus();
  int calc = m.find_stage("DecisionMachine.Calc.transfer");
  int backlog = m.find_stage("QueueSystem.Backlog.transfer");
  int items = m.find_stage("Inventory.Items.create");
  int cur = m.var_index("current_stock");
  int minimum = m.var_index("minimum");
  int fresh = m.var_index("new_stock");
  for (const char* sc : {"above_min.tmrun", "partial.tmrun", "below_min.tmrun",
                         "replenish.tmrun"}) {
    SimState st = init_simulation(m, scenario_file(m, sc));
    Trace tr = run(st, 400);
    for (const TraceRecord& r : tr) {
      if (r.verb == Verb::Arrive && r.stage == calc)
        CHECK(r.vars[cur] > r.vars[minimum]);
      if (r.verb == Verb::Arrive && r.stage == backlog)
        CHECK(r.vars[cur] <= r.vars[minimum]);
      if (r.verb == Verb::Create && r.stage == items)
        CHECK(r.vars[fresh] >= r.vars[minimum]);
    }
  }
}

TEST_CASE("a token at a release stage with no outgoing arc de-creates") {
  auto pr = parse(
      "model M { thing T; machine A { stages create, release; }\n"
      "flow T: A.create -> A.release; }");
  REQUIRE(pr.ok());
  Scenario sc;
  sc.injections.push_back({0, 0, pr.model->find_stage("A.create"), {}});
  SimState st = init_simulation(*pr.model, sc);
  Trace tr = run(st, 20);
  REQUIRE_FALSE(tr.empty());
  CHECK(tr.back().verb == Verb::Decreate);
  CHECK(st.live_tokens() == 0);
}

TEST_CASE("per token, arrivals and departures pair up stage by stage") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "replenish.tmrun"));
  Trace tr = run(st, 400);
  std::map<long, StageId> at;        // token -> stage it currently occupies
  std::map<long, bool> terminated;
  for (const TraceRecord& r : tr) {
    CHECK_FALSE(terminated[r.token]);
    switch (r.verb) {
      case Verb::Create:
        CHECK(at.find(r.token) == at.end());
        at[r.token] = r.stage;
        break;
      case Verb::Depart:
        REQUIRE(at.find(r.token) != at.end());
        CHECK(at[r.token] == r.stage);
        at.erase(r.token);
        break;
      case Verb::Arrive:
        CHECK(at.find(r.token) == at.end());
        at[r.token] = r.stage;
        break;
      case Verb::Decreate:
        REQUIRE(at.find(r.token) != at.end());
        CHECK(at[r.token] == r.stage);
        at.erase(r.token);
        terminated[r.token] = true;
        break;
    }
  }
}

TEST_CASE("arc region elements witness completed traversals") {
  auto pr = parse(
      "model M { thing T; machine A { stages create, process; }\n"
      "flow T: A.create -> A.process; }");
  REQUIRE(pr.ok());
  Model m = *pr.model;
  EventSpec arc_event;
  arc_event.name = "X";
  arc_event.description = "the arc is traversed";
  arc_event.region = {{RegionElem::Kind::Flow, 0}};

  Scenario sc;
  sc.injections.push_back({0, 0, m.find_stage("A.create"), {}});
  SimState st = init_simulation(m, sc);
  Trace tr = run(st, 10);
  std::vector<EventSpec> specs = {arc_event};
  auto occ = detect_events(tr, m, specs);
  REQUIRE(occ.size() == 1);
  CHECK(occ[0].name == "X");
  CHECK(occ[0].time == 1);
}

TEST_CASE("detected event sequences match the three availability cases") {
  Model m = corpus();
  auto detect = [&](const char* sc) {
    SimState st = init_simulation(m, scenario_file(m, sc));
    Trace tr = run(st, 300);
    return event_names(detect_events(tr, m));
  };
  CHECK(detect("above_min.tmrun") ==
        std::vector<std::string>{"E1", "E2", "E3", "E4", "E5", "E6", "E7"});
  CHECK(detect("partial.tmrun") ==
        std::vector<std::string>{"E1", "E2", "E3", "E4", "E5", "E8", "E9"});
  CHECK(detect("below_min.tmrun") ==
        std::vector<std::string>{"E1", "E2", "E10", "E11"});
}

TEST_CASE("an empty trace has no occurrences") {
  Model m = corpus();
  CHECK(detect_events(Trace{}, m).empty());
}

TEST_CASE("occurrence witnesses lie inside the region and window") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "partial.tmrun"));
  Trace tr = run(st, 300);
  auto occ = detect_events(tr, m);
  for (const EventOccurrence& o : occ) {
    const EventSpec& spec = m.events[static_cast<std::size_t>(o.spec)];
    std::set<int> region;
    for (const RegionElem& e : spec.region) region.insert(e.index);
    for (std::size_t w : o.witnesses) {
      CHECK(region.count(tr[w].stage) == 1);
      CHECK(tr[w].tick <= o.time);
    }
  }
}

TEST_CASE("chronology edges compare first occurrences") {
  Chronology c;
  c.edges = {{"E1", "E2"}};
  std::vector<EventOccurrence> ordered = {{0, "E1", 1, {}}, {1, "E2", 3, {}}};
  CHECK(check_chronology(ordered, c).empty());
  std::vector<EventOccurrence> inverted = {{1, "E2", 1, {}}, {0, "E1", 3, {}}};
  auto v = check_chronology(inverted, c);
  REQUIRE(v.size() == 1);
  CHECK(v[0].subject == "E1->E2");
  std::vector<EventOccurrence> lone = {{1, "E2", 1, {}}};
  CHECK(check_chronology(lone, c).empty());
}

TEST_CASE("a parallel group rejects interleaved rounds") {
  Chronology c;
  c.groups = {{{"E5", "E6", "E7"}, true}};
  std::vector<EventOccurrence> fine = {
      {0, "E5", 10, {}}, {1, "E6", 11, {}}, {2, "E7", 12, {}},
      {0, "E5", 20, {}}, {1, "E6", 21, {}}, {2, "E7", 22, {}}};
  CHECK(check_chronology(fine, c).empty());
  std::vector<EventOccurrence> second_e5_early = {
      {0, "E5", 10, {}}, {0, "E5", 11, {}}, {1, "E6", 11, {}}, {2, "E7", 12, {}}};
  auto v = check_chronology(second_e5_early, c);
  REQUIRE(v.size() == 1);
  CHECK(v[0].is_group);
}

TEST_CASE("scenario parsing reports unknown names with spans") {
  Model m = corpus();
  auto bad_thing = parse_scenario("inject Widget at Inventory.Check.transfer t=0\n", m);
  REQUIRE_FALSE(bad_thing.ok());
  auto bad_stage = parse_scenario("inject Request at Inventory.Nope.transfer t=0\n", m);
  REQUIRE_FALSE(bad_stage.ok());
  auto bad_word = parse_scenario("put Request somewhere\n", m);
  REQUIRE_FALSE(bad_word.ok());
  for (const auto* r : {&bad_thing, &bad_stage, &bad_word})
    for (const auto& d : r->diagnostics) CHECK(d.span.line >= 1);
}

TEST_CASE("trace lines follow the documented format") {
  Model m = corpus();
  SimState st = init_simulation(m, scenario_file(m, "above_min.tmrun"));
  Trace tr = run(st, 300);
  std::string first = format_record(tr.front(), m);
  CHECK(first ==
        "t=0 tok=1 thing=Request stage=RequestingDepartment.Orders.create "
        "verb=create vars={available:0,current_stock:100,maximum:100,minimum:20,"
        "new_stock:0,pending:0,pending_total:0,queued_count:0,reorder_qty:0,"
        "requested:0}");
}
