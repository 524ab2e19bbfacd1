// tm — authoring front end for TM models: parse and pretty-print, validate,
// simulate scenarios, detect events, check chronologies and export DOT.
//
// Exit codes: 0 success/clean, 1 validation errors, 2 usage/parse/IO
// failure, 3 chronology violations.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tmkit/check.hpp"
#include "tmkit/dot.hpp"
#include "tmkit/engine.hpp"
#include "tmkit/text.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationErrors = 1;
constexpr int kUsageFailure = 2;
constexpr int kChronologyViolations = 3;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads and parses a model file; on failure prints diagnostics to stderr
/// and returns nullopt.
std::optional<tmkit::Model> load_model(const std::string& path) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "tm: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  tmkit::ParseResult pr = tmkit::parse(*text);
  if (!pr.ok()) {
    for (const auto& d : pr.diagnostics) std::cerr << d.render() << "\n";
    return std::nullopt;
  }
  return std::move(pr.model);
}

int print_events_and_chronology(const tmkit::Trace& trace, const tmkit::Model& m,
                                bool with_events, bool with_chronology) {
  auto occurrences = tmkit::detect_events(trace, m);
  if (with_events)
    for (const auto& o : occurrences)
      std::cout << "event " << o.name << " t=" << o.time << "\n";
  if (!with_chronology) return kOk;
  auto violations = tmkit::check_chronology(occurrences, m.chronology);
  for (const auto& v : violations)
    std::cout << "violation " << v.subject << " " << v.message << "\n";
  return violations.empty() ? kOk : kChronologyViolations;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thinging Machine model toolkit"};
  app.require_subcommand(1);

  std::string model_path, scenario_path, format = "text";
  long max_ticks = 1000;
  bool with_events = false, with_chronology = false;

  auto* parse_cmd = app.add_subcommand("parse", "parse a model and print it back");
  parse_cmd->add_option("model", model_path, "path to a .tm file")->required();
  parse_cmd->add_option("--format", format, "text or dot")
      ->check(CLI::IsMember({"text", "dot"}));

  auto* validate_cmd = app.add_subcommand("validate", "run well-formedness checks");
  validate_cmd->add_option("model", model_path, "path to a .tm file")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "run a scenario and print the trace");
  simulate_cmd->add_option("model", model_path, "path to a .tm file")->required();
  simulate_cmd->add_option("scenario", scenario_path, "path to a .tmrun file")->required();
  simulate_cmd->add_option("--max-ticks", max_ticks, "stop after this many ticks");
  simulate_cmd->add_flag("--events", with_events, "append detected event occurrences");
  simulate_cmd->add_flag("--chronology", with_chronology,
                         "check occurrences against the chronology");

  auto* events_cmd = app.add_subcommand("events", "run a scenario and print occurrences only");
  events_cmd->add_option("model", model_path, "path to a .tm file")->required();
  events_cmd->add_option("scenario", scenario_path, "path to a .tmrun file")->required();
  events_cmd->add_option("--max-ticks", max_ticks, "stop after this many ticks");
  events_cmd->add_flag("--chronology", with_chronology,
                       "check occurrences against the chronology");

  auto* export_cmd = app.add_subcommand("export", "emit DOT or canonical text");
  export_cmd->add_option("model", model_path, "path to a .tm file")->required();
  export_cmd->add_option("--format", format, "dot or text")
      ->check(CLI::IsMember({"text", "dot"}));
  export_cmd->add_flag("--chronology", with_chronology,
                       "export the event chronology instead of the model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageFailure;
  }

  if (parse_cmd->parsed()) {
    auto m = load_model(model_path);
    if (!m) return kUsageFailure;
    std::cout << (format == "dot" ? tmkit::export_dot(*m) : tmkit::emit(*m));
    return kOk;
  }

  if (validate_cmd->parsed()) {
    auto m = load_model(model_path);
    if (!m) return kUsageFailure;
    auto diags = tmkit::validate(*m);
    for (const auto& d : diags) std::cout << d.render() << "\n";
    return tmkit::has_errors(diags) ? kValidationErrors : kOk;
  }

  if (export_cmd->parsed()) {
    auto m = load_model(model_path);
    if (!m) return kUsageFailure;
    if (with_chronology) std::cout << tmkit::export_chronology_dot(m->chronology);
    else std::cout << (format == "text" ? tmkit::emit(*m) : tmkit::export_dot(*m));
    return kOk;
  }

  // simulate / events
  auto m = load_model(model_path);
  if (!m) return kUsageFailure;
  auto diags = tmkit::validate(*m);
  if (tmkit::has_errors(diags)) {
    for (const auto& d : diags) std::cerr << d.render() << "\n";
    return kValidationErrors;
  }
  auto sc_text = read_file(scenario_path);
  if (!sc_text) {
    std::cerr << "tm: cannot read '" << scenario_path << "'\n";
    return kUsageFailure;
  }
  tmkit::ScenarioResult sr = tmkit::parse_scenario(*sc_text, *m);
  if (!sr.ok()) {
    for (const auto& d : sr.diagnostics) std::cerr << d.render() << "\n";
    return kUsageFailure;
  }
  tmkit::Trace trace;
  try {
    tmkit::SimState st = tmkit::init_simulation(*m, *sr.scenario);
    trace = tmkit::run(st, max_ticks);
  } catch (const tmkit::SimError& e) {
    std::cerr << "tm: " << e.code << ": " << e.what() << "\n";
    return kUsageFailure;
  }
  if (simulate_cmd->parsed()) {
    std::cout << tmkit::format_trace(trace, *m);
    return print_events_and_chronology(trace, *m, with_events, with_chronology);
  }
  return print_events_and_chronology(trace, *m, true, with_chronology);
}
