#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symsig/json_io.hpp"

namespace symsig {

// A declarative list of operations.  Each step names an op and arguments;
// arguments reference fixtures as "fixture:<name>" and earlier step outputs
// as "$<id>".  An optional "expect" field pins the step's output value.
struct ScenarioStep {
  std::string id;
  std::string op;
  Json args;
  std::optional<Json> expect;
};

struct Scenario {
  std::string name;
  std::vector<ScenarioStep> steps;
};

Scenario parse_scenario(const Json& j);                  // throws ParseError
Scenario load_scenario(const std::string& path);         // throws ParseError

struct StepOutcome {
  std::string id;
  std::string op;
  bool pass = false;
  bool inconclusive = false;
  std::string detail;
  Json output;  // envelope {"kind", "value"}
};

// Deterministic given (scenario, seed); wall-clock is intentionally not a
// field so serialized reports are byte-stable.
struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  bool ok = true;
  bool inconclusive = false;
  std::vector<StepOutcome> steps;
};

// Executes steps in order.  Structural problems (unknown op, bad reference,
// malformed arguments) throw StepFailure naming the step; mathematical
// failures and pinned-value mismatches become failing outcomes in the
// report.  Undecidable certificates mark the outcome inconclusive without
// failing it.
Report run_scenario(const Scenario& sc, std::uint64_t seed);
Report run_scenario_file(const std::string& path, std::uint64_t seed);

Json scenario_report_to_json(const Report& r);
std::string scenario_report_text(const Report& r);

}  // namespace symsig
