#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bslab/circle_map.hpp"
#include "bslab/obstruction.hpp"

namespace bslab {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "bslab.report/1";

struct ExperimentSpec {
  std::string type;  // rotation | orbit | obstruction | semiconjugacy
  Json params;       // validated parameters with defaults filled in
  std::string pointer;
};

struct Scenario {
  std::string name;
  int n = 2;
  std::uint64_t seed = 0;
  Json action;  // {"generator": ...} or {"f": literal, "h": literal}
  std::vector<ExperimentSpec> experiments;
  std::optional<std::string> output_dir;
  std::vector<std::string> formats;
};

/// Validates a parsed config. Unknown keys and out-of-range parameters raise
/// ConfigError naming the offending JSON pointer.
Scenario parse_scenario(const Json& config);
/// Parses JSON text; syntax errors become ConfigError with a line number.
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

/// Parses a map literal: {"moebius": [a,b,c,d]}, {"pl": {...}},
/// {"rotation": "p/q"}. Throws ConfigError.
CircleMap parse_map(const Json& literal, const std::string& pointer = "");
/// {"angular": "p/q"}, {"projective": "p/q"} or "inf".
CirclePoint parse_point(const Json& literal, const std::string& pointer = "");
Arc parse_arc(const Json& literal, const std::string& pointer = "");

/// The maps of a scenario plus whatever the generator knows about them.
struct Action {
  CircleMap f;
  CircleMap h;
  std::string origin;
  std::optional<CirclePoint> fixed_point;  // known common fixed point
  std::optional<CirclePoint> base;         // preferred semiconjugacy base point
  std::optional<ObstructionConfig> obstruction;
  std::vector<Arc> relation_domain;
};

Action build_action(const Scenario& s);

struct RunOptions {
  bool timestamp = true;
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
};

struct RunResult {
  Json report;
  bool ok = true;  // false iff an experiment raised an error
};

RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

/// Built-in scenarios for `demo`: standard-n2, pl-conjugated-n2,
/// synthetic-denjoy-depth8.
std::vector<std::string> demo_names();
Json demo_config(const std::string& name);

/// Exact values as "p/q"; decimals rounded outward.
std::string exact_string(const Scalar& s);
std::string decimal_down(const Scalar& s);
std::string decimal_up(const Scalar& s);
std::string decimal(const Scalar& s);
Json point_json(const CirclePoint& p);

}  // namespace bslab
