// bslab: run BS(1,n) circle-action scenarios and write reports.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bslab/errors.hpp"
#include "bslab/report.hpp"
#include "bslab/scenario.hpp"

namespace {

enum Exit { kOk = 0, kExperimentFailed = 1, kConfigError = 2, kIoError = 3 };

struct OutputFlags {
  std::string out;
  std::vector<std::string> formats;
  std::optional<std::uint64_t> seed;
  bool no_timestamp = false;
};

std::string stem_for(const std::string& name) {
  std::string s;
  for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return s.empty() ? "report" : s;
}

std::string output_dir(const OutputFlags& flags, const bslab::Scenario& s) {
  if (!flags.out.empty()) return flags.out;
  if (s.output_dir) return *s.output_dir;
  if (const char* env = std::getenv("BSLAB_OUT_DIR"); env && *env) return env;
  return "bslab-out";
}

int execute(const bslab::Scenario& s, const OutputFlags& flags) {
  bslab::RunOptions opts;
  opts.timestamp = !flags.no_timestamp;
  opts.seed = flags.seed;
  std::vector<std::string> formats = flags.formats;
  if (formats.empty()) formats = s.formats;
  if (formats.empty()) formats = {"json"};

  bslab::RunResult result = bslab::run_scenario(s, opts);
  for (const auto& e : result.report["experiments"]) {
    std::cout << e["type"].get<std::string>() << ": " << e["status"].get<std::string>();
    if (e.contains("error")) std::cout << " (" << e["error"]["message"].get<std::string>() << ")";
    std::cout << "\n";
  }
  if (result.report["action"].contains("error")) {
    std::cerr << "action: " << result.report["action"]["message"].get<std::string>() << "\n";
  }
  std::string dir = output_dir(flags, s);
  for (const auto& f : formats) {
    for (const auto& path : bslab::emit_report(result.report, bslab::parse_format(f), dir, stem_for(s.name))) {
      std::cout << "wrote " << path << "\n";
    }
  }
  return result.ok ? kOk : kExperimentFailed;
}

void add_output_flags(CLI::App* cmd, OutputFlags& flags) {
  cmd->add_option("--out", flags.out, "Output directory (default: $BSLAB_OUT_DIR or ./bslab-out)");
  cmd->add_option("--format", flags.formats, "Report format(s): json, csv, plotdata")
      ->check(CLI::IsMember({"json", "csv", "plotdata"}))
      ->take_all();
  cmd->add_option("--seed", flags.seed, "Override the scenario seed");
  cmd->add_flag("--no-timestamp", flags.no_timestamp, "Omit the generated_at field");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bslab: computational lab for BS(1,n) actions on the circle"};
  app.require_subcommand(1);

  OutputFlags run_flags, demo_flags;
  std::string run_config, validate_config, demo_name;
  bool list_demos = false;

  CLI::App* run = app.add_subcommand("run", "Run a scenario config");
  run->add_option("config", run_config, "Scenario JSON file")->required();
  add_output_flags(run, run_flags);

  CLI::App* validate = app.add_subcommand("validate", "Check a scenario config without running it");
  validate->add_option("config", validate_config, "Scenario JSON file")->required();

  CLI::App* demo = app.add_subcommand("demo", "Run a built-in scenario");
  demo->add_option("name", demo_name, "standard-n2 | pl-conjugated-n2 | synthetic-denjoy-depth8");
  demo->add_flag("--list", list_demos, "List built-in scenarios");
  add_output_flags(demo, demo_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return execute(bslab::load_scenario(run_config), run_flags);
    if (*validate) {
      bslab::Scenario s = bslab::load_scenario(validate_config);
      std::cout << "valid: " << s.name << " (n=" << s.n << ", " << s.experiments.size() << " experiments)\n";
      return kOk;
    }
    if (list_demos || demo_name.empty()) {
      for (const auto& name : bslab::demo_names()) std::cout << name << "\n";
      return demo_name.empty() && !list_demos ? kConfigError : kOk;
    }
    return execute(bslab::parse_scenario(bslab::demo_config(demo_name)), demo_flags);
  } catch (const bslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const bslab::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  }
}
