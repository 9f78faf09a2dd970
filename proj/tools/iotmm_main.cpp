// Batch CLI over the iotmm library: micromort ratios, probability calculus,
// scenario reports and Monte Carlo VaR summaries. All diagnostics go to
// stderr; stdout carries only results and is byte-identical across identical
// invocations.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "iotmm/iotmm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitComputationError = 3;

int exit_code_for(const iotmm::Error& e) {
  return iotmm::is_input_error(e.code()) ? kExitInputError : kExitComputationError;
}

void print_error(const iotmm::Error& e) {
  std::cerr << "error: " << iotmm::error_code_name(e.code()) << ": " << e.what() << "\n";
}

struct MicromortArgs {
  std::uint64_t vulnerable = 0;
  std::uint64_t total = 0;
  std::string label = "observation";
};

int run_micromort(const MicromortArgs& args) {
  const auto result = iotmm::iot_micromort({args.label, args.vulnerable, args.total});
  if (!result.label.empty()) std::cout << "label=" << result.label << "\n";
  std::cout << "ratio=" << iotmm::format_full(result.ratio) << "\n";
  std::cout << "micromorts=" << iotmm::format_full(result.micromorts) << "\n";
  std::cout << "ratio_display=" << iotmm::display_ratio(result.ratio) << "\n";
  return kExitOk;
}

struct ProbInvertArgs {
  double p_tx = 0.0;
  double p_tx_given_y = 0.0;
  double p_tx_given_t = 0.0;
};

int run_prob_invert(const ProbInvertArgs& args) {
  const double p_t =
      iotmm::invert_vertical_probability(args.p_tx, args.p_tx_given_y, args.p_tx_given_t);
  std::cout << "P(T)=" << iotmm::display_generic(p_t) << "\n";
  std::cout << "P(Y)=" << iotmm::display_generic(1.0 - p_t) << "\n";
  return kExitOk;
}

struct ProbForwardArgs {
  double p_tx_given_y = 0.0;
  double p_tx_given_t = 0.0;
  double p_t = 0.0;
};

int run_prob_forward(const ProbForwardArgs& args) {
  const double p_y = 1.0 - args.p_t;
  const double p_tx =
      iotmm::total_probability(args.p_tx_given_y, p_y, args.p_tx_given_t, args.p_t);
  std::cout << "P(Tx)=" << iotmm::display_generic(p_tx) << "\n";
  std::cout << "P(Y)=" << iotmm::display_generic(p_y) << "\n";
  return kExitOk;
}

struct RunArgs {
  std::string scenario_path;
  std::string format = "json";
  std::string out_path;
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> seed;
  std::optional<double> confidence;
};

int run_report(const RunArgs& args) {
  const auto format = iotmm::report_format_from_string(args.format);
  const auto scenario = iotmm::load_scenario(args.scenario_path);
  iotmm::RunOverrides overrides;
  overrides.paths = args.paths;
  overrides.seed = args.seed;
  overrides.confidence = args.confidence;
  const auto report = iotmm::run_scenario(scenario, overrides);
  const std::string document = iotmm::emit_report(report, format);
  if (args.out_path.empty()) {
    std::cout << document;
  } else {
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) {
      iotmm::raise(iotmm::ErrorCode::io_error, "cannot open output file: " + args.out_path);
    }
    out << document;
  }
  return kExitOk;
}

struct VarArgs {
  std::string scenario_path;
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> seed;
  std::optional<double> confidence;
};

int run_var(const VarArgs& args) {
  const auto scenario = iotmm::load_scenario(args.scenario_path);
  if (scenario.things.empty()) {
    iotmm::raise(iotmm::ErrorCode::validation_error,
                 "scenario has no things; nothing to simulate");
  }
  std::optional<iotmm::VarConfig> config = scenario.var_config;
  if (!config) {
    if (!args.paths || !args.seed) {
      iotmm::raise(iotmm::ErrorCode::validation_error,
                   "scenario has no var_config; pass both --paths and --seed");
    }
    config = iotmm::VarConfig{};
  }
  if (args.paths) config->paths = *args.paths;
  if (args.seed) config->seed = *args.seed;
  if (args.confidence) config->confidence = *args.confidence;

  for (const auto& thing : scenario.things) {
    const auto summary = iotmm::monte_carlo_var(thing, *config);
    std::cout << "thing=" << thing.id
              << " confidence=" << iotmm::format_full(config->confidence)
              << " horizon_months=" << config->horizon_months
              << " paths=" << summary.path_count << " seed=" << summary.seed
              << " var=" << iotmm::format_full(summary.var_at_confidence)
              << " mean=" << iotmm::format_full(summary.mean_loss)
              << " max=" << iotmm::format_full(summary.max_loss)
              << " stderr=" << iotmm::format_full(summary.standard_error_estimate) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IoT cyber-risk quantification engine"};
  app.set_version_flag("--version", std::string("iotmm ") + iotmm::kEngineVersion +
                                        " (scenario schema " + iotmm::kScenarioSchemaVersion +
                                        ", report schema " + iotmm::kReportSchemaVersion + ")");
  app.require_subcommand(1);

  MicromortArgs micromort_args;
  auto* micromort = app.add_subcommand(
      "micromort", "Micromort ratio of a vulnerable population observation");
  micromort->add_option("--vulnerable", micromort_args.vulnerable, "Vulnerable device count")
      ->required();
  micromort->add_option("--total", micromort_args.total, "Total device population")->required();
  micromort->add_option("--label", micromort_args.label, "Observation label");

  auto* prob = app.add_subcommand("prob", "Vertical/vertex conditional-probability calculus");
  prob->require_subcommand(1);
  ProbInvertArgs invert_args;
  auto* invert = prob->add_subcommand(
      "invert", "Solve P(T) from P(Tx) and the two conditionals");
  invert->add_option("--ptx", invert_args.p_tx, "P(Tx), the total attack probability")
      ->required();
  invert->add_option("--ptx-given-y", invert_args.p_tx_given_y, "P(Tx|Y)")->required();
  invert->add_option("--ptx-given-t", invert_args.p_tx_given_t, "P(Tx|T)")->required();
  ProbForwardArgs forward_args;
  auto* forward = prob->add_subcommand(
      "forward", "Compute P(Tx) from the conditionals and P(T)");
  forward->add_option("--ptx-given-y", forward_args.p_tx_given_y, "P(Tx|Y)")->required();
  forward->add_option("--ptx-given-t", forward_args.p_tx_given_t, "P(Tx|T)")->required();
  forward->add_option("--pt", forward_args.p_t, "P(T), the vertical probability")->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a scenario file and emit a report");
  run->add_option("--scenario", run_args.scenario_path, "Scenario JSON file")->required();
  run->add_option("--format", run_args.format, "Report format: json or csv");
  run->add_option("--out", run_args.out_path, "Write the report to this file instead of stdout");
  std::uint64_t run_paths = 0, run_seed = 0;
  double run_confidence = 0.0;
  auto* run_paths_opt = run->add_option("--paths", run_paths, "Override var_config.paths");
  auto* run_seed_opt = run->add_option("--seed", run_seed, "Override var_config.seed");
  auto* run_conf_opt =
      run->add_option("--confidence", run_confidence, "Override var_config.confidence");

  VarArgs var_args;
  auto* var = app.add_subcommand("var", "Monte Carlo loss summary for each thing in a scenario");
  var->add_option("--scenario", var_args.scenario_path, "Scenario JSON file")->required();
  std::uint64_t var_paths = 0, var_seed = 0;
  double var_confidence = 0.0;
  auto* var_paths_opt = var->add_option("--paths", var_paths, "Override var_config.paths");
  auto* var_seed_opt = var->add_option("--seed", var_seed, "Override var_config.seed");
  auto* var_conf_opt =
      var->add_option("--confidence", var_confidence, "Override var_config.confidence");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (run_paths_opt->count() > 0) run_args.paths = run_paths;
  if (run_seed_opt->count() > 0) run_args.seed = run_seed;
  if (run_conf_opt->count() > 0) run_args.confidence = run_confidence;
  if (var_paths_opt->count() > 0) var_args.paths = var_paths;
  if (var_seed_opt->count() > 0) var_args.seed = var_seed;
  if (var_conf_opt->count() > 0) var_args.confidence = var_confidence;

  try {
    if (micromort->parsed()) return run_micromort(micromort_args);
    if (invert->parsed()) return run_prob_invert(invert_args);
    if (forward->parsed()) return run_prob_forward(forward_args);
    if (run->parsed()) return run_report(run_args);
    if (var->parsed()) return run_var(var_args);
  } catch (const iotmm::Error& e) {
    print_error(e);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputationError;
  }
  return kExitOk;
}
