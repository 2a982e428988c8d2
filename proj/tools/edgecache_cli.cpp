// edgecache: generate workloads, run simulations, sweep and report.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "edgecache/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int exit_code_for(edgecache::ErrorCode code) {
  using edgecache::ErrorCode;
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::UnknownPolicy:
      return kExitConfig;
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownContent:
      return kExitIo;
    default:
      return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-cloud hybrid caching simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::map<std::string, std::string> overrides;  // config key -> raw value
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(name, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };

  app.add_option("--config", config_path, "Flat key = value config file");
  flag("--seed", "seeds", "Single seed (replaces the seed list)");
  flag("--seeds", "seeds", "Comma-separated seed list");
  flag("--out", "out", "Output directory");
  flag("--policy", "policies", "Policy name or comma list: hybrid, popular, random");
  flag("--horizon", "horizon", "Number of slots T");
  flag("--library-size", "library_size", "Library size F");
  flag("--capacity", "capacity", "Cache capacity C");
  flag("--w-snm", "w_snm", "Share of dynamic (SNM) requests");
  flag("--beta", "exploration_beta", "Exploration constant of the hybrid policy");
  flag("--pareto-beta", "pareto_beta", "Pareto shape of SNM volumes");
  flag("--delta", "zipf_delta", "Zipf skewness of IRM popularity");
  flag("--requests-per-slot", "requests_per_slot", "Requests per slot R");
  flag("--axis", "axis", "Sweep axis: capacity or library_size");
  flag("--values", "values", "Comma-separated sweep values");
  flag("--threads", "threads", "Worker threads for sweeps (0 = all cores)");

  auto* generate = app.add_subcommand("generate", "Write catalog.csv and trace.csv");
  auto* run = app.add_subcommand("run", "Run policies and write metrics.json, per_slot.csv, results.csv");
  std::string catalog_path, trace_path;
  run->add_option("--catalog", catalog_path, "Existing catalog CSV")->check(CLI::ExistingFile);
  run->add_option("--trace", trace_path, "Existing trace CSV")->check(CLI::ExistingFile);
  auto* sweep = app.add_subcommand("sweep", "Sweep capacity or library size; write results.csv");
  auto* report = app.add_subcommand("report", "Summarize a results CSV");
  std::string results_path;
  report->add_option("results", results_path, "Results CSV from run or sweep")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    edgecache::ExperimentConfig config;
    if (!config_path.empty()) config.load_file(config_path);
    config.load_env();
    for (const auto& [key, value] : overrides) config.set(key, value);

    std::vector<std::filesystem::path> written;
    if (*generate) {
      written = edgecache::cmd_generate(config);
    } else if (*run) {
      std::optional<std::filesystem::path> catalog, trace;
      if (!catalog_path.empty()) catalog = catalog_path;
      if (!trace_path.empty()) trace = trace_path;
      written = edgecache::cmd_run(config, catalog, trace);
    } else if (*sweep) {
      written = edgecache::cmd_sweep(config);
    } else if (*report) {
      written = edgecache::cmd_report(results_path, config.out, std::cout);
    }
    if (!*report) std::cout << "config_hash " << config.hash() << '\n';
    for (const auto& path : written) std::cout << "wrote " << path.string() << '\n';
    return 0;
  } catch (const edgecache::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
