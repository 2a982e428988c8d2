#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "edgecache/engine.hpp"

namespace edgecache {

/// Flat experiment configuration. Keys in the config file and the
/// EDGECACHE_* environment overrides use the field names below.
struct ExperimentConfig {
  int horizon = 600;
  int library_size = 150;
  double capacity = 40;
  double w_snm = 0.8;
  double zipf_delta = 0.8;
  double pareto_beta = 2.0;
  double pareto_n_min = 10.0;
  int requests_per_slot = 100;
  double exploration_beta = 2.0;
  int lifespan_min = 20;
  int lifespan_max = 80;
  int size_min = 1;
  int size_max = 1;
  int alloc_window = 10;
  double alloc_smoothing = 0.3;
  double alloc_prior = 0.5;
  double weight_floor = 0.01;
  double influence_floor = 0.01;
  int candidate_window = 2;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<std::string> policies = {"hybrid", "popular", "random"};
  std::string axis = "capacity";
  std::vector<double> values = {10, 20, 30, 40};
  std::string out = "out";
  int threads = 0;  // 0 = hardware concurrency

  /// Sets one field from its textual form; ConfigError names the key.
  void set(const std::string& key, const std::string& value);
  /// Applies a flat `key = value` file (`#` starts a comment).
  void load_file(const std::filesystem::path& path);
  /// Applies EDGECACHE_<KEY> variables for every known key.
  void load_env(const char* prefix = "EDGECACHE_");
  void validate() const;

  /// Canonical `key=value` lines over the fields that affect results.
  std::string canonical() const;
  std::string hash() const;

  static const std::vector<std::string>& keys();
};

std::string fnv1a64_hex(std::string_view text);

struct Workload {
  Catalog catalog;
  RequestTrace trace;
};

/// Deterministic catalog + trace for one seed. Overrides apply to library size.
Workload make_workload(const ExperimentConfig& config, std::uint64_t seed, std::optional<int> library_size = {});

AllocConfig alloc_config(const ExperimentConfig& config);
PolicyConfig policy_config(const ExperimentConfig& config, std::uint64_t seed);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::string policy;
  std::uint64_t seed = 0;
  double mean_hit_ratio = 0.0;
  double final_regret = 0.0;
};

/// Every axis value x policy x seed. Rows are ordered by value, policy, seed
/// regardless of execution order.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

void write_results_csv(const std::vector<SweepRow>& rows, const std::string& config_hash,
                       const std::filesystem::path& path);
std::vector<SweepRow> read_results_csv(const std::filesystem::path& path, std::string* config_hash = nullptr);

struct ReportRow {
  std::string axis;
  double value = 0.0;
  std::string policy;
  std::size_t n = 0;
  double mean_hit_ratio = 0.0;
  double stderr_hit_ratio = 0.0;
  double mean_final_regret = 0.0;
  double stderr_final_regret = 0.0;
  // Relative hit-ratio gain of hybrid over a baseline; set on hybrid rows only.
  std::optional<double> improvement_vs_popular;
  std::optional<double> improvement_vs_random;
};

std::vector<ReportRow> summarize(const std::vector<SweepRow>& rows);
void write_report_csv(const std::vector<ReportRow>& rows, const std::string& config_hash,
                      const std::filesystem::path& path);
void print_report(const std::vector<ReportRow>& rows, std::ostream& out);

nlohmann::json to_json(const RunSummary& summary);
nlohmann::json to_json(const PopularitySnapshot& snapshot);
nlohmann::json to_json(const AllocationEstimate& alloc);

void write_per_slot_header(std::ostream& out, const std::string& config_hash);
void write_per_slot_rows(std::ostream& out, const RunMetrics& metrics);

// Subcommands. Each returns the files it wrote.
std::vector<std::filesystem::path> cmd_generate(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_run(const ExperimentConfig& config,
                                           const std::optional<std::filesystem::path>& catalog_path = {},
                                           const std::optional<std::filesystem::path>& trace_path = {});
std::vector<std::filesystem::path> cmd_sweep(const ExperimentConfig& config);
std::vector<std::filesystem::path> cmd_report(const std::filesystem::path& results, const std::filesystem::path& out_dir,
                                              std::ostream& table);

}  // namespace edgecache
