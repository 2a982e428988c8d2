#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "edgecache/policy.hpp"

namespace edgecache {

struct SlotOutcome {
  long hits = 0;
  long total = 0;
  std::map<ContentId, long> requests;  // per requested id
  double hit_ratio() const { return total == 0 ? 0.0 : double(hits) / double(total); }
};

/// Serves one slot's events against a frozen placement.
SlotOutcome slot_step(const Placement& placement, std::span<const RequestEvent> events);

struct OracleResult {
  Placement placement;
  double hit_ratio = 0.0;
};

/// Clairvoyant per-slot placement: exact knapsack over this slot's true counts.
OracleResult oracle_placement(std::span<const RequestEvent> events, const Catalog& catalog, double capacity);

/// Prefix sums of max(0, oracle_t - achieved_t).
template <class DerivedA, class DerivedB>
Eigen::VectorXd cumulative_regret(const Eigen::MatrixBase<DerivedA>& achieved,
                                  const Eigen::MatrixBase<DerivedB>& oracle) {
  require(achieved.size() == oracle.size(), ErrorCode::LengthMismatch, "achieved and oracle differ in length");
  Eigen::VectorXd out(achieved.size());
  double acc = 0.0;
  for (Eigen::Index t = 0; t < achieved.size(); ++t) {
    acc += std::max(0.0, double(oracle[t]) - double(achieved[t]));
    out[t] = acc;
  }
  return out;
}

struct AllocConfig {
  int window = 10;
  double smoothing = 0.3;
  double prior_w_snm = 0.5;
};

struct RunSummary {
  std::string policy;
  std::uint64_t seed = 0;
  std::string config_hash;
  double capacity = 0.0;
  double mean_hit_ratio = 0.0;       // event-weighted over the horizon
  double mean_slot_hit_ratio = 0.0;  // average of per-slot ratios
  double final_regret = 0.0;
  long total_requests = 0;
  long total_hits = 0;
  std::size_t fallback_requests = 0;
  std::size_t cold_slots = 0;
};

/// Per-slot series are indexed 0..T-1 for slots 1..T.
struct RunMetrics {
  Eigen::VectorXd hit_ratio;
  Eigen::VectorXd oracle_hit_ratio;
  Eigen::VectorXd regret_increment;
  Eigen::VectorXd cumulative_regret;
  Eigen::VectorXd w_snm;  // allocation estimate used at each slot
  std::vector<long> requests;
  std::vector<long> hits;
  RunSummary summary;

  int horizon() const { return static_cast<int>(hit_ratio.size()); }
  /// Mean regret increment over slots (from, to].
  double mean_regret(int from, int to) const;
};

/// Drives `policy` over the trace. Placement for slot t uses slots < t only.
RunMetrics run_simulation(const Catalog& catalog, const RequestTrace& trace, Policy& policy, double capacity,
                          const AllocConfig& alloc = {});

RunMetrics run_simulation(const Catalog& catalog, const RequestTrace& trace, std::string_view policy_name,
                          double capacity, const AllocConfig& alloc, const PolicyConfig& policy_config);

}  // namespace edgecache
