#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "edgecache/catalog.hpp"
#include "edgecache/placement.hpp"
#include "edgecache/popularity.hpp"
#include "edgecache/rng.hpp"
#include "edgecache/workload.hpp"

namespace edgecache {

// Hit-ratio objectives.

/// Sum of Zipf mass over cached IRM items.
double hit_ratio_irm(const Placement& placement, const Catalog& catalog, const ZipfModel& zipf);

/// Sum of empirical shares over cached SNM items (0 for unobserved ids).
double hit_ratio_snm(const Placement& placement, const Catalog& catalog, const PopularitySnapshot& popularity);

/// W_I * p_irm + W_S * p_snm.
inline double hit_ratio_total(double p_irm, double p_snm, const AllocationEstimate& alloc) {
  return alloc.w_irm * p_irm + alloc.w_snm * p_snm;
}

// Baselines.

Placement random_place(const Catalog& catalog, double capacity, Rng& rng);

/// Greedy knapsack on historical request shares, regardless of regime.
/// An empty history falls back to random_place.
Placement popular_place(const Catalog& catalog, const PopularitySnapshot& history, double capacity, Rng& rng);

// Hybrid bandit.

struct ArmState {
  long pulls = 0;
  double mean_reward = 0.0;
  double reward_weight = 0.0;  // r in [0,1]
  int action_flag = 0;         // A
  double weighted_reward = 0.0;  // B = A * r
  double influence = 1.0;        // x in (0,1]
};

/// Learning state of the SNM arms plus the exploration constant.
class BanditState {
 public:
  explicit BanditState(double beta = 2.0, double weight_floor = 0.01);

  double beta() const { return beta_; }
  double weight_floor() const { return weight_floor_; }

  /// Registers an arm with its feature influence; no-op when already known.
  ArmState& arm(ContentId id, double influence = 1.0);
  const ArmState* find(ContentId id) const;
  bool is_cold(ContentId id) const;

  void set_cached(const Placement& placement) { cached_ = placement.cached(); }
  bool is_cached(ContentId id) const { return cached_.count(id) != 0; }

 private:
  double beta_;
  double weight_floor_;
  std::unordered_map<ContentId, ArmState> arms_;
  std::set<ContentId> cached_;
};

/// mean + sqrt(beta * max(B, floor) * x * ln t / pulls).
double hybrid_ucb_index(const BanditState& state, ContentId id, double slot);

struct CapacitySplit {
  double irm = 0.0;
  double snm = 0.0;
};

/// IRM share = floor(W_I * C); the SNM share gets the rest.
CapacitySplit split_capacity(const AllocationEstimate& alloc, double capacity);

struct HybridSelectOptions {
  /// Lets capacity left idle on one side be filled from the other.
  bool spill_unused = true;
};

/// Cold candidates first (id order), then warm candidates by descending UCB
/// index within the SNM share; IRM share filled in ranking order.
Placement hybrid_select(const BanditState& state, const Catalog& catalog, std::span<const ContentId> candidates,
                        std::span<const ContentId> irm_ranking, const AllocationEstimate& alloc, double capacity,
                        int slot, HybridSelectOptions options = {});

/// r = observed / slot_max (0 if slot_max is 0), A = 1, B = A*r, pulls += 1,
/// running mean updated incrementally.
void hybrid_update(BanditState& state, ContentId id, double observed, double slot_max);

// Policy interface driven by the engine.

struct SlotContext {
  int slot = 1;
  const Catalog& catalog;
  AllocationEstimate alloc;
  double capacity = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  /// Placement for the start of ctx.slot, using information from earlier slots only.
  virtual Placement decide(const SlotContext& ctx) = 0;
  virtual void observe(const SlotContext& ctx, std::span<const RequestEvent> events, const Placement& placement) = 0;
  /// Slots where the policy had no signal and fell back to a default.
  virtual std::size_t cold_slots() const { return 0; }
};

struct PolicyConfig {
  double exploration_beta = 2.0;
  double weight_floor = 0.01;
  double influence_floor = 0.01;
  bool spill_unused = true;
  /// SNM items requested within this many past slots are candidates.
  int candidate_window = 2;
  std::uint64_t seed = 1;
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  std::string_view name() const override { return "random"; }
  Placement decide(const SlotContext& ctx) override { return random_place(ctx.catalog, ctx.capacity, rng_); }
  void observe(const SlotContext&, std::span<const RequestEvent>, const Placement&) override {}

 private:
  Rng rng_;
};

class PopularPolicy final : public Policy {
 public:
  PopularPolicy(const Catalog& catalog, std::uint64_t seed);
  std::string_view name() const override { return "popular"; }
  Placement decide(const SlotContext& ctx) override;
  void observe(const SlotContext& ctx, std::span<const RequestEvent> events, const Placement& placement) override;
  std::size_t cold_slots() const override { return cold_slots_; }

 private:
  std::vector<long> counts_;
  Rng rng_;
  std::size_t cold_slots_ = 0;
};

class HybridPolicy final : public Policy {
 public:
  HybridPolicy(const Catalog& catalog, const PolicyConfig& config);
  std::string_view name() const override { return "hybrid"; }
  Placement decide(const SlotContext& ctx) override;
  void observe(const SlotContext& ctx, std::span<const RequestEvent> events, const Placement& placement) override;

  const BanditState& state() const { return state_; }
  std::vector<ContentId> irm_ranking() const;
  /// SNM items observed in the last candidate_window slots before `slot`.
  std::vector<ContentId> candidates(int slot) const;

 private:
  const Catalog& catalog_;
  BanditState state_;
  HybridSelectOptions options_;
  int candidate_window_;
  std::vector<long> irm_counts_;  // indexed by IRM rank
  std::vector<int> last_seen_;    // indexed by id - 1; 0 = never requested
  std::vector<ContentId> slot_candidates_;
};

std::unique_ptr<Policy> make_policy(std::string_view name, const Catalog& catalog, const PolicyConfig& config);

inline constexpr std::string_view kPolicyNames[] = {"hybrid", "popular", "random"};

}  // namespace edgecache
