#include "edgecache/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgecache/knapsack.hpp"
#include "edgecache/log.hpp"

namespace edgecache {

double hit_ratio_irm(const Placement& placement, const Catalog& catalog, const ZipfModel& zipf) {
  double total = 0.0;
  for (ContentId id : placement.cached()) {
    require(catalog.at(id).regime == Regime::Irm, ErrorCode::WrongRegime,
            "IRM hit ratio given SNM content " + std::to_string(id));
    const auto rank = static_cast<Eigen::Index>(catalog.irm_rank(id));
    require(rank < zipf.pmf.size(), ErrorCode::BadInput, "zipf model shorter than IRM library");
    total += zipf.pmf[rank];
  }
  return std::min(total, 1.0);
}

double hit_ratio_snm(const Placement& placement, const Catalog& catalog, const PopularitySnapshot& popularity) {
  double total = 0.0;
  for (ContentId id : placement.cached()) {
    require(catalog.at(id).regime == Regime::Snm, ErrorCode::WrongRegime,
            "SNM hit ratio given IRM content " + std::to_string(id));
    total += popularity.at(id);
  }
  return std::min(total, 1.0);
}

Placement random_place(const Catalog& catalog, double capacity, Rng& rng) {
  std::vector<ContentId> order(catalog.size());
  std::iota(order.begin(), order.end(), ContentId{1});
  rng.shuffle(std::span<ContentId>(order));
  Placement placement(capacity);
  for (ContentId id : order) placement.admit(id, catalog.at(id).size);
  return placement;
}

Placement popular_place(const Catalog& catalog, const PopularitySnapshot& history, double capacity, Rng& rng) {
  if (history.empty()) {
    log_warning("popular placement has no history; placing at random");
    return random_place(catalog, capacity, rng);
  }
  std::vector<KnapsackItem> items;
  items.reserve(catalog.size());
  for (const auto& item : catalog.items()) items.push_back({item.id, history.at(item.id), item.size});
  return greedy_knapsack(items, capacity);
}

BanditState::BanditState(double beta, double weight_floor) : beta_(beta), weight_floor_(weight_floor) {
  require(beta > 0.0, ErrorCode::ConfigError, "exploration beta must be positive");
  require(weight_floor > 0.0 && weight_floor <= 1.0, ErrorCode::ConfigError, "weight floor must lie in (0,1]");
}

ArmState& BanditState::arm(ContentId id, double influence) {
  auto [it, inserted] = arms_.try_emplace(id);
  if (inserted) {
    require(influence > 0.0 && influence <= 1.0, ErrorCode::BadInput, "influence must lie in (0,1]");
    it->second.influence = influence;
  }
  return it->second;
}

const ArmState* BanditState::find(ContentId id) const {
  auto it = arms_.find(id);
  return it == arms_.end() ? nullptr : &it->second;
}

bool BanditState::is_cold(ContentId id) const {
  const ArmState* a = find(id);
  return a == nullptr || a->pulls == 0;
}

double hybrid_ucb_index(const BanditState& state, ContentId id, double slot) {
  const ArmState* a = state.find(id);
  require(a != nullptr && a->pulls > 0, ErrorCode::ColdStart,
          "content " + std::to_string(id) + " has never been cached");
  require(slot >= 1.0, ErrorCode::BadInput, "slot must be >= 1");
  const double weight = std::max(a->weighted_reward, state.weight_floor());
  const double bonus = state.beta() * weight * a->influence * std::log(slot) / double(a->pulls);
  return a->mean_reward + std::sqrt(bonus);
}

CapacitySplit split_capacity(const AllocationEstimate& alloc, double capacity) {
  // Tolerance keeps e.g. (1 - 0.8) * 40 from flooring to 7.
  const double irm = std::min(capacity, std::floor(alloc.w_irm * capacity + 1e-9));
  return {irm, capacity - irm};
}

Placement hybrid_select(const BanditState& state, const Catalog& catalog, std::span<const ContentId> candidates,
                        std::span<const ContentId> irm_ranking, const AllocationEstimate& alloc, double capacity,
                        int slot, HybridSelectOptions options) {
  const CapacitySplit split = split_capacity(alloc, capacity);

  // Candidate order: cold ids ascending, then warm by descending index.
  std::vector<ContentId> cold, warm;
  for (ContentId id : candidates) (state.is_cold(id) ? cold : warm).push_back(id);
  std::sort(cold.begin(), cold.end());
  std::vector<std::pair<double, ContentId>> scored;
  scored.reserve(warm.size());
  for (ContentId id : warm) scored.emplace_back(hybrid_ucb_index(state, id, slot), id);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<ContentId> snm_order = std::move(cold);
  for (const auto& [index, id] : scored) snm_order.push_back(id);

  Placement placement(capacity);
  auto fill = [&](std::span<const ContentId> order, double share) {
    double used = 0.0;
    for (ContentId id : order) {
      const double size = catalog.at(id).size;
      if (used + size <= share + Placement::kSlack && placement.admit(id, size)) used += size;
    }
  };
  fill(snm_order, split.snm);
  fill(irm_ranking, split.irm);

  if (options.spill_unused) {
    for (ContentId id : snm_order) placement.admit(id, catalog.at(id).size);
    for (ContentId id : irm_ranking) placement.admit(id, catalog.at(id).size);
  }
  return placement;
}

void hybrid_update(BanditState& state, ContentId id, double observed, double slot_max) {
  require(state.is_cached(id), ErrorCode::NotCached, "content " + std::to_string(id) + " was not cached this slot");
  require(observed >= 0.0 && slot_max >= observed, ErrorCode::BadInput, "need 0 <= observed <= slot_max");
  ArmState& a = state.arm(id);
  a.reward_weight = slot_max > 0.0 ? observed / slot_max : 0.0;
  a.action_flag = 1;
  a.weighted_reward = a.action_flag * a.reward_weight;
  a.pulls += 1;
  a.mean_reward = (a.mean_reward * double(a.pulls - 1) + observed) / double(a.pulls);
}

PopularPolicy::PopularPolicy(const Catalog& catalog, std::uint64_t seed) : counts_(catalog.size(), 0), rng_(seed) {}

Placement PopularPolicy::decide(const SlotContext& ctx) {
  const PopularitySnapshot history = popularity_from_counts(counts_, ctx.slot);
  if (history.empty()) ++cold_slots_;
  return popular_place(ctx.catalog, history, ctx.capacity, rng_);
}

void PopularPolicy::observe(const SlotContext&, std::span<const RequestEvent> events, const Placement&) {
  for (const auto& e : events) ++counts_[static_cast<std::size_t>(e.id - 1)];
}

HybridPolicy::HybridPolicy(const Catalog& catalog, const PolicyConfig& config)
    : catalog_(catalog),
      state_(config.exploration_beta, config.weight_floor),
      options_{config.spill_unused},
      candidate_window_(config.candidate_window),
      irm_counts_(catalog.n_irm(), 0),
      last_seen_(catalog.size(), 0) {
  require(candidate_window_ >= 1, ErrorCode::ConfigError, "candidate window must be >= 1");
  for (ContentId id : catalog.snm_ids()) {
    state_.arm(id, feature_influence(catalog.at(id).features, std::span<const FeatureRole>(kDefaultRoles),
                                     config.influence_floor));
  }
}

std::vector<ContentId> HybridPolicy::irm_ranking() const {
  std::vector<ContentId> ranking = catalog_.irm_ids();
  std::stable_sort(ranking.begin(), ranking.end(), [&](ContentId a, ContentId b) {
    return irm_counts_[catalog_.irm_rank(a)] > irm_counts_[catalog_.irm_rank(b)];
  });
  return ranking;
}

std::vector<ContentId> HybridPolicy::candidates(int slot) const {
  std::vector<ContentId> out;
  for (ContentId id : catalog_.snm_ids()) {
    const int seen = last_seen_[static_cast<std::size_t>(id - 1)];
    if (seen > 0 && seen < slot && seen >= slot - candidate_window_) out.push_back(id);
  }
  return out;
}

Placement HybridPolicy::decide(const SlotContext& ctx) {
  slot_candidates_ = candidates(ctx.slot);
  const auto ranking = irm_ranking();
  Placement placement =
      hybrid_select(state_, catalog_, slot_candidates_, ranking, ctx.alloc, ctx.capacity, ctx.slot, options_);
  // Room left after every candidate and IRM item: unseen SNM items, id order.
  if (options_.spill_unused) {
    for (ContentId id : catalog_.snm_ids()) placement.admit(id, catalog_.at(id).size);
  }
  state_.set_cached(placement);
  return placement;
}

void HybridPolicy::observe(const SlotContext& ctx, std::span<const RequestEvent> events, const Placement& placement) {
  std::unordered_map<ContentId, long> snm_counts;
  long snm_total = 0;
  for (const auto& e : events) {
    const ContentItem& item = catalog_.at(e.id);
    last_seen_[static_cast<std::size_t>(e.id - 1)] = ctx.slot;
    if (item.regime == Regime::Snm) {
      ++snm_counts[e.id];
      ++snm_total;
    } else {
      ++irm_counts_[catalog_.irm_rank(e.id)];
    }
  }

  // Per-file reward is the file's share of this slot's SNM requests. Only
  // arms chosen from the candidate set learn.
  std::vector<std::pair<ContentId, double>> rewards;
  double slot_max = 0.0;
  for (ContentId id : slot_candidates_) {
    if (!placement.contains(id)) continue;
    auto it = snm_counts.find(id);
    const double share = (snm_total == 0 || it == snm_counts.end()) ? 0.0 : double(it->second) / double(snm_total);
    rewards.emplace_back(id, share);
    slot_max = std::max(slot_max, share);
  }
  for (const auto& [id, share] : rewards) hybrid_update(state_, id, share, slot_max);
}

std::unique_ptr<Policy> make_policy(std::string_view name, const Catalog& catalog, const PolicyConfig& config) {
  if (name == "hybrid") return std::make_unique<HybridPolicy>(catalog, config);
  if (name == "popular") return std::make_unique<PopularPolicy>(catalog, config.seed);
  if (name == "random") return std::make_unique<RandomPolicy>(config.seed);
  fail(ErrorCode::UnknownPolicy, "unknown policy `" + std::string(name) + "` (expected hybrid, popular or random)");
}

}  // namespace edgecache
