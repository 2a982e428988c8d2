#include "edgecache/engine.hpp"

#include <algorithm>

#include "edgecache/knapsack.hpp"

namespace edgecache {

SlotOutcome slot_step(const Placement& placement, std::span<const RequestEvent> events) {
  SlotOutcome out;
  for (const auto& e : events) {
    ++out.total;
    ++out.requests[e.id];
    if (placement.contains(e.id)) ++out.hits;
  }
  return out;
}

OracleResult oracle_placement(std::span<const RequestEvent> events, const Catalog& catalog, double capacity) {
  std::map<ContentId, long> counts;
  for (const auto& e : events) ++counts[e.id];
  std::vector<KnapsackItem> items;
  items.reserve(counts.size());
  for (const auto& [id, n] : counts) items.push_back({id, double(n), catalog.at(id).size});
  OracleResult result{exact_knapsack(items, capacity), 0.0};
  result.hit_ratio = slot_step(result.placement, events).hit_ratio();
  return result;
}

double RunMetrics::mean_regret(int from, int to) const {
  from = std::max(from, 0);
  to = std::min(to, horizon());
  if (to <= from) return 0.0;
  return regret_increment.segment(from, to - from).mean();
}

RunMetrics run_simulation(const Catalog& catalog, const RequestTrace& trace, Policy& policy, double capacity,
                          const AllocConfig& alloc) {
  require(trace.horizon() >= 1, ErrorCode::BadInput, "trace horizon must be >= 1");
  require(capacity >= 0.0, ErrorCode::BadInput, "capacity must be >= 0");
  require(alloc.window >= 1, ErrorCode::ConfigError, "allocation window must be >= 1");

  const int T = trace.horizon();
  RunMetrics m;
  m.hit_ratio.setZero(T);
  m.oracle_hit_ratio.setZero(T);
  m.w_snm.setZero(T);
  m.requests.assign(static_cast<std::size_t>(T), 0);
  m.hits.assign(static_cast<std::size_t>(T), 0);

  AllocationEstimator estimator(alloc.smoothing, AllocationEstimate::from_snm(alloc.prior_w_snm));
  std::vector<SlotCounts> history;
  history.reserve(static_cast<std::size_t>(T));

  for (int t = 1; t <= T; ++t) {
    if (!history.empty()) {
      const std::size_t len = std::min<std::size_t>(history.size(), static_cast<std::size_t>(alloc.window));
      const std::span<const SlotCounts> window(history.data() + history.size() - len, len);
      const bool any = std::any_of(window.begin(), window.end(), [](const SlotCounts& c) { return c.snm + c.irm > 0; });
      if (any) estimator.update(window);
    }
    const SlotContext ctx{t, catalog, estimator.current(), capacity};
    const Placement placement = policy.decide(ctx);
    require(placement.used() <= capacity + Placement::kSlack, ErrorCode::BadInput,
            std::string(policy.name()) + " exceeded the cache capacity");

    const auto events = trace.slot_events(t);
    const SlotOutcome outcome = slot_step(placement, events);
    policy.observe(ctx, events, placement);

    const auto i = static_cast<Eigen::Index>(t - 1);
    m.hit_ratio[i] = outcome.hit_ratio();
    m.oracle_hit_ratio[i] = oracle_placement(events, catalog, capacity).hit_ratio;
    m.w_snm[i] = ctx.alloc.w_snm;
    m.requests[static_cast<std::size_t>(i)] = outcome.total;
    m.hits[static_cast<std::size_t>(i)] = outcome.hits;
    history.push_back(count_regimes(events, catalog));
  }

  m.regret_increment = (m.oracle_hit_ratio - m.hit_ratio).cwiseMax(0.0);
  m.cumulative_regret = cumulative_regret(m.hit_ratio, m.oracle_hit_ratio);

  RunSummary& s = m.summary;
  s.policy = std::string(policy.name());
  s.capacity = capacity;
  for (int t = 0; t < T; ++t) {
    s.total_requests += m.requests[static_cast<std::size_t>(t)];
    s.total_hits += m.hits[static_cast<std::size_t>(t)];
  }
  s.mean_hit_ratio = s.total_requests == 0 ? 0.0 : double(s.total_hits) / double(s.total_requests);
  s.mean_slot_hit_ratio = m.hit_ratio.mean();
  s.final_regret = m.cumulative_regret[T - 1];
  s.fallback_requests = trace.fallback_requests();
  s.cold_slots = policy.cold_slots();
  return m;
}

RunMetrics run_simulation(const Catalog& catalog, const RequestTrace& trace, std::string_view policy_name,
                          double capacity, const AllocConfig& alloc, const PolicyConfig& policy_config) {
  auto policy = make_policy(policy_name, catalog, policy_config);
  RunMetrics m = run_simulation(catalog, trace, *policy, capacity, alloc);
  m.summary.seed = policy_config.seed;
  return m;
}

}  // namespace edgecache
