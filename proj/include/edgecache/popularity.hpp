#pragma once

#include <map>
#include <span>

#include "edgecache/catalog.hpp"
#include "edgecache/workload.hpp"

namespace edgecache {

/// Capacity split between the stationary (IRM) and dynamic (SNM) parts.
struct AllocationEstimate {
  double w_irm = 0.5;
  double w_snm = 0.5;

  static AllocationEstimate from_snm(double w_snm) { return {1.0 - w_snm, w_snm}; }
};

struct SlotCounts {
  long snm = 0;
  long irm = 0;
};

SlotCounts count_regimes(std::span<const RequestEvent> events, const Catalog& catalog);

/// Unsmoothed ratio sum(snm) / sum(snm + irm) over a window.
AllocationEstimate window_allocation(std::span<const SlotCounts> window);

/// Windowed request-class ratio with exponential smoothing across calls:
/// w <- smoothing * w_prev + (1 - smoothing) * w_window.
class AllocationEstimator {
 public:
  explicit AllocationEstimator(double smoothing = 0.3, AllocationEstimate prior = {});

  AllocationEstimate update(std::span<const SlotCounts> window);
  const AllocationEstimate& current() const { return current_; }
  double smoothing() const { return smoothing_; }

 private:
  double smoothing_;
  AllocationEstimate current_;
};

enum class RegimeFilter { Any, Irm, Snm };

/// Empirical request share per content over a slot or window.
struct PopularitySnapshot {
  int slot = 0;
  std::map<ContentId, double> frequency;

  double at(ContentId id) const {
    auto it = frequency.find(id);
    return it == frequency.end() ? 0.0 : it->second;
  }
  bool empty() const { return frequency.empty(); }
};

PopularitySnapshot empirical_popularity(std::span<const RequestEvent> events, const Catalog& catalog,
                                        RegimeFilter filter = RegimeFilter::Any, int slot = 0);

/// Snapshot from per-id request counts (index = id - 1).
PopularitySnapshot popularity_from_counts(std::span<const long> counts, int slot = 0);

}  // namespace edgecache
