#include "edgecache/popularity.hpp"

#include <algorithm>

namespace edgecache {

SlotCounts count_regimes(std::span<const RequestEvent> events, const Catalog& catalog) {
  SlotCounts counts;
  for (const auto& e : events) {
    if (catalog.at(e.id).regime == Regime::Snm)
      ++counts.snm;
    else
      ++counts.irm;
  }
  return counts;
}

AllocationEstimate window_allocation(std::span<const SlotCounts> window) {
  long snm = 0, irm = 0;
  for (const auto& c : window) {
    snm += c.snm;
    irm += c.irm;
  }
  require(snm + irm > 0, ErrorCode::EmptyWindow, "allocation window holds no requests");
  return AllocationEstimate::from_snm(static_cast<double>(snm) / static_cast<double>(snm + irm));
}

AllocationEstimator::AllocationEstimator(double smoothing, AllocationEstimate prior)
    : smoothing_(smoothing), current_(prior) {
  require(smoothing >= 0.0 && smoothing <= 1.0, ErrorCode::ConfigError, "smoothing must lie in [0,1]");
  require(prior.w_snm >= 0.0 && prior.w_snm <= 1.0, ErrorCode::ConfigError, "prior w_snm must lie in [0,1]");
  current_ = AllocationEstimate::from_snm(prior.w_snm);
}

AllocationEstimate AllocationEstimator::update(std::span<const SlotCounts> window) {
  const double raw = window_allocation(window).w_snm;
  const double w = smoothing_ == 0.0 ? raw : smoothing_ * current_.w_snm + (1.0 - smoothing_) * raw;
  current_ = AllocationEstimate::from_snm(std::clamp(w, 0.0, 1.0));
  return current_;
}

PopularitySnapshot empirical_popularity(std::span<const RequestEvent> events, const Catalog& catalog,
                                        RegimeFilter filter, int slot) {
  PopularitySnapshot snap;
  snap.slot = slot;
  long total = 0;
  for (const auto& e : events) {
    const Regime regime = catalog.at(e.id).regime;
    if (filter == RegimeFilter::Irm && regime != Regime::Irm) continue;
    if (filter == RegimeFilter::Snm && regime != Regime::Snm) continue;
    snap.frequency[e.id] += 1.0;
    ++total;
  }
  for (auto& [id, f] : snap.frequency) f /= static_cast<double>(total);
  return snap;
}

PopularitySnapshot popularity_from_counts(std::span<const long> counts, int slot) {
  PopularitySnapshot snap;
  snap.slot = slot;
  long total = 0;
  for (long c : counts) total += c;
  if (total == 0) return snap;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) snap.frequency[static_cast<ContentId>(i + 1)] = double(counts[i]) / double(total);
  }
  return snap;
}

}  // namespace edgecache
