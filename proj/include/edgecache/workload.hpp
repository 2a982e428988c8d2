#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "edgecache/catalog.hpp"

namespace edgecache {

struct RequestEvent {
  int slot = 1;
  ContentId id = 0;

  friend bool operator==(const RequestEvent&, const RequestEvent&) = default;
};

/// Time-ordered request stream over slots 1..horizon.
class RequestTrace {
 public:
  RequestTrace() = default;
  RequestTrace(int horizon, std::vector<RequestEvent> events, std::size_t fallback_requests = 0);

  int horizon() const { return horizon_; }
  std::span<const RequestEvent> events() const { return events_; }
  std::span<const RequestEvent> slot_events(int slot) const;

  /// Requests that were meant to be SNM but had no active SNM item to target.
  std::size_t fallback_requests() const { return fallback_requests_; }

 private:
  int horizon_ = 0;
  std::vector<RequestEvent> events_;
  std::vector<std::size_t> offsets_;  // offsets_[t] = first event of slot t
  std::size_t fallback_requests_ = 0;
};

/// Rectangular request-rate pulse: volume / lifespan while active, else 0.
double snm_rate(const ContentItem& item, int slot);

struct TraceConfig {
  int horizon = 600;
  int requests_per_slot = 100;
  double w_snm = 0.8;
  double zipf_delta = 0.8;
};

/// Per slot, each request is SNM with probability w_snm, drawn among active
/// SNM items proportionally to their rate; otherwise an i.i.d. Zipf draw over
/// IRM items by rank. SNM draws fall back to IRM when nothing is active.
RequestTrace generate_trace(const Catalog& catalog, const TraceConfig& config, std::uint64_t seed);

void save_trace(const RequestTrace& trace, const std::filesystem::path& path);

/// horizon = 0 infers the horizon from the last slot in the file.
RequestTrace load_trace(const std::filesystem::path& path, const Catalog& catalog, int horizon = 0);

}  // namespace edgecache
