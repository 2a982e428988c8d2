#include "edgecache/workload.hpp"

#include <fstream>
#include <string>

#include "edgecache/csv.hpp"
#include "edgecache/rng.hpp"

namespace edgecache {

RequestTrace::RequestTrace(int horizon, std::vector<RequestEvent> events, std::size_t fallback_requests)
    : horizon_(horizon), events_(std::move(events)), fallback_requests_(fallback_requests) {
  require(horizon >= 1, ErrorCode::BadInput, "trace horizon must be >= 1");
  offsets_.assign(static_cast<std::size_t>(horizon) + 2, 0);
  int prev = 1;
  for (const auto& e : events_) {
    require(e.slot >= 1 && e.slot <= horizon, ErrorCode::BadInput,
            "event slot " + std::to_string(e.slot) + " outside [1," + std::to_string(horizon) + "]");
    require(e.slot >= prev, ErrorCode::BadInput, "trace events must be sorted by slot");
    prev = e.slot;
    ++offsets_[static_cast<std::size_t>(e.slot) + 1];
  }
  for (std::size_t t = 1; t < offsets_.size(); ++t) offsets_[t] += offsets_[t - 1];
}

std::span<const RequestEvent> RequestTrace::slot_events(int slot) const {
  if (slot < 1 || slot > horizon_) return {};
  const auto begin = offsets_[static_cast<std::size_t>(slot)];
  const auto end = offsets_[static_cast<std::size_t>(slot) + 1];
  return std::span<const RequestEvent>(events_).subspan(begin, end - begin);
}

double snm_rate(const ContentItem& item, int slot) {
  require(item.regime == Regime::Snm && item.snm.has_value(), ErrorCode::WrongRegime,
          "snm_rate called on IRM item " + std::to_string(item.id));
  return item.active_at(slot) ? item.snm->volume / item.snm->lifespan : 0.0;
}

RequestTrace generate_trace(const Catalog& catalog, const TraceConfig& config, std::uint64_t seed) {
  require(!catalog.empty(), ErrorCode::EmptyLibrary, "cannot generate a trace over an empty catalog");
  require(config.horizon >= 1 && config.requests_per_slot >= 1, ErrorCode::ConfigError,
          "horizon and requests_per_slot must be >= 1");
  require(config.w_snm >= 0.0 && config.w_snm <= 1.0, ErrorCode::ConfigError, "w_snm must lie in [0,1]");

  const auto& irm = catalog.irm_ids();
  std::vector<double> irm_cumulative;
  if (!irm.empty()) {
    const Eigen::VectorXd pmf = zipf_pmf(static_cast<Eigen::Index>(irm.size()), config.zipf_delta);
    irm_cumulative.resize(irm.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < irm.size(); ++i) irm_cumulative[i] = acc += pmf[static_cast<Eigen::Index>(i)];
  }

  Rng rng(seed);
  std::vector<RequestEvent> events;
  events.reserve(static_cast<std::size_t>(config.horizon) * config.requests_per_slot);
  std::size_t fallback = 0;
  std::vector<ContentId> active;
  std::vector<double> active_cumulative;

  for (int t = 1; t <= config.horizon; ++t) {
    active.clear();
    active_cumulative.clear();
    double acc = 0.0;
    for (ContentId id : catalog.snm_ids()) {
      const double rate = snm_rate(catalog.at(id), t);
      if (rate > 0.0) {
        active.push_back(id);
        active_cumulative.push_back(acc += rate);
      }
    }

    for (int r = 0; r < config.requests_per_slot; ++r) {
      bool want_snm = rng.bernoulli(config.w_snm);
      const double u = rng.uniform();
      if (want_snm && active.empty()) {
        ++fallback;
        want_snm = false;
      }
      if (!want_snm && irm.empty()) {
        // Nothing stationary to fall back on; serve an active SNM item if any.
        require(!active.empty(), ErrorCode::EmptyLibrary, "slot " + std::to_string(t) + " has no requestable item");
        want_snm = true;
      }
      const ContentId id = want_snm ? active[sample_cumulative(active_cumulative, u)]
                                    : irm[sample_cumulative(irm_cumulative, u)];
      events.push_back({t, id});
    }
  }
  return RequestTrace(config.horizon, std::move(events), fallback);
}

void save_trace(const RequestTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << "slot,content_id\n";
  for (const auto& e : trace.events()) out << e.slot << ',' << e.id << '\n';
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

RequestTrace load_trace(const std::filesystem::path& path, const Catalog& catalog, int horizon) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::ParseError, path.string() + ":1: empty file");
  require(csv::trim(line) == "slot,content_id", ErrorCode::ParseError, path.string() + ":1: unexpected header");

  std::vector<RequestEvent> events;
  std::size_t line_no = 1;
  int last_slot = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto fields = csv::split(line);
    RequestEvent e;
    require(fields.size() == 2 && csv::parse(fields[0], e.slot) && csv::parse(fields[1], e.id),
            ErrorCode::ParseError, where + ": expected `slot,content_id` integers");
    require(e.slot >= 1 && (horizon == 0 || e.slot <= horizon), ErrorCode::ParseError, where + ": slot out of range");
    require(e.slot >= last_slot, ErrorCode::ParseError, where + ": slots must be ascending");
    require(catalog.contains(e.id), ErrorCode::UnknownContent,
            where + ": content id " + std::to_string(e.id) + " not in catalog");
    last_slot = e.slot;
    events.push_back(e);
  }
  if (horizon == 0) horizon = events.empty() ? 1 : events.back().slot;
  return RequestTrace(horizon, std::move(events));
}

}  // namespace edgecache
