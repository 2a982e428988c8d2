#include "edgecache/catalog.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "edgecache/csv.hpp"
#include "edgecache/rng.hpp"

namespace edgecache {

namespace {

constexpr std::string_view kCatalogHeader =
    "id,regime,size,f_size,f_bandwidth,f_value,f_category,arrival,lifespan,volume";

void check_item(const ContentItem& item) {
  require(item.size > 0.0, ErrorCode::BadInput, "item " + std::to_string(item.id) + " has non-positive size");
  require(item.features.size() > 0, ErrorCode::EmptyFeatures, "item " + std::to_string(item.id) + " has no features");
  require((item.features.array() >= 0.0).all() && (item.features.array() <= 1.0).all(), ErrorCode::BadInput,
          "item " + std::to_string(item.id) + " has a feature outside [0,1]");
  require(item.snm.has_value() == (item.regime == Regime::Snm), ErrorCode::BadInput,
          "item " + std::to_string(item.id) + ": lifecycle present iff regime is SNM");
  if (item.snm) {
    require(item.snm->lifespan > 0 && item.snm->volume > 0.0, ErrorCode::BadInput,
            "item " + std::to_string(item.id) + " has an empty lifecycle");
  }
}

}  // namespace

std::string_view to_string(Regime regime) { return regime == Regime::Irm ? "IRM" : "SNM"; }

Catalog::Catalog(std::vector<ContentItem> items) : items_(std::move(items)) {
  irm_rank_.assign(items_.size(), -1);
  for (std::size_t i = 0; i < items_.size(); ++i) {
    const ContentItem& item = items_[i];
    require(item.id == static_cast<ContentId>(i + 1), ErrorCode::BadInput,
            "catalog ids must be dense and ordered from 1");
    check_item(item);
    if (item.regime == Regime::Irm) {
      irm_rank_[i] = static_cast<std::int32_t>(irm_ids_.size());
      irm_ids_.push_back(item.id);
    } else {
      snm_ids_.push_back(item.id);
    }
  }
  n_irm_ = irm_ids_.size();
  n_snm_ = snm_ids_.size();
}

const ContentItem& Catalog::at(ContentId id) const {
  require(contains(id), ErrorCode::UnknownContent, "content id " + std::to_string(id) + " not in catalog");
  return items_[static_cast<std::size_t>(id - 1)];
}

std::size_t Catalog::irm_rank(ContentId id) const {
  require(at(id).regime == Regime::Irm, ErrorCode::WrongRegime, "content " + std::to_string(id) + " is not IRM");
  return static_cast<std::size_t>(irm_rank_[static_cast<std::size_t>(id - 1)]);
}

double Catalog::total_size() const {
  double total = 0.0;
  for (const auto& item : items_) total += item.size;
  return total;
}

Catalog build_catalog(const CatalogConfig& config, std::uint64_t seed) {
  require(config.library_size >= 2, ErrorCode::LibraryTooSmall, "library needs at least 2 items");
  require(config.w_snm >= 0.0 && config.w_snm <= 1.0, ErrorCode::ConfigError, "w_snm must lie in [0,1]");
  require(config.horizon >= 1, ErrorCode::ConfigError, "horizon must be >= 1");
  require(config.size_min >= 1 && config.size_max >= config.size_min, ErrorCode::ConfigError,
          "size range must satisfy 1 <= size_min <= size_max");
  require(config.lifespan_min >= 1 && config.lifespan_max >= config.lifespan_min, ErrorCode::ConfigError,
          "lifespan range must satisfy 1 <= min <= max");
  require(!config.category_weights.empty(), ErrorCode::ConfigError, "at least one category weight required");
  const ParetoVolume pareto(config.pareto_beta, config.pareto_n_min);

  const int n_snm = static_cast<int>(std::lround(config.w_snm * config.library_size));
  const int n_irm = config.library_size - n_snm;

  Rng rng(seed);
  std::vector<ContentItem> items;
  items.reserve(static_cast<std::size_t>(config.library_size));
  for (int i = 0; i < config.library_size; ++i) {
    ContentItem item;
    item.id = i + 1;
    item.regime = i < n_irm ? Regime::Irm : Regime::Snm;
    item.size = static_cast<double>(rng.between(config.size_min, config.size_max));

    item.features.resize(kFeatureCount);
    item.features[0] = config.size_max > config.size_min
                           ? (item.size - config.size_min) / double(config.size_max - config.size_min)
                           : 0.5;
    item.features[1] = rng.uniform();
    item.features[2] = rng.uniform();
    item.features[3] = config.category_weights[rng.below(config.category_weights.size())];
    item.features = item.features.cwiseMax(0.0).cwiseMin(1.0);

    if (item.regime == Regime::Snm) {
      SnmDynamics dyn;
      dyn.arrival = static_cast<int>(rng.between(1, config.horizon));
      dyn.lifespan = static_cast<int>(rng.between(config.lifespan_min, config.lifespan_max));
      dyn.volume = sample_pareto_volume(pareto, rng.uniform());
      item.snm = dyn;
    }
    items.push_back(std::move(item));
  }
  return Catalog(std::move(items));
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << kCatalogHeader << '\n';
  for (const auto& item : catalog.items()) {
    out << item.id << ',' << to_string(item.regime) << ',' << csv::format(item.size);
    for (Eigen::Index i = 0; i < item.features.size(); ++i) out << ',' << csv::format(item.features[i]);
    if (item.snm) {
      out << ',' << item.snm->arrival << ',' << item.snm->lifespan << ',' << csv::format(item.snm->volume);
    } else {
      out << ",,,";
    }
    out << '\n';
  }
  require(static_cast<bool>(out), ErrorCode::IoError, "write failed for " + path.string());
}

Catalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::IoError, "cannot open " + path.string());
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::ParseError, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kCatalogHeader, ErrorCode::ParseError, path.string() + ":1: unexpected header");

  std::vector<ContentItem> items;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto fields = csv::split(line);
    require(fields.size() == 10, ErrorCode::ParseError, where + ": expected 10 fields");

    ContentItem item;
    require(csv::parse(fields[0], item.id), ErrorCode::ParseError, where + ": bad id");
    const auto regime = csv::trim(fields[1]);
    if (regime == "IRM") {
      item.regime = Regime::Irm;
    } else if (regime == "SNM") {
      item.regime = Regime::Snm;
    } else {
      fail(ErrorCode::ParseError, where + ": regime must be IRM or SNM");
    }
    require(csv::parse(fields[2], item.size), ErrorCode::ParseError, where + ": bad size");
    item.features.resize(kFeatureCount);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      require(csv::parse(fields[3 + i], item.features[static_cast<Eigen::Index>(i)]), ErrorCode::ParseError,
              where + ": bad feature");
    }
    if (item.regime == Regime::Snm) {
      SnmDynamics dyn;
      require(csv::parse(fields[7], dyn.arrival) && csv::parse(fields[8], dyn.lifespan) &&
                  csv::parse(fields[9], dyn.volume),
              ErrorCode::ParseError, where + ": SNM row needs arrival, lifespan and volume");
      item.snm = dyn;
    } else {
      require(csv::trim(fields[7]).empty() && csv::trim(fields[8]).empty() && csv::trim(fields[9]).empty(),
              ErrorCode::ParseError, where + ": IRM row must leave lifecycle columns empty");
    }
    items.push_back(std::move(item));
  }
  try {
    return Catalog(std::move(items));
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

}  // namespace edgecache
