#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "edgecache/distributions.hpp"
#include "edgecache/error.hpp"

namespace edgecache {

using ContentId = std::int32_t;

enum class Regime { Irm, Snm };
enum class FeatureRole { Cost, Benefit };

std::string_view to_string(Regime regime);

/// Lifecycle of a temporary (shot-noise) item: active on [arrival, arrival + lifespan).
struct SnmDynamics {
  int arrival = 1;
  int lifespan = 1;
  double volume = 1.0;
};

struct ContentItem {
  ContentId id = 0;
  double size = 1.0;
  Regime regime = Regime::Irm;
  Eigen::VectorXd features;
  std::optional<SnmDynamics> snm;

  bool active_at(int slot) const {
    return snm && slot >= snm->arrival && slot < snm->arrival + snm->lifespan;
  }
};

/// Immutable content library. Ids are dense in [1, size()].
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<ContentItem> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t n_irm() const { return n_irm_; }
  std::size_t n_snm() const { return n_snm_; }

  bool contains(ContentId id) const { return id >= 1 && static_cast<std::size_t>(id) <= items_.size(); }
  const ContentItem& at(ContentId id) const;
  std::span<const ContentItem> items() const { return items_; }

  /// IRM ids in ascending order; position i is Zipf rank i + 1.
  const std::vector<ContentId>& irm_ids() const { return irm_ids_; }
  const std::vector<ContentId>& snm_ids() const { return snm_ids_; }

  /// Zero-based Zipf rank of an IRM item.
  std::size_t irm_rank(ContentId id) const;
  double total_size() const;

 private:
  std::vector<ContentItem> items_;
  std::vector<ContentId> irm_ids_;
  std::vector<ContentId> snm_ids_;
  std::vector<std::int32_t> irm_rank_;
  std::size_t n_irm_ = 0;
  std::size_t n_snm_ = 0;
};

/// Default feature layout: size, bandwidth (costs), value, category weight (benefits).
inline constexpr std::size_t kFeatureCount = 4;
inline constexpr FeatureRole kDefaultRoles[kFeatureCount] = {FeatureRole::Cost, FeatureRole::Cost,
                                                             FeatureRole::Benefit, FeatureRole::Benefit};

/// Min-max scaling of raw indicators into [0,1], clamped.
template <class Derived, class LoDerived, class HiDerived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> normalize_features(
    const Eigen::MatrixBase<Derived>& raw, const Eigen::MatrixBase<LoDerived>& lo,
    const Eigen::MatrixBase<HiDerived>& hi) {
  using Scalar = typename Derived::Scalar;
  require(raw.size() == lo.size() && raw.size() == hi.size(), ErrorCode::LengthMismatch,
          "raw features and ranges differ in length");
  require(((hi - lo).array() > Scalar(0)).all(), ErrorCode::RangeDegenerate,
          "every feature range needs max > min");
  return ((raw - lo).array() / (hi - lo).array()).cwiseMax(Scalar(0)).cwiseMin(Scalar(1)).matrix();
}

/// Scalar influence of an item's features on its exploration bonus:
/// mean of u_i (u_i = x_i for benefits, 1 - x_i for costs), floored.
template <class Derived>
typename Derived::Scalar feature_influence(const Eigen::MatrixBase<Derived>& features,
                                           std::span<const FeatureRole> roles,
                                           typename Derived::Scalar floor) {
  using Scalar = typename Derived::Scalar;
  require(features.size() > 0, ErrorCode::EmptyFeatures, "feature vector is empty");
  require(static_cast<std::size_t>(features.size()) == roles.size(), ErrorCode::LengthMismatch,
          "one role per feature required");
  Scalar total = 0;
  for (Eigen::Index i = 0; i < features.size(); ++i) {
    total += roles[i] == FeatureRole::Benefit ? features[i] : Scalar(1) - features[i];
  }
  return std::max(floor, total / static_cast<Scalar>(features.size()));
}

struct CatalogConfig {
  int library_size = 150;
  double w_snm = 0.8;
  int horizon = 600;
  int size_min = 1;
  int size_max = 1;
  int lifespan_min = 20;
  int lifespan_max = 80;
  double pareto_beta = 2.0;
  double pareto_n_min = 10.0;
  // Benefit weight per category (film, tv, music).
  std::vector<double> category_weights = {0.9, 0.6, 0.3};
};

Catalog build_catalog(const CatalogConfig& config, std::uint64_t seed);

void save_catalog(const Catalog& catalog, const std::filesystem::path& path);
Catalog load_catalog(const std::filesystem::path& path);

}  // namespace edgecache
