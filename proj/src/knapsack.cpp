#include "edgecache/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgecache {

namespace {

void check_items(std::span<const KnapsackItem> items, double capacity) {
  require(capacity >= 0.0, ErrorCode::BadInput, "capacity must be >= 0");
  for (const auto& item : items) {
    require(item.value >= 0.0 && std::isfinite(item.value), ErrorCode::BadInput,
            "item " + std::to_string(item.id) + " has a negative value");
    require(item.size > 0.0 && std::isfinite(item.size), ErrorCode::BadInput,
            "item " + std::to_string(item.id) + " has a non-positive size");
  }
}

bool is_integral(double x) { return std::floor(x) == x; }

}  // namespace

std::vector<KnapsackItem> make_items(const Eigen::VectorXd& values, const Eigen::VectorXd& sizes) {
  require(values.size() == sizes.size(), ErrorCode::LengthMismatch, "values and sizes differ in length");
  std::vector<KnapsackItem> items(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    items[static_cast<std::size_t>(i)] = {static_cast<ContentId>(i + 1), values[i], sizes[i]};
  }
  return items;
}

Placement greedy_knapsack(std::span<const KnapsackItem> items, double capacity) {
  check_items(items, capacity);
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = items[a].value / items[a].size;
    const double db = items[b].value / items[b].size;
    if (da != db) return da > db;
    return items[a].id < items[b].id;
  });
  Placement placement(capacity);
  for (std::size_t i : order) placement.admit(items[i].id, items[i].size);
  return placement;
}

Placement exact_knapsack(std::span<const KnapsackItem> items, double capacity) {
  check_items(items, capacity);
  std::vector<KnapsackItem> sorted;
  sorted.reserve(items.size());
  long total_size = 0;
  for (const auto& item : items) {
    require(is_integral(item.size), ErrorCode::NeedsIntegerSizes,
            "item " + std::to_string(item.id) + " has a fractional size");
    if (item.value > 0.0) {
      sorted.push_back(item);
      total_size += static_cast<long>(item.size);
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  const std::size_t n = sorted.size();
  const std::size_t cap = static_cast<std::size_t>(std::min<double>(std::floor(capacity), double(total_size)));
  const std::size_t width = cap + 1;
  // best[i * width + c]: max value from items i..n-1 within capacity c.
  std::vector<double> best((n + 1) * width, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    const auto size = static_cast<std::size_t>(sorted[i].size);
    for (std::size_t c = 0; c <= cap; ++c) {
      double v = best[(i + 1) * width + c];
      if (size <= c) v = std::max(v, sorted[i].value + best[(i + 1) * width + c - size]);
      best[i * width + c] = v;
    }
  }

  Placement placement(capacity);
  std::size_t c = cap;
  for (std::size_t i = 0; i < n; ++i) {
    const auto size = static_cast<std::size_t>(sorted[i].size);
    if (size > c) continue;
    const double target = best[i * width + c];
    const double with = sorted[i].value + best[(i + 1) * width + c - size];
    if (with >= target - 1e-12 * std::max(1.0, std::abs(target))) {
      placement.admit(sorted[i].id, sorted[i].size);
      c -= size;
    }
  }
  return placement;
}

Placement greedy_knapsack(const Eigen::VectorXd& values, const Eigen::VectorXd& sizes, double capacity) {
  const auto items = make_items(values, sizes);
  return greedy_knapsack(items, capacity);
}

Placement exact_knapsack(const Eigen::VectorXd& values, const Eigen::VectorXd& sizes, double capacity) {
  const auto items = make_items(values, sizes);
  return exact_knapsack(items, capacity);
}

double objective(const Placement& placement, std::span<const KnapsackItem> items) {
  double total = 0.0;
  for (const auto& item : items) {
    if (placement.contains(item.id)) total += item.value;
  }
  return total;
}

}  // namespace edgecache
