#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "edgecache/placement.hpp"

namespace edgecache {

struct KnapsackItem {
  ContentId id = 0;
  double value = 0.0;
  double size = 1.0;
};

/// Admits items by decreasing value/size, skipping those that no longer fit.
/// Density ties go to the lower id.
Placement greedy_knapsack(std::span<const KnapsackItem> items, double capacity);

/// Optimal 0/1 knapsack by dynamic programming over integer capacity.
/// Among optimal sets the lexicographically smallest id set wins; zero-value
/// items are never admitted.
Placement exact_knapsack(std::span<const KnapsackItem> items, double capacity);

/// Vector forms; item i gets id i + 1.
Placement greedy_knapsack(const Eigen::VectorXd& values, const Eigen::VectorXd& sizes, double capacity);
Placement exact_knapsack(const Eigen::VectorXd& values, const Eigen::VectorXd& sizes, double capacity);

std::vector<KnapsackItem> make_items(const Eigen::VectorXd& values, const Eigen::VectorXd& sizes);

/// Sum of values of the items in a placement.
double objective(const Placement& placement, std::span<const KnapsackItem> items);

}  // namespace edgecache
