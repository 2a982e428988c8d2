#pragma once

#include <set>

#include "edgecache/catalog.hpp"

namespace edgecache {

/// 0/1 cache decision under a capacity budget. used() never exceeds capacity().
class Placement {
 public:
  static constexpr double kSlack = 1e-9;

  explicit Placement(double capacity = 0.0) : capacity_(capacity) {
    require(capacity >= 0.0, ErrorCode::BadInput, "capacity must be >= 0");
  }

  bool contains(ContentId id) const { return cached_.count(id) != 0; }
  bool fits(double size) const { return used_ + size <= capacity_ + kSlack; }

  /// Adds the item when absent and it fits; returns whether it was added.
  bool admit(ContentId id, double size) {
    if (contains(id) || !fits(size)) return false;
    cached_.insert(id);
    used_ += size;
    return true;
  }

  const std::set<ContentId>& cached() const { return cached_; }
  std::size_t count() const { return cached_.size(); }
  double used() const { return used_; }
  double capacity() const { return capacity_; }
  double remaining() const { return capacity_ - used_; }

  friend bool operator==(const Placement& a, const Placement& b) {
    return a.cached_ == b.cached_ && a.capacity_ == b.capacity_;
  }

 private:
  std::set<ContentId> cached_;
  double used_ = 0.0;
  double capacity_;
};

}  // namespace edgecache
