#pragma once

#include <mutex>
#include <unordered_set>
#include <vector>

#include "hermitangent/curve.hpp"

namespace hermitangent {

// Deduplication set shared by scan workers. insert_if_absent is the only
// mutating operation.
class ConcurrentKeySet {
 public:
  bool insert_if_absent(CurveKey key) {
    std::lock_guard lock(mutex_);
    return keys_.insert(std::move(key)).second;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return keys_.size();
  }

  // Sorted snapshot.
  std::vector<CurveKey> sorted() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_set<CurveKey, CurveKeyHash> keys_;
};

}  // namespace hermitangent
