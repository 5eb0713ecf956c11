#pragma once

// Fairness bookkeeping for greedy list construction.
//
// A partial list R with per-group counts c can still be completed into a list
// of length K with at least tau items of every group iff
//
//     sum_a max(0, tau - c[a]) <= K - |R|.
//
// Every builder in this library only appends an item j when the same bound
// still holds with j's own group left out and one slot consumed, which keeps
// the inequality true after each append.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "reccycle/core.hpp"

#if !defined(NDEBUG) && !defined(RECCYCLE_CHECK_INVARIANTS)
#define RECCYCLE_CHECK_INVARIANTS 1
#endif

namespace reccycle {

/// Process-wide tally of completion-bound checks. Only updated when
/// RECCYCLE_CHECK_INVARIANTS is enabled (the default outside NDEBUG builds).
struct InvariantStats {
  std::atomic<std::uint64_t> checks{0};
  std::atomic<std::uint64_t> violations{0};

  void reset() {
    checks = 0;
    violations = 0;
  }
};

inline InvariantStats& invariant_stats() {
  static InvariantStats stats;
  return stats;
}

constexpr bool invariant_checks_enabled() {
#if RECCYCLE_CHECK_INVARIANTS
  return true;
#else
  return false;
#endif
}

/// sum_a max(0, tau - counts[a]), optionally skipping one group.
inline std::size_t unmet_quota(std::span<const std::size_t> counts, std::size_t tau,
                               const GroupId* skip = nullptr) {
  std::size_t total = 0;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    if (skip && skip->value == a) continue;
    if (counts[a] < tau) total += tau - counts[a];
  }
  return total;
}

/// True iff an item of `group_of_j` can be appended to a list of length
/// `current_len` without making the remaining quota unreachable.
inline bool feasible_add(std::span<const std::size_t> counts, GroupId group_of_j, std::size_t tau,
                         std::size_t k, std::size_t current_len) {
  if (current_len >= k) return false;
  return unmet_quota(counts, tau, &group_of_j) <= k - current_len - 1;
}

/// Growing fair list: result items, group counters and a membership test.
class FairListBuilder {
 public:
  FairListBuilder(const AttributeTable& attrs, std::size_t k, std::size_t tau)
      : attrs_(&attrs), k_(k), tau_(tau), counts_(attrs.num_groups(), 0) {
    items_.reserve(k);
    check_bound();
  }

  std::size_t size() const { return items_.size(); }
  bool full() const { return items_.size() == k_; }
  bool contains(ItemId j) const {
    return std::find(items_.begin(), items_.end(), j) != items_.end();
  }
  std::span<const std::size_t> counts() const { return counts_; }
  std::span<const ItemId> items() const { return items_; }

  /// The feasibility half of the acceptance test, for item j.
  bool feasible(ItemId j) const {
    return feasible_add(counts_, attrs_->group_of(j), tau_, k_, items_.size());
  }

  /// Appends j when it is new, not in `history`, and feasible.
  bool try_add(ItemId j, const UserHistory& history) {
    if (contains(j) || history.contains(j) || !feasible(j)) return false;
    items_.push_back(j);
    ++counts_[attrs_->group_of(j).value];
    check_bound();
    return true;
  }

  /// Groups still below tau.
  std::vector<GroupId> deficit_groups() const {
    std::vector<GroupId> out;
    for (std::size_t a = 0; a < counts_.size(); ++a)
      if (counts_[a] < tau_) out.emplace_back(static_cast<std::uint32_t>(a));
    return out;
  }

  RecList release() && { return RecList(std::move(items_)); }

 private:
  void check_bound() const {
#if RECCYCLE_CHECK_INVARIANTS
    auto& stats = invariant_stats();
    stats.checks.fetch_add(1, std::memory_order_relaxed);
    if (unmet_quota(counts_, tau_) > k_ - items_.size())
      stats.violations.fetch_add(1, std::memory_order_relaxed);
#endif
  }

  const AttributeTable* attrs_;
  std::size_t k_;
  std::size_t tau_;
  std::vector<std::size_t> counts_;
  std::vector<ItemId> items_;
};

}  // namespace reccycle
