#pragma once

// Offline evaluation against held-out items, with binary gains and the full
// catalog as candidate set.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <unordered_set>
#include <vector>

#include "reccycle/core.hpp"
#include "reccycle/datasets.hpp"

namespace reccycle {

using RelevanceSet = std::unordered_set<ItemId>;

/// Binary-gain nDCG of the first K entries; 0 when nothing is relevant.
inline double ndcg_at_k(std::span<const ItemId> rec, const RelevanceSet& relevant, std::size_t k) {
  if (relevant.empty()) return 0.0;
  const std::size_t len = std::min(k, rec.size());
  double dcg = 0.0;
  for (std::size_t r = 0; r < len; ++r)
    if (relevant.contains(rec[r])) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t r = 0; r < ideal; ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  return dcg / idcg;
}

/// Hits in the first K entries over |relevant|; 0 when nothing is relevant.
inline double recall_at_k(std::span<const ItemId> rec, const RelevanceSet& relevant, std::size_t k) {
  if (relevant.empty()) return 0.0;
  const std::size_t len = std::min(k, rec.size());
  std::size_t hits = 0;
  for (std::size_t r = 0; r < len; ++r) hits += relevant.contains(rec[r]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

/// Share of recommended items whose label equals the label of item i.
inline double label_match_accuracy(std::span<const ItemId> rec, const LabelTable& labels, ItemId i) {
  if (rec.empty()) return 0.0;
  const int target = labels.at(i);
  std::size_t same = 0;
  for (ItemId j : rec) same += labels.at(j) == target ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(rec.size());
}

/// Items per group, indexed by GroupId::value; groups absent from the list
/// are reported with 0.
inline std::vector<std::size_t> group_counts(std::span<const ItemId> rec, const AttributeTable& attrs) {
  std::vector<std::size_t> counts(attrs.num_groups(), 0);
  for (ItemId j : rec) ++counts[attrs.group_of(j).value];
  return counts;
}

inline std::vector<std::size_t> group_counts(const RecList& rec, const AttributeTable& attrs) {
  return group_counts(rec.items(), attrs);
}

inline double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

/// Midpoint average for even sizes.
inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  const std::size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
  const double hi = xs[mid];
  if (xs.size() % 2) return hi;
  const double lo = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

}  // namespace reccycle
