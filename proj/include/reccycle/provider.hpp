#pragma once

// The service-side recommender as seen from the user: a black box that maps
// an item page to its K recommendations. CountingProvider is the only door
// to it and tallies every page fetch.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <span>
#include <vector>

#include "reccycle/core.hpp"

namespace reccycle {

/// Immutable item-to-item recommender living on the provider side.
class RecommenderModel {
 public:
  virtual ~RecommenderModel() = default;

  virtual std::size_t num_items() const = 0;
  virtual std::size_t list_length() const = 0;

  /// Deterministic top-K list for item i. Never contains i.
  virtual RecList topk(ItemId i) const = 0;

  /// Similarity of every item to i, indexed by ItemId::index(). Hidden from
  /// real users; only the oracle baseline reads it.
  virtual std::vector<double> scores(ItemId i) const = 0;
};

/// Top-`k` items by descending score, ties by ascending id, skipping `self`.
inline RecList rank_top_k(std::span<const double> scores, ItemId self, std::size_t k) {
  const std::size_t n = scores.size();
  if (k >= n) throw Error("K must be smaller than the number of items");
  std::vector<std::uint32_t> idx;
  idx.reserve(n);
  for (std::uint32_t j = 0; j < n; ++j)
    if (j != self.index()) idx.push_back(j);
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), better);
  std::vector<ItemId> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) out.push_back(ItemId::from_index(idx[r]));
  return RecList(std::move(out));
}

/// Provider defined by an explicit list per item. Scores are derived from
/// ranks (K for the first item down to 1, zero for unlisted items).
class ListTableModel final : public RecommenderModel {
 public:
  ListTableModel(std::vector<RecList> lists, std::size_t k) : lists_(std::move(lists)), k_(k) {
    for (std::size_t idx = 0; idx < lists_.size(); ++idx) {
      const auto& l = lists_[idx];
      if (l.size() != k_) throw Error("list table: every list must have length K");
      for (auto j : l) {
        if (j.value < 1 || j.value > lists_.size()) throw Error("list table: item out of catalog");
        if (j.index() == idx) throw Error("list table: item recommends itself");
      }
    }
  }

  std::size_t num_items() const override { return lists_.size(); }
  std::size_t list_length() const override { return k_; }
  RecList topk(ItemId i) const override { return lists_.at(i.index()); }

  std::vector<double> scores(ItemId i) const override {
    std::vector<double> s(lists_.size(), 0.0);
    const auto& l = lists_.at(i.index());
    for (std::size_t r = 0; r < l.size(); ++r) s[l[r].index()] = static_cast<double>(k_ - r);
    return s;
  }

 private:
  std::vector<RecList> lists_;
  std::size_t k_;
};

/// Memoizes topk() of an expensive model. Thread-safe.
class MemoizedModel final : public RecommenderModel {
 public:
  explicit MemoizedModel(std::shared_ptr<const RecommenderModel> inner)
      : inner_(std::move(inner)),
        lists_(inner_->num_items()),
        once_(std::make_unique<std::once_flag[]>(inner_->num_items())) {}

  std::size_t num_items() const override { return inner_->num_items(); }
  std::size_t list_length() const override { return inner_->list_length(); }

  RecList topk(ItemId i) const override {
    if (i.value < 1 || i.value > lists_.size()) throw Error("item out of catalog");
    std::call_once(once_[i.index()], [&] { lists_[i.index()] = inner_->topk(i); });
    return lists_[i.index()];
  }

  std::vector<double> scores(ItemId i) const override { return inner_->scores(i); }

 private:
  std::shared_ptr<const RecommenderModel> inner_;
  mutable std::vector<RecList> lists_;
  std::unique_ptr<std::once_flag[]> once_;
};

/// Access-counting boundary around a provider model. One instance is meant
/// to represent one user's view of the service, so counters are per view;
/// the model behind it may be shared.
class CountingProvider {
 public:
  explicit CountingProvider(std::shared_ptr<const RecommenderModel> model)
      : model_(std::move(model)) {
    if (!model_) throw Error("null provider model");
  }

  CountingProvider(const CountingProvider&) = delete;
  CountingProvider& operator=(const CountingProvider&) = delete;

  std::size_t num_items() const { return model_->num_items(); }
  std::size_t list_length() const { return model_->list_length(); }

  /// One page view: the provider's K recommendations for i.
  RecList topk(ItemId i) {
    check(i);
    access_count_.fetch_add(1, std::memory_order_relaxed);
    return model_->topk(i);
  }

  /// Oracle-only read of the hidden similarity scores.
  std::vector<double> full_scores(ItemId i) {
    check(i);
    score_access_count_.fetch_add(1, std::memory_order_relaxed);
    return model_->scores(i);
  }

  std::uint64_t access_count() const { return access_count_.load(std::memory_order_relaxed); }
  std::uint64_t score_access_count() const {
    return score_access_count_.load(std::memory_order_relaxed);
  }

  const RecommenderModel& model() const { return *model_; }

 private:
  void check(ItemId i) const {
    if (i.value < 1 || i.value > model_->num_items()) throw Error("item out of catalog");
  }

  std::shared_ptr<const RecommenderModel> model_;
  std::atomic<std::uint64_t> access_count_{0};
  std::atomic<std::uint64_t> score_access_count_{0};
};

inline RecList provider_topk(CountingProvider& provider, ItemId i) { return provider.topk(i); }

}  // namespace reccycle
