#pragma once

// User-side fair recommenders.
//
// RecCycle and its live-query counterpart share one search: a depth-first
// walk over item lists starting at the source page, greedily keeping items
// that fit the per-group quota, and topping up with random catalog items
// when the walk runs dry. They differ only in where lists come from:
// RecCycle reads the local cache, the live variant queries the provider.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <unordered_set>
#include <vector>

#include "reccycle/cache.hpp"
#include "reccycle/core.hpp"
#include "reccycle/feasibility.hpp"
#include "reccycle/provider.hpp"

namespace reccycle {

struct RecOutcome {
  RecList list;
  std::size_t expansions = 0;      // lists read by the search
  std::size_t fallback_items = 0;  // items added after the search gave up
  std::uint64_t provider_cost = 0; // provider queries issued by this call
};

/// Something that can hand out the recommendation list of an item, or
/// report that it has none.
template <class F>
concept ListSource = requires(F f, ItemId p) {
  { f(p) } -> std::same_as<std::optional<RecList>>;
};

/// Uniform draws attempted per slot before the deterministic sweep.
inline constexpr std::size_t kFallbackDrawsPerSlot = 50;

namespace detail {

/// Fills the remaining slots with eligible catalog items. First up to
/// kFallbackDrawsPerSlot * K uniform draws, then a sweep of the groups still
/// under quota by ascending id, then any eligible item by ascending id.
inline std::size_t fill_fallback(FairListBuilder& result, const AttributeTable& attrs,
                                 const UserHistory& history, std::size_t k, std::size_t tau,
                                 std::mt19937_64& rng) {
  const std::size_t before = result.size();
  const std::size_t n = attrs.num_items();
  std::uniform_int_distribution<std::uint32_t> uniform(1, static_cast<std::uint32_t>(n));
  for (std::size_t draw = 0; draw < kFallbackDrawsPerSlot * k && !result.full(); ++draw)
    result.try_add(ItemId(uniform(rng)), history);

  if (!result.full()) {
    for (GroupId g : result.deficit_groups()) {
      for (std::size_t idx = 0; idx < n && result.counts()[g.value] < tau; ++idx) {
        ItemId j = ItemId::from_index(idx);
        if (attrs.group_of(j) == g) result.try_add(j, history);
      }
    }
    for (std::size_t idx = 0; idx < n && !result.full(); ++idx)
      result.try_add(ItemId::from_index(idx), history);
  }
  if (!result.full()) throw InfeasibleError();
  return result.size() - before;
}

}  // namespace detail

/// The fair depth-first search over lists supplied by `source`.
///
/// `expanded` items are never read twice. The stack holds each read list in
/// reverse so the best-ranked item is explored first, and may contain stale
/// entries that are skipped when popped.
template <ListSource Source>
RecOutcome fair_dfs(Source&& source, ItemId i, const AttributeTable& attrs, const AlgoConfig& cfg,
                    const UserHistory& history, std::mt19937_64& rng) {
  cfg.validate(attrs.num_groups());
  if (!attrs.contains(i)) throw Error("item out of catalog");

  FairListBuilder result(attrs, cfg.k, cfg.tau);
  std::vector<ItemId> stack;
  std::unordered_set<ItemId> expanded;
  RecOutcome out;
  ItemId cursor = i;

  for (std::size_t iter = 0; iter < cfg.l_max; ++iter) {
    std::optional<RecList> list;
    bool exhausted = false;
    while (expanded.contains(cursor) || !(list = source(cursor))) {
      if (stack.empty()) {
        exhausted = true;
        break;
      }
      cursor = stack.back();
      stack.pop_back();
    }
    if (exhausted) break;
    expanded.insert(cursor);
    ++out.expansions;

    for (ItemId j : *list) {
      result.try_add(j, history);
      if (result.full()) {
        out.list = std::move(result).release();
        return out;
      }
    }
    for (auto it = list->end(); it != list->begin();) stack.push_back(*--it);
  }

  out.fallback_items = detail::fill_fallback(result, attrs, history, cfg.k, cfg.tau, rng);
  out.list = std::move(result).release();
  return out;
}

/// Overhead-free recommendation from cached provider lists only.
inline RecOutcome reccycle_recommend(const RecCache& cache, ItemId i, const AttributeTable& attrs,
                                     const AlgoConfig& cfg, const UserHistory& history,
                                     std::mt19937_64& rng) {
  auto from_cache = [&](ItemId p) -> std::optional<RecList> {
    if (const RecList* l = cache.lookup(p)) return *l;
    return std::nullopt;
  };
  return fair_dfs(from_cache, i, attrs, cfg, history, rng);
}

/// Same search, fetching every list from the provider (one query per read).
inline RecOutcome consul_recommend(CountingProvider& provider, ItemId i, const AttributeTable& attrs,
                                   const AlgoConfig& cfg, const UserHistory& history,
                                   std::mt19937_64& rng) {
  if (provider.num_items() != attrs.num_items())
    throw Error("provider and attribute table disagree on catalog size");
  const auto before = provider.access_count();
  auto live = [&](ItemId p) -> std::optional<RecList> { return provider.topk(p); };
  auto out = fair_dfs(live, i, attrs, cfg, history, rng);
  out.provider_cost = provider.access_count() - before;
  return out;
}

/// Greedy fair selection over all items by descending score (ties by
/// ascending id), skipping the source item and the history.
inline RecList oracle_fair_rerank(std::span<const double> scores, const AttributeTable& attrs,
                                  const AlgoConfig& cfg, const UserHistory& history, ItemId i) {
  cfg.validate(attrs.num_groups());
  const std::size_t n = scores.size();
  if (n != attrs.num_items()) throw Error("score vector does not match catalog size");
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  // The greedy pass over a sorted prefix equals the start of the greedy pass
  // over the full order, so only a prefix is sorted and it grows on demand.
  std::size_t prefix = std::min(n, 4 * cfg.k + history.size() + 1);
  while (true) {
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(prefix),
                      order.end(), better);
    FairListBuilder result(attrs, cfg.k, cfg.tau);
    for (std::size_t r = 0; r < prefix; ++r) {
      ItemId j = ItemId::from_index(order[r]);
      if (j == i) continue;
      result.try_add(j, history);
      if (result.full()) return std::move(result).release();
    }
    if (prefix == n) throw InfeasibleError();
    prefix = std::min(n, prefix * 4);
  }
}

/// Fair post-processing restricted to the provider's own list. Returns
/// nullopt when the list lacks tau items of some group.
inline std::optional<RecList> naive_postprocess(const RecList& list, const AttributeTable& attrs,
                                                const AlgoConfig& cfg) {
  if (cfg.tau * attrs.num_groups() > list.size()) return std::nullopt;
  const UserHistory none;
  FairListBuilder result(attrs, list.size(), cfg.tau);
  for (ItemId j : list) result.try_add(j, none);
  if (!result.full()) return std::nullopt;
  return std::move(result).release();
}

}  // namespace reccycle
