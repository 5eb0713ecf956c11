#pragma once

// Shared fixtures for the unit and acceptance suites: random search
// instances, brute-force metric references and dataset locations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "reccycle/reccycle.hpp"

#ifndef RECCYCLE_DATA_DIR
#define RECCYCLE_DATA_DIR "data"
#endif

namespace reccycle::testing {

inline std::filesystem::path data_dir() { return RECCYCLE_DATA_DIR; }
inline std::filesystem::path movielens_dir() { return data_dir() / "ml-100k"; }
inline std::filesystem::path adult_file() { return data_dir() / "adult" / "adult.data"; }

inline bool has_movielens() { return std::filesystem::exists(movielens_dir() / "u.data"); }
inline bool has_adult() { return std::filesystem::exists(adult_file()); }

/// A self-contained search problem: catalog, provider lists for every item,
/// a partial cache, a history and a source item.
struct Instance {
  AttributeTable attrs;
  std::vector<RecList> lists;  // provider list of every item
  RecCache cache;
  UserHistory history;
  AlgoConfig cfg;
  ItemId source;

  std::shared_ptr<const RecommenderModel> model() const {
    return std::make_shared<ListTableModel>(lists, cfg.k);
  }
};

inline std::vector<RecList> random_lists(std::size_t n, std::size_t k, const std::vector<GroupId>& groups,
                                         double skew, std::mt19937_64& rng) {
  std::vector<RecList> lists;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::uint32_t> pool;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) pool.push_back(static_cast<std::uint32_t>(j));
    // Skewed providers prefer group 0, which starves the other groups.
    std::vector<double> key(n);
    for (auto j : pool) key[j] = coin(rng) + (groups[j].value == 0 ? skew : 0.0);
    std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                      [&](auto a, auto b) { return key[a] > key[b]; });
    std::vector<ItemId> l;
    for (std::size_t r = 0; r < k; ++r) l.push_back(ItemId::from_index(pool[r]));
    lists.emplace_back(std::move(l));
  }
  return lists;
}

/// Random instance satisfying the soundness premise: tau * |A| <= K and at
/// least tau items of every group (and K items overall) outside the history
/// and other than the source.
inline Instance random_instance(std::mt19937_64& rng, bool full_cache = false) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  while (true) {
    Instance inst;
    const std::size_t n = uniform(8, 60);
    const std::size_t num_groups = uniform(1, 3);
    const std::size_t k = uniform(std::max<std::size_t>(1, num_groups), std::min<std::size_t>(10, n - 1));
    const std::size_t tau = uniform(0, k / num_groups);
    inst.cfg = AlgoConfig{k, tau, uniform(1, 20), rng()};

    std::vector<GroupId> groups(n);
    const double protected_share = coin(rng) * 0.8 + 0.05;
    for (auto& g : groups)
      g = GroupId(num_groups == 1 ? 0u
                                  : (coin(rng) < protected_share
                                         ? 1u
                                         : static_cast<std::uint32_t>(uniform(0, num_groups - 1))));
    std::vector<std::string> names;
    for (std::size_t a = 0; a < num_groups; ++a) names.push_back("g" + std::to_string(a));
    inst.attrs = AttributeTable(groups, names);
    inst.lists = random_lists(n, k, groups, coin(rng) < 0.5 ? 0.0 : 2.0 * coin(rng), rng);

    inst.source = ItemId(static_cast<std::uint32_t>(uniform(1, n)));
    const double cache_rate = full_cache ? 1.0 : coin(rng);
    for (std::size_t i = 1; i <= n; ++i)
      if (ItemId(static_cast<std::uint32_t>(i)) == inst.source || coin(rng) < cache_rate)
        inst.cache.record(ItemId(static_cast<std::uint32_t>(i)), inst.lists[i - 1]);

    const double history_rate = coin(rng) * 0.5;
    if (coin(rng) < 0.5) inst.history.insert(inst.source);
    for (std::size_t i = 1; i <= n; ++i)
      if (coin(rng) < history_rate) inst.history.insert(ItemId(static_cast<std::uint32_t>(i)));

    std::vector<std::size_t> eligible(num_groups, 0);
    std::size_t total = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      ItemId j(static_cast<std::uint32_t>(i));
      if (inst.history.contains(j) || j == inst.source) continue;
      ++eligible[groups[i - 1].value];
      ++total;
    }
    if (total < k || std::any_of(eligible.begin(), eligible.end(), [&](auto e) { return e < tau; }))
      continue;
    return inst;
  }
}

/// nDCG from the definition, with naive loops and no shared code.
inline double reference_ndcg(const std::vector<std::uint32_t>& rec, const std::vector<std::uint32_t>& relevant,
                             std::size_t k) {
  if (relevant.empty()) return 0.0;
  double dcg = 0.0;
  for (std::size_t r = 0; r < rec.size() && r < k; ++r) {
    bool hit = false;
    for (auto x : relevant) hit = hit || x == rec[r];
    if (hit) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  double ideal = 0.0;
  for (std::size_t r = 0; r < k && r < relevant.size(); ++r) ideal += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  return dcg / ideal;
}

inline double reference_recall(const std::vector<std::uint32_t>& rec, const std::vector<std::uint32_t>& relevant,
                               std::size_t k) {
  if (relevant.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto x : relevant)
    for (std::size_t r = 0; r < rec.size() && r < k; ++r)
      if (rec[r] == x) ++hits;
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

inline std::vector<ItemId> to_items(const std::vector<std::uint32_t>& ids) {
  std::vector<ItemId> out;
  for (auto v : ids) out.emplace_back(v);
  return out;
}

inline RelevanceSet to_relevance(const std::vector<std::uint32_t>& ids) {
  RelevanceSet out;
  for (auto v : ids) out.insert(ItemId(v));
  return out;
}

/// Random ranking problem: a list of k distinct ids from [1, n] and a random
/// relevant set (possibly empty).
struct MetricCase {
  std::vector<std::uint32_t> rec;
  std::vector<std::uint32_t> relevant;
  std::size_t k = 0;
};

inline MetricCase random_metric_case(std::mt19937_64& rng) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  MetricCase c;
  const std::size_t n = uniform(2, 80);
  c.k = uniform(1, std::min<std::size_t>(20, n));
  std::vector<std::uint32_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<std::uint32_t>(i + 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  c.rec.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(c.k));
  std::shuffle(ids.begin(), ids.end(), rng);
  c.relevant.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(uniform(0, n)));
  return c;
}

/// Experiment config pointing at the bundled MovieLens copy.
inline ExperimentConfig movielens_config() {
  ExperimentConfig cfg;
  cfg.dataset = "ml100k";
  cfg.data_dir = movielens_dir().string();
  return cfg;
}

}  // namespace reccycle::testing
