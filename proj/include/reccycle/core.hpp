#pragma once

// Domain types shared by every part of the library: item and group
// identifiers, fixed-length recommendation lists, the user's interaction
// history and the knobs of the fair search.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace reccycle {

/// Library-wide error. `stage` is empty for low-level errors and is filled
/// in by the experiment driver so that CLI failures name where they came from.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, std::string stage = {})
      : std::runtime_error(what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// No list of length K can give every group its quota from the eligible items.
class InfeasibleError : public Error {
 public:
  InfeasibleError() : Error("infeasible fairness constraint") {}
};

/// 1-based item identifier. Items of a catalog of size n are 1..n.
struct ItemId {
  std::uint32_t value{0};

  constexpr ItemId() = default;
  constexpr explicit ItemId(std::uint32_t v) : value(v) {}

  constexpr std::size_t index() const { return static_cast<std::size_t>(value) - 1; }
  static constexpr ItemId from_index(std::size_t idx) {
    return ItemId(static_cast<std::uint32_t>(idx + 1));
  }

  friend constexpr auto operator<=>(const ItemId&, const ItemId&) = default;
};

/// Dense 0-based index of a sensitive group.
struct GroupId {
  std::uint32_t value{0};

  constexpr GroupId() = default;
  constexpr explicit GroupId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(const GroupId&, const GroupId&) = default;
};

}  // namespace reccycle

template <>
struct std::hash<reccycle::ItemId> {
  std::size_t operator()(const reccycle::ItemId& id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};

namespace reccycle {

/// Sensitive attribute of every item of a catalog.
class AttributeTable {
 public:
  AttributeTable() = default;

  AttributeTable(std::vector<GroupId> groups, std::vector<std::string> names)
      : groups_(std::move(groups)), names_(std::move(names)) {
    if (names_.empty()) throw Error("attribute table needs at least one group");
    for (auto g : groups_)
      if (g.value >= names_.size()) throw Error("group id out of range in attribute table");
  }

  std::size_t num_items() const { return groups_.size(); }
  std::size_t num_groups() const { return names_.size(); }

  bool contains(ItemId i) const { return i.value >= 1 && i.value <= groups_.size(); }

  GroupId group_of(ItemId i) const {
    if (!contains(i)) throw Error("item out of catalog");
    return groups_[i.index()];
  }

  const std::string& group_name(GroupId g) const { return names_.at(g.value); }
  const std::vector<std::string>& group_names() const { return names_; }
  std::span<const GroupId> groups() const { return groups_; }

  /// Number of catalog items per group.
  std::vector<std::size_t> group_sizes() const {
    std::vector<std::size_t> sizes(names_.size(), 0);
    for (auto g : groups_) ++sizes[g.value];
    return sizes;
  }

 private:
  std::vector<GroupId> groups_;
  std::vector<std::string> names_;
};

/// Ordered recommendation list without duplicates. Its length is the K of
/// whoever produced it.
class RecList {
 public:
  RecList() = default;

  explicit RecList(std::vector<ItemId> items) : items_(std::move(items)) { check_unique(); }
  RecList(std::initializer_list<ItemId> items) : items_(items) { check_unique(); }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  ItemId operator[](std::size_t k) const { return items_[k]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  std::span<const ItemId> items() const { return items_; }

  bool contains(ItemId j) const { return std::find(items_.begin(), items_.end(), j) != items_.end(); }

  friend bool operator==(const RecList&, const RecList&) = default;

 private:
  void check_unique() const {
    std::vector<ItemId> sorted(items_);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("recommendation list contains duplicate items");
  }

  std::vector<ItemId> items_;
};

/// Items the user has interacted with, in first-visit order.
class UserHistory {
 public:
  UserHistory() = default;
  UserHistory(std::initializer_list<ItemId> items) {
    for (auto i : items) insert(i);
  }

  /// Returns false when the item was already present (order is unchanged).
  bool insert(ItemId i) {
    if (!members_.insert(i).second) return false;
    order_.push_back(i);
    return true;
  }

  bool contains(ItemId i) const { return members_.contains(i); }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  std::span<const ItemId> ordered() const { return order_; }
  ItemId back() const {
    if (order_.empty()) throw Error("empty history");
    return order_.back();
  }

 private:
  std::vector<ItemId> order_;
  std::unordered_set<ItemId> members_;
};

struct AlgoConfig {
  std::size_t k = 10;
  std::size_t tau = 5;
  std::size_t l_max = 50;
  std::uint64_t seed = 0;

  /// Throws when the configuration cannot be sound for `num_groups` groups.
  void validate(std::size_t num_groups) const {
    if (k == 0) throw Error("K must be positive");
    if (l_max == 0) throw Error("L_max must be at least 1");
    if (tau * num_groups > k) throw Error("tau * |A| exceeds K");
  }
};

/// SplitMix64 finalizer; derives independent stream seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ b);
}

}  // namespace reccycle
