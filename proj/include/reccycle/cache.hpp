#pragma once

// Locally stored provider lists. The key set together with the stored lists
// is exactly the part of the recommendation network the user has observed.
//
// On-disk format: one line per entry, `<item> <rec1> ... <recK>`, single
// spaces, ordered by item id.

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "reccycle/core.hpp"

namespace reccycle {

class RecCache {
 public:
  void record(ItemId i, RecList list) { entries_.insert_or_assign(i, std::move(list)); }

  /// nullptr when i was never recorded.
  const RecList* lookup(ItemId i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool contains(ItemId i) const { return entries_.contains(i); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const RecCache&, const RecCache&) = default;

 private:
  std::map<ItemId, RecList> entries_;
};

inline RecCache& cache_record(RecCache& cache, ItemId i, RecList list) {
  cache.record(i, std::move(list));
  return cache;
}

inline void write_cache_line(std::ostream& os, ItemId i, const RecList& list) {
  os << i.value;
  for (auto j : list) os << ' ' << j.value;
  os << '\n';
}

inline void write_cache(std::ostream& os, const RecCache& cache) {
  for (const auto& [i, list] : cache) write_cache_line(os, i, list);
}

namespace detail {

inline std::vector<std::uint32_t> parse_ids(const std::string& line, std::size_t lineno,
                                            const std::string& source) {
  std::istringstream in(line);
  std::vector<std::uint32_t> ids;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v == 0 || v > 0xffffffffUL)
      throw Error(source + ":" + std::to_string(lineno) + ": bad item id '" + tok + "'");
    ids.push_back(static_cast<std::uint32_t>(v));
  }
  return ids;
}

}  // namespace detail

/// Reads entries until EOF. Lines starting with '#' and blank lines are skipped.
/// All lists must share one length.
inline RecCache read_cache(std::istream& is, const std::string& source = "cache") {
  RecCache cache;
  std::string line;
  std::size_t lineno = 0;
  std::size_t k = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto ids = detail::parse_ids(line, lineno, source);
    if (ids.empty()) continue;
    if (ids.size() < 2)
      throw Error(source + ":" + std::to_string(lineno) + ": entry has no recommendations");
    if (k == 0) k = ids.size() - 1;
    if (ids.size() - 1 != k)
      throw Error(source + ":" + std::to_string(lineno) + ": inconsistent list length");
    std::vector<ItemId> items;
    for (std::size_t t = 1; t < ids.size(); ++t) items.emplace_back(ids[t]);
    try {
      cache.record(ItemId(ids[0]), RecList(std::move(items)));
    } catch (const Error& e) {
      throw Error(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cache;
}

inline void save_cache(const std::string& path, const RecCache& cache) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_cache(os, cache);
  if (!os) throw Error("write to '" + path + "' failed");
}

inline RecCache load_cache(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return read_cache(is, path);
}

}  // namespace reccycle
