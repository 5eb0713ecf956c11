#pragma once

// Simulated browsing: the user follows provider recommendations at random,
// and every page seen leaves its list in the local cache.

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "reccycle/cache.hpp"
#include "reccycle/core.hpp"
#include "reccycle/provider.hpp"

namespace reccycle {

struct SessionTrace {
  UserHistory history;
  RecCache cache;
  std::uint64_t provider_cost = 0;
  ItemId current;  // page on screen when the session ends (always cached)
};

/// Opens item `i`: fetches its list unless cached, and makes it the current page.
inline void open_page(SessionTrace& trace, CountingProvider& provider, ItemId i) {
  if (!trace.cache.contains(i)) {
    trace.cache.record(i, provider.topk(i));
    ++trace.provider_cost;
  }
  trace.history.insert(i);
  trace.current = i;
}

/// Upper bound on walk steps per requested history item. A walk trapped in a
/// small closed region of the network stops early with a shorter history.
inline constexpr std::size_t kMaxStepsPerItem = 100;

/// Random walk of `length` distinct items starting at `start`. Each distinct
/// item is fetched from the provider once; revisits are served from the cache
/// and do not extend the history.
inline SessionTrace simulate_session(CountingProvider& provider, ItemId start, std::size_t length,
                                     std::uint64_t seed) {
  if (length == 0) throw Error("session length must be at least 1");
  if (start.value < 1 || start.value > provider.num_items()) throw Error("item out of catalog");
  SessionTrace trace;
  std::mt19937_64 rng(seed);
  ItemId next = start;
  const std::size_t max_steps = length * kMaxStepsPerItem;
  for (std::size_t step = 0; step < max_steps; ++step) {
    open_page(trace, provider, next);
    if (trace.history.size() == length) break;
    const RecList& list = *trace.cache.lookup(next);
    std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);
    next = list[pick(rng)];
  }
  return trace;
}

/// The page the user is currently on: the last item visited.
inline ItemId pick_source(const SessionTrace& trace) {
  if (trace.history.empty()) throw Error("empty session trace");
  return trace.current;
}

/// Cache file layout preceded by `# history: <ids in visit order>` and
/// `# current: <id>`.
inline void write_trace(std::ostream& os, const SessionTrace& trace) {
  os << "# history:";
  for (auto i : trace.history.ordered()) os << ' ' << i.value;
  os << "\n# current: " << trace.current.value << '\n';
  write_cache(os, trace.cache);
}

inline SessionTrace read_trace(std::istream& is, const std::string& source = "trace") {
  std::string header;
  if (!std::getline(is, header) || header.rfind("# history:", 0) != 0)
    throw Error(source + ":1: missing '# history:' header");
  SessionTrace trace;
  for (auto id : detail::parse_ids(header.substr(10), 1, source)) trace.history.insert(ItemId(id));
  if (!trace.history.empty()) trace.current = trace.history.back();
  std::string line;
  if (is.peek() == '#' && std::getline(is, line) && line.rfind("# current:", 0) == 0) {
    auto ids = detail::parse_ids(line.substr(10), 2, source);
    if (ids.size() != 1) throw Error(source + ":2: expected one id after '# current:'");
    trace.current = ItemId(ids[0]);
  }
  trace.cache = read_cache(is, source);
  for (auto i : trace.history.ordered())
    if (!trace.cache.contains(i)) throw Error(source + ": visited item " + std::to_string(i.value) + " not cached");
  return trace;
}

}  // namespace reccycle
