// A user browsed five movie pages. The provider only ever shows recent
// releases, but the user wants at least two classic films in a list of four.
// The cached pages already hold enough classics, so no new query is needed.

#include <iostream>
#include <random>

#include "reccycle/reccycle.hpp"

using namespace reccycle;

int main() {
  const std::vector<std::string> titles = {
      "Cast Away",      "Forrest Gump", "Big",        "Apollo 13",      "Toy Story",
      "The Terminal",   "Splash",       "Philadelphia", "Sleepless in Seattle", "Catch Me If You Can",
      "Bachelor Party", "The 'Burbs",
  };
  // 0 = classic (before 1990), 1 = recent
  const std::vector<GroupId> era = {GroupId(1), GroupId(1), GroupId(0), GroupId(1), GroupId(1),
                                    GroupId(1), GroupId(0), GroupId(1), GroupId(1), GroupId(1),
                                    GroupId(0), GroupId(0)};
  AttributeTable attrs(era, {"classic", "recent"});
  auto id = [](std::uint32_t v) { return ItemId(v); };

  RecCache cache;
  cache.record(id(1), RecList{id(2), id(4), id(6), id(10)});
  cache.record(id(2), RecList{id(4), id(1), id(8), id(3)});
  cache.record(id(4), RecList{id(2), id(9), id(5), id(6)});
  cache.record(id(3), RecList{id(7), id(11), id(2), id(1)});
  cache.record(id(9), RecList{id(3), id(8), id(2), id(12)});

  UserHistory history{id(1), id(2), id(4), id(3), id(9)};
  AlgoConfig cfg;
  cfg.k = 4;
  cfg.tau = 2;
  cfg.l_max = 10;

  std::mt19937_64 rng(cfg.seed);
  const ItemId current = history.back();
  auto out = reccycle_recommend(cache, current, attrs, cfg, history, rng);

  std::cout << "Viewing: " << titles[current.index()] << "\n";
  std::cout << "Provider shows:";
  for (ItemId j : *cache.lookup(current)) std::cout << "  " << titles[j.index()];
  std::cout << "\nFair list (" << out.expansions << " cached pages read, " << out.fallback_items
            << " filler items):\n";
  for (ItemId j : out.list)
    std::cout << "  " << titles[j.index()] << " [" << attrs.group_name(attrs.group_of(j)) << "]\n";
  return 0;
}
