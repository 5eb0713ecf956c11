#pragma once

// Loaders for the evaluation datasets, protected-group rules, k-core
// filtering and the per-user train/test split.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "reccycle/core.hpp"

namespace reccycle {

struct Interaction {
  std::uint32_t user = 0;  // 1-based
  ItemId item;
  double weight = 1.0;
  std::int64_t timestamp = 0;  // 0 when the source has no time information

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

/// Deduplicated implicit-feedback data with dense ids. `raw_user_ids[u-1]`
/// and `raw_item_ids[i-1]` give the identifiers used in the source files.
struct InteractionSet {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  std::vector<Interaction> rows;
  std::vector<std::string> raw_user_ids;
  std::vector<std::string> raw_item_ids;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }

  std::vector<std::vector<ItemId>> items_by_user() const {
    std::vector<std::vector<ItemId>> out(num_users);
    for (const auto& r : rows) out[r.user - 1].push_back(r.item);
    return out;
  }

  std::vector<std::size_t> item_degrees() const {
    std::vector<std::size_t> deg(num_items, 0);
    for (const auto& r : rows) ++deg[r.item.index()];
    return deg;
  }

  std::vector<std::size_t> user_degrees() const {
    std::vector<std::size_t> deg(num_users, 0);
    for (const auto& r : rows) ++deg[r.user - 1];
    return deg;
  }
};

/// A record as read from disk, before reindexing.
struct RawInteraction {
  std::string user;
  std::string item;
  double weight = 1.0;
  std::int64_t timestamp = 0;
};

namespace detail {

inline bool parse_int(std::string_view s, long long& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

/// Numeric ids compare numerically, everything else lexicographically.
inline bool raw_id_less(const std::string& a, const std::string& b) {
  long long x = 0, y = 0;
  bool na = parse_int(a, x), nb = parse_int(b, y);
  if (na && nb) return x < y;
  if (na != nb) return na;
  return a < b;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  return is;
}

inline Error line_error(const std::filesystem::path& path, std::size_t lineno,
                        const std::string& what) {
  return Error(path.filename().string() + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace detail

/// Deduplicates (first occurrence wins) and reindexes raw records. Items in
/// `extra_items` join the item universe even without interactions.
inline InteractionSet make_interaction_set(const std::vector<RawInteraction>& raw,
                                           const std::vector<std::string>& extra_items = {}) {
  std::vector<std::string> users, items(extra_items);
  users.reserve(raw.size());
  for (const auto& r : raw) {
    users.push_back(r.user);
    items.push_back(r.item);
  }
  auto uniq = [](std::vector<std::string>& v) {
    std::sort(v.begin(), v.end(), detail::raw_id_less);
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  uniq(users);
  uniq(items);
  std::unordered_map<std::string, std::uint32_t> user_of, item_of;
  for (std::size_t u = 0; u < users.size(); ++u) user_of.emplace(users[u], static_cast<std::uint32_t>(u + 1));
  for (std::size_t i = 0; i < items.size(); ++i) item_of.emplace(items[i], static_cast<std::uint32_t>(i + 1));

  InteractionSet out;
  out.num_users = users.size();
  out.num_items = items.size();
  out.raw_user_ids = std::move(users);
  out.raw_item_ids = std::move(items);
  std::unordered_set<std::uint64_t> seen;
  out.rows.reserve(raw.size());
  for (const auto& r : raw) {
    auto u = user_of.at(r.user);
    auto i = item_of.at(r.item);
    if (!seen.insert((std::uint64_t{u} << 32) | i).second) continue;
    out.rows.push_back({u, ItemId(i), r.weight, r.timestamp});
  }
  return out;
}

// Group rules --------------------------------------------------------------

inline constexpr GroupId kProtectedGroup{0};
inline constexpr GroupId kOtherGroup{1};

inline std::vector<std::string> protected_group_names() { return {"protected", "other"}; }

/// Items released strictly before `year` are protected.
struct YearThreshold {
  int year = 1990;
};

/// Items with strictly fewer than `count` interactions are protected.
struct InteractionThreshold {
  std::size_t count = 50;
};

/// Group is the value of a categorical column (Adult: "sex").
struct ColumnValue {
  std::string attribute = "sex";
};

using GroupRule = std::variant<YearThreshold, InteractionThreshold, ColumnValue>;

/// Accepts "oldness[:year]", "popularity[:count]" and "sex".
inline GroupRule parse_group_rule(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  long long param = 0;
  bool has_param = colon != std::string::npos;
  if (has_param && !detail::parse_int(std::string_view(text).substr(colon + 1), param))
    throw Error("bad group rule parameter in '" + text + "'");
  if (name == "oldness") return YearThreshold{has_param ? static_cast<int>(param) : 1990};
  if (name == "popularity") {
    if (has_param && param < 0) throw Error("negative popularity threshold");
    return InteractionThreshold{has_param ? static_cast<std::size_t>(param) : 50};
  }
  if (name == "sex" && !has_param) return ColumnValue{"sex"};
  throw Error("unknown group rule '" + text + "'");
}

inline std::string group_rule_name(const GroupRule& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, YearThreshold>) return "oldness:" + std::to_string(r.year);
        else if constexpr (std::is_same_v<T, InteractionThreshold>)
          return "popularity:" + std::to_string(r.count);
        else return r.attribute;
      },
      rule);
}

inline AttributeTable popularity_groups(const InteractionSet& inter, std::size_t threshold) {
  auto deg = inter.item_degrees();
  std::vector<GroupId> g(inter.num_items);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = deg[i] < threshold ? kProtectedGroup : kOtherGroup;
  return AttributeTable(std::move(g), protected_group_names());
}

/// Unknown release year (0) counts as "other".
inline AttributeTable oldness_groups(const std::vector<int>& release_years, int year) {
  std::vector<GroupId> g(release_years.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = (release_years[i] != 0 && release_years[i] < year) ? kProtectedGroup : kOtherGroup;
  return AttributeTable(std::move(g), protected_group_names());
}

// MovieLens 100k ------------------------------------------------------------

struct MovieLensData {
  InteractionSet interactions;
  AttributeTable attributes;
  std::vector<int> release_years;  // per dense item, 0 when unknown
  std::vector<std::string> titles;
};

/// Release year from "dd-Mon-yyyy", 0 when missing.
inline int parse_release_year(std::string_view date) {
  date = detail::trim(date);
  if (date.size() < 4) return 0;
  long long y = 0;
  if (!detail::parse_int(date.substr(date.size() - 4), y)) return 0;
  return static_cast<int>(y);
}

/// `dir` holds `u.data` (user \t item \t rating \t timestamp) and `u.item`
/// (pipe-separated; field 3 is the release date). Ratings are binarized.
inline MovieLensData load_movielens(const std::filesystem::path& dir, const GroupRule& rule) {
  if (std::holds_alternative<ColumnValue>(rule))
    throw Error("MovieLens supports the oldness and popularity group rules only");

  std::vector<std::string> item_ids;
  std::map<std::string, std::pair<int, std::string>, decltype(&detail::raw_id_less)> meta(
      &detail::raw_id_less);
  {
    auto path = dir / "u.item";
    auto is = detail::open_input(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (detail::trim(line).empty()) continue;
      auto f = detail::split(line, '|');
      long long id = 0;
      if (f.size() < 5 || !detail::parse_int(f[0], id) || id <= 0)
        throw detail::line_error(path, lineno, "expected pipe-separated movie record");
      std::string key(detail::trim(f[0]));
      meta.emplace(key, std::make_pair(parse_release_year(f[2]), std::string(f[1])));
      item_ids.push_back(key);
    }
  }

  std::vector<RawInteraction> raw;
  {
    auto path = dir / "u.data";
    auto is = detail::open_input(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (detail::trim(line).empty()) continue;
      auto f = detail::split(line, '\t');
      long long u = 0, i = 0, rating = 0, ts = 0;
      if (f.size() != 4 || !detail::parse_int(f[0], u) || !detail::parse_int(f[1], i) ||
          !detail::parse_int(f[2], rating) || !detail::parse_int(f[3], ts) || u <= 0 || i <= 0)
        throw detail::line_error(path, lineno, "expected user\\titem\\trating\\ttimestamp");
      std::string item(detail::trim(f[1]));
      if (!meta.contains(item)) throw detail::line_error(path, lineno, "unknown item " + item);
      raw.push_back({std::string(detail::trim(f[0])), std::move(item), 1.0, ts});
    }
  }

  MovieLensData out;
  out.interactions = make_interaction_set(raw, item_ids);
  out.release_years.reserve(out.interactions.num_items);
  for (const auto& raw_id : out.interactions.raw_item_ids) {
    const auto& m = meta.at(raw_id);
    out.release_years.push_back(m.first);
    out.titles.push_back(m.second);
  }
  if (const auto* y = std::get_if<YearThreshold>(&rule)) {
    out.attributes = oldness_groups(out.release_years, y->year);
  } else {
    out.attributes = popularity_groups(out.interactions, std::get<InteractionThreshold>(rule).count);
  }
  return out;
}

// LastFM (hetrec-2011) and Amazon -------------------------------------------

/// `path` is `user_artists.dat` (header line, then userID \t artistID \t weight)
/// or a directory containing it.
inline InteractionSet load_lastfm(std::filesystem::path path) {
  if (std::filesystem::is_directory(path)) path /= "user_artists.dat";
  auto is = detail::open_input(path);
  std::vector<RawInteraction> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split(line, '\t');
    long long u = 0, a = 0;
    double w = 0;
    if (lineno == 1 && f.size() >= 1 && !detail::parse_int(f[0], u)) continue;  // header
    if (f.size() != 3 || !detail::parse_int(f[0], u) || !detail::parse_int(f[1], a) ||
        !detail::parse_double(f[2], w) || w <= 0)
      throw detail::line_error(path, lineno, "expected userID\\tartistID\\tweight");
    raw.push_back({std::string(detail::trim(f[0])), std::string(detail::trim(f[1])), w});
  }
  return make_interaction_set(raw);
}

/// Amazon ratings-only dump: `user,item,rating,timestamp` per line. Parsed
/// for completeness; the Home-and-Kitchen file is far beyond desk scale.
inline InteractionSet load_amazon_ratings(const std::filesystem::path& path) {
  auto is = detail::open_input(path);
  std::vector<RawInteraction> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split(line, ',');
    double rating = 0;
    long long ts = 0;
    if (f.size() != 4 || detail::trim(f[0]).empty() || detail::trim(f[1]).empty() ||
        !detail::parse_double(f[2], rating) || !detail::parse_int(f[3], ts))
      throw detail::line_error(path, lineno, "expected user,item,rating,timestamp");
    raw.push_back({std::string(detail::trim(f[0])), std::string(detail::trim(f[1])), 1.0, ts});
  }
  return make_interaction_set(raw);
}

// Adult -----------------------------------------------------------------------

/// Row-major numeric features, one row per item.
struct FeatureTable {
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::vector<double> values;
  std::vector<std::string> names;

  std::span<const double> row(ItemId i) const {
    return std::span<const double>(values).subspan(i.index() * dims, dims);
  }
};

struct LabelTable {
  std::vector<int> labels;  // per item, index = ItemId::index()

  int at(ItemId i) const { return labels.at(i.index()); }
  std::size_t size() const { return labels.size(); }
};

struct AdultData {
  FeatureTable features;
  AttributeTable attributes;
  LabelTable labels;  // 1 when income > 50K
  std::size_t skipped = 0;
  std::vector<std::string> warnings;  // first few skip reasons
};

/// Comma-separated census records (adult.data / adult.test layout). Features
/// are age, education-num and capital-gain; group is sex; label is >50K.
inline AdultData load_adult(const std::filesystem::path& path) {
  auto is = detail::open_input(path);
  AdultData out;
  out.features.dims = 3;
  out.features.names = {"age", "education-num", "capital-gain"};
  std::vector<std::string> sex;
  std::string line;
  std::size_t lineno = 0;
  auto skip = [&](const std::string& why) {
    ++out.skipped;
    if (out.warnings.size() < 10)
      out.warnings.push_back(path.filename().string() + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    auto f = detail::split(line, ',');
    if (f.size() != 15) {
      skip("expected 15 fields");
      continue;
    }
    double age = 0, edu = 0, gain = 0;
    if (!detail::parse_double(f[0], age) || !detail::parse_double(f[4], edu) ||
        !detail::parse_double(f[10], gain)) {
      skip("non-numeric feature");
      continue;
    }
    auto s = detail::trim(f[9]);
    auto income = detail::trim(f[14]);
    if (!income.empty() && income.back() == '.') income.remove_suffix(1);
    if (s.empty() || s == "?" || (income != ">50K" && income != "<=50K")) {
      skip("missing sex or income");
      continue;
    }
    out.features.values.insert(out.features.values.end(), {age, edu, gain});
    sex.emplace_back(s);
    out.labels.labels.push_back(income == ">50K" ? 1 : 0);
  }
  out.features.rows = sex.size();
  if (sex.empty()) throw Error("no usable Adult records in '" + path.string() + "'");
  std::vector<std::string> names(sex);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  std::vector<GroupId> groups;
  groups.reserve(sex.size());
  for (const auto& s : sex)
    groups.emplace_back(static_cast<std::uint32_t>(
        std::lower_bound(names.begin(), names.end(), s) - names.begin()));
  out.attributes = AttributeTable(std::move(groups), std::move(names));
  return out;
}

// Filtering and splitting ------------------------------------------------------

/// Restricts to rows where `keep` holds and reindexes users and items densely
/// (order preserved). Raw ids are carried over.
template <class Pred>
InteractionSet filter_reindex(const InteractionSet& in, Pred keep) {
  std::vector<std::uint32_t> user_map(in.num_users + 1, 0), item_map(in.num_items + 1, 0);
  for (const auto& r : in.rows)
    if (keep(r)) {
      user_map[r.user] = 1;
      item_map[r.item.value] = 1;
    }
  InteractionSet out;
  for (std::size_t u = 1; u <= in.num_users; ++u)
    if (user_map[u]) {
      user_map[u] = static_cast<std::uint32_t>(++out.num_users);
      out.raw_user_ids.push_back(in.raw_user_ids[u - 1]);
    }
  for (std::size_t i = 1; i <= in.num_items; ++i)
    if (item_map[i]) {
      item_map[i] = static_cast<std::uint32_t>(++out.num_items);
      out.raw_item_ids.push_back(in.raw_item_ids[i - 1]);
    }
  for (const auto& r : in.rows)
    if (keep(r)) out.rows.push_back({user_map[r.user], ItemId(item_map[r.item.value]), r.weight, r.timestamp});
  return out;
}

/// Iteratively drops users and items with fewer than k interactions until
/// every survivor has at least k.
inline InteractionSet extract_k_core(const InteractionSet& in, std::size_t k) {
  if (k == 0) throw Error("k-core needs k >= 1");
  std::vector<char> user_alive(in.num_users, 1), item_alive(in.num_items, 1);
  std::vector<std::size_t> udeg = in.user_degrees(), ideg = in.item_degrees();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t u = 0; u < udeg.size(); ++u)
      if (user_alive[u] && udeg[u] < k) user_alive[u] = 0, changed = true;
    for (std::size_t i = 0; i < ideg.size(); ++i)
      if (item_alive[i] && ideg[i] < k) item_alive[i] = 0, changed = true;
    if (!changed) break;
    std::fill(udeg.begin(), udeg.end(), 0);
    std::fill(ideg.begin(), ideg.end(), 0);
    for (const auto& r : in.rows)
      if (user_alive[r.user - 1] && item_alive[r.item.index()]) {
        ++udeg[r.user - 1];
        ++ideg[r.item.index()];
      }
  }
  auto out = filter_reindex(in, [&](const Interaction& r) {
    return user_alive[r.user - 1] && item_alive[r.item.index()];
  });
  if (out.empty()) throw Error("k-core is empty");
  return out;
}

enum class SplitMode {
  random_fraction,  // floor(test_fraction * n_u) random interactions per user
  leave_last_out,   // each user's latest interaction (ties broken at random)
};

struct SplitSpec {
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  SplitMode mode = SplitMode::random_fraction;
};

struct TrainTestSplit {
  InteractionSet train;
  InteractionSet test;
};

/// Per-user holdout; every user keeps at least one training interaction and
/// both halves share the id space. Under leave_last_out the training rows of
/// each user are emitted in time order, so the last one is the most recent.
inline TrainTestSplit split_train_test(const InteractionSet& in, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw Error("test fraction must lie in (0, 1)");
  std::vector<std::vector<std::size_t>> by_user(in.num_users);
  for (std::size_t r = 0; r < in.rows.size(); ++r) by_user[in.rows[r].user - 1].push_back(r);

  TrainTestSplit out;
  for (auto* part : {&out.train, &out.test}) {
    part->num_users = in.num_users;
    part->num_items = in.num_items;
    part->raw_user_ids = in.raw_user_ids;
    part->raw_item_ids = in.raw_item_ids;
  }
  for (std::size_t u = 0; u < by_user.size(); ++u) {
    auto& rows = by_user[u];
    std::mt19937_64 rng(mix_seed(spec.seed, u + 1));
    std::shuffle(rows.begin(), rows.end(), rng);
    if (spec.mode == SplitMode::leave_last_out) {
      std::stable_sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
        return in.rows[a].timestamp > in.rows[b].timestamp;
      });
      const std::size_t n_test = rows.size() > 1 ? 1 : 0;
      std::reverse(rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
      for (std::size_t t = 0; t < rows.size(); ++t)
        (t < n_test ? out.test : out.train).rows.push_back(in.rows[rows[t]]);
      continue;
    }
    std::size_t n_test = static_cast<std::size_t>(spec.test_fraction * static_cast<double>(rows.size()) + 1e-9);
    if (rows.size() <= 1) n_test = 0;
    n_test = std::min(n_test, rows.size() - (rows.empty() ? 0 : 1));
    std::sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::sort(rows.begin() + static_cast<std::ptrdiff_t>(n_test), rows.end());
    for (std::size_t t = 0; t < rows.size(); ++t)
      (t < n_test ? out.test : out.train).rows.push_back(in.rows[rows[t]]);
  }
  return out;
}

// Normalized text snapshot ------------------------------------------------------

inline void write_interactions(std::ostream& os, const InteractionSet& inter) {
  for (const auto& r : inter.rows) os << r.user << ' ' << r.item.value << ' ' << r.weight << '\n';
}

inline void write_groups(std::ostream& os, const AttributeTable& attrs) {
  for (std::size_t i = 0; i < attrs.num_items(); ++i)
    os << (i + 1) << ' ' << attrs.group_name(attrs.groups()[i]) << '\n';
}

inline void write_id_map(std::ostream& os, const std::vector<std::string>& raw_ids) {
  for (std::size_t i = 0; i < raw_ids.size(); ++i) os << (i + 1) << ' ' << raw_ids[i] << '\n';
}

}  // namespace reccycle
