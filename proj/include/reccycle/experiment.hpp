#pragma once

// End-to-end runs: load a dataset, train the provider, simulate one browsing
// session per evaluated user, ask every method for a list from the same page
// and history, and aggregate the scores.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "reccycle/algorithms.hpp"
#include "reccycle/bpr.hpp"
#include "reccycle/cache.hpp"
#include "reccycle/core.hpp"
#include "reccycle/datasets.hpp"
#include "reccycle/knn.hpp"
#include "reccycle/metrics.hpp"
#include "reccycle/provider.hpp"
#include "reccycle/report.hpp"
#include "reccycle/session.hpp"

namespace reccycle {

inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names{"provider", "oracle", "consul", "reccycle", "pp"};
  return names;
}

inline const std::vector<std::string>& known_datasets() {
  static const std::vector<std::string> names{"ml100k", "lastfm", "amazon", "adult"};
  return names;
}

struct ExperimentConfig {
  std::string dataset = "ml100k";
  std::string data_dir;    // empty: dataset default
  std::string group_rule;  // empty: dataset default
  std::size_t k = 10;
  std::size_t tau = 5;
  std::size_t l_max = 50;
  std::vector<std::size_t> walk_lengths{100};
  std::size_t sample_users = 0;  // 0: every user (every item for adult)
  std::uint64_t seed = 0;
  std::vector<std::string> algorithms = known_algorithms();
  std::string out_dir;
  std::string split = "last";  // "last": leave-latest-out, "random": test_fraction holdout
  double test_fraction = 0.2;
  std::size_t k_core = 0;  // 0: dataset default
  std::size_t threads = 0; // 0: hardware concurrency
  std::string model_path;  // optional BPR snapshot to reuse
  BprHyper bpr;

  bool item_queries() const { return dataset == "adult"; }

  /// Fills dataset-dependent defaults.
  ExperimentConfig resolved() const {
    ExperimentConfig c = *this;
    if (c.data_dir.empty()) {
      if (dataset == "ml100k") c.data_dir = "data/ml-100k";
      else if (dataset == "lastfm") c.data_dir = "data/hetrec2011-lastfm-2k";
      else if (dataset == "amazon") c.data_dir = "data/amazon/ratings_Home_and_Kitchen.csv";
      else if (dataset == "adult") c.data_dir = "data/adult/adult.data";
    }
    if (c.group_rule.empty()) c.group_rule = dataset == "adult" ? "sex" : "popularity";
    if (c.k_core == 0 && (dataset == "lastfm" || dataset == "amazon")) c.k_core = 10;
    return c;
  }

  void validate() const {
    auto c = resolved();
    if (std::find(known_datasets().begin(), known_datasets().end(), c.dataset) == known_datasets().end())
      throw Error("unknown dataset '" + c.dataset + "'", "config");
    GroupRule rule;
    try {
      rule = parse_group_rule(c.group_rule);
    } catch (const Error& e) {
      throw Error(e.what(), "config");
    }
    const bool column = std::holds_alternative<ColumnValue>(rule);
    if (c.item_queries() != column)
      throw Error("group rule '" + c.group_rule + "' does not apply to dataset '" + c.dataset + "'",
                  "config");
    if (c.dataset != "ml100k" && std::holds_alternative<YearThreshold>(rule))
      throw Error("the oldness rule needs release dates (ml100k only)", "config");
    try {
      AlgoConfig{c.k, c.tau, c.l_max, c.seed}.validate(2);
      if (!c.item_queries()) c.bpr.validate();
    } catch (const Error& e) {
      throw Error(e.what(), "config");
    }
    if (c.walk_lengths.empty()) throw Error("no walk length given", "config");
    for (auto l : c.walk_lengths)
      if (l == 0) throw Error("walk length must be at least 1", "config");
    if (c.algorithms.empty()) throw Error("no algorithm selected", "config");
    for (std::size_t a = 0; a < c.algorithms.size(); ++a) {
      const auto& name = c.algorithms[a];
      if (std::find(known_algorithms().begin(), known_algorithms().end(), name) == known_algorithms().end())
        throw Error("unknown algorithm '" + name + "'", "config");
      if (std::find(c.algorithms.begin(), c.algorithms.begin() + static_cast<std::ptrdiff_t>(a), name) !=
          c.algorithms.begin() + static_cast<std::ptrdiff_t>(a))
        throw Error("algorithm '" + name + "' listed twice", "config");
    }
    if (c.split != "last" && c.split != "random")
      throw Error("split must be 'last' or 'random', got '" + c.split + "'", "config");
    if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0))
      throw Error("test fraction must lie in (0, 1)", "config");
  }

  /// Resolved settings as ordered key/value pairs (the config file format).
  std::vector<std::pair<std::string, std::string>> entries() const {
    auto c = resolved();
    auto join = [](const auto& xs) {
      std::ostringstream os;
      for (std::size_t t = 0; t < xs.size(); ++t) os << (t ? "," : "") << xs[t];
      return os.str();
    };
    auto num = [](double v) {
      std::ostringstream os;
      os.precision(17);
      os << v;
      return os.str();
    };
    return {
        {"dataset", c.dataset},
        {"data_dir", c.data_dir},
        {"group_rule", c.group_rule},
        {"k", std::to_string(c.k)},
        {"tau", std::to_string(c.tau)},
        {"l_max", std::to_string(c.l_max)},
        {"walk_len", join(c.walk_lengths)},
        {"sample_users", std::to_string(c.sample_users)},
        {"seed", std::to_string(c.seed)},
        {"algorithms", join(c.algorithms)},
        {"out", c.out_dir},
        {"split", c.split},
        {"test_fraction", num(c.test_fraction)},
        {"k_core", std::to_string(c.k_core)},
        {"threads", std::to_string(c.threads)},
        {"model", c.model_path},
        {"bpr_dim", std::to_string(c.bpr.dim)},
        {"bpr_learning_rate", num(c.bpr.learning_rate)},
        {"bpr_regularization", num(c.bpr.regularization)},
        {"bpr_epochs", std::to_string(c.bpr.epochs)},
        {"bpr_seed", std::to_string(c.bpr.seed)},
    };
  }

  void set(const std::string& key, const std::string& value) {
    auto to_size = [&](const std::string& v) {
      long long x = 0;
      if (!detail::parse_int(v, x) || x < 0) throw Error("bad value for '" + key + "': " + v, "config");
      return static_cast<std::size_t>(x);
    };
    auto to_double = [&](const std::string& v) {
      double x = 0;
      if (!detail::parse_double(v, x)) throw Error("bad value for '" + key + "': " + v, "config");
      return x;
    };
    auto to_u64 = [&](const std::string& v) {
      std::uint64_t x = 0;
      auto t = detail::trim(v);
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw Error("bad value for '" + key + "': " + v, "config");
      return x;
    };
    auto list = [](const std::string& v) {
      std::vector<std::string> out;
      for (auto f : detail::split(v, ',')) {
        auto t = detail::trim(f);
        if (!t.empty()) out.emplace_back(t);
      }
      return out;
    };
    if (key == "dataset") dataset = value;
    else if (key == "data_dir") data_dir = value;
    else if (key == "group_rule") group_rule = value;
    else if (key == "k") k = to_size(value);
    else if (key == "tau") tau = to_size(value);
    else if (key == "l_max") l_max = to_size(value);
    else if (key == "walk_len") {
      walk_lengths.clear();
      for (const auto& s : list(value)) walk_lengths.push_back(to_size(s));
    } else if (key == "sample_users") sample_users = to_size(value);
    else if (key == "seed") seed = to_u64(value);
    else if (key == "algorithms") algorithms = list(value);
    else if (key == "out") out_dir = value;
    else if (key == "split") split = value;
    else if (key == "test_fraction") test_fraction = to_double(value);
    else if (key == "k_core") k_core = to_size(value);
    else if (key == "threads") threads = to_size(value);
    else if (key == "model") model_path = value;
    else if (key == "bpr_dim") bpr.dim = to_size(value);
    else if (key == "bpr_learning_rate") bpr.learning_rate = to_double(value);
    else if (key == "bpr_regularization") bpr.regularization = to_double(value);
    else if (key == "bpr_epochs") bpr.epochs = to_size(value);
    else if (key == "bpr_seed") bpr.seed = to_u64(value);
    else throw Error("unknown config key '" + key + "'", "config");
  }
};

/// `key = value` lines; '#' starts a comment.
inline void read_config(std::istream& is, ExperimentConfig& cfg, const std::string& source = "config") {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto t = detail::trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw Error(source + ":" + std::to_string(lineno) + ": expected 'key = value'", "config");
    cfg.set(std::string(detail::trim(t.substr(0, eq))), std::string(detail::trim(t.substr(eq + 1))));
  }
}

inline void write_config(std::ostream& os, const ExperimentConfig& cfg) {
  for (const auto& [k, v] : cfg.entries()) os << k << " = " << v << '\n';
}

// Preparation ------------------------------------------------------------------

/// Everything a run needs that does not depend on the walk length.
struct PreparedExperiment {
  ExperimentConfig cfg;  // resolved
  AttributeTable attrs;
  std::shared_ptr<const RecommenderModel> model;
  std::shared_ptr<const MFModel> mf;  // set for BPR providers
  std::optional<LabelTable> labels;   // set for adult
  InteractionSet train;
  InteractionSet test;
  std::vector<std::vector<ItemId>> train_items;  // per user
  std::vector<ItemId> sources;                   // per user: latest training interaction
  std::vector<RelevanceSet> relevant;            // per user
  std::vector<std::size_t> units;                // evaluated users (or session starts for adult)
  std::vector<std::string> notes;                // human-readable log lines
};

namespace detail {

template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.stage().empty()) throw;
    throw Error(e.what(), stage);
  } catch (const std::exception& e) {
    throw Error(e.what(), stage);
  }
}

inline std::vector<std::size_t> sample_units(std::size_t count, std::size_t sample, std::uint64_t seed,
                                             const std::function<bool(std::size_t)>& eligible) {
  std::vector<std::size_t> all;
  for (std::size_t u = 1; u <= count; ++u)
    if (eligible(u)) all.push_back(u);
  if (sample == 0 || sample >= all.size()) return all;
  std::mt19937_64 rng(mix_seed(seed, 0x5a4d91eULL));
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(sample);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace detail

inline PreparedExperiment prepare_experiment(const ExperimentConfig& input) {
  input.validate();
  PreparedExperiment p;
  p.cfg = input.resolved();
  const auto& cfg = p.cfg;
  const GroupRule rule = parse_group_rule(cfg.group_rule);

  if (cfg.item_queries()) {
    auto adult = detail::staged("load", [&] { return load_adult(cfg.data_dir); });
    if (adult.skipped)
      p.notes.push_back("adult: skipped " + std::to_string(adult.skipped) + " unparseable records");
    p.attrs = adult.attributes;
    p.labels = adult.labels;
    p.model = detail::staged("provider", [&] {
      auto knn = std::make_shared<KnnProvider>(KnnProviderModel(adult.features), cfg.k);
      return std::make_shared<MemoizedModel>(knn);
    });
    p.units = detail::sample_units(p.attrs.num_items(), cfg.sample_users, cfg.seed,
                                   [](std::size_t) { return true; });
    p.notes.push_back("items: " + std::to_string(p.attrs.num_items()));
    return p;
  }

  InteractionSet all;
  std::vector<int> release_years;
  detail::staged("load", [&] {
    if (cfg.dataset == "ml100k") {
      auto ml = load_movielens(cfg.data_dir, rule);
      all = std::move(ml.interactions);
      release_years = std::move(ml.release_years);
    } else if (cfg.dataset == "lastfm") {
      all = load_lastfm(cfg.data_dir);
    } else {
      all = load_amazon_ratings(cfg.data_dir);
    }
    if (cfg.k_core > 0) {
      auto before_items = all.raw_item_ids;
      all = extract_k_core(all, cfg.k_core);
      if (!release_years.empty()) {
        std::unordered_map<std::string, int> year_of;
        for (std::size_t i = 0; i < before_items.size(); ++i) year_of[before_items[i]] = release_years[i];
        std::vector<int> kept;
        for (const auto& raw : all.raw_item_ids) kept.push_back(year_of.at(raw));
        release_years = std::move(kept);
      }
    }
  });
  p.notes.push_back("interactions: " + std::to_string(all.size()) + ", users: " +
                    std::to_string(all.num_users) + ", items: " + std::to_string(all.num_items));

  detail::staged("split", [&] {
    const auto mode = cfg.split == "last" ? SplitMode::leave_last_out : SplitMode::random_fraction;
    auto split = split_train_test(all, SplitSpec{cfg.test_fraction, cfg.seed, mode});
    p.train = std::move(split.train);
    p.test = std::move(split.test);
  });
  p.train_items = p.train.items_by_user();
  {
    std::vector<std::int64_t> latest(p.train.num_users, std::numeric_limits<std::int64_t>::min());
    p.sources.assign(p.train.num_users, ItemId());
    for (const auto& r : p.train.rows)
      if (r.timestamp >= latest[r.user - 1]) {
        latest[r.user - 1] = r.timestamp;
        p.sources[r.user - 1] = r.item;
      }
  }
  p.relevant.resize(p.train.num_users);
  for (const auto& r : p.test.rows) p.relevant[r.user - 1].insert(r.item);

  if (const auto* y = std::get_if<YearThreshold>(&rule)) p.attrs = oldness_groups(release_years, y->year);
  else p.attrs = popularity_groups(p.train, std::get<InteractionThreshold>(rule).count);
  auto sizes = p.attrs.group_sizes();
  p.notes.push_back("groups: protected " + std::to_string(sizes[0]) + ", other " + std::to_string(sizes[1]));

  p.mf = detail::staged("train-provider", [&] {
    if (!cfg.model_path.empty()) {
      auto m = std::make_shared<const MFModel>(load_model(cfg.model_path));
      if (m->num_items() != p.train.num_items || m->num_users() != p.train.num_users)
        throw Error("model snapshot does not match the dataset");
      return m;
    }
    return std::make_shared<const MFModel>(train_bpr(p.train, cfg.bpr));
  });
  p.model = std::make_shared<BprProvider>(p.mf, cfg.k);

  p.units = detail::sample_units(p.train.num_users, cfg.sample_users, cfg.seed, [&](std::size_t u) {
    return !p.relevant[u - 1].empty() && !p.train_items[u - 1].empty();
  });
  p.notes.push_back("evaluated users: " + std::to_string(p.units.size()));
  return p;
}

// Evaluation --------------------------------------------------------------------

struct MethodRecord {
  RecList list;             // empty when infeasible
  bool infeasible = false;
  std::size_t expansions = 0;
  std::size_t fallback_items = 0;
  std::uint64_t provider_delta = 0;  // provider top-K queries during the call
  double cost = 0.0;                 // pages accessed, current page included
  double ndcg = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  std::vector<std::size_t> counts;
};

struct UserRecord {
  std::size_t unit = 0;
  ItemId source;
  RecList source_list;
  std::size_t history_size = 0;
  bool source_list_disjoint = false;  // source list shares nothing with the history
  std::uint64_t session_cost = 0;
  std::vector<MethodRecord> methods;  // aligned with cfg.algorithms
};

struct ExperimentResult {
  std::size_t walk_length = 0;
  RunReport report;
  std::vector<UserRecord> records;
};

/// Calls fn(t) for t in [0, n) on `threads` workers.
inline void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t t = 0; t < n; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t t; (t = next.fetch_add(1)) < n;) {
        try {
          fn(t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline UserRecord evaluate_unit(const PreparedExperiment& p, std::size_t unit, std::size_t walk_length) {
  const auto& cfg = p.cfg;
  const AlgoConfig algo{cfg.k, cfg.tau, cfg.l_max, cfg.seed};
  const std::string where = " (user " + std::to_string(unit) + ", seed " + std::to_string(cfg.seed) + ")";
  auto stage = [&](const std::string& name, auto&& f) {
    try {
      return f();
    } catch (const InfeasibleError&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(std::string(e.what()) + where, name);
    }
  };

  CountingProvider provider(p.model);
  UserRecord rec;
  rec.unit = unit;

  // The user browses from a random item of their own, then opens the page
  // of their latest interaction, which becomes the query.
  ItemId start, page;
  {
    std::mt19937_64 rng(mix_seed(cfg.seed, unit, 0));
    if (cfg.item_queries()) {
      page = ItemId(static_cast<std::uint32_t>(unit));
      start = ItemId(std::uniform_int_distribution<std::uint32_t>(
          1, static_cast<std::uint32_t>(p.attrs.num_items()))(rng));
    } else {
      const auto& items = p.train_items[unit - 1];
      page = p.sources[unit - 1];
      start = items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
    }
  }
  auto trace = stage("session", [&] {
    SessionTrace t;
    if (walk_length > 1) t = simulate_session(provider, start, walk_length - 1, mix_seed(cfg.seed, unit, 1));
    open_page(t, provider, page);
    return t;
  });
  rec.source = pick_source(trace);
  rec.source_list = *trace.cache.lookup(rec.source);
  rec.history_size = trace.history.size();
  rec.session_cost = trace.provider_cost;
  rec.source_list_disjoint = std::none_of(rec.source_list.begin(), rec.source_list.end(),
                                          [&](ItemId j) { return trace.history.contains(j); });
  const UserHistory& history = trace.history;

  for (const auto& name : cfg.algorithms) {
    MethodRecord m;
    std::mt19937_64 rng(mix_seed(cfg.seed, unit, 2));
    stage(name, [&] {
      const auto before = provider.access_count();
      try {
        if (name == "provider") {
          m.list = rec.source_list;
          m.expansions = 1;
        } else if (name == "reccycle") {
          auto out = reccycle_recommend(trace.cache, rec.source, p.attrs, algo, history, rng);
          m.list = std::move(out.list);
          m.expansions = out.expansions;
          m.fallback_items = out.fallback_items;
        } else if (name == "consul") {
          auto out = consul_recommend(provider, rec.source, p.attrs, algo, history, rng);
          m.list = std::move(out.list);
          m.expansions = out.expansions;
          m.fallback_items = out.fallback_items;
        } else if (name == "oracle") {
          auto scores = provider.full_scores(rec.source);
          m.list = oracle_fair_rerank(scores, p.attrs, algo, history, rec.source);
        } else if (name == "pp") {
          m.expansions = 1;
          if (auto l = naive_postprocess(rec.source_list, p.attrs, algo)) m.list = std::move(*l);
          else m.infeasible = true;
        }
      } catch (const InfeasibleError&) {
        m.infeasible = true;
        m.list = RecList();
      }
      m.provider_delta = provider.access_count() - before;
      return 0;
    });
    // The current page is already loaded; a live search's first query is
    // that page, so it is not charged twice.
    m.cost = name == "consul" ? static_cast<double>(std::max<std::uint64_t>(1, m.provider_delta))
                              : 1.0 + static_cast<double>(m.provider_delta);
    if (!m.infeasible) m.counts = group_counts(m.list, p.attrs);
    if (p.labels) {
      m.accuracy = m.infeasible ? 0.0 : label_match_accuracy(m.list.items(), *p.labels, rec.source);
    } else {
      const auto& rel = p.relevant[unit - 1];
      m.ndcg = ndcg_at_k(m.list.items(), rel, cfg.k);
      m.recall = recall_at_k(m.list.items(), rel, cfg.k);
    }
    rec.methods.push_back(std::move(m));
  }
  return rec;
}

inline RunReport summarize(const PreparedExperiment& p, const std::vector<UserRecord>& records,
                           std::size_t walk_length) {
  const auto& cfg = p.cfg;
  RunReport report;
  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    AlgorithmSummary s;
    s.name = cfg.algorithms[a];
    s.users = records.size();
    std::vector<double> ndcg, recall, accuracy, cost, expansions;
    std::size_t fallback = 0, infeasible = 0;
    std::size_t min_group = cfg.k;
    bool any_list = false;
    for (const auto& r : records) {
      const auto& m = r.methods[a];
      ndcg.push_back(m.ndcg);
      recall.push_back(m.recall);
      accuracy.push_back(m.accuracy);
      cost.push_back(m.cost);
      expansions.push_back(static_cast<double>(m.expansions));
      fallback += m.fallback_items > 0 ? 1 : 0;
      infeasible += m.infeasible ? 1 : 0;
      if (!m.infeasible) {
        any_list = true;
        min_group = std::min(min_group, *std::min_element(m.counts.begin(), m.counts.end()));
      }
    }
    const double n = records.empty() ? 1.0 : static_cast<double>(records.size());
    if (p.labels) {
      s.ndcg = s.recall = std::numeric_limits<double>::quiet_NaN();
      s.accuracy = mean(accuracy);
    } else {
      s.ndcg = mean(ndcg);
      s.recall = mean(recall);
    }
    s.mean_cost = mean(cost);
    s.median_cost = median(cost);
    s.max_cost = cost.empty() ? 0.0 : *std::max_element(cost.begin(), cost.end());
    s.min_group_count = any_list ? min_group : 0;
    s.fallback_rate = static_cast<double>(fallback) / n;
    s.infeasible_rate = static_cast<double>(infeasible) / n;
    s.mean_expansions = mean(expansions);
    s.median_expansions = median(expansions);
    s.max_expansions = expansions.empty() ? 0.0 : *std::max_element(expansions.begin(), expansions.end());
    report.algorithms.push_back(std::move(s));
  }
  report.config = cfg.entries();
  for (auto& [k, v] : report.config)
    if (k == "walk_len") v = std::to_string(walk_length);
  report.config.emplace_back("evaluated_units", std::to_string(records.size()));
  report.config.emplace_back("recall_denominator", "|relevant|");
  report.config.emplace_back("cost", "pages accessed including the current page");
  for (std::size_t t = 0; t < p.notes.size(); ++t)
    report.config.emplace_back("note_" + std::to_string(t + 1), p.notes[t]);
  return report;
}

inline ExperimentResult evaluate(const PreparedExperiment& p, std::size_t walk_length) {
  ExperimentResult result;
  result.walk_length = walk_length;
  result.records.resize(p.units.size());
  parallel_for(p.units.size(), p.cfg.threads,
               [&](std::size_t t) { result.records[t] = evaluate_unit(p, p.units[t], walk_length); });
  result.report = summarize(p, result.records, walk_length);
  return result;
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  auto prepared = prepare_experiment(cfg);
  return evaluate(prepared, prepared.cfg.walk_lengths.front());
}

/// One evaluation per walk length over a shared provider and split.
inline std::vector<ExperimentResult> sweep_history_length(const PreparedExperiment& p,
                                                          const std::vector<std::size_t>& lengths) {
  if (lengths.empty()) throw Error("no walk length given", "config");
  std::vector<ExperimentResult> out;
  for (auto l : lengths) {
    if (l == 0) throw Error("walk length must be at least 1", "config");
    out.push_back(evaluate(p, l));
  }
  return out;
}

inline std::vector<ExperimentResult> sweep_history_length(const ExperimentConfig& cfg,
                                                          const std::vector<std::size_t>& lengths) {
  auto c = cfg;
  c.walk_lengths = lengths;
  return sweep_history_length(prepare_experiment(c), lengths);
}

/// Two-column `walk_length,<metric>` CSV for the given method.
inline void write_sweep_csv(std::ostream& os, const std::vector<ExperimentResult>& results,
                            const std::string& algorithm, const std::string& metric) {
  os << "walk_length," << metric << '\n';
  for (const auto& r : results) {
    const auto* a = r.report.find(algorithm);
    if (!a) throw Error("algorithm '" + algorithm + "' not in sweep");
    double v = metric == "ndcg" ? a->ndcg : metric == "recall" ? a->recall : a->accuracy;
    os << r.walk_length << ',' << detail::fixed(v) << '\n';
  }
}

/// Normalized text snapshot of a prepared dataset.
inline void write_prepared_snapshot(const PreparedExperiment& p, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream os(dir / name);
    if (!os) throw Error("cannot open '" + (dir / name).string() + "' for writing", "prepare-data");
    return os;
  };
  {
    auto os = open("groups.txt");
    write_groups(os, p.attrs);
  }
  if (p.labels) {
    auto os = open("labels.txt");
    for (std::size_t i = 0; i < p.labels->size(); ++i) os << (i + 1) << ' ' << p.labels->labels[i] << '\n';
    return;
  }
  {
    auto os = open("train.txt");
    write_interactions(os, p.train);
  }
  {
    auto os = open("test.txt");
    write_interactions(os, p.test);
  }
  {
    auto os = open("items.txt");
    write_id_map(os, p.train.raw_item_ids);
  }
  {
    auto os = open("users.txt");
    write_id_map(os, p.train.raw_user_ids);
  }
}

}  // namespace reccycle
