// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../support.hpp"

using namespace reccycle;
using namespace reccycle::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

struct Outcome {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Outcome> outcomes;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  outcomes.push_back({id, name, pass, detail});
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << detail << std::endl;
}

bool meets_quota(const RecList& list, const AttributeTable& attrs, std::size_t tau, std::size_t k) {
  if (list.size() != k) return false;
  auto counts = group_counts(list, attrs);
  return std::all_of(counts.begin(), counts.end(), [&](auto c) { return c >= tau; });
}

bool disjoint(const RecList& list, const UserHistory& h) {
  return std::none_of(list.begin(), list.end(), [&](ItemId j) { return h.contains(j); });
}

// 1 ---------------------------------------------------------------------------

void soundness() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240501);
  std::size_t failures = 0, runs = 0;
  for (int t = 0; t < 1000; ++t) {
    auto inst = random_instance(rng);
    const auto& cfg = inst.cfg;
    std::mt19937_64 r1(cfg.seed), r2(cfg.seed);
    auto a = reccycle_recommend(inst.cache, inst.source, inst.attrs, cfg, inst.history, r1);
    CountingProvider provider(inst.model());
    auto b = consul_recommend(provider, inst.source, inst.attrs, cfg, inst.history, r2);
    auto scores = provider.full_scores(inst.source);
    auto c = oracle_fair_rerank(scores, inst.attrs, cfg, inst.history, inst.source);
    for (const RecList* l : {&a.list, &b.list, &c}) {
      ++runs;
      if (!meets_quota(*l, inst.attrs, cfg.tau, cfg.k) || !disjoint(*l, inst.history)) ++failures;
    }
  }
  const double secs = seconds_since(t0);
  report(1, "soundness", failures == 0 && secs < 60.0,
         std::to_string(runs) + " outputs over 1000 random instances, " + std::to_string(failures) +
             " below quota, " + fmt(secs, 1) + " s");
}

// 10 --------------------------------------------------------------------------

void metric_oracles() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto c = random_metric_case(rng);
    auto rec = to_items(c.rec);
    auto rel = to_relevance(c.relevant);
    worst = std::max(worst, std::abs(ndcg_at_k(rec, rel, c.k) - reference_ndcg(c.rec, c.relevant, c.k)));
    worst = std::max(worst, std::abs(recall_at_k(rec, rel, c.k) - reference_recall(c.rec, c.relevant, c.k)));
  }
  report(10, "metric oracles", worst <= 1e-9, "max |diff| over 1000 instances = " + std::to_string(worst));
}

// MovieLens runs ----------------------------------------------------------------

struct MovieLensRuns {
  PreparedExperiment popularity;
  PreparedExperiment oldness;
  ExperimentResult pop100;
  ExperimentResult old100;
  double end_to_end_seconds = 0.0;
};

const AlgorithmSummary& summary(const ExperimentResult& r, const std::string& name) {
  const auto* a = r.report.find(name);
  if (!a) throw Error("missing method " + name);
  return *a;
}

std::size_t method_index(const PreparedExperiment& p, const std::string& name) {
  auto it = std::find(p.cfg.algorithms.begin(), p.cfg.algorithms.end(), name);
  return static_cast<std::size_t>(it - p.cfg.algorithms.begin());
}

void balance(const MovieLensRuns& ml) {
  std::ostringstream detail;
  bool pass = true;
  for (const auto* run : {&ml.pop100, &ml.old100}) {
    const auto& p = run == &ml.pop100 ? ml.popularity : ml.oldness;
    for (const std::string name : {"oracle", "consul", "reccycle"}) {
      const auto idx = method_index(p, name);
      std::size_t balanced = 0;
      for (const auto& r : run->records) {
        const auto& m = r.methods[idx];
        if (!m.infeasible && m.counts == std::vector<std::size_t>{5, 5}) ++balanced;
      }
      pass = pass && balanced == run->records.size();
      detail << p.cfg.group_rule << "/" << name << " " << balanced << "/" << run->records.size() << "; ";
    }
  }
  pass = pass && ml.end_to_end_seconds < 600.0;
  detail << "end-to-end " << fmt(ml.end_to_end_seconds, 1) << " s";
  report(2, "balance {5,5}", pass, detail.str());
}

void overhead_free(const MovieLensRuns& ml) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto* run : {&ml.pop100, &ml.old100}) {
    const auto& p = run == &ml.pop100 ? ml.popularity : ml.oldness;
    const auto idx = method_index(p, "reccycle");
    std::uint64_t max_delta = 0;
    for (const auto& r : run->records) max_delta = std::max(max_delta, r.methods[idx].provider_delta);
    const double cost = summary(*run, "reccycle").mean_cost;
    pass = pass && max_delta == 0 && cost == 1.0;
    detail << p.cfg.group_rule << ": max provider delta " << max_delta << ", cost " << fmt(cost, 2) << "; ";
  }
  report(3, "overhead-free", pass, detail.str());
}

void consistency(const MovieLensRuns& ml) {
  PreparedExperiment p = ml.popularity;
  p.cfg.tau = 0;
  p.cfg.algorithms = {"provider", "reccycle"};
  auto run = evaluate(p, 100);
  std::size_t checked = 0, identical = 0;
  for (const auto& r : run.records) {
    if (!r.source_list_disjoint) continue;
    if (checked == 100) break;
    ++checked;
    if (r.methods[1].list == r.source_list) ++identical;
  }
  report(4, "consistency (tau = 0)", checked == 100 && identical == checked,
         std::to_string(identical) + "/" + std::to_string(checked) + " H-disjoint users reproduce the cached list");
}

void cost_gap(const MovieLensRuns& ml) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto* run : {&ml.pop100, &ml.old100}) {
    const auto& p = run == &ml.pop100 ? ml.popularity : ml.oldness;
    const double consul = summary(*run, "consul").mean_cost;
    const double rc = summary(*run, "reccycle").mean_cost;
    const bool ok = consul >= 3.0 && consul <= 10.0 && consul >= 3.0 * rc;
    pass = pass && ok;
    detail << p.cfg.group_rule << ": consul " << fmt(consul, 2) << " vs reccycle " << fmt(rc, 2) << " ("
           << fmt(consul / rc, 2) << "x); ";
  }
  report(5, "cost gap", pass, detail.str());
}

void locality(const std::vector<const ExperimentResult*>& all_runs, const MovieLensRuns& ml) {
  double max_exp = 0.0;
  for (const auto* run : all_runs)
    for (const auto& a : run->report.algorithms)
      if (a.name == "reccycle" || a.name == "consul") max_exp = std::max(max_exp, a.max_expansions);
  bool pass = max_exp <= 50.0;
  std::ostringstream detail;
  detail << "max expansions " << max_exp << "; median:";
  for (const auto* run : {&ml.pop100, &ml.old100}) {
    const auto& p = run == &ml.pop100 ? ml.popularity : ml.oldness;
    for (const std::string name : {"reccycle", "consul"}) {
      const double med = summary(*run, name).median_expansions;
      pass = pass && med <= 10.0;
      detail << " " << p.cfg.group_rule << "/" << name << " " << med;
    }
  }
  report(7, "locality", pass, detail.str());
}

void sanity_band(const MovieLensRuns& ml) {
  const auto& a = summary(ml.pop100, "reccycle");
  const bool pass = a.recall >= 0.05 && a.recall <= 0.20 && a.ndcg >= 0.03 && a.ndcg <= 0.12;
  report(9, "sanity band", pass, "recall@10 " + fmt(a.recall) + ", nDCG@10 " + fmt(a.ndcg));
}

void pp_unsound(const MovieLensRuns& ml) {
  bool pass = true;
  std::ostringstream detail;
  for (const auto* run : {&ml.pop100, &ml.old100}) {
    const auto& p = run == &ml.pop100 ? ml.popularity : ml.oldness;
    const double pp = summary(*run, "pp").infeasible_rate;
    const double rc = summary(*run, "reccycle").infeasible_rate;
    pass = pass && pp >= 0.01 && rc == 0.0;
    detail << p.cfg.group_rule << ": pp infeasible " << fmt(pp) << ", reccycle " << fmt(rc) << "; ";
  }
  report(11, "pp unsoundness", pass, detail.str());
}

std::vector<ExperimentResult> sparsity(const MovieLensRuns& ml) {
  const auto t0 = Clock::now();
  PreparedExperiment p = ml.popularity;
  p.cfg.algorithms = {"reccycle"};
  auto results = sweep_history_length(p, {10, 25, 50, 100});
  double lo = 1.0, hi = 0.0;
  std::ostringstream detail;
  for (const auto& r : results) {
    const double v = summary(r, "reccycle").ndcg;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    detail << "L=" << r.walk_length << " " << fmt(v) << "; ";
  }
  const double spread = hi > 0 ? (hi - lo) / hi : 1.0;
  const double secs = seconds_since(t0);
  detail << "spread " << fmt(100 * spread, 1) << "%, " << fmt(secs, 1) << " s";
  report(8, "sparsity robustness", spread <= 0.15 && secs < 1800.0, detail.str());
  return results;
}

void full_cache_equivalence(const PreparedExperiment& p) {
  const std::size_t n = p.attrs.num_items();
  RecCache cache;
  for (std::size_t i = 1; i <= n; ++i) cache.record(ItemId(static_cast<std::uint32_t>(i)), p.model->topk(ItemId(static_cast<std::uint32_t>(i))));
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::uint32_t> item(1, static_cast<std::uint32_t>(n));
  std::size_t same = 0;
  const AlgoConfig base{p.cfg.k, p.cfg.tau, p.cfg.l_max, 0};
  for (int t = 0; t < 1000; ++t) {
    const ItemId i(item(rng));
    const std::uint64_t seed = rng();
    UserHistory h;
    const std::size_t hsize = std::uniform_int_distribution<std::size_t>(0, 30)(rng);
    for (std::size_t s = 0; s < hsize; ++s) h.insert(ItemId(item(rng)));
    AlgoConfig cfg = base;
    cfg.seed = seed;
    std::mt19937_64 r1(seed), r2(seed);
    CountingProvider provider(p.model);
    auto a = reccycle_recommend(cache, i, p.attrs, cfg, h, r1);
    auto b = consul_recommend(provider, i, p.attrs, cfg, h, r2);
    if (a.list == b.list && a.expansions == b.expansions) ++same;
  }
  report(12, "full-cache equivalence", same == 1000, std::to_string(same) + "/1000 identical (i, seed) pairs");
}

}  // namespace

int main() {
  std::cout << "reccycle acceptance run (invariant checks "
            << (invariant_checks_enabled() ? "on" : "OFF") << ")" << std::endl;
  invariant_stats().reset();
  int status = 0;
  try {
    soundness();
    metric_oracles();

    if (!has_movielens()) {
      std::cout << "MovieLens data not found under " << movielens_dir() << std::endl;
      for (int id : {2, 3, 4, 5, 7, 8, 9, 11, 12}) report(id, "movielens criterion", false, "dataset missing");
    } else {
      MovieLensRuns ml;
      const auto t0 = Clock::now();
      ml.popularity = prepare_experiment(movielens_config());
      ml.pop100 = evaluate(ml.popularity, 100);
      ml.end_to_end_seconds = seconds_since(t0);
      for (const auto& n : ml.popularity.notes) std::cout << "  " << n << std::endl;
      std::cout << "  popularity, walk length 100:" << std::endl;
      write_report_table(std::cout, ml.pop100.report);

      auto oldness_cfg = movielens_config();
      oldness_cfg.group_rule = "oldness";
      ml.oldness = prepare_experiment(oldness_cfg);
      ml.old100 = evaluate(ml.oldness, 100);
      std::cout << "  oldness, walk length 100:" << std::endl;
      write_report_table(std::cout, ml.old100.report);

      balance(ml);
      overhead_free(ml);
      consistency(ml);
      cost_gap(ml);
      auto sweep = sparsity(ml);
      std::vector<const ExperimentResult*> runs{&ml.pop100, &ml.old100};
      for (const auto& r : sweep) runs.push_back(&r);
      locality(runs, ml);
      sanity_band(ml);
      pp_unsound(ml);
      full_cache_equivalence(ml.popularity);
    }

    const auto checks = invariant_stats().checks.load();
    const auto violations = invariant_stats().violations.load();
    report(6, "loop invariant", invariant_checks_enabled() && checks > 0 && violations == 0,
           std::to_string(violations) + " violations in " + std::to_string(checks) + " checks");
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance aborted: " << e.what() << std::endl;
    return 2;
  }

  std::sort(outcomes.begin(), outcomes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::size_t passed = 0;
  std::cout << "\nsummary" << std::endl;
  for (const auto& o : outcomes) {
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << o.id << "] " << o.name << std::endl;
    passed += o.pass ? 1 : 0;
    if (!o.pass) status = 1;
  }
  std::cout << passed << "/" << outcomes.size() << " criteria passed" << std::endl;
  return status;
}
