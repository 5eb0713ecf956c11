#pragma once

// Matrix factorization trained with the BPR pairwise criterion. Item-item
// similarity is the inner product of item factors; this is the stand-in for
// the service's official recommender on interaction datasets.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "reccycle/core.hpp"
#include "reccycle/datasets.hpp"
#include "reccycle/provider.hpp"

namespace reccycle {

struct BprHyper {
  std::size_t dim = 64;
  double learning_rate = 0.05;
  double regularization = 0.002;
  std::size_t epochs = 300;
  std::uint64_t seed = 42;

  void validate() const {
    if (dim == 0) throw Error("BPR: factor dimension must be at least 1");
    if (!(learning_rate > 0.0)) throw Error("BPR: learning rate must be positive");
    if (regularization < 0.0) throw Error("BPR: regularization must be non-negative");
  }

  friend bool operator==(const BprHyper&, const BprHyper&) = default;
};

class MFModel {
 public:
  MFModel() = default;
  MFModel(std::size_t num_users, std::size_t num_items, BprHyper hyper)
      : num_users_(num_users),
        num_items_(num_items),
        hyper_(hyper),
        user_factors_(num_users * hyper.dim, 0.0),
        item_factors_(num_items * hyper.dim, 0.0) {
    hyper_.validate();
  }

  std::size_t num_users() const { return num_users_; }
  std::size_t num_items() const { return num_items_; }
  std::size_t dim() const { return hyper_.dim; }
  const BprHyper& hyper() const { return hyper_; }

  std::span<double> item(ItemId i) { return {item_factors_.data() + i.index() * dim(), dim()}; }
  std::span<const double> item(ItemId i) const {
    return {item_factors_.data() + i.index() * dim(), dim()};
  }
  std::span<double> user(std::size_t u) { return {user_factors_.data() + (u - 1) * dim(), dim()}; }
  std::span<const double> user(std::size_t u) const {
    return {user_factors_.data() + (u - 1) * dim(), dim()};
  }

  bool all_finite() const {
    for (double v : item_factors_)
      if (!std::isfinite(v)) return false;
    for (double v : user_factors_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const MFModel&, const MFModel&) = default;

 private:
  std::size_t num_users_ = 0;
  std::size_t num_items_ = 0;
  BprHyper hyper_;
  std::vector<double> user_factors_;
  std::vector<double> item_factors_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t f = 0; f < a.size(); ++f) s += a[f] * b[f];
  return s;
}

struct BprTrainLog {
  std::vector<double> epoch_loss;  // mean -log sigmoid(x_uij) per epoch
};

/// SGD over uniformly sampled (user, positive, negative) triples; one epoch
/// draws |train| triples. Deterministic given hyper.seed.
inline MFModel train_bpr(const InteractionSet& train, const BprHyper& hyper,
                         BprTrainLog* log = nullptr) {
  hyper.validate();
  if (train.empty()) throw Error("BPR: empty training set");
  MFModel model(train.num_users, train.num_items, hyper);
  std::mt19937_64 rng(hyper.seed);
  {
    std::uniform_real_distribution<double> init(-0.5, 0.5);
    const double scale = 1.0 / static_cast<double>(hyper.dim);
    for (std::size_t u = 1; u <= train.num_users; ++u)
      for (double& v : model.user(u)) v = init(rng) * scale;
    for (std::size_t i = 0; i < train.num_items; ++i)
      for (double& v : model.item(ItemId::from_index(i))) v = init(rng) * scale;
  }

  auto positives = train.items_by_user();
  for (auto& p : positives) std::sort(p.begin(), p.end());
  auto is_positive = [&](std::uint32_t u, ItemId j) {
    const auto& p = positives[u - 1];
    return std::binary_search(p.begin(), p.end(), j);
  };

  const std::size_t d = hyper.dim;
  const double lr = hyper.learning_rate, reg = hyper.regularization;
  std::uniform_int_distribution<std::size_t> pick_row(0, train.rows.size() - 1);
  std::uniform_int_distribution<std::uint32_t> pick_item(1, static_cast<std::uint32_t>(train.num_items));

  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    double loss = 0.0;
    std::size_t steps = 0;
    for (std::size_t s = 0; s < train.rows.size(); ++s) {
      const auto& row = train.rows[pick_row(rng)];
      if (positives[row.user - 1].size() >= train.num_items) continue;
      ItemId neg(pick_item(rng));
      while (is_positive(row.user, neg)) neg = ItemId(pick_item(rng));

      auto wu = model.user(row.user);
      auto hi = model.item(row.item);
      auto hj = model.item(neg);
      double x = 0.0;
      for (std::size_t f = 0; f < d; ++f) x += wu[f] * (hi[f] - hj[f]);
      // -log sigmoid(x), computed without overflow
      loss += x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
      ++steps;
      const double g = 1.0 / (1.0 + std::exp(x));
      for (std::size_t f = 0; f < d; ++f) {
        const double uf = wu[f], itf = hi[f], jf = hj[f];
        wu[f] += lr * (g * (itf - jf) - reg * uf);
        hi[f] += lr * (g * uf - reg * itf);
        hj[f] += lr * (-g * uf - reg * jf);
      }
    }
    const double mean = steps ? loss / static_cast<double>(steps) : 0.0;
    if (!std::isfinite(mean) || !model.all_finite())
      throw Error("BPR diverged at epoch " + std::to_string(epoch + 1));
    if (log) log->epoch_loss.push_back(mean);
  }
  return model;
}

/// <v_i, v_j> for every j (including i itself).
inline std::vector<double> item_scores(const MFModel& model, ItemId i) {
  if (i.value < 1 || i.value > model.num_items()) throw Error("item out of catalog");
  std::vector<double> s(model.num_items());
  auto vi = model.item(i);
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = dot(vi, model.item(ItemId::from_index(j)));
  return s;
}

inline RecList item_topk(const MFModel& model, ItemId i, std::size_t k) {
  auto s = item_scores(model, i);
  return rank_top_k(s, i, k);
}

class BprProvider final : public RecommenderModel {
 public:
  BprProvider(std::shared_ptr<const MFModel> model, std::size_t k)
      : model_(std::move(model)), k_(k) {
    if (k_ >= model_->num_items()) throw Error("K must be smaller than the number of items");
  }

  std::size_t num_items() const override { return model_->num_items(); }
  std::size_t list_length() const override { return k_; }
  RecList topk(ItemId i) const override { return item_topk(*model_, i, k_); }
  std::vector<double> scores(ItemId i) const override { return item_scores(*model_, i); }

  const MFModel& model() const { return *model_; }

 private:
  std::shared_ptr<const MFModel> model_;
  std::size_t k_;
};

// Snapshot: text header with hyperparameters and sizes, then one row per
// item and per user. Values are printed with 17 significant digits so a
// reload is bit-identical.

inline void save_model(std::ostream& os, const MFModel& m) {
  const auto& h = m.hyper();
  auto old = os.precision(17);
  os << "reccycle-mf 1\n"
     << "dim " << h.dim << '\n'
     << "learning_rate " << h.learning_rate << '\n'
     << "regularization " << h.regularization << '\n'
     << "epochs " << h.epochs << '\n'
     << "seed " << h.seed << '\n'
     << "users " << m.num_users() << '\n'
     << "items " << m.num_items() << '\n';
  for (std::size_t i = 0; i < m.num_items(); ++i) {
    os << "item " << (i + 1);
    for (double v : m.item(ItemId::from_index(i))) os << ' ' << v;
    os << '\n';
  }
  for (std::size_t u = 1; u <= m.num_users(); ++u) {
    os << "user " << u;
    for (double v : m.user(u)) os << ' ' << v;
    os << '\n';
  }
  os.precision(old);
}

inline MFModel load_model(std::istream& is) {
  auto expect = [&](const std::string& key) {
    std::string k;
    if (!(is >> k) || k != key) throw Error("model snapshot: expected '" + key + "'");
  };
  expect("reccycle-mf");
  int version = 0;
  if (!(is >> version) || version != 1) throw Error("model snapshot: unsupported version");
  BprHyper h;
  std::size_t users = 0, items = 0;
  expect("dim");
  is >> h.dim;
  expect("learning_rate");
  is >> h.learning_rate;
  expect("regularization");
  is >> h.regularization;
  expect("epochs");
  is >> h.epochs;
  expect("seed");
  is >> h.seed;
  expect("users");
  is >> users;
  expect("items");
  is >> items;
  if (!is) throw Error("model snapshot: malformed header");
  MFModel m(users, items, h);
  for (std::size_t i = 1; i <= items; ++i) {
    expect("item");
    std::size_t id = 0;
    is >> id;
    if (id != i) throw Error("model snapshot: item rows out of order");
    for (double& v : m.item(ItemId(static_cast<std::uint32_t>(i)))) is >> v;
  }
  for (std::size_t u = 1; u <= users; ++u) {
    expect("user");
    std::size_t id = 0;
    is >> id;
    if (id != u) throw Error("model snapshot: user rows out of order");
    for (double& v : m.user(u)) is >> v;
  }
  if (!is) throw Error("model snapshot: truncated factor data");
  return m;
}

inline void save_model(const std::string& path, const MFModel& m) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  save_model(os, m);
}

inline MFModel load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path + "'");
  return load_model(is);
}

}  // namespace reccycle
