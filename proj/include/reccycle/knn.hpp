#pragma once

// Nearest-neighbour provider over standardized demographic features
// (the Adult dataset, where items are people).

#include <cmath>
#include <cstddef>
#include <vector>

#include "reccycle/core.hpp"
#include "reccycle/datasets.hpp"
#include "reccycle/provider.hpp"

namespace reccycle {

class KnnProviderModel {
 public:
  /// Standardizes every column to zero mean and unit variance. Constant
  /// columns keep a unit divisor.
  explicit KnnProviderModel(const FeatureTable& raw)
      : rows_(raw.rows), dims_(raw.dims), mean_(raw.dims, 0.0), scale_(raw.dims, 1.0) {
    if (rows_ < 2) throw Error("kNN provider needs at least two items");
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < dims_; ++c) {
        double v = raw.values[r * dims_ + c];
        if (!std::isfinite(v)) throw Error("kNN provider: non-finite feature");
        mean_[c] += v;
      }
    for (auto& m : mean_) m /= static_cast<double>(rows_);
    std::vector<double> var(dims_, 0.0);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < dims_; ++c) {
        double d = raw.values[r * dims_ + c] - mean_[c];
        var[c] += d * d;
      }
    for (std::size_t c = 0; c < dims_; ++c) {
      double sd = std::sqrt(var[c] / static_cast<double>(rows_));
      if (sd > 0.0) scale_[c] = sd;
    }
    features_.resize(rows_ * dims_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < dims_; ++c)
        features_[r * dims_ + c] = (raw.values[r * dims_ + c] - mean_[c]) / scale_[c];
  }

  std::size_t num_items() const { return rows_; }
  std::size_t dims() const { return dims_; }
  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

  double squared_distance(ItemId a, ItemId b) const {
    const double* x = features_.data() + a.index() * dims_;
    const double* y = features_.data() + b.index() * dims_;
    double s = 0.0;
    for (std::size_t c = 0; c < dims_; ++c) s += (x[c] - y[c]) * (x[c] - y[c]);
    return s;
  }

 private:
  std::size_t rows_;
  std::size_t dims_;
  std::vector<double> mean_;
  std::vector<double> scale_;
  std::vector<double> features_;
};

/// Negated squared Euclidean distance to i, so larger is more similar.
inline std::vector<double> knn_scores(const KnnProviderModel& model, ItemId i) {
  if (i.value < 1 || i.value > model.num_items()) throw Error("item out of catalog");
  std::vector<double> s(model.num_items());
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = -model.squared_distance(i, ItemId::from_index(j));
  return s;
}

inline RecList adult_topk(const KnnProviderModel& model, ItemId i, std::size_t k) {
  auto s = knn_scores(model, i);
  return rank_top_k(s, i, k);
}

class KnnProvider final : public RecommenderModel {
 public:
  KnnProvider(KnnProviderModel model, std::size_t k) : model_(std::move(model)), k_(k) {
    if (k_ >= model_.num_items()) throw Error("K must be smaller than the number of items");
  }

  std::size_t num_items() const override { return model_.num_items(); }
  std::size_t list_length() const override { return k_; }
  RecList topk(ItemId i) const override { return adult_topk(model_, i, k_); }
  std::vector<double> scores(ItemId i) const override { return knn_scores(model_, i); }

 private:
  KnnProviderModel model_;
  std::size_t k_;
};

}  // namespace reccycle
