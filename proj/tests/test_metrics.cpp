#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace reccycle;
using reccycle::testing::to_items;
using reccycle::testing::to_relevance;

TEST(NdcgTest, HandValues) {
  auto rec = to_items({5, 1, 7});
  EXPECT_DOUBLE_EQ(ndcg_at_k(rec, to_relevance({5}), 3), 1.0);
  EXPECT_NEAR(ndcg_at_k(rec, to_relevance({1}), 3), 1.0 / std::log2(3.0), 1e-12);
  // Two relevant, hits at ranks 1 and 3.
  const double dcg = 1.0 + 0.5;
  const double idcg = 1.0 + 1.0 / std::log2(3.0);
  EXPECT_NEAR(ndcg_at_k(rec, to_relevance({5, 7}), 3), dcg / idcg, 1e-12);
  EXPECT_DOUBLE_EQ(ndcg_at_k(rec, to_relevance({}), 3), 0.0);
  EXPECT_DOUBLE_EQ(ndcg_at_k(rec, to_relevance({9}), 3), 0.0);
}

TEST(RecallTest, HandValues) {
  auto rec = to_items({5, 1, 7});
  EXPECT_DOUBLE_EQ(recall_at_k(rec, to_relevance({5, 9}), 3), 0.5);
  EXPECT_DOUBLE_EQ(recall_at_k(rec, to_relevance({7}), 2), 0.0);
  EXPECT_DOUBLE_EQ(recall_at_k(rec, to_relevance({}), 3), 0.0);
}

TEST(MetricsTest, MatchBruteForce) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 5000; ++t) {
    auto c = reccycle::testing::random_metric_case(rng);
    auto rec = to_items(c.rec);
    auto rel = to_relevance(c.relevant);
    EXPECT_NEAR(ndcg_at_k(rec, rel, c.k), reccycle::testing::reference_ndcg(c.rec, c.relevant, c.k), 1e-12);
    EXPECT_NEAR(recall_at_k(rec, rel, c.k), reccycle::testing::reference_recall(c.rec, c.relevant, c.k), 1e-12);
    const double n = ndcg_at_k(rec, rel, c.k);
    EXPECT_GE(n, 0.0);
    EXPECT_LE(n, 1.0 + 1e-12);
  }
}

TEST(AccuracyTest, LabelMatchShare) {
  LabelTable labels{{1, 0, 1, 1}};
  EXPECT_DOUBLE_EQ(label_match_accuracy(to_items({2, 3, 4}), labels, ItemId(1)), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(label_match_accuracy(to_items({}), labels, ItemId(1)), 0.0);
}

TEST(GroupCountsTest, AbsentGroupsAreZero) {
  AttributeTable attrs({GroupId(0), GroupId(0), GroupId(2)}, {"a", "b", "c"});
  EXPECT_EQ(group_counts(RecList{ItemId(1), ItemId(2)}, attrs), (std::vector<std::size_t>{2, 0, 0}));
}

TEST(SummaryStatsTest, MeanAndMedian) {
  std::vector<double> odd{3, 1, 2}, even{4, 1, 3, 2};
  EXPECT_DOUBLE_EQ(mean(odd), 2.0);
  EXPECT_DOUBLE_EQ(median(odd), 2.0);
  EXPECT_DOUBLE_EQ(median(even), 2.5);
  EXPECT_DOUBLE_EQ(median({}), 0.0);
  EXPECT_DOUBLE_EQ(mean(std::vector<double>{}), 0.0);
}
