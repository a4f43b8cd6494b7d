#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "viewsel/similarity.hpp"

namespace viewsel {
namespace {

using testing::Rows;

const Rows kQ1Q2 = {{1, 1, 1, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 1, 1, 1, 1}};

std::vector<std::size_t> ids(std::initializer_list<std::size_t> list) { return list; }

TEST(PairMeasuresTest, DisjointSupport) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_EQ(pair_measures(ctx, 0, 1), (Measures{0, 8}));
}

TEST(PairMeasuresTest, SelfPair) {
  auto ctx = ClusteringContext::from_rows({{1, 0, 1, 1, 0}});
  EXPECT_EQ(pair_measures(ctx, 0, 0), (Measures{3, 0}));
}

TEST(PairMeasuresTest, SharedAbsenceCountsForNothing) {
  auto ctx = ClusteringContext::from_rows({{0, 0}, {0, 0}});
  EXPECT_EQ(pair_measures(ctx, 0, 1), (Measures{0, 0}));
}

TEST(PairMeasuresTest, OutOfRange) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_THROW(pair_measures(ctx, 0, 2), std::out_of_range);
}

TEST(InterSetMeasuresTest, Examples) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_EQ(inter_set_measures(ctx, ids({0}), ids({1})), (Measures{0, 8}));

  auto ones = ClusteringContext::from_rows(Rows(5, std::vector<int>(4, 1)));
  EXPECT_EQ(inter_set_measures(ones, ids({0, 1}), ids({2, 3, 4})), (Measures{24, 0}));

  auto zeros = ClusteringContext::from_rows(Rows(4, std::vector<int>(3, 0)));
  EXPECT_EQ(inter_set_measures(zeros, ids({0, 1}), ids({2, 3})), (Measures{0, 0}));
}

TEST(InterSetMeasuresTest, RejectsOverlapAndEmpty) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_THROW(inter_set_measures(ctx, ids({0, 1}), ids({1})), std::invalid_argument);
  EXPECT_THROW(inter_set_measures(ctx, ids({}), ids({1})), std::invalid_argument);
}

TEST(IntraSetMeasuresTest, Examples) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_EQ(intra_set_measures(ctx, ids({0})), (Measures{0, 0}));
  EXPECT_EQ(intra_set_measures(ctx, ids({0, 1})), (Measures{0, 8}));

  auto same = ClusteringContext::from_rows(Rows(3, {1, 0, 1, 1}));
  EXPECT_EQ(intra_set_measures(same, ids({0, 1, 2})), (Measures{9, 0}));
}

TEST(QualityTest, GroupingIdenticalRowsLowersQ) {
  auto ctx = ClusteringContext::from_rows({{1, 1}, {1, 1}});
  EXPECT_EQ(quality(ctx, Partition::single_cluster(2)), 0u);
  EXPECT_EQ(quality(ctx, Partition::singletons(2)), 2u);
}

TEST(QualityTest, DisjointSingletonsScoreZero) {
  auto ctx = ClusteringContext::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_EQ(quality(ctx, Partition::singletons(3)), 0u);
}

TEST(QualityTest, OneClusterOfQ1Q2) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_EQ(quality(ctx, Partition::single_cluster(2)), 8u);
}

TEST(QualityTest, InvalidPartitions) {
  auto ctx = ClusteringContext::from_rows(kQ1Q2);
  EXPECT_THROW(quality(ctx, Partition{{{0}}}), std::invalid_argument);
  EXPECT_THROW(quality(ctx, Partition{{{0, 1}, {1}}}), std::invalid_argument);
  EXPECT_THROW(quality(ctx, Partition{{{0, 1}, {}}}), std::invalid_argument);
  EXPECT_THROW(quality(ctx, Partition{{{0, 2}, {1}}}), std::invalid_argument);
}

TEST(PartitionTest, Canonicalize) {
  Partition p{{{3, 1}, {2, 0}}};
  p.canonicalize();
  EXPECT_EQ(p, (Partition{{{0, 2}, {1, 3}}}));
}

// Properties.

TEST(SimilarityPropertyTest, SymmetryAndBounds) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 7;
    const std::size_t p = 1 + rng() % 70;
    Rows rows = testing::random_rows(rng, n, p);
    auto ctx = ClusteringContext::from_rows(rows);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) {
        Measures m = pair_measures(ctx, k, l);
        EXPECT_EQ(m, pair_measures(ctx, l, k));
        EXPECT_LE(m.sim + m.dissim, p);
        bool any_both_zero = false;
        for (std::size_t j = 0; j < p; ++j) any_both_zero |= rows[k][j] == 0 && rows[l][j] == 0;
        EXPECT_EQ(m.sim + m.dissim == p, !any_both_zero);
      }
    }
    std::vector<std::size_t> a{0};
    std::vector<std::size_t> b{1};
    for (std::size_t i = 2; i < n; ++i) (i % 2 ? a : b).push_back(i);
    EXPECT_EQ(inter_set_measures(ctx, a, b), inter_set_measures(ctx, b, a));
    Measures inter = inter_set_measures(ctx, a, b);
    EXPECT_LE(inter.sim, a.size() * b.size() * p);
    Measures intra = intra_set_measures(ctx, a);
    EXPECT_LE(intra.dissim, a.size() * (a.size() - 1) * p / 2);
  }
}

TEST(SimilarityPropertyTest, ColumnPermutationInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const std::size_t p = 1 + rng() % 10;
    Rows rows = testing::random_rows(rng, n, p);
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Rows permuted = rows;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) permuted[i][j] = rows[i][perm[j]];
    }
    auto c1 = ClusteringContext::from_rows(rows);
    auto c2 = ClusteringContext::from_rows(permuted);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = 0; l < n; ++l) EXPECT_EQ(pair_measures(c1, k, l), pair_measures(c2, k, l));
    }
    EXPECT_EQ(quality(c1, Partition::single_cluster(n)), quality(c2, Partition::single_cluster(n)));
    EXPECT_EQ(quality(c1, Partition::singletons(n)), quality(c2, Partition::singletons(n)));
  }
}

TEST(SimilarityPropertyTest, WideRowsMatchDefinition) {
  // Crosses several 64-bit words.
  std::mt19937_64 rng(5);
  Rows rows = testing::random_rows(rng, 5, 200, 0.5);
  auto ctx = ClusteringContext::from_rows(rows);
  for (std::size_t k = 0; k < 5; ++k) {
    for (std::size_t l = 0; l < 5; ++l) {
      auto expected = testing::definitional_pair(rows, k, l);
      EXPECT_EQ(pair_measures(ctx, k, l), (Measures{expected.sim, expected.dissim}));
    }
  }
}

}  // namespace
}  // namespace viewsel
