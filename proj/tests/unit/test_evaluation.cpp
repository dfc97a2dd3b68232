#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "irx/error.hpp"
#include "irx/evaluation.hpp"
#include "metric_oracles.hpp"

using namespace irx;
using Strings = std::vector<std::string>;

TEST(Rbo, WorkedExamples) {
  EXPECT_NEAR(rbo(Strings{"a", "b"}, Strings{"b", "a"}, 0.9), 0.9, 1e-12);
  EXPECT_NEAR(rbo(Strings{"a", "b", "c"}, Strings{"a", "b", "c"}, 0.9), 1.0, 1e-12);
  EXPECT_EQ(rbo(Strings{"a", "b"}, Strings{"c", "d"}, 0.9), 0.0);
  EXPECT_THROW(rbo(Strings{}, Strings{"a"}, 0.9), InvalidArgument);
  EXPECT_THROW(rbo(Strings{"a"}, Strings{"a"}, 1.0), InvalidArgument);
}

TEST(Rbo, MatchesDepthSumOracleAndIsSymmetric) {
  std::mt19937_64 gen(99);
  for (int i = 0; i < 1000; ++i) {
    const auto a = irx::testing::random_list(gen, 8, 10);
    const auto b = irx::testing::random_list(gen, 8, 10);
    for (double p : {0.5, 0.9}) {
      const double v = rbo(a, b, p);
      EXPECT_NEAR(v, irx::testing::rbo_oracle(a, b, p), 1e-9);
      EXPECT_EQ(v, rbo(b, a, p));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0 + 1e-12);
    }
  }
}

TEST(Rbo, HandValueWithLateAgreement) {
  // A = 1, 1/2, 2/3, 1 at depths 1..4.
  const Strings a = {"x", "a", "b", "c"}, b = {"x", "c", "b", "a"};
  EXPECT_NEAR(rbo(a, b, 0.5), 5.0 / 6.0, 1e-12);
}

TEST(Correlation, WorkedExamples) {
  const Strings abc = {"a", "b", "c"}, acb = {"a", "c", "b"}, cba = {"c", "b", "a"};
  EXPECT_EQ(kendall_tau(abc, abc), 1.0);
  EXPECT_EQ(kendall_tau(abc, cba), -1.0);
  EXPECT_NEAR(kendall_tau(abc, acb), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(spearman_rho(abc, abc), 1.0);
  EXPECT_EQ(spearman_rho(abc, cba), -1.0);
  EXPECT_EQ(spearman_rho(abc, acb), 0.5);
  EXPECT_THROW(kendall_tau(Strings{"a", "b"}, Strings{"a", "c"}), InvalidArgument);
  EXPECT_THROW(spearman_rho(Strings{"a"}, Strings{"a"}), InvalidArgument);
}

TEST(Correlation, MatchesPairwiseOracleOnPermutations) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 2 + gen() % 9;
    Strings a;
    for (std::size_t k = 0; k < n; ++k) a.push_back("i" + std::to_string(k));
    Strings b = a;
    std::shuffle(b.begin(), b.end(), gen);
    EXPECT_NEAR(kendall_tau(a, b), irx::testing::kendall_oracle(a, b), 1e-12);
    EXPECT_NEAR(spearman_rho(a, b), irx::testing::spearman_oracle(a, b), 1e-12);
    EXPECT_EQ(kendall_tau(a, b), kendall_tau(b, a));
    EXPECT_EQ(spearman_rho(a, b), spearman_rho(b, a));
  }
}

TEST(Correlation, UsesIntersectionOnly) {
  const Strings a = {"a", "x", "b", "c"}, b = {"c", "b", "y", "a"};
  EXPECT_EQ(kendall_tau(a, b), -1.0);
  EXPECT_EQ(spearman_rho(a, b), -1.0);
}

TEST(Jaccard, Examples) {
  EXPECT_EQ(jaccard_at_k(Strings{"a", "b"}, Strings{"a", "b"}, 2), 1.0);
  EXPECT_EQ(jaccard_at_k(Strings{"a", "b"}, Strings{"c", "d"}, 2), 0.0);
  EXPECT_NEAR(jaccard_at_k(Strings{"a", "b", "z"}, Strings{"b", "c"}, 2), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(jaccard_at_k(Strings{"a"}, Strings{"a", "b"}, 5), 0.5);
  EXPECT_THROW(jaccard_at_k(Strings{"a"}, Strings{"a"}, 0), InvalidArgument);
}

TEST(CompareLists, DispatchesByName) {
  const Strings a = {"a", "b", "c"}, b = {"a", "c", "b"};
  EXPECT_EQ(compare_lists("rbo", a, b, 0.9, 10).value, rbo(a, b, 0.9));
  EXPECT_EQ(compare_lists("tau", a, b, 0.9, 10).value, kendall_tau(a, b));
  EXPECT_EQ(compare_lists("rho", a, b, 0.9, 10).value, spearman_rho(a, b));
  EXPECT_EQ(compare_lists("jaccard", a, b, 0.9, 2).value, jaccard_at_k(a, b, 2));
  EXPECT_THROW(compare_lists("ndcg", a, b, 0.9, 2), NotFound);
}

TEST(GroundTruth, SingleDocumentJmMixture) {
  const std::vector<Document> docs = {{"D1", "a b a"}, {"D2", "c"}};
  const auto index = build_index(docs, AnalyzerConfig::plain());
  const auto q = Query::parse(index, "q", "a");
  const RankedList list{"q", {{"D1", 1, 1.0}, {"D2", 2, 0.5}}, "t"};
  const auto truth = lmjm_ground_truth(index, q, list, 1, 0.5, 3);
  ASSERT_EQ(truth.weights.size(), 3u);
  // P_JM(t|D1) with |C| = 4: a .5*2/3+.5*2/4, b .5/3+.5/4, c .5/4; they sum to 1.
  EXPECT_NEAR(truth.weights.at("a"), 0.5 * 2 / 3 + 0.5 * 2 / 4, 1e-12);
  EXPECT_NEAR(truth.weights.at("b"), 0.5 / 3 + 0.5 / 4, 1e-12);
  EXPECT_NEAR(truth.weights.at("c"), 0.5 / 4, 1e-12);
  // c has the same cf as b but is absent from D1.
  EXPECT_LT(truth.weights.at("c"), truth.weights.at("b"));
  const auto one = lmjm_ground_truth(index, q, list, 1, 0.5, 1);
  ASSERT_EQ(one.weights.size(), 1u);
  EXPECT_NEAR(one.weights.at("a"), 1.0, 1e-12);
  EXPECT_THROW(lmjm_ground_truth(index, q, list, 3, 0.5, 3), InvalidArgument);
}

TEST(Correctness, PearsonOverTermUnion) {
  GroundTruthTerms truth{{{"a", 0.2}, {"b", 0.3}, {"c", 0.5}}};
  const auto scaled = ExplanationVector::from_unsorted({{"a", 0.4}, {"b", 0.6}, {"c", 1.0}});
  EXPECT_NEAR(pointwise_correctness(scaled, truth), 1.0, 1e-9);
  const auto negated = ExplanationVector::from_unsorted({{"a", -0.2}, {"b", -0.3}, {"c", -0.5}});
  EXPECT_NEAR(pointwise_correctness(negated, truth), -1.0, 1e-9);
  const auto hand = ExplanationVector::from_unsorted({{"a", 1.0}, {"b", 2.0}, {"c", 3.0}});
  EXPECT_NEAR(pointwise_correctness(hand, truth), 9.0 / std::sqrt(84.0), 1e-12);
  const auto flat = ExplanationVector::from_unsorted({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}});
  EXPECT_THROW(pointwise_correctness(flat, truth), InvalidArgument);
  EXPECT_THROW(pointwise_correctness(ExplanationVector{}, truth), InvalidArgument);
}

TEST(Consistency, MeanPairwiseJaccard) {
  const auto ab = ExplanationVector::from_unsorted({{"a", 2.0}, {"b", 1.0}});
  const auto ac = ExplanationVector::from_unsorted({{"a", 2.0}, {"c", 1.0}});
  const auto cd = ExplanationVector::from_unsorted({{"c", 2.0}, {"d", 1.0}});
  EXPECT_EQ(pointwise_consistency(std::vector{ab, ab, ab}, 2), 1.0);
  EXPECT_EQ(pointwise_consistency(std::vector{ab, cd}, 2), 0.0);
  EXPECT_NEAR(pointwise_consistency(std::vector{ab, ab, ac}, 2), (1.0 + 2.0 / 3.0) / 3.0,
              1e-15);
  EXPECT_THROW(pointwise_consistency(std::vector{ab}, 2), InvalidArgument);
  EXPECT_THROW(pointwise_consistency(std::vector{ab, ExplanationVector{}}, 2), InvalidArgument);
}
