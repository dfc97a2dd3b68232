#include <gtest/gtest.h>

#include <cmath>

#include "irx/error.hpp"
#include "irx/perturbation.hpp"
#include "synthetic.hpp"

using namespace irx;

namespace {

TokenizedDocument make_doc(std::size_t n) {
  TokenizedDocument doc{"d", {}};
  for (std::size_t i = 0; i < n; ++i) doc.tokens.push_back(irx::testing::term_name(i % 7));
  return doc;
}

void check_invariants(const TokenizedDocument& doc, const SampleBatch& batch) {
  for (const auto& s : batch.samples) {
    ASSERT_EQ(s.kept_mask.size(), doc.tokens.size());
    ASSERT_EQ(s.feature_vector.size(), batch.features.size());
    std::vector<std::string> kept;
    std::size_t n_kept = 0;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i)
      if (s.kept_mask[i]) {
        kept.push_back(doc.tokens[i]);
        ++n_kept;
      }
    EXPECT_EQ(s.surviving_tokens, kept);
    for (std::size_t f = 0; f < batch.features.size(); ++f) {
      const bool present =
          std::find(kept.begin(), kept.end(), batch.features[f]) != kept.end();
      EXPECT_EQ(s.feature_vector[f] != 0, present);
    }
    EXPECT_DOUBLE_EQ(s.distance, 1.0 - static_cast<double>(n_kept) /
                                           static_cast<double>(doc.tokens.size()));
  }
}

double mean_distance(const SampleBatch& b) {
  double sum = 0.0;
  for (const auto& s : b.samples) sum += s.distance;
  return sum / static_cast<double>(b.samples.size());
}

}  // namespace

TEST(Rng, KnownSequenceIsStable) {
  Rng a(42), b(42), c(43);
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  Rng z(0);
  EXPECT_NE(z.next(), 0u);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(7), 7u);
  }
}

TEST(RandomSampler, RateExtremes) {
  const auto doc = make_doc(20);
  Rng rng(1);
  SamplerConfig keep{SamplerKind::random, 0.0, 1, 20, 0};
  for (const auto& s : random_sampler(doc, keep, rng).samples) {
    EXPECT_EQ(s.surviving_tokens, doc.tokens);
    EXPECT_EQ(s.distance, 0.0);
  }
  SamplerConfig drop{SamplerKind::random, 1.0, 1, 20, 0};
  for (const auto& s : random_sampler(doc, drop, rng).samples) {
    EXPECT_TRUE(s.surviving_tokens.empty());
    EXPECT_EQ(s.distance, 1.0);
  }
}

TEST(RandomSampler, DeterministicAndConsistent) {
  const auto doc = make_doc(30);
  SamplerConfig c{SamplerKind::random, 0.4, 1, 50, 9};
  Rng r1(9), r2(9);
  const auto a = random_sampler(doc, c, r1);
  const auto b = random_sampler(doc, c, r2);
  ASSERT_EQ(a.samples.size(), 50u);
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    EXPECT_EQ(a.samples[i].kept_mask, b.samples[i].kept_mask);
  check_invariants(doc, a);
}

TEST(RandomSampler, MeanDistanceApproachesRate) {
  const auto doc = make_doc(40);
  for (double rate : {0.1, 0.3, 0.7}) {
    SamplerConfig c{SamplerKind::random, rate, 1, 10000, 3};
    Rng rng(3);
    EXPECT_NEAR(mean_distance(random_sampler(doc, c, rng)), rate, 0.02);
  }
}

TEST(RandomSampler, Errors) {
  TokenizedDocument empty{"e", {}};
  Rng rng(0);
  SamplerConfig c;
  EXPECT_THROW(random_sampler(empty, c, rng), InvalidArgument);
  c.rate = 1.5;
  EXPECT_THROW(random_sampler(make_doc(3), c, rng), InvalidArgument);
  c.rate = 0.2;
  c.kind = SamplerKind::masking;
  EXPECT_THROW(random_sampler(make_doc(3), c, rng), InvalidArgument);
}

TEST(MaskingSampler, WholeDocumentWindow) {
  const auto doc = make_doc(8);
  SamplerConfig c{SamplerKind::masking, 0.5, 8, 10, 0};
  Rng rng(2);
  for (const auto& s : masking_sampler(doc, c, rng).samples)
    EXPECT_TRUE(s.surviving_tokens.empty() || s.distance == 0.0);
  c.rate = 1.0;
  for (const auto& s : masking_sampler(doc, c, rng).samples)
    EXPECT_TRUE(s.surviving_tokens.empty());
}

TEST(MaskingSampler, RemovedPositionsAreWindows) {
  const auto doc = make_doc(40);
  SamplerConfig c{SamplerKind::masking, 0.3, 4, 300, 0};
  Rng rng(5);
  const auto batch = masking_sampler(doc, c, rng);
  check_invariants(doc, batch);
  for (const auto& s : batch.samples) {
    // Every maximal removed run, except possibly at the document edges, is
    // at least one window long.
    std::size_t i = 0;
    while (i < s.kept_mask.size()) {
      if (s.kept_mask[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < s.kept_mask.size() && !s.kept_mask[j]) ++j;
      EXPECT_GE(j - i, c.chunk);
      i = j;
    }
  }
}

TEST(MaskingSampler, RateZeroIsIdentityAndChunkTooLarge) {
  const auto doc = make_doc(5);
  Rng rng(1);
  SamplerConfig c{SamplerKind::masking, 0.0, 2, 10, 0};
  for (const auto& s : masking_sampler(doc, c, rng).samples) EXPECT_EQ(s.distance, 0.0);
  c.chunk = 6;
  EXPECT_THROW(masking_sampler(doc, c, rng), InvalidArgument);
}

TEST(MaskingSampler, ChunkOneMatchesRandomRemovalCount) {
  const auto doc = make_doc(25);
  for (double rate : {0.2, 0.5}) {
    SamplerConfig m{SamplerKind::masking, rate, 1, 10000, 0};
    SamplerConfig r{SamplerKind::random, rate, 1, 10000, 0};
    Rng a(7), b(8);
    const double dm = mean_distance(masking_sampler(doc, m, a));
    const double dr = mean_distance(random_sampler(doc, r, b));
    EXPECT_NEAR(dm, dr, 0.02 * rate + 1e-12) << rate;
  }
}

TEST(TfidfSampler, HeavyTermRemovedMostOften) {
  // "rare" occurs in one document only, the others everywhere but one.
  std::vector<Document> docs = {{"d0", "rare common common common filler filler"}};
  for (int i = 1; i < 30; ++i)
    docs.push_back({"d" + std::to_string(i), "common filler other" + std::to_string(i)});
  docs.push_back({"dx", "unrelated"});
  const auto index = build_index(docs, AnalyzerConfig::plain());
  const TokenizedDocument doc{"d0", index.tokens("d0")};
  SamplerConfig c{SamplerKind::tfidf, 0.3, 1, 10000, 0};
  Rng rng(4);
  const auto batch = tfidf_sampler(doc, index, c, rng);
  EXPECT_FALSE(batch.uniform_fallback);
  check_invariants(doc, batch);
  std::vector<double> removed(doc.tokens.size(), 0.0);
  for (const auto& s : batch.samples)
    for (std::size_t i = 0; i < removed.size(); ++i) removed[i] += s.kept_mask[i] ? 0 : 1;
  // Position 0 is "rare", 1-3 "common", 4-5 "filler".
  EXPECT_GT(removed[0], removed[1]);
  EXPECT_GT(removed[1], 0.0);
  EXPECT_GT(removed[0], removed[4]);
  // Capping "rare" at probability 1 loses mass, so the mean falls below rate.
  EXPECT_LE(mean_distance(batch), 0.3 + 0.01);
}

TEST(TfidfSampler, UniformWeightsMatchRandomMarginals) {
  // Every term of d0 has the same df and tf, hence equal weights.
  std::vector<Document> docs = {{"d0", "a b c d"}, {"d1", "a b c d x"}, {"d2", "y"}};
  const auto index = build_index(docs, AnalyzerConfig::plain());
  const TokenizedDocument doc{"d0", index.tokens("d0")};
  SamplerConfig c{SamplerKind::tfidf, 0.4, 1, 10000, 0};
  Rng rng(6);
  const auto batch = tfidf_sampler(doc, index, c, rng);
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    double removed = 0.0;
    for (const auto& s : batch.samples) removed += s.kept_mask[i] ? 0.0 : 1.0;
    EXPECT_NEAR(removed / 10000.0, 0.4, 0.02);
  }
}

TEST(TfidfSampler, DegenerateCorpusFallsBack) {
  const std::vector<Document> docs = {{"only", "a b a c"}};
  const auto index = build_index(docs, AnalyzerConfig::plain());
  const TokenizedDocument doc{"only", index.tokens("only")};
  SamplerConfig c{SamplerKind::tfidf, 0.5, 1, 4000, 0};
  Rng rng(1);
  const auto batch = tfidf_sampler(doc, index, c, rng);
  EXPECT_TRUE(batch.uniform_fallback);
  EXPECT_NEAR(mean_distance(batch), 0.5, 0.03);
  c.rate = 0.0;
  for (const auto& s : tfidf_sampler(doc, index, c, rng).samples) EXPECT_EQ(s.distance, 0.0);
}

TEST(DrawSamples, SeedDeterminesOutput) {
  const auto index = irx::testing::synthetic_index(10, 12, 10, 20, 2);
  const TokenizedDocument doc{"d3", index.tokens("d3")};
  for (auto kind : {SamplerKind::random, SamplerKind::masking, SamplerKind::tfidf}) {
    SamplerConfig c{kind, 0.3, 2, 40, 123};
    const auto a = draw_samples(doc, index, c);
    const auto b = draw_samples(doc, index, c);
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      EXPECT_EQ(a.samples[i].kept_mask, b.samples[i].kept_mask);
    c.seed = 124;
    const auto d = draw_samples(doc, index, c);
    bool differs = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
      differs |= a.samples[i].kept_mask != d.samples[i].kept_mask;
    EXPECT_TRUE(differs) << to_string(kind);
  }
  EXPECT_THROW(parse_sampler_kind("lime"), NotFound);
}
