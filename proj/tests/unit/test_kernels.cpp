#include <gtest/gtest.h>

#include <cmath>

#include "irx/kernels.hpp"
#include "irx/perturbation.hpp"
#include "synthetic.hpp"

using namespace irx;

namespace {

const PositionalIndex& corpus() {
  static const auto index = irx::testing::synthetic_index(200, 60, 20, 120, 11);
  return index;
}

std::vector<WeightedTerm> query() { return {{"t01", 1.0}, {"t07", 2.0}, {"t30", 1.0}}; }

}  // namespace

TEST(Kernels, ScoreDocumentsMatchesSerial) {
  std::vector<std::uint32_t> docs;
  for (std::uint32_t d = 0; d < corpus().num_docs(); ++d) docs.push_back(d);
  for (const auto& name : simple_ranker_names()) {
    const auto r = make_ranker(name);
    const auto par = kernels::score_documents(corpus(), *r, query(), docs);
    const auto ser = kernels::score_documents_serial(corpus(), *r, query(), docs);
    ASSERT_EQ(par.size(), ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) EXPECT_EQ(par[i], ser[i]) << name << i;
  }
}

TEST(Kernels, ScoreBagsMatchesSerial) {
  const TokenizedDocument doc{"d5", corpus().tokens("d5")};
  const auto batch = draw_samples(doc, corpus(), {SamplerKind::random, 0.3, 1, 500, 2});
  std::vector<TermBag> bags;
  for (const auto& s : batch.samples) bags.emplace_back(s.surviving_tokens);
  for (const auto& name : simple_ranker_names()) {
    const auto r = make_ranker(name);
    EXPECT_EQ(kernels::score_bags(corpus(), *r, query(), bags),
              kernels::score_bags_serial(corpus(), *r, query(), bags))
        << name;
  }
}

TEST(Kernels, PairSignsMatchSerial) {
  std::vector<RankerPtr> rankers;
  for (const auto& name : simple_ranker_names()) rankers.push_back(make_ranker(name));
  std::vector<std::string> terms;
  for (std::size_t t = 0; t < 70; ++t) terms.push_back(irx::testing::term_name(t));
  std::vector<kernels::DocPair> pairs;
  for (std::uint32_t i = 0; i + 1 < 120; i += 2) pairs.push_back({i, i + 1});
  const auto par = kernels::pair_signs(corpus(), rankers, terms, pairs);
  EXPECT_EQ(par, kernels::pair_signs_serial(corpus(), rankers, terms, pairs));
  EXPECT_EQ(par.size(), rankers.size() * terms.size() * pairs.size());
}

TEST(Kernels, MapIndicesMatchesSerial) {
  auto fn = [](std::size_t i) { return std::sin(static_cast<double>(i)) * 1e3; };
  EXPECT_EQ(kernels::map_indices(10007, fn), kernels::map_indices_serial(10007, fn));
  EXPECT_TRUE(kernels::map_indices(0, fn).empty());
  EXPECT_GE(kernels::max_threads(), 1);
}
