// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "irx/kernels.hpp"
#include "irx/listwise.hpp"
#include "irx/perturbation.hpp"
#include "synthetic.hpp"

using namespace irx;

namespace {

const PositionalIndex& corpus() {
  static const auto index = testing::synthetic_index(2000, 500, 50, 300, 1);
  return index;
}

const std::vector<WeightedTerm>& query() {
  static const std::vector<WeightedTerm> q = {{"t01", 1.0}, {"t17", 1.0}, {"t99", 2.0}};
  return q;
}

const std::vector<TermBag>& bags() {
  static const auto b = [] {
    const TokenizedDocument doc{"d0", corpus().tokens("d0")};
    const auto batch = draw_samples(doc, corpus(), {SamplerKind::random, 0.3, 1, 2000, 0});
    std::vector<TermBag> out;
    for (const auto& s : batch.samples) out.emplace_back(s.surviving_tokens);
    return out;
  }();
  return b;
}

std::vector<std::uint32_t> all_docs() {
  std::vector<std::uint32_t> d(corpus().num_docs());
  for (std::uint32_t i = 0; i < d.size(); ++i) d[i] = i;
  return d;
}

template <bool Parallel>
void score_bags(benchmark::State& state) {
  const auto ranker = make_ranker("lmdir");
  const auto& b = bags();
  for (auto _ : state) {
    auto r = Parallel ? kernels::score_bags(corpus(), *ranker, query(), b)
                      : kernels::score_bags_serial(corpus(), *ranker, query(), b);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void score_documents(benchmark::State& state) {
  const auto ranker = make_ranker("bm25");
  const auto docs = all_docs();
  for (auto _ : state) {
    auto r = Parallel ? kernels::score_documents(corpus(), *ranker, query(), docs)
                      : kernels::score_documents_serial(corpus(), *ranker, query(), docs);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void pair_signs(benchmark::State& state) {
  std::vector<RankerPtr> rankers;
  for (const auto& n : simple_ranker_names()) rankers.push_back(make_ranker(n));
  std::vector<std::string> terms;
  for (std::size_t t = 0; t < 100; ++t) terms.push_back(testing::term_name(t));
  std::vector<kernels::DocPair> pairs;
  for (std::uint32_t i = 0; i + 1 < 400; i += 2) pairs.push_back({i, i + 1});
  for (auto _ : state) {
    auto r = Parallel ? kernels::pair_signs(corpus(), rankers, terms, pairs)
                      : kernels::pair_signs_serial(corpus(), rankers, terms, pairs);
    benchmark::DoNotOptimize(r);
  }
}

template <bool Parallel>
void fidelity_batch(benchmark::State& state) {
  const auto bm25 = make_ranker("bm25");
  const auto q = Query{"q", "t01", {"t01"}};
  std::vector<std::string> ids;
  for (std::uint32_t i = 0; i < 100; ++i) ids.push_back(corpus().docid(i));
  const auto list = rank(corpus(), *bm25, q, std::span<const std::string>(ids), 100);
  const FidelityOracle oracle(corpus(), *bm25, q, list, 0.9);
  auto fn = [&](std::size_t i) {
    const std::vector<std::string> t = {testing::term_name(i % 200)};
    return oracle(t);
  };
  for (auto _ : state) {
    auto r = Parallel ? kernels::map_indices(200, fn) : kernels::map_indices_serial(200, fn);
    benchmark::DoNotOptimize(r);
  }
}

}  // namespace

BENCHMARK(score_bags<false>)->Name("score_bags/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(score_bags<true>)->Name("score_bags/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(score_documents<false>)->Name("score_documents/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(score_documents<true>)->Name("score_documents/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(pair_signs<false>)->Name("pair_signs/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(pair_signs<true>)->Name("pair_signs/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(fidelity_batch<false>)->Name("fidelity_batch/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(fidelity_batch<true>)->Name("fidelity_batch/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
