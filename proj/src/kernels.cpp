#include "irx/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace irx::kernels {

namespace {

std::int8_t sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

std::int8_t pair_sign(const PositionalIndex& index, const Ranker& ranker,
                      const std::string& term, const DocPair& pair) {
  const TermBag& upper = index.bag(pair.upper);
  const TermBag& lower = index.bag(pair.lower);
  if (upper.tf(term) == 0 && lower.tf(term) == 0) return 0;
  const WeightedTerm q[] = {{term, 1.0}};
  return sign_of(ranker.score(index, q, upper) - ranker.score(index, q, lower));
}

}  // namespace

std::vector<double> score_bags(const PositionalIndex& index,
                               const Ranker& ranker,
                               std::span<const WeightedTerm> query,
                               std::span<const TermBag> bags) {
  std::vector<double> out(bags.size());
  const auto n = static_cast<std::int64_t>(bags.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = ranker.score(index, query, bags[i]);
  return out;
}

std::vector<double> score_bags_serial(const PositionalIndex& index,
                                      const Ranker& ranker,
                                      std::span<const WeightedTerm> query,
                                      std::span<const TermBag> bags) {
  std::vector<double> out(bags.size());
  for (std::size_t i = 0; i < bags.size(); ++i)
    out[i] = ranker.score(index, query, bags[i]);
  return out;
}

std::vector<double> score_documents(const PositionalIndex& index,
                                    const Ranker& ranker,
                                    std::span<const WeightedTerm> query,
                                    std::span<const std::uint32_t> docs) {
  std::vector<double> out(docs.size());
  const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    out[i] = ranker.score(index, query, index.bag(docs[i]));
  return out;
}

std::vector<double> score_documents_serial(
    const PositionalIndex& index, const Ranker& ranker,
    std::span<const WeightedTerm> query, std::span<const std::uint32_t> docs) {
  std::vector<double> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    out[i] = ranker.score(index, query, index.bag(docs[i]));
  return out;
}

std::vector<std::int8_t> pair_signs(const PositionalIndex& index,
                                    std::span<const RankerPtr> rankers,
                                    std::span<const std::string> terms,
                                    std::span<const DocPair> pairs) {
  const std::size_t n_terms = terms.size();
  const std::size_t n_pairs = pairs.size();
  std::vector<std::int8_t> out(rankers.size() * n_terms * n_pairs);
  const auto cells = static_cast<std::int64_t>(rankers.size() * n_terms);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const std::size_t r = static_cast<std::size_t>(cell) / n_terms;
    const std::size_t t = static_cast<std::size_t>(cell) % n_terms;
    std::int8_t* row = out.data() + static_cast<std::size_t>(cell) * n_pairs;
    for (std::size_t p = 0; p < n_pairs; ++p)
      row[p] = pair_sign(index, *rankers[r], terms[t], pairs[p]);
  }
  return out;
}

std::vector<std::int8_t> pair_signs_serial(const PositionalIndex& index,
                                           std::span<const RankerPtr> rankers,
                                           std::span<const std::string> terms,
                                           std::span<const DocPair> pairs) {
  std::vector<std::int8_t> out;
  out.reserve(rankers.size() * terms.size() * pairs.size());
  for (const auto& ranker : rankers)
    for (const auto& term : terms)
      for (const auto& pair : pairs)
        out.push_back(pair_sign(index, *ranker, term, pair));
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace irx::kernels
