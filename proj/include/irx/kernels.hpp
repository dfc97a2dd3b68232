#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (used by the
// library) and a `_serial` reference with identical per-element arithmetic;
// results must be bit-identical, which the kernel tests check.

#include <cstdint>
#include <span>
#include <vector>

#include "irx/rankers.hpp"

namespace irx::kernels {

struct DocPair {
  std::uint32_t upper = 0;
  std::uint32_t lower = 0;
};

/// Scores of each bag under the same weighted query.
std::vector<double> score_bags(const PositionalIndex& index,
                               const Ranker& ranker,
                               std::span<const WeightedTerm> query,
                               std::span<const TermBag> bags);
std::vector<double> score_bags_serial(const PositionalIndex& index,
                                      const Ranker& ranker,
                                      std::span<const WeightedTerm> query,
                                      std::span<const TermBag> bags);

/// Scores of indexed documents (by internal number).
std::vector<double> score_documents(const PositionalIndex& index,
                                    const Ranker& ranker,
                                    std::span<const WeightedTerm> query,
                                    std::span<const std::uint32_t> docs);
std::vector<double> score_documents_serial(const PositionalIndex& index,
                                           const Ranker& ranker,
                                           std::span<const WeightedTerm> query,
                                           std::span<const std::uint32_t> docs);

/// sign(score(term, upper) - score(term, lower)) for every (ranker, term,
/// pair), laid out [ranker][term][pair]. A term absent from both documents
/// yields 0 regardless of the ranker.
std::vector<std::int8_t> pair_signs(const PositionalIndex& index,
                                    std::span<const RankerPtr> rankers,
                                    std::span<const std::string> terms,
                                    std::span<const DocPair> pairs);
std::vector<std::int8_t> pair_signs_serial(const PositionalIndex& index,
                                           std::span<const RankerPtr> rankers,
                                           std::span<const std::string> terms,
                                           std::span<const DocPair> pairs);

/// out[i] = fn(i) for i in [0, n). `fn` must be safe to call concurrently.
template <class Fn>
std::vector<double> map_indices(std::size_t n, Fn&& fn) {
  std::vector<double> out(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  return out;
}

template <class Fn>
std::vector<double> map_indices_serial(std::size_t n, Fn&& fn) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
  return out;
}

/// Number of OpenMP worker threads (1 when built without OpenMP).
int max_threads();

}  // namespace irx::kernels
