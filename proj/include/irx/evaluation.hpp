#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "irx/pointwise.hpp"
#include "irx/rankers.hpp"

namespace irx {

/// Extrapolated rank-biased overlap at depth k = min(|a|, |b|):
///   (1-p) * sum_{d=1..k} p^(d-1) A_d + A_k p^k,  A_d = |a[:d] & b[:d]| / d.
/// Lists must hold distinct items; empty lists raise InvalidArgument.
double rbo(std::span<const std::string> a, std::span<const std::string> b,
           double p);

/// Correlations over the items both lists contain, ranked by their induced
/// order in each list. Fewer than two shared items raise InvalidArgument.
double kendall_tau(std::span<const std::string> a,
                   std::span<const std::string> b);
double spearman_rho(std::span<const std::string> a,
                    std::span<const std::string> b);

/// |top_k(a) & top_k(b)| / |top_k(a) | top_k(b)|; 1 when both are empty.
double jaccard_at_k(std::span<const std::string> a,
                    std::span<const std::string> b, std::size_t k);

struct RankSimilarityReport {
  std::string measure;
  double value = 0.0;
  double p = 0.0;          // rbo only
  std::size_t depth = 0;
};

/// Measures "rbo", "tau", "rho", "jaccard"; unknown names raise NotFound.
RankSimilarityReport compare_lists(std::string_view measure,
                                   std::span<const std::string> a,
                                   std::span<const std::string> b, double p,
                                   std::size_t k);

/// Term weights that sum to one.
struct GroundTruthTerms {
  std::map<std::string, double> weights;
};

/// Relevance-model expansion under Jelinek-Mercer smoothing:
/// w(t) proportional to sum_{D in top_n} P_JM(t|D) exp(score_JM(Q, D)),
/// over the collection vocabulary; the n_terms heaviest are kept and
/// renormalised.
GroundTruthTerms lmjm_ground_truth(const PositionalIndex& index,
                                   const Query& query, const RankedList& list,
                                   std::size_t top_n, double lambda,
                                   std::size_t n_terms);

/// Pearson correlation of explanation weights against ground-truth weights
/// over the union of their terms (missing entries count as 0).
double pointwise_correctness(const ExplanationVector& expl,
                             const GroundTruthTerms& truth);

/// Mean pairwise Jaccard similarity of the top-m term sets.
double pointwise_consistency(std::span<const ExplanationVector> expls,
                             std::size_t m);

}  // namespace irx
