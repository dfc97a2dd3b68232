#include "irx/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "irx/error.hpp"

namespace irx {

double rbo(std::span<const std::string> a, std::span<const std::string> b,
           double p) {
  if (a.empty() || b.empty()) throw InvalidArgument("rbo: empty list");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("rbo: p must lie in (0,1)");
  const std::size_t k = std::min(a.size(), b.size());
  std::unordered_set<std::string_view> seen_a, seen_b;
  std::size_t overlap = 0;
  double sum = 0.0;
  double weight = 1.0;  // p^(d-1)
  double agreement = 0.0;
  for (std::size_t d = 1; d <= k; ++d) {
    const std::string_view x = a[d - 1];
    const std::string_view y = b[d - 1];
    if (x == y) {
      ++overlap;
    } else {
      if (seen_b.contains(x)) ++overlap;
      if (seen_a.contains(y)) ++overlap;
    }
    seen_a.insert(x);
    seen_b.insert(y);
    agreement = static_cast<double>(overlap) / static_cast<double>(d);
    sum += weight * agreement;
    weight *= p;
  }
  // After the loop weight == p^k.
  return (1.0 - p) * sum + agreement * weight;
}

namespace {

// Ranks (0-based, by position in `list`) of the items shared with `other`,
// in the order they appear in `a`.
struct SharedRanks {
  std::vector<std::size_t> in_a;
  std::vector<std::size_t> in_b;
};

SharedRanks shared_ranks(std::span<const std::string> a,
                         std::span<const std::string> b) {
  std::unordered_map<std::string_view, std::size_t> pos_b;
  for (std::size_t i = 0; i < b.size(); ++i) pos_b.emplace(b[i], i);
  std::vector<std::pair<std::size_t, std::size_t>> shared;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (auto it = pos_b.find(a[i]); it != pos_b.end())
      shared.emplace_back(i, it->second);
  if (shared.size() < 2)
    throw InvalidArgument("undefined correlation: fewer than 2 shared items");
  // Induced ranks: a-order is already ascending; compress b positions.
  std::vector<std::size_t> b_order(shared.size());
  for (std::size_t i = 0; i < shared.size(); ++i) b_order[i] = i;
  std::sort(b_order.begin(), b_order.end(), [&](std::size_t x, std::size_t y) {
    return shared[x].second < shared[y].second;
  });
  SharedRanks r;
  r.in_a.resize(shared.size());
  r.in_b.resize(shared.size());
  for (std::size_t i = 0; i < shared.size(); ++i) r.in_a[i] = i;
  for (std::size_t rank = 0; rank < b_order.size(); ++rank)
    r.in_b[b_order[rank]] = rank;
  return r;
}

}  // namespace

double kendall_tau(std::span<const std::string> a,
                   std::span<const std::string> b) {
  const SharedRanks r = shared_ranks(a, b);
  const std::size_t n = r.in_a.size();
  long long balance = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = (r.in_a[i] < r.in_a[j]) == (r.in_b[i] < r.in_b[j]);
      balance += same ? 1 : -1;
    }
  return static_cast<double>(balance) /
         (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double spearman_rho(std::span<const std::string> a,
                    std::span<const std::string> b) {
  const SharedRanks r = shared_ranks(a, b);
  const double n = static_cast<double>(r.in_a.size());
  double d2 = 0.0;
  for (std::size_t i = 0; i < r.in_a.size(); ++i) {
    const double d = static_cast<double>(r.in_a[i]) - static_cast<double>(r.in_b[i]);
    d2 += d * d;
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double jaccard_at_k(std::span<const std::string> a,
                    std::span<const std::string> b, std::size_t k) {
  if (k < 1) throw InvalidArgument("jaccard: k must be >= 1");
  const std::set<std::string> sa(a.begin(), a.begin() + std::min(k, a.size()));
  const std::set<std::string> sb(b.begin(), b.begin() + std::min(k, b.size()));
  std::size_t inter = 0;
  for (const auto& x : sa) inter += sb.count(x);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

RankSimilarityReport compare_lists(std::string_view measure,
                                   std::span<const std::string> a,
                                   std::span<const std::string> b, double p,
                                   std::size_t k) {
  RankSimilarityReport r;
  r.measure = std::string(measure);
  r.depth = std::min(a.size(), b.size());
  if (measure == "rbo") {
    r.value = rbo(a, b, p);
    r.p = p;
  } else if (measure == "tau") {
    r.value = kendall_tau(a, b);
  } else if (measure == "rho") {
    r.value = spearman_rho(a, b);
  } else if (measure == "jaccard") {
    r.value = jaccard_at_k(a, b, k);
    r.depth = k;
  } else {
    throw NotFound("unknown measure '" + std::string(measure) +
                   "' (valid: rbo, tau, rho, jaccard)");
  }
  return r;
}

GroundTruthTerms lmjm_ground_truth(const PositionalIndex& index,
                                   const Query& query, const RankedList& list,
                                   std::size_t top_n, double lambda,
                                   std::size_t n_terms) {
  if (top_n < 1 || list.size() < top_n)
    throw InvalidArgument("lmjm_ground_truth: need 1 <= top_n <= |list|");
  if (n_terms < 1) throw InvalidArgument("lmjm_ground_truth: n_terms must be >= 1");
  const LanguageModelRanker jm(JelinekMercer{lambda});
  const auto q_terms = query.weighted_terms();

  std::vector<const TermBag*> bags;
  std::vector<double> log_scores;
  for (std::size_t i = 0; i < top_n; ++i) {
    bags.push_back(&index.bag(list.entries[i].docid));
    log_scores.push_back(jm.score(index, q_terms, *bags.back()));
  }
  // Shifting every log score by the maximum keeps exp() in range without
  // changing the normalised weights.
  const double shift = *std::max_element(log_scores.begin(), log_scores.end());
  std::vector<double> doc_weight;
  for (double s : log_scores) doc_weight.push_back(std::exp(s - shift));

  std::vector<std::pair<std::string, double>> weights;
  weights.reserve(index.vocabulary_size());
  for (const auto& [term, entry] : index.terms()) {
    double w = 0.0;
    for (std::size_t i = 0; i < bags.size(); ++i)
      w += jm.probability(index, term, bags[i]->tf(term), bags[i]->length()) *
           doc_weight[i];
    weights.emplace_back(term, w);
  }
  std::sort(weights.begin(), weights.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  if (weights.size() > n_terms) weights.resize(n_terms);
  double total = 0.0;
  for (const auto& [t, w] : weights) total += w;
  if (!(total > 0.0)) throw InvalidArgument("lmjm_ground_truth: all weights are zero");

  GroundTruthTerms truth;
  for (const auto& [t, w] : weights) truth.weights[t] = w / total;
  return truth;
}

double pointwise_correctness(const ExplanationVector& expl,
                             const GroundTruthTerms& truth) {
  if (expl.empty() || truth.weights.empty())
    throw InvalidArgument("correctness: empty explanation or ground truth");
  std::map<std::string, std::pair<double, double>> joined;
  for (const auto& e : expl.entries) joined[e.term].first = e.weight;
  for (const auto& [t, w] : truth.weights) joined[t].second = w;

  const double n = static_cast<double>(joined.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [t, xy] : joined) {
    mx += xy.first;
    my += xy.second;
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& [t, xy] : joined) {
    const double dx = xy.first - mx;
    const double dy = xy.second - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw InvalidArgument("correctness: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double pointwise_consistency(std::span<const ExplanationVector> expls,
                             std::size_t m) {
  if (expls.size() < 2) throw InvalidArgument("consistency needs >= 2 explanations");
  std::vector<std::vector<std::string>> tops;
  for (const auto& e : expls) {
    if (e.empty()) throw InvalidArgument("consistency: empty explanation");
    tops.push_back(e.terms());
  }
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < tops.size(); ++i)
    for (std::size_t j = i + 1; j < tops.size(); ++j) {
      total += jaccard_at_k(tops[i], tops[j], m);
      ++pairs;
    }
  return total / static_cast<double>(pairs);
}

}  // namespace irx
