#pragma once

// Generated corpora and a transparent linear scorer shared by the unit and
// acceptance tests.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "irx/index.hpp"
#include "irx/rankers.hpp"

namespace irx::testing {

/// Vocabulary "t00", "t01", ... drawn with Zipf-like frequencies.
inline std::string term_name(std::size_t i) {
  std::string s = std::to_string(i);
  if (s.size() < 2) s.insert(0, 2 - s.size(), '0');
  return "t" + s;
}

inline std::vector<Document> synthetic_corpus(std::size_t n_docs, std::size_t vocab,
                                              std::size_t min_len, std::size_t max_len,
                                              std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> w;
  for (std::size_t i = 0; i < vocab; ++i) w.push_back(1.0 / static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::vector<Document> docs;
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::string text;
    const std::size_t n = len(gen);
    for (std::size_t k = 0; k < n; ++k) {
      if (k) text += ' ';
      text += term_name(pick(gen));
    }
    docs.push_back({"d" + std::to_string(d), text});
  }
  return docs;
}

inline PositionalIndex synthetic_index(std::size_t n_docs, std::size_t vocab,
                                       std::size_t min_len, std::size_t max_len,
                                       std::uint64_t seed) {
  const auto docs = synthetic_corpus(n_docs, vocab, min_len, max_len, seed);
  return build_index(docs, AnalyzerConfig::plain());
}

/// score(D) = sum_t c_t * tf(t, D), independent of the query.
class LinearRanker final : public Ranker {
 public:
  explicit LinearRanker(std::map<std::string, double> coef) : coef_(std::move(coef)) {}
  std::string name() const override { return "linear"; }
  double score(const PositionalIndex&, std::span<const WeightedTerm>,
               const TermBag& doc) const override {
    double s = 0.0;
    for (const auto& [t, c] : coef_) s += c * doc.tf(t);
    return s;
  }
  using Ranker::score;

 private:
  std::map<std::string, double> coef_;
};

}  // namespace irx::testing
