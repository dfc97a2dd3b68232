#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "irx/index.hpp"

namespace irx {

struct WeightedTerm {
  std::string term;
  double weight = 1.0;

  bool operator==(const WeightedTerm&) const = default;
};

struct Query {
  std::string qid;
  std::string text;
  std::vector<std::string> terms;  // analyzed

  static Query parse(const PositionalIndex& index, std::string qid,
                     std::string text);

  /// Distinct terms in first-occurrence order, weight = occurrence count.
  std::vector<WeightedTerm> weighted_terms() const;
  /// Distinct terms in first-occurrence order.
  std::vector<std::string> distinct_terms() const;
};

struct RankedEntry {
  std::string docid;
  int rank = 0;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

/// Ranks 1..n without gaps, scores non-increasing, docids unique.
struct RankedList {
  std::string qid;
  std::vector<RankedEntry> entries;
  std::string tag = "irx";

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<std::string> docids() const;
  /// Throws InvalidArgument describing the first violated invariant.
  void validate() const;

  bool operator==(const RankedList&) const = default;
};

/// Black-box scoring function. Implementations must be pure and thread-safe:
/// the score may depend only on the index statistics, query and document.
class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual std::string name() const = 0;
  virtual double score(const PositionalIndex& index,
                       std::span<const WeightedTerm> query,
                       const TermBag& doc) const = 0;

  double score(const PositionalIndex& index, const Query& query,
               std::string_view docid) const;
};

using RankerPtr = std::shared_ptr<const Ranker>;

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

struct JelinekMercer {
  double lambda = 0.1;
};

struct Dirichlet {
  double mu = 1000.0;
};

using Smoothing = std::variant<JelinekMercer, Dirichlet>;

struct RankerParams {
  Bm25Params bm25;
  JelinekMercer lmjm;
  Dirichlet lmdir;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5)); always positive.
double bm25_idf(const PositionalIndex& index, std::string_view term);

class Bm25Ranker final : public Ranker {
 public:
  explicit Bm25Ranker(Bm25Params params = {});
  std::string name() const override { return "bm25"; }
  double score(const PositionalIndex& index,
               std::span<const WeightedTerm> query,
               const TermBag& doc) const override;
  using Ranker::score;
  double term_score(const PositionalIndex& index, std::string_view term,
                    int tf, int doc_length) const;

 private:
  Bm25Params params_;
};

/// Query-likelihood model; score is sum_t w_t * log P(t|D). Terms that never
/// occur in the collection are skipped.
class LanguageModelRanker final : public Ranker {
 public:
  explicit LanguageModelRanker(Smoothing smoothing);
  std::string name() const override;
  double score(const PositionalIndex& index,
               std::span<const WeightedTerm> query,
               const TermBag& doc) const override;
  using Ranker::score;
  /// Smoothed P(t|D); 0 when t is absent from the collection.
  double probability(const PositionalIndex& index, std::string_view term,
                     int tf, int doc_length) const;

 private:
  Smoothing smoothing_;
};

double bm25_score(const PositionalIndex& index, const Query& query,
                  std::string_view docid, const Bm25Params& params = {});
double lm_score(const PositionalIndex& index, const Query& query,
                std::string_view docid, const Smoothing& smoothing);

/// "bm25", "lmjm" or "lmdir"; throws NotFound otherwise.
RankerPtr make_ranker(std::string_view name, const RankerParams& params = {});
const std::vector<std::string>& simple_ranker_names();

/// Scores Q plus a set of weighted terms the caller cannot observe through
/// the Ranker interface. Stands in for a trained black-box model.
RankerPtr hidden_intent_ranker(RankerPtr base,
                               std::vector<WeightedTerm> hidden_terms);

/// Scores `pool` (or, when absent, every document containing a query term),
/// sorts by score descending with ties by ascending docid and truncates to
/// `depth`. Unknown pool docids raise NotFound.
RankedList rank(const PositionalIndex& index, const Ranker& ranker,
                const Query& query,
                std::optional<std::span<const std::string>> pool,
                std::size_t depth);

}  // namespace irx
