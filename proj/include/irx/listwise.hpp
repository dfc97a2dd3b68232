#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "irx/rankers.hpp"
#include "irx/rng.hpp"
#include "irx/run_file.hpp"

namespace irx {

struct CandidateTerm {
  std::string term;
  double salience = 0.0;

  bool operator==(const CandidateTerm&) const = default;
};

/// Distinct terms of the top_k documents of `list`, salience
/// sum_D tf(t,D) * idf(t), sorted by salience descending then term, keeping
/// n_candidates.
std::vector<CandidateTerm> generate_candidates(const PositionalIndex& index,
                                               const RankedList& list,
                                               std::size_t top_k,
                                               std::size_t n_candidates);

enum class PairSampling { uniform, rank_gap_weighted, top_vs_rest };

const char* to_string(PairSampling s);
PairSampling parse_pair_sampling(std::string_view name);

struct PreferencePair {
  std::string upper;
  std::string lower;
  int rank_gap = 1;

  bool operator==(const PreferencePair&) const = default;
};

/// Draws min(count, available) distinct pairs (upper ranked above lower)
/// without replacement.
std::vector<PreferencePair> sample_pairs(const RankedList& list,
                                         PairSampling strategy,
                                         std::size_t count, Rng& rng);

/// Term x pair agreement of each simple ranker with the explained list.
class PreferenceMatrix {
 public:
  PreferenceMatrix() = default;
  PreferenceMatrix(std::vector<std::string> rankers,
                   std::vector<CandidateTerm> candidates,
                   std::vector<PreferencePair> pairs,
                   std::vector<std::int8_t> entries);

  const std::vector<std::string>& rankers() const { return rankers_; }
  const std::vector<CandidateTerm>& candidates() const { return candidates_; }
  const std::vector<PreferencePair>& pairs() const { return pairs_; }
  std::size_t num_terms() const { return candidates_.size(); }
  std::size_t num_pairs() const { return pairs_.size(); }

  int entry(std::size_t ranker, std::size_t term, std::size_t pair) const {
    return entries_[(ranker * num_terms() + term) * num_pairs() + pair];
  }
  /// Sign of the per-ranker sum.
  int consensus(std::size_t term, std::size_t pair) const;
  /// Single-ranker view; throws NotFound for unknown names.
  PreferenceMatrix restrict_to(std::string_view ranker) const;

  nlohmann::json to_json() const;
  static PreferenceMatrix from_json(const nlohmann::json& j);

  bool operator==(const PreferenceMatrix&) const = default;

 private:
  std::vector<std::string> rankers_;
  std::vector<CandidateTerm> candidates_;
  std::vector<PreferencePair> pairs_;
  std::vector<std::int8_t> entries_;  // [ranker][term][pair]
};

PreferenceMatrix build_preference_matrix(const PositionalIndex& index,
                                         std::span<const RankerPtr> rankers,
                                         std::vector<CandidateTerm> candidates,
                                         std::vector<PreferencePair> pairs);

struct ListwiseExplanation {
  std::string qid;
  std::string method;
  std::vector<std::string> terms;
  std::map<std::string, double> fidelity;
  std::size_t evaluations = 0;
  std::vector<std::string> diagnostics;
  std::vector<double> trace;  // objective after each accepted step

  nlohmann::json to_json() const;
  static ListwiseExplanation from_json(const nlohmann::json& j);
  bool operator==(const ListwiseExplanation&) const = default;
};

/// Number of pairs whose summed entries over `terms` is positive, on the
/// consensus layer (or the given ranker's layer).
std::size_t covered_pairs(const PreferenceMatrix& matrix,
                          std::span<const std::size_t> terms,
                          std::optional<std::size_t> ranker = std::nullopt);

/// Greedy max-coverage on a single-ranker matrix.
ListwiseExplanation intent_exs_explain(const PreferenceMatrix& matrix,
                                       std::size_t m_min, std::size_t m_max);
/// Greedy max-coverage on the consensus layer.
ListwiseExplanation multiplex_explain(const PreferenceMatrix& matrix,
                                      std::size_t m_min, std::size_t m_max);

/// Key used for RBO fidelity in ListwiseExplanation::fidelity, e.g. "rbo@0.9".
std::string rbo_key(double p);

/// Agreement between `target` and the simple ranker re-ranking target's
/// documents for query + expansion terms (unit weights).
class FidelityOracle {
 public:
  FidelityOracle(const PositionalIndex& index, const Ranker& simple_ranker,
                 const Query& query, const RankedList& target, double p);
  /// RBO_p(rank(SM, Q u terms, pool = docs(target)), target).
  double operator()(std::span<const std::string> terms) const;
  Query expanded_query(std::span<const std::string> terms) const;

 private:
  const PositionalIndex& index_;
  const Ranker& ranker_;
  Query query_;
  std::vector<std::string> target_ids_;
  double p_;
};

/// Candidates ordered by salience descending, then term.
std::vector<CandidateTerm> canonical_order(std::vector<CandidateTerm> candidates);

ListwiseExplanation greedy_explain(const PositionalIndex& index,
                                   const Ranker& simple_ranker,
                                   const Query& query, const RankedList& list,
                                   std::vector<CandidateTerm> candidates,
                                   std::size_t m_max, double p);

/// Best-first search over term sets. The empty expansion is evaluated as the
/// root without being charged to `eval_budget`; every other fidelity
/// computation costs one evaluation.
ListwiseExplanation bfs_explain(const PositionalIndex& index,
                                const Ranker& simple_ranker, const Query& query,
                                const RankedList& list,
                                std::vector<CandidateTerm> candidates,
                                std::size_t m_max, double p,
                                std::size_t eval_budget);

/// Plain-text grid of {-,0,+}. With `pair_filter`, lists every term's stance
/// on that pair for each ranker and the consensus.
std::string show_matrix(const PreferenceMatrix& matrix,
                        const std::optional<PreferencePair>& pair_filter = {});

struct ListwiseParams {
  std::size_t top_k = 10;
  std::size_t n_candidates = 100;
  std::size_t n_pairs = 50;
  PairSampling sampling = PairSampling::uniform;
  std::size_t m_min = 3;
  std::size_t m_max = 10;
  double p = 0.9;
  std::size_t eval_budget = 1000;
  std::uint64_t seed = 0;
  std::string simple_ranker = "bm25";
  std::vector<std::string> multiplex_rankers = {"bm25", "lmjm", "lmdir"};
  RankerParams ranker_params;

  void validate() const;
};

nlohmann::json params_to_json(const ListwiseParams& params);
void apply_params(ListwiseParams& params, const nlohmann::json& overrides);

class ListwiseExplainer {
 public:
  ListwiseExplainer(const PositionalIndex& index, ListwiseParams params);
  virtual ~ListwiseExplainer() = default;
  virtual std::string method() const = 0;
  virtual ListwiseExplanation explain(const Query& query,
                                      const RankedList& list) const = 0;
  const ListwiseParams& params() const { return params_; }

  std::vector<CandidateTerm> candidates(const RankedList& list) const;

 protected:
  const PositionalIndex& index_;
  ListwiseParams params_;
  RankerPtr simple_ranker_;
};

/// Preference-pair family: candidates, sampled pairs, matrix, coverage.
class PairCoverageExplainer : public ListwiseExplainer {
 public:
  using ListwiseExplainer::ListwiseExplainer;
  PreferenceMatrix matrix(const RankedList& list) const;
  ListwiseExplanation explain(const Query& query,
                              const RankedList& list) const override;

 protected:
  virtual std::vector<RankerPtr> matrix_rankers() const = 0;
  virtual ListwiseExplanation select(const PreferenceMatrix& matrix) const = 0;
};

class MultiplexExplainer final : public PairCoverageExplainer {
 public:
  using PairCoverageExplainer::PairCoverageExplainer;
  std::string method() const override { return "multiplex"; }

 protected:
  std::vector<RankerPtr> matrix_rankers() const override;
  ListwiseExplanation select(const PreferenceMatrix& matrix) const override;
};

class IntentExsExplainer final : public PairCoverageExplainer {
 public:
  using PairCoverageExplainer::PairCoverageExplainer;
  std::string method() const override { return "intent_exs"; }

 protected:
  std::vector<RankerPtr> matrix_rankers() const override;
  ListwiseExplanation select(const PreferenceMatrix& matrix) const override;
};

class GreedyExplainer final : public ListwiseExplainer {
 public:
  using ListwiseExplainer::ListwiseExplainer;
  std::string method() const override { return "greedy"; }
  ListwiseExplanation explain(const Query& query,
                              const RankedList& list) const override;
};

class BfsExplainer final : public ListwiseExplainer {
 public:
  using ListwiseExplainer::ListwiseExplainer;
  std::string method() const override { return "bfs"; }
  ListwiseExplanation explain(const Query& query,
                              const RankedList& list) const override;
};

const std::vector<std::string>& listwise_method_names();
/// "multiplex", "intent_exs", "greedy", "bfs"; throws NotFound otherwise.
std::unique_ptr<ListwiseExplainer> make_listwise_explainer(
    std::string_view method, const PositionalIndex& index, ListwiseParams params);

struct BatchExplanations {
  std::map<std::string, ListwiseExplanation> explanations;  // by qid
  std::map<std::string, std::string> errors;                // by qid
};

/// Explains every topic against its ranked list. Failures are recorded per
/// qid; the other queries still run.
BatchExplanations explain_all(const ListwiseExplainer& explainer,
                              const PositionalIndex& index,
                              std::span<const Topic> topics, const RunFile& runs);

}  // namespace irx
