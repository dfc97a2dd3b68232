#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "irx/perturbation.hpp"
#include "irx/rankers.hpp"
#include "irx/surrogate.hpp"

namespace irx {

struct TermWeight {
  std::string term;
  double weight = 0.0;

  bool operator==(const TermWeight&) const = default;
};

/// Signed term contributions ordered by |weight| descending, ties broken
/// lexicographically.
struct ExplanationVector {
  std::vector<TermWeight> entries;

  /// Sorts into canonical order and keeps at most `limit` entries.
  static ExplanationVector from_unsorted(std::vector<TermWeight> entries,
                                         std::size_t limit = SIZE_MAX);
  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  std::vector<std::string> terms() const;

  bool operator==(const ExplanationVector&) const = default;
};

enum class ExsVariant { topk_binary, score_ratio, rank_based };

const char* to_string(ExsVariant v);
ExsVariant parse_exs_variant(std::string_view name);

struct PointwiseParams {
  SamplerConfig sampler;
  double kernel_width = 0.25;
  double ridge_lambda = 1.0;
  std::size_t n_terms = 10;
  ExsVariant exs_variant = ExsVariant::topk_binary;
  std::size_t exs_k = 10;

  void validate() const;
};

/// Perturbations of one document, their black-box scores and kernel weights.
/// Both pointwise explainers fit their surrogate on this.
struct LocalSamples {
  SampleBatch batch;
  Eigen::MatrixXd design;       // samples x features, 0/1 presence
  std::vector<double> scores;   // ranker score of each perturbed document
  std::vector<double> weights;  // exp(-distance^2 / width^2)
};

LocalSamples sample_locally(const PositionalIndex& index, const Ranker& ranker,
                            const Query& query, std::string_view docid,
                            const PointwiseParams& params);

/// Maps a perturbed score to an EXS surrogate target in [0,1]. `base_list`
/// must hold at least k entries.
double exs_target(double score, const RankedList& base_list, ExsVariant variant,
                  std::size_t k);

ExplanationVector lirme_explain(const PositionalIndex& index,
                                const Ranker& ranker, const Query& query,
                                std::string_view docid,
                                const PointwiseParams& params);

ExplanationVector exs_explain(const PositionalIndex& index,
                              const Ranker& ranker, const Query& query,
                              std::string_view docid,
                              const PointwiseParams& params,
                              const RankedList& base_list);

class PointwiseExplainer {
 public:
  PointwiseExplainer(const PositionalIndex& index, RankerPtr ranker,
                     PointwiseParams params);
  virtual ~PointwiseExplainer() = default;
  virtual std::string method() const = 0;
  virtual ExplanationVector explain(const Query& query,
                                    std::string_view docid) const = 0;
  const PointwiseParams& params() const { return params_; }

 protected:
  const PositionalIndex& index_;
  RankerPtr ranker_;
  PointwiseParams params_;
};

class LirmeExplainer final : public PointwiseExplainer {
 public:
  using PointwiseExplainer::PointwiseExplainer;
  std::string method() const override { return "lirme"; }
  ExplanationVector explain(const Query& query,
                            std::string_view docid) const override;
};

/// Uses the ranker's own top-k list for the query as the EXS reference.
class ExsExplainer final : public PointwiseExplainer {
 public:
  using PointwiseExplainer::PointwiseExplainer;
  std::string method() const override { return "exs"; }
  ExplanationVector explain(const Query& query,
                            std::string_view docid) const override;
};

struct PointwiseExplanation {
  std::string qid;
  std::string docid;
  std::string method;
  nlohmann::json params = nlohmann::json::object();
  ExplanationVector terms;

  bool operator==(const PointwiseExplanation&) const = default;
};

nlohmann::json params_to_json(const PointwiseParams& params);
/// Applies recognised keys of a flat or nested parameter object.
void apply_params(PointwiseParams& params, const nlohmann::json& overrides);

nlohmann::json to_json(const PointwiseExplanation& e);
PointwiseExplanation pointwise_from_json(const nlohmann::json& j);

enum class RenderFormat { text, json };

/// Text: one row per term with sign, magnitude and a '#' bar scaled so the
/// largest |weight| spans 40 columns. JSON: the terms array.
std::string visualize_terms(const ExplanationVector& expl, RenderFormat format);
/// Inverse of the JSON rendering; empty text yields an empty vector.
ExplanationVector parse_terms_json(std::string_view text);

}  // namespace irx
