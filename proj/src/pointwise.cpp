#include "irx/pointwise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "irx/error.hpp"
#include "irx/kernels.hpp"

namespace irx {

ExplanationVector ExplanationVector::from_unsorted(
    std::vector<TermWeight> entries, std::size_t limit) {
  std::sort(entries.begin(), entries.end(),
            [](const TermWeight& a, const TermWeight& b) {
              const double ma = std::abs(a.weight);
              const double mb = std::abs(b.weight);
              if (ma != mb) return ma > mb;
              return a.term < b.term;
            });
  if (entries.size() > limit) entries.resize(limit);
  return {std::move(entries)};
}

std::vector<std::string> ExplanationVector::terms() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.term);
  return out;
}

const char* to_string(ExsVariant v) {
  switch (v) {
    case ExsVariant::topk_binary:
      return "topk_binary";
    case ExsVariant::score_ratio:
      return "score_ratio";
    case ExsVariant::rank_based:
      return "rank_based";
  }
  return "?";
}

ExsVariant parse_exs_variant(std::string_view name) {
  if (name == "topk_binary") return ExsVariant::topk_binary;
  if (name == "score_ratio") return ExsVariant::score_ratio;
  if (name == "rank_based") return ExsVariant::rank_based;
  throw NotFound("unknown EXS variant '" + std::string(name) +
                 "' (valid: topk_binary, score_ratio, rank_based)");
}

void PointwiseParams::validate() const {
  if (!(kernel_width > 0.0)) throw InvalidArgument("kernel_width must be > 0");
  if (!(ridge_lambda >= 0.0)) throw InvalidArgument("ridge lambda must be >= 0");
  if (n_terms < 1) throw InvalidArgument("n_terms must be >= 1");
  if (exs_k < 1) throw InvalidArgument("exs_k must be >= 1");
}

LocalSamples sample_locally(const PositionalIndex& index, const Ranker& ranker,
                            const Query& query, std::string_view docid,
                            const PointwiseParams& params) {
  params.validate();
  const TokenizedDocument doc{std::string(docid), index.tokens(docid)};
  if (distinct_terms(doc.tokens).size() < 2)
    throw InvalidArgument("explanation undefined: document " + doc.docid +
                          " has fewer than 2 distinct terms");

  LocalSamples local;
  local.batch = draw_samples(doc, index, params.sampler);
  const auto& samples = local.batch.samples;
  const auto n_features = static_cast<Eigen::Index>(local.batch.features.size());

  local.design.resize(static_cast<Eigen::Index>(samples.size()), n_features);
  std::vector<TermBag> bags;
  bags.reserve(samples.size());
  local.weights.reserve(samples.size());
  const double width2 = params.kernel_width * params.kernel_width;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    for (Eigen::Index f = 0; f < n_features; ++f)
      local.design(static_cast<Eigen::Index>(i), f) = s.feature_vector[f];
    bags.emplace_back(s.surviving_tokens);
    local.weights.push_back(std::exp(-(s.distance * s.distance) / width2));
  }
  const auto terms = query.weighted_terms();
  local.scores = kernels::score_bags(index, ranker, terms, bags);
  return local;
}

namespace {

ExplanationVector explain_from_targets(const LocalSamples& local,
                                       std::span<const double> targets,
                                       const PointwiseParams& params) {
  const SurrogateFit fit = fit_weighted_ridge(local.design, targets,
                                              local.weights, params.ridge_lambda);
  std::vector<TermWeight> entries;
  entries.reserve(fit.weights.size());
  for (std::size_t f = 0; f < fit.weights.size(); ++f)
    entries.push_back({local.batch.features[f], fit.weights[f]});
  return ExplanationVector::from_unsorted(std::move(entries), params.n_terms);
}

}  // namespace

ExplanationVector lirme_explain(const PositionalIndex& index,
                                const Ranker& ranker, const Query& query,
                                std::string_view docid,
                                const PointwiseParams& params) {
  const LocalSamples local = sample_locally(index, ranker, query, docid, params);
  return explain_from_targets(local, local.scores, params);
}

double exs_target(double score, const RankedList& base_list, ExsVariant variant,
                  std::size_t k) {
  if (k < 1 || base_list.size() < k)
    throw InvalidArgument("EXS needs a base list with at least k=" +
                          std::to_string(k) + " entries, got " +
                          std::to_string(base_list.size()));
  const double top = base_list.entries.front().score;
  switch (variant) {
    case ExsVariant::topk_binary:
      return score > base_list.entries[k - 1].score ? 1.0 : 0.0;
    case ExsVariant::score_ratio: {
      if (top == 0.0) return score >= 0.0 ? 1.0 : 0.0;
      // |top| keeps the target increasing in `score` for log-probability
      // rankers whose scores are negative.
      return std::clamp(1.0 - (top - score) / std::abs(top), 0.0, 1.0);
    }
    case ExsVariant::rank_based: {
      std::size_t above = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (base_list.entries[i].score > score) ++above;
      return std::clamp(1.0 - static_cast<double>(above) / static_cast<double>(k),
                        0.0, 1.0);
    }
  }
  return 0.0;
}

ExplanationVector exs_explain(const PositionalIndex& index,
                              const Ranker& ranker, const Query& query,
                              std::string_view docid,
                              const PointwiseParams& params,
                              const RankedList& base_list) {
  if (base_list.size() < params.exs_k)
    throw InvalidArgument("EXS base list shorter than exs_k");
  const LocalSamples local = sample_locally(index, ranker, query, docid, params);
  std::vector<double> targets;
  targets.reserve(local.scores.size());
  for (double s : local.scores)
    targets.push_back(exs_target(s, base_list, params.exs_variant, params.exs_k));
  return explain_from_targets(local, targets, params);
}

PointwiseExplainer::PointwiseExplainer(const PositionalIndex& index,
                                       RankerPtr ranker, PointwiseParams params)
    : index_(index), ranker_(std::move(ranker)), params_(params) {
  if (!ranker_) throw InvalidArgument("pointwise explainer needs a ranker");
  params_.validate();
}

ExplanationVector LirmeExplainer::explain(const Query& query,
                                          std::string_view docid) const {
  return lirme_explain(index_, *ranker_, query, docid, params_);
}

ExplanationVector ExsExplainer::explain(const Query& query,
                                        std::string_view docid) const {
  // Every document is a candidate so the reference list reaches exs_k even
  // when few documents contain a query term.
  std::vector<std::string> pool;
  pool.reserve(index_.num_docs());
  for (std::uint32_t d = 0; d < index_.num_docs(); ++d) pool.push_back(index_.docid(d));
  const RankedList base = rank(index_, *ranker_, query,
                               std::span<const std::string>(pool), params_.exs_k);
  return exs_explain(index_, *ranker_, query, docid, params_, base);
}

nlohmann::json params_to_json(const PointwiseParams& p) {
  return {
      {"sampler", to_string(p.sampler.kind)},
      {"rate", p.sampler.rate},
      {"chunk", p.sampler.chunk},
      {"n_samples", p.sampler.n_samples},
      {"seed", p.sampler.seed},
      {"kernel_width", p.kernel_width},
      {"ridge_lambda", p.ridge_lambda},
      {"n_terms", p.n_terms},
      {"exs_variant", to_string(p.exs_variant)},
      {"exs_k", p.exs_k},
  };
}

void apply_params(PointwiseParams& p, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("parameters must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "sampler" || key == "sampling_method") {
      if (value.is_object())
        apply_params(p, value);
      else
        p.sampler.kind = parse_sampler_kind(value.get<std::string>());
    } else if (key == "kind") {
      p.sampler.kind = parse_sampler_kind(value.get<std::string>());
    } else if (key == "rate") {
      p.sampler.rate = value.get<double>();
    } else if (key == "chunk") {
      p.sampler.chunk = value.get<std::size_t>();
    } else if (key == "n_samples") {
      p.sampler.n_samples = value.get<std::size_t>();
    } else if (key == "seed") {
      p.sampler.seed = value.get<std::uint64_t>();
    } else if (key == "kernel_width" || key == "kernel") {
      p.kernel_width = value.get<double>();
    } else if (key == "ridge_lambda") {
      p.ridge_lambda = value.get<double>();
    } else if (key == "n_terms" || key == "top_terms") {
      p.n_terms = value.get<std::size_t>();
    } else if (key == "exs_variant") {
      p.exs_variant = parse_exs_variant(value.get<std::string>());
    } else if (key == "exs_k") {
      p.exs_k = value.get<std::size_t>();
    } else {
      throw InvalidArgument("unknown pointwise parameter '" + key + "'");
    }
  }
}

namespace {

nlohmann::json terms_to_json(const ExplanationVector& v) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& e : v.entries)
    terms.push_back({{"term", e.term}, {"weight", e.weight}});
  return terms;
}

ExplanationVector terms_from_json(const nlohmann::json& terms) {
  ExplanationVector v;
  for (const auto& t : terms)
    v.entries.push_back({t.at("term").get<std::string>(),
                         t.at("weight").get<double>()});
  return v;
}

}  // namespace

nlohmann::json to_json(const PointwiseExplanation& e) {
  return {{"qid", e.qid},
          {"docid", e.docid},
          {"method", e.method},
          {"params", e.params},
          {"terms", terms_to_json(e.terms)}};
}

PointwiseExplanation pointwise_from_json(const nlohmann::json& j) {
  PointwiseExplanation e;
  e.qid = j.at("qid").get<std::string>();
  e.docid = j.at("docid").get<std::string>();
  e.method = j.at("method").get<std::string>();
  e.params = j.at("params");
  e.terms = terms_from_json(j.at("terms"));
  return e;
}

std::string visualize_terms(const ExplanationVector& expl, RenderFormat format) {
  if (format == RenderFormat::json) {
    if (expl.empty()) return "";
    return nlohmann::json{{"terms", terms_to_json(expl)}}.dump();
  }
  if (expl.empty()) return "";
  constexpr int kBarWidth = 40;
  std::size_t term_width = 0;
  double max_mag = 0.0;
  for (const auto& e : expl.entries) {
    term_width = std::max(term_width, e.term.size());
    max_mag = std::max(max_mag, std::abs(e.weight));
  }
  std::string out;
  for (const auto& e : expl.entries) {
    const double mag = std::abs(e.weight);
    const int bar =
        max_mag > 0.0 ? static_cast<int>(std::lround(kBarWidth * mag / max_mag)) : 0;
    char num[64];
    std::snprintf(num, sizeof(num), "%10.4f", mag);
    out += e.term;
    out.append(term_width - e.term.size(), ' ');
    out += ' ';
    out += e.weight < 0.0 ? '-' : '+';
    out += num;
    out += ' ';
    out.append(static_cast<std::size_t>(bar), '#');
    out += '\n';
  }
  return out;
}

ExplanationVector parse_terms_json(std::string_view text) {
  if (text.empty()) return {};
  return terms_from_json(nlohmann::json::parse(text).at("terms"));
}

}  // namespace irx
