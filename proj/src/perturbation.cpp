#include "irx/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "irx/error.hpp"

namespace irx {

const char* to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::random:
      return "random";
    case SamplerKind::masking:
      return "masking";
    case SamplerKind::tfidf:
      return "tfidf";
  }
  return "?";
}

SamplerKind parse_sampler_kind(std::string_view name) {
  if (name == "random") return SamplerKind::random;
  if (name == "masking") return SamplerKind::masking;
  if (name == "tfidf") return SamplerKind::tfidf;
  throw NotFound("unknown sampler '" + std::string(name) +
                 "' (valid: random, masking, tfidf)");
}

std::vector<std::string> distinct_terms(const std::vector<std::string>& tokens) {
  std::vector<std::string> out(tokens);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PerturbedSample make_sample(const std::vector<std::string>& tokens,
                            const std::vector<std::string>& features,
                            std::vector<std::uint8_t> kept_mask) {
  PerturbedSample s;
  s.feature_vector.assign(features.size(), 0);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!kept_mask[i]) continue;
    ++kept;
    s.surviving_tokens.push_back(tokens[i]);
    auto it = std::lower_bound(features.begin(), features.end(), tokens[i]);
    s.feature_vector[static_cast<std::size_t>(it - features.begin())] = 1;
  }
  s.distance = tokens.empty()
                   ? 0.0
                   : 1.0 - static_cast<double>(kept) /
                               static_cast<double>(tokens.size());
  s.kept_mask = std::move(kept_mask);
  return s;
}

namespace {

void check_config(const TokenizedDocument& doc, const SamplerConfig& config,
                  SamplerKind expected) {
  if (config.kind != expected)
    throw InvalidArgument(std::string("sampler called with kind ") +
                          to_string(config.kind) + ", expected " +
                          to_string(expected));
  if (doc.tokens.empty())
    throw InvalidArgument("nothing to perturb: document " + doc.docid +
                          " has no tokens");
  if (!(config.rate >= 0.0 && config.rate <= 1.0))
    throw InvalidArgument("sampler rate must lie in [0,1]");
  if (config.n_samples < 1) throw InvalidArgument("n_samples must be >= 1");
}

template <class DrawMask>
SampleBatch generate(const TokenizedDocument& doc, const SamplerConfig& config,
                     DrawMask&& draw) {
  SampleBatch batch;
  batch.features = distinct_terms(doc.tokens);
  batch.samples.reserve(config.n_samples);
  for (std::size_t s = 0; s < config.n_samples; ++s)
    batch.samples.push_back(make_sample(doc.tokens, batch.features, draw()));
  return batch;
}

std::vector<std::uint8_t> independent_mask(Rng& rng,
                                           const std::vector<double>& drop) {
  std::vector<std::uint8_t> mask(drop.size());
  for (std::size_t i = 0; i < drop.size(); ++i)
    mask[i] = rng.bernoulli(drop[i]) ? 0 : 1;
  return mask;
}

}  // namespace

SampleBatch random_sampler(const TokenizedDocument& doc,
                           const SamplerConfig& config, Rng& rng) {
  check_config(doc, config, SamplerKind::random);
  const std::vector<double> drop(doc.tokens.size(), config.rate);
  return generate(doc, config, [&] { return independent_mask(rng, drop); });
}

SampleBatch masking_sampler(const TokenizedDocument& doc,
                            const SamplerConfig& config, Rng& rng) {
  check_config(doc, config, SamplerKind::masking);
  const std::size_t n = doc.tokens.size();
  if (config.chunk < 1 || config.chunk > n)
    throw InvalidArgument("masking chunk must lie in [1, " + std::to_string(n) +
                          "]");
  const double expected = config.rate * static_cast<double>(n);
  const double whole = std::floor(expected);
  const double frac = expected - whole;
  return generate(doc, config, [&] {
    std::vector<std::uint8_t> mask(n, 1);
    const std::size_t target =
        static_cast<std::size_t>(whole) + (rng.bernoulli(frac) ? 1 : 0);
    std::size_t removed = 0;
    while (removed < target) {
      const std::size_t start = rng.below(n - config.chunk + 1);
      for (std::size_t i = start; i < start + config.chunk; ++i)
        if (mask[i]) {
          mask[i] = 0;
          ++removed;
        }
    }
    return mask;
  });
}

SampleBatch tfidf_sampler(const TokenizedDocument& doc,
                          const PositionalIndex& index,
                          const SamplerConfig& config, Rng& rng) {
  check_config(doc, config, SamplerKind::tfidf);
  const std::size_t n = doc.tokens.size();
  const TermBag bag(doc.tokens);
  const double n_docs = static_cast<double>(index.num_docs());

  std::vector<double> weight(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto df = index.df(doc.tokens[i]);
    if (df == 0)
      throw InvalidArgument("term '" + doc.tokens[i] +
                            "' of the perturbed document is not indexed");
    weight[i] = bag.tf(doc.tokens[i]) * std::log(n_docs / static_cast<double>(df));
    total += weight[i];
  }

  std::vector<double> drop(n, config.rate);
  const bool fallback = !(total > 0.0);
  if (!fallback)
    for (std::size_t i = 0; i < n; ++i)
      drop[i] = std::min(1.0, config.rate * static_cast<double>(n) * weight[i] / total);

  SampleBatch batch =
      generate(doc, config, [&] { return independent_mask(rng, drop); });
  batch.uniform_fallback = fallback;
  return batch;
}

SampleBatch draw_samples(const TokenizedDocument& doc,
                         const PositionalIndex& index,
                         const SamplerConfig& config) {
  Rng rng(config.seed);
  switch (config.kind) {
    case SamplerKind::random:
      return random_sampler(doc, config, rng);
    case SamplerKind::masking:
      return masking_sampler(doc, config, rng);
    case SamplerKind::tfidf:
      return tfidf_sampler(doc, index, config, rng);
  }
  throw InvalidArgument("unknown sampler kind");
}

}  // namespace irx
