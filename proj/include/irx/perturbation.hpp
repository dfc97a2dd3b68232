#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irx/index.hpp"
#include "irx/rng.hpp"

namespace irx {

enum class SamplerKind { random, masking, tfidf };

const char* to_string(SamplerKind kind);
/// Throws NotFound for anything but "random", "masking", "tfidf".
SamplerKind parse_sampler_kind(std::string_view name);

struct SamplerConfig {
  SamplerKind kind = SamplerKind::random;
  double rate = 0.3;        // expected fraction of tokens removed
  std::size_t chunk = 1;    // window length, masking only
  std::size_t n_samples = 200;
  std::uint64_t seed = 0;
};

struct PerturbedSample {
  std::vector<std::uint8_t> kept_mask;       // one entry per token position
  std::vector<std::string> surviving_tokens;
  std::vector<std::uint8_t> feature_vector;  // one entry per distinct term
  double distance = 0.0;                     // fraction of tokens removed
};

struct SampleBatch {
  std::vector<std::string> features;  // distinct document terms, sorted
  std::vector<PerturbedSample> samples;
  bool uniform_fallback = false;  // tf-idf weights were all zero
};

/// Sorted distinct terms of a token stream; the interpretable features.
std::vector<std::string> distinct_terms(const std::vector<std::string>& tokens);

/// Builds a sample from a keep-mask, filling the derived fields.
PerturbedSample make_sample(const std::vector<std::string>& tokens,
                            const std::vector<std::string>& features,
                            std::vector<std::uint8_t> kept_mask);

/// Drops each token independently with probability `rate`.
SampleBatch random_sampler(const TokenizedDocument& doc,
                           const SamplerConfig& config, Rng& rng);

/// Removes windows of `chunk` consecutive tokens at uniform starts until a
/// removal target (rate * n, randomly rounded) is reached. Windows may
/// overlap; the removed set is their union.
SampleBatch masking_sampler(const TokenizedDocument& doc,
                            const SamplerConfig& config, Rng& rng);

/// Position i is dropped with probability min(1, rate * n * w_i / sum w),
/// w_i the tf-idf (idf = ln(N/df)) of the term at i. Falls back to uniform
/// removal when every weight is zero.
SampleBatch tfidf_sampler(const TokenizedDocument& doc,
                          const PositionalIndex& index,
                          const SamplerConfig& config, Rng& rng);

/// Dispatches on config.kind with a generator seeded from config.seed.
SampleBatch draw_samples(const TokenizedDocument& doc,
                         const PositionalIndex& index,
                         const SamplerConfig& config);

}  // namespace irx
