#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace irx {

/// Bundled English stopword list (fixed; part of the on-disk index format).
const std::set<std::string>& default_stopwords();

/// Analyzer chain: lowercase, split into alphanumeric runs, drop stopwords,
/// Porter-stem. Bytes >= 0x80 count as word characters so UTF-8 sequences
/// stay inside their token.
struct AnalyzerConfig {
  bool lowercase = true;
  bool stem = true;
  std::set<std::string> stopwords = default_stopwords();

  static AnalyzerConfig plain() { return {true, false, {}}; }

  bool operator==(const AnalyzerConfig&) const = default;
};

std::vector<std::string> tokenize(std::string_view text,
                                  const AnalyzerConfig& config);

/// Porter (1980) stemmer, reference-implementation variant. Words containing
/// anything other than a-z are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace irx
