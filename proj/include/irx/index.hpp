#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irx/analysis.hpp"

namespace irx {

struct Document {
  std::string docid;
  std::string text;
};

struct TokenizedDocument {
  std::string docid;
  std::vector<std::string> tokens;
};

/// Term frequencies plus length of a document. Rankers score through this
/// view, so a perturbed (transient) document and an indexed one look alike.
class TermBag {
 public:
  TermBag() = default;
  explicit TermBag(std::span<const std::string> tokens);

  int tf(std::string_view term) const {
    auto it = counts_.find(term);
    return it == counts_.end() ? 0 : it->second;
  }
  int length() const { return length_; }
  const std::map<std::string, int, std::less<>>& counts() const {
    return counts_;
  }

 private:
  std::map<std::string, int, std::less<>> counts_;
  int length_ = 0;
};

struct Posting {
  std::uint32_t doc = 0;  // internal document number
  std::vector<std::uint32_t> positions;
};

struct TermEntry {
  std::vector<Posting> postings;  // ordered by doc
  std::uint64_t cf = 0;
};

/// Immutable in-memory positional inverted index. Positions index the
/// analyzed token stream, i.e. stopwords are dropped before numbering.
class PositionalIndex {
 public:
  PositionalIndex() = default;

  std::size_t num_docs() const { return docs_.size(); }
  std::size_t vocabulary_size() const { return terms_.size(); }
  double avgdl() const { return avgdl_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  const AnalyzerConfig& analyzer() const { return config_; }

  std::size_t df(std::string_view term) const;
  std::uint64_t cf(std::string_view term) const;
  const TermEntry* find_term(std::string_view term) const;
  const std::map<std::string, TermEntry, std::less<>>& terms() const {
    return terms_;
  }

  bool contains(std::string_view docid) const;
  /// Internal number of a docid; throws NotFound for unknown ids.
  std::uint32_t doc_number(std::string_view docid) const;
  const std::string& docid(std::uint32_t doc) const { return docs_[doc].docid; }
  int doc_length(std::string_view docid) const;
  const std::vector<std::string>& tokens(std::string_view docid) const;
  const TermBag& bag(std::string_view docid) const;
  const TermBag& bag(std::uint32_t doc) const { return docs_[doc].bag; }

  /// Strictly increasing positions of `term` in `docid`; empty when the term
  /// does not occur there. Throws NotFound when the docid is unknown.
  std::span<const std::uint32_t> positions(std::string_view term,
                                           std::string_view docid) const;

  std::vector<std::string> analyze(std::string_view text) const {
    return tokenize(text, config_);
  }

  void save(std::ostream& out) const;
  static PositionalIndex load(std::istream& in);
  void save_file(const std::filesystem::path& path) const;
  static PositionalIndex load_file(const std::filesystem::path& path);

  static PositionalIndex from_tokenized(std::vector<TokenizedDocument> docs,
                                        AnalyzerConfig config);

 private:
  struct DocEntry {
    std::string docid;
    std::vector<std::string> tokens;
    TermBag bag;
  };

  AnalyzerConfig config_;
  std::vector<DocEntry> docs_;
  std::unordered_map<std::string, std::uint32_t> doc_numbers_;
  std::map<std::string, TermEntry, std::less<>> terms_;
  std::uint64_t total_tokens_ = 0;
  double avgdl_ = 0.0;
};

/// Throws InvalidArgument naming the first duplicate, empty, or
/// whitespace-containing docid.
PositionalIndex build_index(std::span<const Document> corpus,
                            const AnalyzerConfig& config = {});

/// JSON-Lines corpus, one {"docid": ..., "text": ...} object per line.
/// Blank lines are skipped; malformed lines raise ParseError.
std::vector<Document> read_corpus_jsonl(std::istream& in);
std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path);

}  // namespace irx
