#include "irx/index.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "irx/error.hpp"

namespace irx {

namespace {

constexpr std::string_view kIndexMagic = "irx-index";
constexpr int kIndexVersion = 1;

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

}  // namespace

TermBag::TermBag(std::span<const std::string> tokens)
    : length_(static_cast<int>(tokens.size())) {
  for (const auto& t : tokens) ++counts_[t];
}

PositionalIndex PositionalIndex::from_tokenized(
    std::vector<TokenizedDocument> docs, AnalyzerConfig config) {
  PositionalIndex index;
  index.config_ = std::move(config);
  index.docs_.reserve(docs.size());
  for (auto& d : docs) {
    if (d.docid.empty()) throw InvalidArgument("empty docid");
    if (has_whitespace(d.docid))
      throw InvalidArgument("docid contains whitespace: '" + d.docid + "'");
    const auto number = static_cast<std::uint32_t>(index.docs_.size());
    if (!index.doc_numbers_.emplace(d.docid, number).second)
      throw InvalidArgument("duplicate docid: " + d.docid);
    for (std::uint32_t pos = 0; pos < d.tokens.size(); ++pos) {
      TermEntry& entry = index.terms_[d.tokens[pos]];
      if (entry.postings.empty() || entry.postings.back().doc != number)
        entry.postings.push_back({number, {}});
      entry.postings.back().positions.push_back(pos);
      ++entry.cf;
    }
    index.total_tokens_ += d.tokens.size();
    TermBag bag(d.tokens);
    index.docs_.push_back({std::move(d.docid), std::move(d.tokens),
                           std::move(bag)});
  }
  index.avgdl_ = index.docs_.empty()
                     ? 0.0
                     : static_cast<double>(index.total_tokens_) /
                           static_cast<double>(index.docs_.size());
  return index;
}

PositionalIndex build_index(std::span<const Document> corpus,
                            const AnalyzerConfig& config) {
  std::vector<TokenizedDocument> docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus) docs.push_back({d.docid, tokenize(d.text, config)});
  return PositionalIndex::from_tokenized(std::move(docs), config);
}

const TermEntry* PositionalIndex::find_term(std::string_view term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? nullptr : &it->second;
}

std::size_t PositionalIndex::df(std::string_view term) const {
  const TermEntry* e = find_term(term);
  return e ? e->postings.size() : 0;
}

std::uint64_t PositionalIndex::cf(std::string_view term) const {
  const TermEntry* e = find_term(term);
  return e ? e->cf : 0;
}

bool PositionalIndex::contains(std::string_view docid) const {
  return doc_numbers_.contains(std::string(docid));
}

std::uint32_t PositionalIndex::doc_number(std::string_view docid) const {
  auto it = doc_numbers_.find(std::string(docid));
  if (it == doc_numbers_.end())
    throw NotFound("unknown docid: " + std::string(docid));
  return it->second;
}

int PositionalIndex::doc_length(std::string_view docid) const {
  return static_cast<int>(docs_[doc_number(docid)].tokens.size());
}

const std::vector<std::string>& PositionalIndex::tokens(
    std::string_view docid) const {
  return docs_[doc_number(docid)].tokens;
}

const TermBag& PositionalIndex::bag(std::string_view docid) const {
  return docs_[doc_number(docid)].bag;
}

std::span<const std::uint32_t> PositionalIndex::positions(
    std::string_view term, std::string_view docid) const {
  const std::uint32_t doc = doc_number(docid);
  const TermEntry* e = find_term(term);
  if (!e) return {};
  auto it = std::lower_bound(
      e->postings.begin(), e->postings.end(), doc,
      [](const Posting& p, std::uint32_t d) { return p.doc < d; });
  if (it == e->postings.end() || it->doc != doc) return {};
  return it->positions;
}

// Serialized form: analyzer settings plus each document's token stream.
// Postings and statistics are rebuilt on load.
void PositionalIndex::save(std::ostream& out) const {
  out << kIndexMagic << ' ' << kIndexVersion << '\n';
  out << "lowercase " << (config_.lowercase ? 1 : 0) << '\n';
  out << "stem " << (config_.stem ? 1 : 0) << '\n';
  out << "stopwords " << config_.stopwords.size() << '\n';
  for (const auto& w : config_.stopwords) out << w << '\n';
  out << "docs " << docs_.size() << '\n';
  for (const auto& d : docs_) {
    out << d.docid << ' ' << d.tokens.size();
    for (const auto& t : d.tokens) out << ' ' << t;
    out << '\n';
  }
}

PositionalIndex PositionalIndex::load(std::istream& in) {
  std::size_t line_no = 0;
  std::string line;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line))
      throw ParseError("unexpected end of index file", line_no + 1);
    ++line_no;
    return line;
  };
  auto expect_field = [&](std::string_view key) -> std::size_t {
    std::istringstream ss(next_line());
    std::string k;
    long long v = -1;
    if (!(ss >> k >> v) || k != key || v < 0)
      throw ParseError("expected '" + std::string(key) + " <n>'", line_no);
    return static_cast<std::size_t>(v);
  };

  {
    std::istringstream ss(next_line());
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != kIndexMagic)
      throw ParseError("not an index file", line_no);
    if (version != kIndexVersion)
      throw ParseError("unsupported index version " + std::to_string(version),
                       line_no);
  }
  AnalyzerConfig config;
  config.lowercase = expect_field("lowercase") != 0;
  config.stem = expect_field("stem") != 0;
  const std::size_t n_stop = expect_field("stopwords");
  config.stopwords.clear();
  for (std::size_t i = 0; i < n_stop; ++i) config.stopwords.insert(next_line());
  const std::size_t n_docs = expect_field("docs");
  std::vector<TokenizedDocument> docs(n_docs);
  for (auto& d : docs) {
    std::istringstream ss(next_line());
    std::size_t n_tokens = 0;
    if (!(ss >> d.docid >> n_tokens))
      throw ParseError("malformed document record", line_no);
    d.tokens.resize(n_tokens);
    for (auto& t : d.tokens)
      if (!(ss >> t)) throw ParseError("truncated token list", line_no);
  }
  return from_tokenized(std::move(docs), std::move(config));
}

void PositionalIndex::save_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  save(out);
  if (!out) throw IoError("write failed: " + path.string());
}

PositionalIndex PositionalIndex::load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return load(in);
}

std::vector<Document> read_corpus_jsonl(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object() || !obj.contains("docid") || !obj.contains("text") ||
        !obj["docid"].is_string() || !obj["text"].is_string())
      throw ParseError("expected object with string fields docid and text",
                       line_no);
    docs.push_back({obj["docid"].get<std::string>(),
                    obj["text"].get<std::string>()});
  }
  return docs;
}

std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_corpus_jsonl(in);
}

}  // namespace irx
