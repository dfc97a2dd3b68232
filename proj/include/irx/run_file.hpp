#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "irx/rankers.hpp"

namespace irx {

/// Ranked lists of a TREC run, in order of first appearance of each qid.
class RunFile {
 public:
  const std::vector<RankedList>& lists() const { return lists_; }
  const RankedList* find(std::string_view qid) const;
  /// Throws NotFound.
  const RankedList& at(std::string_view qid) const;
  /// Validates the list; replaces an existing list with the same qid.
  void put(RankedList list);
  std::size_t size() const { return lists_.size(); }
  bool empty() const { return lists_.empty(); }

 private:
  std::vector<RankedList> lists_;
};

/// Parses `qid Q0 docid rank score tag` lines. Entries are ordered by the
/// rank column; gaps, duplicate (qid, docid) and malformed lines raise
/// ParseError with the offending line number.
RunFile read_run(std::istream& in);
RunFile load_from_res(const std::filesystem::path& path);

/// Writes one line per entry with single-space separators and scores in
/// shortest round-trip form. Reading the output back yields an equal run.
void write_run(std::ostream& out, const RunFile& run);
void save_to_res(const RunFile& run, const std::filesystem::path& path);

/// Shortest decimal form of `value` that parses back to the same double.
std::string format_score(double value);

struct Topic {
  std::string qid;
  std::string text;
};

/// Tab-separated `qid<TAB>query text`, one topic per line.
std::vector<Topic> read_topics(std::istream& in);
std::vector<Topic> read_topics(const std::filesystem::path& path);

}  // namespace irx
