#include "irx/run_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "irx/error.hpp"

namespace irx {

const RankedList* RunFile::find(std::string_view qid) const {
  for (const auto& l : lists_)
    if (l.qid == qid) return &l;
  return nullptr;
}

const RankedList& RunFile::at(std::string_view qid) const {
  if (const RankedList* l = find(qid)) return *l;
  throw NotFound("no ranked list for qid " + std::string(qid));
}

void RunFile::put(RankedList list) {
  list.validate();
  for (auto& l : lists_)
    if (l.qid == list.qid) {
      l = std::move(list);
      return;
    }
  lists_.push_back(std::move(list));
}

std::string format_score(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format score");
  return std::string(buf, end);
}

namespace {

struct RawEntry {
  RankedEntry entry;
  std::size_t line;
};

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("invalid score '" + s + "'", line);
  return v;
}

int parse_rank(const std::string& s, std::size_t line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 1)
    throw ParseError("invalid rank '" + s + "'", line);
  return v;
}

}  // namespace

RunFile read_run(std::istream& in) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<RawEntry>> by_qid;
  std::map<std::string, std::string> tags;
  std::set<std::pair<std::string, std::string>> seen;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::vector<std::string> cols;
    for (std::string c; ss >> c;) cols.push_back(std::move(c));
    if (cols.empty()) continue;
    if (cols.size() != 6)
      throw ParseError("expected 6 columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    const std::string& qid = cols[0];
    if (!seen.emplace(qid, cols[2]).second)
      throw ParseError("duplicate docid " + cols[2] + " for qid " + qid,
                       line_no);
    if (!by_qid.contains(qid)) {
      order.push_back(qid);
      tags[qid] = cols[5];
    }
    by_qid[qid].push_back(
        {{cols[2], parse_rank(cols[3], line_no), parse_double(cols[4], line_no)},
         line_no});
  }

  RunFile run;
  for (const auto& qid : order) {
    auto& raw = by_qid[qid];
    std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
      return a.entry.rank < b.entry.rank;
    });
    RankedList list;
    list.qid = qid;
    list.tag = tags[qid];
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& r = raw[i];
      if (r.entry.rank != static_cast<int>(i) + 1)
        throw ParseError("qid " + qid + ": rank " + std::to_string(r.entry.rank) +
                             " breaks the 1..n sequence (expected " +
                             std::to_string(i + 1) + ")",
                         r.line);
      if (i > 0 && r.entry.score > raw[i - 1].entry.score)
        throw ParseError("qid " + qid + ": score increases at rank " +
                             std::to_string(r.entry.rank),
                         r.line);
      list.entries.push_back(r.entry);
    }
    run.put(std::move(list));
  }
  return run;
}

RunFile load_from_res(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_run(in);
}

void write_run(std::ostream& out, const RunFile& run) {
  for (const auto& list : run.lists())
    for (const auto& e : list.entries)
      out << list.qid << " Q0 " << e.docid << ' ' << e.rank << ' '
          << format_score(e.score) << ' ' << list.tag << '\n';
}

void save_to_res(const RunFile& run, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_run(out, run);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Topic> read_topics(std::istream& in) {
  std::vector<Topic> topics;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError("expected 'qid<TAB>query'", line_no);
    topics.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return topics;
}

std::vector<Topic> read_topics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  return read_topics(in);
}

}  // namespace irx
