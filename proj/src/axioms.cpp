#include "irx/axioms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>

#include "irx/error.hpp"

namespace irx {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool nearly_equal(double a, double b) {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b)) return false;
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-9 * scale;
}

Preference prefer_larger(double a, double b) {
  if (nearly_equal(a, b)) return Preference::none;
  return a > b ? Preference::first : Preference::second;
}

Preference prefer_smaller(double a, double b) { return prefer_larger(b, a); }

bool comparable(double a, double b) {
  return std::abs(a - b) <= kComparabilitySlack * std::max(a, b);
}

// Per-document view of the distinct query terms.
struct Profile {
  int length = 0;
  std::vector<int> tf;
  std::vector<std::span<const std::uint32_t>> positions;
  const std::vector<std::string>* tokens = nullptr;

  int tf_sum() const {
    int s = 0;
    for (int t : tf) s += t;
    return s;
  }
  int matched() const {
    return static_cast<int>(std::count_if(tf.begin(), tf.end(),
                                          [](int t) { return t > 0; }));
  }
  std::vector<std::size_t> matched_terms() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < tf.size(); ++i)
      if (tf[i] > 0) out.push_back(i);
    return out;
  }
};

Profile profile(const PositionalIndex& index,
                const std::vector<std::string>& terms, std::string_view docid) {
  Profile p;
  const TermBag& bag = index.bag(docid);
  p.length = bag.length();
  p.tokens = &index.tokens(docid);
  for (const auto& t : terms) {
    p.tf.push_back(bag.tf(t));
    p.positions.push_back(index.positions(t, docid));
  }
  return p;
}

double tfidf_sum(const PositionalIndex& index,
                 const std::vector<std::string>& terms, const Profile& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    s += p.tf[i] * bm25_idf(index, terms[i]);
  return s;
}

// Unordered term-index pairs ordered by gap, then by first index: for three
// terms (0,1), (1,2), (0,2).
std::vector<std::pair<std::size_t, std::size_t>> term_pairs(
    const std::vector<std::size_t>& terms) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t gap = 1; gap < terms.size(); ++gap)
    for (std::size_t i = 0; i + gap < terms.size(); ++i)
      out.emplace_back(terms[i], terms[i + gap]);
  return out;
}

std::vector<std::size_t> common_terms(const Profile& a, const Profile& b) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.tf.size(); ++i)
    if (a.tf[i] > 0 && b.tf[i] > 0) out.push_back(i);
  return out;
}

double min_window(const Profile& p) {
  const auto terms = p.matched_terms();
  if (terms.empty()) return kInf;
  std::vector<std::pair<std::uint32_t, std::size_t>> events;
  for (std::size_t k = 0; k < terms.size(); ++k)
    for (auto pos : p.positions[terms[k]]) events.emplace_back(pos, k);
  std::sort(events.begin(), events.end());
  std::vector<int> counts(terms.size(), 0);
  std::size_t covered = 0;
  double best = kInf;
  std::size_t left = 0;
  for (std::size_t right = 0; right < events.size(); ++right) {
    if (counts[events[right].second]++ == 0) ++covered;
    while (covered == terms.size()) {
      best = std::min(best, static_cast<double>(events[right].first -
                                                events[left].first + 1));
      if (--counts[events[left].second] == 0) --covered;
      ++left;
    }
  }
  return best;
}

double phrase_position(const Profile& p, const std::vector<std::string>& phrase) {
  const auto& tokens = *p.tokens;
  if (phrase.empty() || phrase.size() > tokens.size()) return kInf;
  for (std::size_t start = 0; start + phrase.size() <= tokens.size(); ++start)
    if (std::equal(phrase.begin(), phrase.end(), tokens.begin() + start))
      return static_cast<double>(start);
  return kInf;
}

double min_pair_distance(const Profile& p) {
  const auto terms = p.matched_terms();
  double best = kInf;
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = a + 1; b < terms.size(); ++b)
      for (auto x : p.positions[terms[a]])
        for (auto y : p.positions[terms[b]])
          best = std::min(best, std::abs(static_cast<double>(x) - y));
  return best;
}

double mean_nearest_distance(const Profile& p) {
  const auto terms = p.matched_terms();
  if (terms.size() < 2) return kInf;
  double total = 0.0;
  std::size_t count = 0;
  for (auto a : terms) {
    for (auto x : p.positions[a]) {
      double nearest = kInf;
      for (auto b : terms) {
        if (b == a) continue;
        for (auto y : p.positions[b])
          nearest = std::min(nearest, std::abs(static_cast<double>(x) - y));
      }
      total += nearest;
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

std::vector<PairDistances> prox1_pairs(const std::vector<std::string>& terms,
                                       const Profile& a, const Profile& b) {
  std::vector<PairDistances> out;
  for (auto [i, j] : term_pairs(common_terms(a, b)))
    out.push_back({terms[i], terms[j],
                   average_distance(a.positions[i], a.positions[j]),
                   average_distance(b.positions[i], b.positions[j])});
  return out;
}

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

using PairRule = std::function<Preference(const PositionalIndex&, const Query&,
                                          const std::vector<std::string>&,
                                          const Profile&, const Profile&)>;

Preference tfc1(const PositionalIndex&, const Query&,
                const std::vector<std::string>&, const Profile& a,
                const Profile& b) {
  if (!comparable(a.length, b.length)) return Preference::none;
  return prefer_larger(a.tf_sum(), b.tf_sum());
}

Preference tfc3(const PositionalIndex&, const Query&,
                const std::vector<std::string>&, const Profile& a,
                const Profile& b) {
  if (!comparable(a.length, b.length) || a.tf_sum() != b.tf_sum())
    return Preference::none;
  return prefer_larger(a.matched(), b.matched());
}

Preference tdc(const PositionalIndex& index, const Query&,
               const std::vector<std::string>& terms, const Profile& a,
               const Profile& b) {
  if (!comparable(a.length, b.length)) return Preference::none;
  return prefer_larger(tfidf_sum(index, terms, a), tfidf_sum(index, terms, b));
}

Preference lnc1(const PositionalIndex&, const Query&,
                const std::vector<std::string>&, const Profile& a,
                const Profile& b) {
  if (a.tf != b.tf || a.tf_sum() == 0) return Preference::none;
  return prefer_smaller(a.length, b.length);
}

// Di dominates Dj in tf on every query term (one strictly) while its extra
// length is explained by the extra query-term occurrences.
bool tf_lnc_dominates(const Profile& a, const Profile& b) {
  bool strict = false;
  int extra = 0;
  for (std::size_t i = 0; i < a.tf.size(); ++i) {
    if (a.tf[i] < b.tf[i]) return false;
    if (a.tf[i] > b.tf[i]) strict = true;
    extra += a.tf[i] - b.tf[i];
  }
  return strict && a.length <= b.length + extra;
}

Preference tf_lnc(const PositionalIndex&, const Query&,
                  const std::vector<std::string>&, const Profile& a,
                  const Profile& b) {
  if (tf_lnc_dominates(a, b)) return Preference::first;
  if (tf_lnc_dominates(b, a)) return Preference::second;
  return Preference::none;
}

bool lb1_dominates(const Profile& a, const Profile& b) {
  bool strict = false;
  for (std::size_t i = 0; i < a.tf.size(); ++i) {
    if (b.tf[i] > 0 && a.tf[i] == 0) return false;
    if (a.tf[i] > 0 && b.tf[i] == 0) strict = true;
    if (a.tf[i] > 0 && b.tf[i] > 0 && !comparable(a.tf[i], b.tf[i]))
      return false;
  }
  return strict;
}

Preference lb1(const PositionalIndex&, const Query&,
               const std::vector<std::string>&, const Profile& a,
               const Profile& b) {
  if (lb1_dominates(a, b)) return Preference::first;
  if (lb1_dominates(b, a)) return Preference::second;
  return Preference::none;
}

Preference prox1(const PositionalIndex&, const Query&,
                 const std::vector<std::string>& terms, const Profile& a,
                 const Profile& b) {
  const auto pairs = prox1_pairs(terms, a, b);
  if (pairs.empty()) return Preference::none;
  std::vector<double> da, db;
  for (const auto& p : pairs) {
    da.push_back(p.d1);
    db.push_back(p.d2);
  }
  return prefer_smaller(mean_of(da), mean_of(db));
}

Preference prox2(const PositionalIndex&, const Query&,
                 const std::vector<std::string>&, const Profile& a,
                 const Profile& b) {
  if (a.matched() != b.matched()) return prefer_larger(a.matched(), b.matched());
  if (a.matched() < 2) return Preference::none;
  return prefer_smaller(min_window(a), min_window(b));
}

Preference prox3(const PositionalIndex&, const Query& query,
                 const std::vector<std::string>&, const Profile& a,
                 const Profile& b) {
  return prefer_smaller(phrase_position(a, query.terms),
                        phrase_position(b, query.terms));
}

Preference prox4(const PositionalIndex&, const Query&,
                 const std::vector<std::string>&, const Profile& a,
                 const Profile& b) {
  return prefer_smaller(min_pair_distance(a), min_pair_distance(b));
}

Preference prox5(const PositionalIndex&, const Query&,
                 const std::vector<std::string>&, const Profile& a,
                 const Profile& b) {
  return prefer_smaller(mean_nearest_distance(a), mean_nearest_distance(b));
}

Preference and_axiom(const PositionalIndex&, const Query&,
                     const std::vector<std::string>& terms, const Profile& a,
                     const Profile& b) {
  if (terms.empty()) return Preference::none;
  const int n = static_cast<int>(terms.size());
  return prefer_larger(a.matched() == n ? 1 : 0, b.matched() == n ? 1 : 0);
}

class RuleAxiom final : public Axiom {
 public:
  RuleAxiom(std::string name, PairRule rule)
      : name_(std::move(name)), rule_(std::move(rule)) {}
  std::string name() const override { return name_; }
  Preference preference(const PositionalIndex& index, const Query& query,
                        std::string_view di,
                        std::string_view dj) const override {
    const auto terms = query.distinct_terms();
    const Profile a = profile(index, terms, di);
    const Profile b = profile(index, terms, dj);
    return rule_(index, query, terms, a, b);
  }

 private:
  std::string name_;
  PairRule rule_;
};

const std::map<std::string, PairRule, std::less<>>& rules() {
  static const std::map<std::string, PairRule, std::less<>> table = {
      {"TFC1", tfc1},   {"TFC3", tfc3},   {"TDC", tdc},     {"LNC1", lnc1},
      {"TF_LNC", tf_lnc}, {"LB1", lb1},   {"PROX1", prox1}, {"PROX2", prox2},
      {"PROX3", prox3}, {"PROX4", prox4}, {"PROX5", prox5}, {"AND", and_axiom},
  };
  return table;
}

std::string joined_names() {
  std::string s;
  for (const auto& n : axiom_names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

const std::vector<std::string>& axiom_names() {
  static const std::vector<std::string> names = {
      "TFC1",  "TFC3",  "TDC",   "LNC1",  "TF_LNC", "LB1",
      "PROX1", "PROX2", "PROX3", "PROX4", "PROX5",  "AND"};
  return names;
}

AxiomPtr make_axiom(std::string_view name) {
  auto it = rules().find(name);
  if (it == rules().end())
    throw NotFound("unknown axiom '" + std::string(name) +
                   "' (valid: " + joined_names() + ")");
  return std::make_shared<RuleAxiom>(it->first, it->second);
}

Preference axiom_preference(std::string_view axiom_name,
                            const PositionalIndex& index, const Query& query,
                            std::string_view di, std::string_view dj) {
  return make_axiom(axiom_name)->preference(index, query, di, dj);
}

AggregatedAxiom::AggregatedAxiom(std::vector<WeightedAxiom> children,
                                 AggregationMode mode)
    : children_(std::move(children)), mode_(mode) {
  if (children_.empty())
    throw InvalidArgument("aggregated axiom needs at least one child");
  for (const auto& c : children_) {
    if (!c.axiom) throw InvalidArgument("aggregated axiom: null child");
    if (!std::isfinite(c.weight))
      throw InvalidArgument("aggregated axiom: non-finite weight");
  }
}

std::string AggregatedAxiom::name() const {
  std::string s = mode_ == AggregationMode::majority ? "MAJORITY(" : "SUM(";
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (i) s += ", ";
    if (children_[i].weight != 1.0) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g*", children_[i].weight);
      s += buf;
    }
    s += children_[i].axiom->name();
  }
  return s + ")";
}

Preference AggregatedAxiom::preference(const PositionalIndex& index,
                                       const Query& query, std::string_view di,
                                       std::string_view dj) const {
  double total = 0.0;
  for (const auto& c : children_) {
    const int p = value(c.axiom->preference(index, query, di, dj));
    total += mode_ == AggregationMode::majority ? p : c.weight * p;
  }
  return preference_of_sign(total);
}

Preference aggregate_preference(const AggregatedAxiom& agg,
                                const PositionalIndex& index,
                                const Query& query, std::string_view di,
                                std::string_view dj) {
  return agg.preference(index, query, di, dj);
}

// Details ----------------------------------------------------------------

double average_distance(std::span<const std::uint32_t> a,
                        std::span<const std::uint32_t> b) {
  if (a.empty() || b.empty()) return 0.0;
  double total = 0.0;
  for (auto x : a)
    for (auto y : b) total += std::abs(static_cast<double>(x) - y);
  return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

void finish_prox1_table(DetailsTable& table,
                        std::span<const PairDistances> pairs) {
  std::vector<double> d1, d2;
  for (const auto& p : pairs) {
    table.rows.push_back({"avg_dist(" + p.first_term + ", " + p.second_term + ")",
                          p.d1, p.d2, false});
    d1.push_back(p.d1);
    d2.push_back(p.d2);
  }
  const double n = static_cast<double>(pairs.size());
  table.rows.push_back({"num pairs", n, n, true});
  const double t1 = mean_of(d1);
  const double t2 = mean_of(d2);
  table.rows.push_back({"Total_avg_dist", t1, t2, false});
  table.preference = pairs.empty() ? Preference::none : prefer_smaller(t1, t2);
}

const DetailsRow* DetailsTable::find(std::string_view label) const {
  for (const auto& r : rows)
    if (r.label == label) return &r;
  return nullptr;
}

namespace {

std::string format_cell(double v, bool integral) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  if (integral)
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  else
    std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string preference_label(Preference p) {
  switch (p) {
    case Preference::first:
      return "+1";
    case Preference::second:
      return "-1";
    case Preference::none:
      return "0";
  }
  return "0";
}

}  // namespace

std::string DetailsTable::render_text() const {
  std::vector<std::array<std::string, 3>> lines;
  lines.push_back({"docid", docid1, docid2});
  for (const auto& r : rows)
    lines.push_back({r.label, format_cell(r.d1, r.integral),
                     format_cell(r.d2, r.integral)});
  std::size_t w0 = 0, w1 = 0, w2 = 0;
  for (const auto& l : lines) {
    w0 = std::max(w0, l[0].size());
    w1 = std::max(w1, l[1].size());
    w2 = std::max(w2, l[2].size());
  }
  std::string out = "Query: " + query;
  if (!qid.empty()) out += " (qid: " + qid + ")";
  out += "\n";
  auto emit = [&](const std::array<std::string, 3>& l) {
    out += l[0];
    out.append(w0 - l[0].size() + 2 + (w1 - l[1].size()), ' ');
    out += l[1];
    out.append(2 + (w2 - l[2].size()), ' ');
    out += l[2];
    out += '\n';
  };
  emit(lines.front());
  const std::string rule(w0 + w1 + w2 + 4, '-');
  out += rule + '\n';
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i][0] == "Total_avg_dist") out += rule + '\n';
    emit(lines[i]);
  }
  out += rule + '\n';
  out += axiom + " preference: " + preference_label(preference) + '\n';
  return out;
}

nlohmann::json DetailsTable::to_json() const {
  nlohmann::json j;
  j["axiom"] = axiom;
  j["qid"] = qid;
  j["query"] = query;
  j["docids"] = {docid1, docid2};
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"label", r.label}};
    row["d1"] = std::isinf(r.d1) ? nlohmann::json(nullptr) : nlohmann::json(r.d1);
    row["d2"] = std::isinf(r.d2) ? nlohmann::json(nullptr) : nlohmann::json(r.d2);
    rs.push_back(std::move(row));
  }
  j["rows"] = std::move(rs);
  j["preference"] = value(preference);
  return j;
}

DetailsTable explain_details(std::string_view axiom_name,
                             const PositionalIndex& index, const Query& query,
                             std::string_view di, std::string_view dj) {
  static const std::vector<std::string> detailed = {
      "PROX1", "PROX2", "PROX3", "PROX4", "PROX5", "TFC1", "TDC"};
  if (std::find(detailed.begin(), detailed.end(), axiom_name) == detailed.end()) {
    make_axiom(axiom_name);  // unknown names report NotFound first
    throw InvalidArgument("no detailed view for axiom " + std::string(axiom_name));
  }

  const auto terms = query.distinct_terms();
  const Profile a = profile(index, terms, di);
  const Profile b = profile(index, terms, dj);

  DetailsTable table;
  table.axiom = std::string(axiom_name);
  table.query = query.text;
  table.qid = query.qid;
  table.docid1 = std::string(di);
  table.docid2 = std::string(dj);
  for (std::size_t i = 0; i < terms.size(); ++i)
    table.rows.push_back({"tf(" + terms[i] + ")", static_cast<double>(a.tf[i]),
                          static_cast<double>(b.tf[i]), true});

  if (axiom_name == "PROX1") {
    finish_prox1_table(table, prox1_pairs(terms, a, b));
    return table;
  }
  if (axiom_name == "TFC1") {
    table.rows.push_back({"doc length", static_cast<double>(a.length),
                          static_cast<double>(b.length), true});
    table.rows.push_back({"sum tf", static_cast<double>(a.tf_sum()),
                          static_cast<double>(b.tf_sum()), true});
  } else if (axiom_name == "TDC") {
    table.rows.push_back({"doc length", static_cast<double>(a.length),
                          static_cast<double>(b.length), true});
    table.rows.push_back({"sum tf*idf", tfidf_sum(index, terms, a),
                          tfidf_sum(index, terms, b), false});
  } else if (axiom_name == "PROX2") {
    table.rows.push_back({"matched terms", static_cast<double>(a.matched()),
                          static_cast<double>(b.matched()), true});
    table.rows.push_back({"min window", min_window(a), min_window(b), true});
  } else if (axiom_name == "PROX3") {
    table.rows.push_back({"phrase position", phrase_position(a, query.terms),
                          phrase_position(b, query.terms), true});
  } else if (axiom_name == "PROX4") {
    table.rows.push_back({"min pair distance", min_pair_distance(a),
                          min_pair_distance(b), true});
  } else if (axiom_name == "PROX5") {
    table.rows.push_back({"mean nearest distance", mean_nearest_distance(a),
                          mean_nearest_distance(b), false});
  }
  table.preference = rules().find(axiom_name)->second(index, query, terms, a, b);
  return table;
}

}  // namespace irx
