#include "irx/rankers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "irx/error.hpp"
#include "irx/kernels.hpp"

namespace irx {

Query Query::parse(const PositionalIndex& index, std::string qid,
                   std::string text) {
  Query q{std::move(qid), std::move(text), {}};
  q.terms = index.analyze(q.text);
  return q;
}

std::vector<WeightedTerm> Query::weighted_terms() const {
  std::vector<WeightedTerm> out;
  for (const auto& t : terms) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const WeightedTerm& w) { return w.term == t; });
    if (it == out.end())
      out.push_back({t, 1.0});
    else
      it->weight += 1.0;
  }
  return out;
}

std::vector<std::string> Query::distinct_terms() const {
  std::vector<std::string> out;
  for (const auto& t : terms)
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  return out;
}

std::vector<std::string> RankedList::docids() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.docid);
  return out;
}

void RankedList::validate() const {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.rank != static_cast<int>(i) + 1)
      throw InvalidArgument("qid " + qid + ": expected rank " +
                            std::to_string(i + 1) + " but found " +
                            std::to_string(e.rank));
    if (!seen.insert(e.docid).second)
      throw InvalidArgument("qid " + qid + ": duplicate docid " + e.docid);
    if (i > 0 && e.score > entries[i - 1].score)
      throw InvalidArgument("qid " + qid + ": score increases at rank " +
                            std::to_string(e.rank));
  }
}

double Ranker::score(const PositionalIndex& index, const Query& query,
                     std::string_view docid) const {
  const auto terms = query.weighted_terms();
  return score(index, terms, index.bag(docid));
}

double bm25_idf(const PositionalIndex& index, std::string_view term) {
  const double n = static_cast<double>(index.num_docs());
  const double df = static_cast<double>(index.df(term));
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

Bm25Ranker::Bm25Ranker(Bm25Params params) : params_(params) {
  if (!(params.k1 >= 0.0) || !(params.b >= 0.0 && params.b <= 1.0))
    throw InvalidArgument("bm25 requires k1 >= 0 and b in [0,1]");
}

double Bm25Ranker::term_score(const PositionalIndex& index,
                              std::string_view term, int tf,
                              int doc_length) const {
  if (tf <= 0) return 0.0;
  const double avgdl = index.avgdl();
  const double rel_len = avgdl > 0.0 ? doc_length / avgdl : 1.0;
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * rel_len);
  return bm25_idf(index, term) * tf * (params_.k1 + 1.0) / (tf + norm);
}

double Bm25Ranker::score(const PositionalIndex& index,
                         std::span<const WeightedTerm> query,
                         const TermBag& doc) const {
  double s = 0.0;
  for (const auto& q : query)
    s += q.weight * term_score(index, q.term, doc.tf(q.term), doc.length());
  return s;
}

LanguageModelRanker::LanguageModelRanker(Smoothing smoothing)
    : smoothing_(smoothing) {
  if (const auto* jm = std::get_if<JelinekMercer>(&smoothing_)) {
    if (!(jm->lambda > 0.0 && jm->lambda < 1.0))
      throw InvalidArgument("lmjm lambda must lie in (0,1)");
  } else if (!(std::get<Dirichlet>(smoothing_).mu > 0.0)) {
    throw InvalidArgument("lmdir mu must be > 0");
  }
}

std::string LanguageModelRanker::name() const {
  return std::holds_alternative<JelinekMercer>(smoothing_) ? "lmjm" : "lmdir";
}

double LanguageModelRanker::probability(const PositionalIndex& index,
                                        std::string_view term, int tf,
                                        int doc_length) const {
  const double cf = static_cast<double>(index.cf(term));
  const double total = static_cast<double>(index.total_tokens());
  if (cf <= 0.0 || total <= 0.0) return 0.0;
  const double background = cf / total;
  if (const auto* jm = std::get_if<JelinekMercer>(&smoothing_)) {
    const double ml = doc_length > 0 ? static_cast<double>(tf) / doc_length : 0.0;
    return (1.0 - jm->lambda) * ml + jm->lambda * background;
  }
  const double mu = std::get<Dirichlet>(smoothing_).mu;
  return (tf + mu * background) / (doc_length + mu);
}

double LanguageModelRanker::score(const PositionalIndex& index,
                                  std::span<const WeightedTerm> query,
                                  const TermBag& doc) const {
  double s = 0.0;
  for (const auto& q : query) {
    const double p = probability(index, q.term, doc.tf(q.term), doc.length());
    if (p > 0.0) s += q.weight * std::log(p);
  }
  return s;
}

double bm25_score(const PositionalIndex& index, const Query& query,
                  std::string_view docid, const Bm25Params& params) {
  return Bm25Ranker(params).score(index, query, docid);
}

double lm_score(const PositionalIndex& index, const Query& query,
                std::string_view docid, const Smoothing& smoothing) {
  return LanguageModelRanker(smoothing).score(index, query, docid);
}

const std::vector<std::string>& simple_ranker_names() {
  static const std::vector<std::string> names = {"bm25", "lmjm", "lmdir"};
  return names;
}

RankerPtr make_ranker(std::string_view name, const RankerParams& params) {
  if (name == "bm25") return std::make_shared<Bm25Ranker>(params.bm25);
  if (name == "lmjm") return std::make_shared<LanguageModelRanker>(params.lmjm);
  if (name == "lmdir")
    return std::make_shared<LanguageModelRanker>(params.lmdir);
  throw NotFound("unknown ranker '" + std::string(name) +
                 "' (valid: bm25, lmjm, lmdir)");
}

namespace {

class HiddenIntentRanker final : public Ranker {
 public:
  HiddenIntentRanker(RankerPtr base, std::vector<WeightedTerm> hidden)
      : base_(std::move(base)), hidden_(std::move(hidden)) {}

  std::string name() const override { return "blackbox"; }

  double score(const PositionalIndex& index,
               std::span<const WeightedTerm> query,
               const TermBag& doc) const override {
    std::vector<WeightedTerm> merged(query.begin(), query.end());
    for (const auto& h : hidden_) {
      auto it = std::find_if(merged.begin(), merged.end(),
                             [&](const WeightedTerm& w) { return w.term == h.term; });
      if (it == merged.end())
        merged.push_back(h);
      else
        it->weight += h.weight;
    }
    return base_->score(index, merged, doc);
  }

 private:
  RankerPtr base_;
  std::vector<WeightedTerm> hidden_;
};

}  // namespace

RankerPtr hidden_intent_ranker(RankerPtr base,
                               std::vector<WeightedTerm> hidden_terms) {
  if (!base) throw InvalidArgument("hidden_intent_ranker: null base ranker");
  for (const auto& h : hidden_terms)
    if (!(h.weight > 0.0))
      throw InvalidArgument("hidden term weights must be > 0");
  return std::make_shared<HiddenIntentRanker>(std::move(base),
                                              std::move(hidden_terms));
}

RankedList rank(const PositionalIndex& index, const Ranker& ranker,
                const Query& query,
                std::optional<std::span<const std::string>> pool,
                std::size_t depth) {
  if (depth < 1) throw InvalidArgument("rank depth must be >= 1");
  const auto terms = query.weighted_terms();

  std::vector<std::uint32_t> docs;
  if (pool) {
    for (const auto& id : *pool) docs.push_back(index.doc_number(id));
  } else {
    for (const auto& t : terms)
      if (const TermEntry* e = index.find_term(t.term))
        for (const auto& p : e->postings) docs.push_back(p.doc);
  }
  std::sort(docs.begin(), docs.end());
  docs.erase(std::unique(docs.begin(), docs.end()), docs.end());

  const auto scores = kernels::score_documents(index, ranker, terms, docs);
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return index.docid(docs[a]) < index.docid(docs[b]);
  });

  RankedList out;
  out.qid = query.qid;
  const std::size_t n = std::min(depth, order.size());
  out.entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.entries.push_back({index.docid(docs[order[i]]), static_cast<int>(i) + 1,
                           scores[order[i]]});
  return out;
}

}  // namespace irx
