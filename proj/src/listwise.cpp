#include "irx/listwise.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>

#include "irx/error.hpp"
#include "irx/evaluation.hpp"
#include "irx/kernels.hpp"

namespace irx {

// Candidates -------------------------------------------------------------

std::vector<CandidateTerm> canonical_order(std::vector<CandidateTerm> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const CandidateTerm& a, const CandidateTerm& b) {
              if (a.salience != b.salience) return a.salience > b.salience;
              return a.term < b.term;
            });
  return candidates;
}

std::vector<CandidateTerm> generate_candidates(const PositionalIndex& index,
                                               const RankedList& list,
                                               std::size_t top_k,
                                               std::size_t n_candidates) {
  if (list.empty()) throw InvalidArgument("generate_candidates: empty ranked list");
  if (top_k < 1 || top_k > list.size())
    throw InvalidArgument("generate_candidates: top_k must lie in [1, |L|]");
  std::map<std::string, int> tf_sum;
  for (std::size_t i = 0; i < top_k; ++i)
    for (const auto& [term, tf] : index.bag(list.entries[i].docid).counts())
      tf_sum[term] += tf;
  std::vector<CandidateTerm> out;
  out.reserve(tf_sum.size());
  for (const auto& [term, tf] : tf_sum)
    out.push_back({term, tf * bm25_idf(index, term)});
  out = canonical_order(std::move(out));
  if (out.size() > n_candidates) out.resize(n_candidates);
  return out;
}

// Pair sampling ----------------------------------------------------------

const char* to_string(PairSampling s) {
  switch (s) {
    case PairSampling::uniform:
      return "uniform";
    case PairSampling::rank_gap_weighted:
      return "rank_gap_weighted";
    case PairSampling::top_vs_rest:
      return "top_vs_rest";
  }
  return "?";
}

PairSampling parse_pair_sampling(std::string_view name) {
  if (name == "uniform") return PairSampling::uniform;
  if (name == "rank_gap_weighted") return PairSampling::rank_gap_weighted;
  if (name == "top_vs_rest") return PairSampling::top_vs_rest;
  throw NotFound("unknown pair sampling '" + std::string(name) +
                 "' (valid: uniform, rank_gap_weighted, top_vs_rest)");
}

std::vector<PreferencePair> sample_pairs(const RankedList& list,
                                         PairSampling strategy,
                                         std::size_t count, Rng& rng) {
  const std::size_t n = list.size();
  if (n < 2) throw InvalidArgument("no pairs: ranked list has fewer than 2 entries");
  if (count < 1) throw InvalidArgument("sample_pairs: count must be >= 1");

  const std::size_t upper_limit =
      strategy == PairSampling::top_vs_rest ? (n + 9) / 10 : n;
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < upper_limit; ++i)
    for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
  const std::size_t take = std::min(count, all.size());

  if (strategy == PairSampling::rank_gap_weighted) {
    // Efraimidis-Spirakis: the `take` largest keys log(u) / w form a
    // weighted sample without replacement.
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(all.size());
    for (std::size_t k = 0; k < all.size(); ++k) {
      const double u = 1.0 - rng.uniform();  // (0, 1]
      const double gap = static_cast<double>(all[k].second - all[k].first);
      keys.emplace_back(std::log(u) / gap, k);
    }
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(take),
                      keys.end(), [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    for (std::size_t k = 0; k < take; ++k) chosen.push_back(all[keys[k].second]);
    all = std::move(chosen);
  } else {
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.below(all.size() - k));
      std::swap(all[k], all[pick]);
    }
    all.resize(take);
  }

  std::vector<PreferencePair> out;
  out.reserve(take);
  for (auto [i, j] : all)
    out.push_back({list.entries[i].docid, list.entries[j].docid,
                   static_cast<int>(j - i)});
  return out;
}

// Preference matrix ------------------------------------------------------

PreferenceMatrix::PreferenceMatrix(std::vector<std::string> rankers,
                                   std::vector<CandidateTerm> candidates,
                                   std::vector<PreferencePair> pairs,
                                   std::vector<std::int8_t> entries)
    : rankers_(std::move(rankers)),
      candidates_(std::move(candidates)),
      pairs_(std::move(pairs)),
      entries_(std::move(entries)) {
  if (entries_.size() != rankers_.size() * candidates_.size() * pairs_.size())
    throw InvalidArgument("preference matrix: entry count does not match shape");
}

int PreferenceMatrix::consensus(std::size_t term, std::size_t pair) const {
  int sum = 0;
  for (std::size_t r = 0; r < rankers_.size(); ++r) sum += entry(r, term, pair);
  return (sum > 0) - (sum < 0);
}

PreferenceMatrix PreferenceMatrix::restrict_to(std::string_view ranker) const {
  auto it = std::find(rankers_.begin(), rankers_.end(), ranker);
  if (it == rankers_.end())
    throw NotFound("ranker " + std::string(ranker) + " not in matrix");
  const std::size_t r = static_cast<std::size_t>(it - rankers_.begin());
  const std::size_t layer = num_terms() * num_pairs();
  std::vector<std::int8_t> entries(entries_.begin() + static_cast<std::ptrdiff_t>(r * layer),
                                   entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * layer));
  return PreferenceMatrix({*it}, candidates_, pairs_, std::move(entries));
}

nlohmann::json PreferenceMatrix::to_json() const {
  nlohmann::json j;
  j["rankers"] = rankers_;
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : pairs_)
    pairs.push_back({{"upper", p.upper}, {"lower", p.lower}, {"rank_gap", p.rank_gap}});
  j["pairs"] = std::move(pairs);
  nlohmann::json terms = nlohmann::json::array();
  nlohmann::json salience = nlohmann::json::array();
  for (const auto& c : candidates_) {
    terms.push_back(c.term);
    salience.push_back(c.salience);
  }
  j["terms"] = std::move(terms);
  j["salience"] = std::move(salience);
  nlohmann::json consensus_rows = nlohmann::json::array();
  for (std::size_t t = 0; t < num_terms(); ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t p = 0; p < num_pairs(); ++p) row.push_back(consensus(t, p));
    consensus_rows.push_back(std::move(row));
  }
  j["entries"] = std::move(consensus_rows);
  nlohmann::json per_ranker = nlohmann::json::object();
  for (std::size_t r = 0; r < rankers_.size(); ++r) {
    nlohmann::json layer = nlohmann::json::array();
    for (std::size_t t = 0; t < num_terms(); ++t) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t p = 0; p < num_pairs(); ++p) row.push_back(entry(r, t, p));
      layer.push_back(std::move(row));
    }
    per_ranker[rankers_[r]] = std::move(layer);
  }
  j["per_ranker"] = std::move(per_ranker);
  return j;
}

PreferenceMatrix PreferenceMatrix::from_json(const nlohmann::json& j) {
  auto rankers = j.at("rankers").get<std::vector<std::string>>();
  std::vector<CandidateTerm> candidates;
  const auto& terms = j.at("terms");
  const auto& salience = j.at("salience");
  for (std::size_t t = 0; t < terms.size(); ++t)
    candidates.push_back({terms[t].get<std::string>(), salience.at(t).get<double>()});
  std::vector<PreferencePair> pairs;
  for (const auto& p : j.at("pairs"))
    pairs.push_back({p.at("upper").get<std::string>(), p.at("lower").get<std::string>(),
                     p.at("rank_gap").get<int>()});
  std::vector<std::int8_t> entries;
  for (const auto& r : rankers)
    for (const auto& row : j.at("per_ranker").at(r))
      for (const auto& v : row) entries.push_back(static_cast<std::int8_t>(v.get<int>()));
  return PreferenceMatrix(std::move(rankers), std::move(candidates), std::move(pairs),
                          std::move(entries));
}

PreferenceMatrix build_preference_matrix(const PositionalIndex& index,
                                         std::span<const RankerPtr> rankers,
                                         std::vector<CandidateTerm> candidates,
                                         std::vector<PreferencePair> pairs) {
  if (rankers.empty()) throw InvalidArgument("preference matrix needs >= 1 ranker");
  if (candidates.empty()) throw InvalidArgument("preference matrix needs candidates");
  if (pairs.empty()) throw InvalidArgument("preference matrix needs pairs");
  std::vector<std::string> names;
  for (const auto& r : rankers) names.push_back(r->name());
  std::vector<std::string> terms;
  for (const auto& c : candidates) terms.push_back(c.term);
  std::vector<kernels::DocPair> doc_pairs;
  for (const auto& p : pairs)
    doc_pairs.push_back({index.doc_number(p.upper), index.doc_number(p.lower)});
  auto entries = kernels::pair_signs(index, rankers, terms, doc_pairs);
  return PreferenceMatrix(std::move(names), std::move(candidates), std::move(pairs),
                          std::move(entries));
}

// Coverage explainers ----------------------------------------------------

namespace {

int layer_entry(const PreferenceMatrix& m, std::optional<std::size_t> ranker,
                std::size_t t, std::size_t p) {
  return ranker ? m.entry(*ranker, t, p) : m.consensus(t, p);
}

std::vector<std::size_t> canonical_indices(const std::vector<CandidateTerm>& c) {
  std::vector<std::size_t> idx(c.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (c[a].salience != c[b].salience) return c[a].salience > c[b].salience;
    return c[a].term < c[b].term;
  });
  return idx;
}

ListwiseExplanation coverage_greedy(const PreferenceMatrix& m,
                                    std::optional<std::size_t> ranker,
                                    std::size_t m_min, std::size_t m_max,
                                    std::string method) {
  if (m.num_terms() == 0 || m.num_pairs() == 0)
    throw InvalidArgument(method + ": empty preference matrix");
  if (m_min > m_max) throw InvalidArgument(method + ": m_min exceeds m_max");

  ListwiseExplanation out;
  out.method = std::move(method);
  const auto order = canonical_indices(m.candidates());
  const std::size_t n_pairs = m.num_pairs();

  bool all_zero = true;
  for (std::size_t t = 0; t < m.num_terms() && all_zero; ++t)
    for (std::size_t p = 0; p < n_pairs; ++p)
      if (layer_entry(m, ranker, t, p) != 0) {
        all_zero = false;
        break;
      }

  std::vector<int> sums(n_pairs, 0);
  std::vector<bool> used(m.num_terms(), false);
  std::size_t covered = 0;
  if (all_zero) {
    out.diagnostics.push_back("all preference entries are zero; coverage is 0");
    for (std::size_t k = 0; k < std::min(m_min, order.size()); ++k)
      out.terms.push_back(m.candidates()[order[k]].term);
  } else {
    while (out.terms.size() < m_max) {
      long best_gain = 0;
      std::optional<std::size_t> best;
      for (std::size_t t : order) {
        if (used[t]) continue;
        std::size_t cov = 0;
        for (std::size_t p = 0; p < n_pairs; ++p)
          if (sums[p] + layer_entry(m, ranker, t, p) > 0) ++cov;
        ++out.evaluations;
        const long gain = static_cast<long>(cov) - static_cast<long>(covered);
        if (!best || gain > best_gain) {
          best = t;
          best_gain = gain;
        }
      }
      if (!best) break;
      if (out.terms.size() >= m_min && best_gain <= 0) break;
      used[*best] = true;
      for (std::size_t p = 0; p < n_pairs; ++p)
        sums[p] += layer_entry(m, ranker, *best, p);
      covered = static_cast<std::size_t>(static_cast<long>(covered) + best_gain);
      out.terms.push_back(m.candidates()[*best].term);
      out.trace.push_back(static_cast<double>(covered));
    }
  }
  out.fidelity["coverage"] =
      static_cast<double>(covered) / static_cast<double>(n_pairs);
  return out;
}

}  // namespace

std::size_t covered_pairs(const PreferenceMatrix& matrix,
                          std::span<const std::size_t> terms,
                          std::optional<std::size_t> ranker) {
  std::size_t covered = 0;
  for (std::size_t p = 0; p < matrix.num_pairs(); ++p) {
    int sum = 0;
    for (std::size_t t : terms) sum += layer_entry(matrix, ranker, t, p);
    if (sum > 0) ++covered;
  }
  return covered;
}

ListwiseExplanation intent_exs_explain(const PreferenceMatrix& matrix,
                                       std::size_t m_min, std::size_t m_max) {
  if (matrix.rankers().size() != 1)
    throw InvalidArgument("intent_exs: matrix must hold exactly one ranker");
  return coverage_greedy(matrix, 0, m_min, m_max, "intent_exs");
}

ListwiseExplanation multiplex_explain(const PreferenceMatrix& matrix,
                                      std::size_t m_min, std::size_t m_max) {
  if (matrix.rankers().empty())
    throw InvalidArgument("multiplex: matrix has no rankers");
  return coverage_greedy(matrix, std::nullopt, m_min, m_max, "multiplex");
}

// Direct rank-approximation search --------------------------------------

std::string rbo_key(double p) { return "rbo@" + format_score(p); }

FidelityOracle::FidelityOracle(const PositionalIndex& index,
                               const Ranker& simple_ranker, const Query& query,
                               const RankedList& target, double p)
    : index_(index),
      ranker_(simple_ranker),
      query_(query),
      target_ids_(target.docids()),
      p_(p) {
  if (target_ids_.size() < 2)
    throw InvalidArgument("fidelity needs a ranked list with >= 2 entries");
}

Query FidelityOracle::expanded_query(std::span<const std::string> terms) const {
  std::vector<std::string> all = query_.distinct_terms();
  all.insert(all.end(), terms.begin(), terms.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return Query{query_.qid, query_.text, std::move(all)};
}

double FidelityOracle::operator()(std::span<const std::string> terms) const {
  const Query q = expanded_query(terms);
  const RankedList induced = rank(index_, ranker_, q,
                                  std::span<const std::string>(target_ids_),
                                  target_ids_.size());
  const auto ids = induced.docids();
  return rbo(ids, target_ids_, p_);
}

namespace {

void check_search_inputs(const RankedList& list,
                         const std::vector<CandidateTerm>& candidates) {
  if (list.size() < 2) throw InvalidArgument("listwise search needs |L| >= 2");
  if (candidates.empty()) throw InvalidArgument("listwise search: no candidates");
}

}  // namespace

ListwiseExplanation greedy_explain(const PositionalIndex& index,
                                   const Ranker& simple_ranker,
                                   const Query& query, const RankedList& list,
                                   std::vector<CandidateTerm> candidates,
                                   std::size_t m_max, double p) {
  check_search_inputs(list, candidates);
  candidates = canonical_order(std::move(candidates));
  const FidelityOracle fidelity(index, simple_ranker, query, list, p);

  ListwiseExplanation out;
  out.qid = query.qid;
  out.method = "greedy";
  double current = fidelity({});
  out.trace.push_back(current);
  std::vector<bool> used(candidates.size(), false);

  while (out.terms.size() < m_max) {
    std::vector<std::size_t> remaining;
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (!used[c]) remaining.push_back(c);
    if (remaining.empty()) break;
    const auto scores = kernels::map_indices(remaining.size(), [&](std::size_t i) {
      std::vector<std::string> trial = out.terms;
      trial.push_back(candidates[remaining[i]].term);
      return fidelity(trial);
    });
    out.evaluations += remaining.size();
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
      if (scores[i] > scores[best]) best = i;
    if (!(scores[best] > current)) break;
    used[remaining[best]] = true;
    out.terms.push_back(candidates[remaining[best]].term);
    current = scores[best];
    out.trace.push_back(current);
  }
  out.fidelity[rbo_key(p)] = current;
  return out;
}

namespace {

struct SearchNode {
  std::vector<std::size_t> set;  // sorted candidate indices (canonical order)
  double fidelity = 0.0;
};

// Higher fidelity, then fewer terms, then lexicographically smaller set.
bool better(const SearchNode& a, const SearchNode& b) {
  if (a.fidelity != b.fidelity) return a.fidelity > b.fidelity;
  if (a.set.size() != b.set.size()) return a.set.size() < b.set.size();
  return a.set < b.set;
}

}  // namespace

ListwiseExplanation bfs_explain(const PositionalIndex& index,
                                const Ranker& simple_ranker, const Query& query,
                                const RankedList& list,
                                std::vector<CandidateTerm> candidates,
                                std::size_t m_max, double p,
                                std::size_t eval_budget) {
  check_search_inputs(list, candidates);
  if (eval_budget < 1) throw InvalidArgument("bfs: eval_budget must be >= 1");
  candidates = canonical_order(std::move(candidates));
  const FidelityOracle fidelity(index, simple_ranker, query, list, p);
  auto terms_of = [&](const std::vector<std::size_t>& set) {
    std::vector<std::string> t;
    t.reserve(set.size());
    for (auto i : set) t.push_back(candidates[i].term);
    return t;
  };

  ListwiseExplanation out;
  out.qid = query.qid;
  out.method = "bfs";

  SearchNode best{{}, fidelity({})};
  auto worse = [](const SearchNode& a, const SearchNode& b) { return better(b, a); };
  std::priority_queue<SearchNode, std::vector<SearchNode>, decltype(worse)> frontier(worse);
  if (m_max > 0) frontier.push(best);
  std::set<std::vector<std::size_t>> visited{{}};

  // RBO cannot exceed 1, so a perfect node ends the search.
  while (!frontier.empty() && out.evaluations < eval_budget && best.fidelity < 1.0) {
    const SearchNode node = frontier.top();
    frontier.pop();
    std::vector<std::vector<std::size_t>> children;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (out.evaluations + children.size() >= eval_budget) break;
      if (std::binary_search(node.set.begin(), node.set.end(), c)) continue;
      std::vector<std::size_t> child = node.set;
      child.insert(std::upper_bound(child.begin(), child.end(), c), c);
      if (visited.insert(child).second) children.push_back(std::move(child));
    }
    const auto scores = kernels::map_indices(children.size(), [&](std::size_t i) {
      return fidelity(terms_of(children[i]));
    });
    out.evaluations += children.size();
    for (std::size_t i = 0; i < children.size(); ++i) {
      SearchNode child{std::move(children[i]), scores[i]};
      if (better(child, best)) best = child;
      if (child.set.size() < m_max) frontier.push(std::move(child));
    }
    out.trace.push_back(best.fidelity);
  }
  out.terms = terms_of(best.set);
  out.fidelity[rbo_key(p)] = best.fidelity;
  return out;
}

// Rendering --------------------------------------------------------------

namespace {

char stance(int v) { return v > 0 ? '+' : (v < 0 ? '-' : '0'); }

}  // namespace

std::string show_matrix(const PreferenceMatrix& matrix,
                        const std::optional<PreferencePair>& pair_filter) {
  std::size_t term_width = 4;
  for (const auto& c : matrix.candidates())
    term_width = std::max(term_width, c.term.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };

  std::string out;
  if (pair_filter) {
    std::optional<std::size_t> col;
    for (std::size_t p = 0; p < matrix.num_pairs(); ++p)
      if (matrix.pairs()[p].upper == pair_filter->upper &&
          matrix.pairs()[p].lower == pair_filter->lower)
        col = p;
    if (!col)
      throw NotFound("pair " + pair_filter->upper + " > " + pair_filter->lower +
                     " is not in the matrix");
    out += "pair: " + pair_filter->upper + " > " + pair_filter->lower + "\n";
    out += pad("term", term_width);
    for (const auto& r : matrix.rankers()) out += "  " + r;
    out += "  consensus\n";
    for (std::size_t t = 0; t < matrix.num_terms(); ++t) {
      out += pad(matrix.candidates()[t].term, term_width);
      for (std::size_t r = 0; r < matrix.rankers().size(); ++r)
        out += "  " + pad(std::string(1, stance(matrix.entry(r, t, *col))),
                          matrix.rankers()[r].size());
      out += "  " + std::string(1, stance(matrix.consensus(t, *col))) + "\n";
    }
    return out;
  }

  std::vector<std::string> labels;
  for (std::size_t p = 0; p < matrix.num_pairs(); ++p) {
    labels.push_back("P" + std::to_string(p + 1));
    const auto& pr = matrix.pairs()[p];
    out += labels.back() + ": " + pr.upper + " > " + pr.lower + "\n";
  }
  out += pad("term", term_width);
  for (const auto& l : labels) out += " " + l;
  out += "\n";
  for (std::size_t t = 0; t < matrix.num_terms(); ++t) {
    out += pad(matrix.candidates()[t].term, term_width);
    for (std::size_t p = 0; p < matrix.num_pairs(); ++p)
      out += " " + pad(std::string(1, stance(matrix.consensus(t, p))), labels[p].size());
    out += "\n";
  }
  return out;
}

nlohmann::json ListwiseExplanation::to_json() const {
  nlohmann::json j;
  j["qid"] = qid;
  j["method"] = method;
  j["terms"] = terms;
  j["fidelity"] = fidelity;
  j["evaluations"] = evaluations;
  j["diagnostics"] = diagnostics;
  j["trace"] = trace;
  return j;
}

ListwiseExplanation ListwiseExplanation::from_json(const nlohmann::json& j) {
  ListwiseExplanation e;
  e.qid = j.at("qid").get<std::string>();
  e.method = j.at("method").get<std::string>();
  e.terms = j.at("terms").get<std::vector<std::string>>();
  e.fidelity = j.at("fidelity").get<std::map<std::string, double>>();
  e.evaluations = j.at("evaluations").get<std::size_t>();
  if (j.contains("diagnostics"))
    e.diagnostics = j["diagnostics"].get<std::vector<std::string>>();
  if (j.contains("trace")) e.trace = j["trace"].get<std::vector<double>>();
  return e;
}

// Explainer classes ------------------------------------------------------

void ListwiseParams::validate() const {
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  if (n_candidates < 1) throw InvalidArgument("n_candidates must be >= 1");
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be >= 1");
  if (m_min > m_max) throw InvalidArgument("m_min must not exceed m_max");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
  if (eval_budget < 1) throw InvalidArgument("eval_budget must be >= 1");
  if (multiplex_rankers.empty())
    throw InvalidArgument("multiplex needs at least one simple ranker");
}

nlohmann::json params_to_json(const ListwiseParams& p) {
  return {{"top_k", p.top_k},
          {"n_candidates", p.n_candidates},
          {"n_pairs", p.n_pairs},
          {"sampling", to_string(p.sampling)},
          {"m_min", p.m_min},
          {"m_max", p.m_max},
          {"p", p.p},
          {"eval_budget", p.eval_budget},
          {"seed", p.seed},
          {"simple_ranker", p.simple_ranker},
          {"multiplex_rankers", p.multiplex_rankers},
          {"k1", p.ranker_params.bm25.k1},
          {"b", p.ranker_params.bm25.b},
          {"lambda", p.ranker_params.lmjm.lambda},
          {"mu", p.ranker_params.lmdir.mu}};
}

void apply_params(ListwiseParams& p, const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("parameters must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "top_k") p.top_k = v.get<std::size_t>();
    else if (key == "n_candidates") p.n_candidates = v.get<std::size_t>();
    else if (key == "n_pairs" || key == "pairs") p.n_pairs = v.get<std::size_t>();
    else if (key == "sampling" || key == "pair_sampling")
      p.sampling = parse_pair_sampling(v.get<std::string>());
    else if (key == "m_min" || key == "min_terms") p.m_min = v.get<std::size_t>();
    else if (key == "m_max" || key == "max_terms") p.m_max = v.get<std::size_t>();
    else if (key == "p") p.p = v.get<double>();
    else if (key == "eval_budget") p.eval_budget = v.get<std::size_t>();
    else if (key == "seed") p.seed = v.get<std::uint64_t>();
    else if (key == "simple_ranker") p.simple_ranker = v.get<std::string>();
    else if (key == "multiplex_rankers")
      p.multiplex_rankers = v.get<std::vector<std::string>>();
    else if (key == "k1") p.ranker_params.bm25.k1 = v.get<double>();
    else if (key == "b") p.ranker_params.bm25.b = v.get<double>();
    else if (key == "lambda") p.ranker_params.lmjm.lambda = v.get<double>();
    else if (key == "mu") p.ranker_params.lmdir.mu = v.get<double>();
    else throw InvalidArgument("unknown listwise parameter '" + key + "'");
  }
}

ListwiseExplainer::ListwiseExplainer(const PositionalIndex& index,
                                     ListwiseParams params)
    : index_(index), params_(std::move(params)) {
  params_.validate();
  simple_ranker_ = make_ranker(params_.simple_ranker, params_.ranker_params);
}

std::vector<CandidateTerm> ListwiseExplainer::candidates(const RankedList& list) const {
  return generate_candidates(index_, list, std::min(params_.top_k, list.size()),
                             params_.n_candidates);
}

PreferenceMatrix PairCoverageExplainer::matrix(const RankedList& list) const {
  Rng rng(params_.seed);
  auto pairs = sample_pairs(list, params_.sampling, params_.n_pairs, rng);
  const auto rankers = matrix_rankers();
  return build_preference_matrix(index_, rankers, candidates(list), std::move(pairs));
}

ListwiseExplanation PairCoverageExplainer::explain(const Query& query,
                                                   const RankedList& list) const {
  ListwiseExplanation out = select(matrix(list));
  out.qid = query.qid;
  const FidelityOracle fidelity(index_, *simple_ranker_, query, list, params_.p);
  out.fidelity[rbo_key(params_.p)] = fidelity(out.terms);
  return out;
}

std::vector<RankerPtr> MultiplexExplainer::matrix_rankers() const {
  std::vector<RankerPtr> out;
  for (const auto& name : params_.multiplex_rankers)
    out.push_back(make_ranker(name, params_.ranker_params));
  return out;
}

ListwiseExplanation MultiplexExplainer::select(const PreferenceMatrix& m) const {
  return multiplex_explain(m, params_.m_min, params_.m_max);
}

std::vector<RankerPtr> IntentExsExplainer::matrix_rankers() const {
  return {simple_ranker_};
}

ListwiseExplanation IntentExsExplainer::select(const PreferenceMatrix& m) const {
  return intent_exs_explain(m, params_.m_min, params_.m_max);
}

ListwiseExplanation GreedyExplainer::explain(const Query& query,
                                             const RankedList& list) const {
  return greedy_explain(index_, *simple_ranker_, query, list, candidates(list),
                        params_.m_max, params_.p);
}

ListwiseExplanation BfsExplainer::explain(const Query& query,
                                          const RankedList& list) const {
  return bfs_explain(index_, *simple_ranker_, query, list, candidates(list),
                     params_.m_max, params_.p, params_.eval_budget);
}

const std::vector<std::string>& listwise_method_names() {
  static const std::vector<std::string> names = {"multiplex", "intent_exs",
                                                 "greedy", "bfs"};
  return names;
}

std::unique_ptr<ListwiseExplainer> make_listwise_explainer(
    std::string_view method, const PositionalIndex& index, ListwiseParams params) {
  if (method == "multiplex")
    return std::make_unique<MultiplexExplainer>(index, std::move(params));
  if (method == "intent_exs" || method == "intentexs")
    return std::make_unique<IntentExsExplainer>(index, std::move(params));
  if (method == "greedy")
    return std::make_unique<GreedyExplainer>(index, std::move(params));
  if (method == "bfs") return std::make_unique<BfsExplainer>(index, std::move(params));
  throw NotFound("unknown listwise method '" + std::string(method) +
                 "' (valid: multiplex, intent_exs, greedy, bfs)");
}

BatchExplanations explain_all(const ListwiseExplainer& explainer,
                              const PositionalIndex& index,
                              std::span<const Topic> topics, const RunFile& runs) {
  struct Slot {
    std::optional<ListwiseExplanation> result;
    std::string error;
  };
  std::vector<Slot> slots(topics.size());
  const auto n = static_cast<std::int64_t>(topics.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const Topic& topic = topics[static_cast<std::size_t>(i)];
    Slot& slot = slots[static_cast<std::size_t>(i)];
    try {
      const RankedList* list = runs.find(topic.qid);
      if (!list) throw NotFound("no ranked list for qid " + topic.qid);
      const Query q = Query::parse(index, topic.qid, topic.text);
      slot.result = explainer.explain(q, *list);
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  }
  BatchExplanations out;
  for (std::size_t i = 0; i < topics.size(); ++i) {
    if (slots[i].result)
      out.explanations.emplace(topics[i].qid, std::move(*slots[i].result));
    else
      out.errors.emplace(topics[i].qid, std::move(slots[i].error));
  }
  return out;
}

}  // namespace irx
