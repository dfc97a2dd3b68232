#pragma once

// Hand-derived axiom cases. Each builds a small index holding d1, d2 and any
// filler documents, then checks preference(query, d1, d2).

#include <string>
#include <vector>

#include "irx/axioms.hpp"
#include "irx/index.hpp"

namespace irx::testing {

struct AxiomCase {
  std::string axiom;
  std::string query;
  std::string d1;
  std::string d2;
  int expected;
  std::vector<std::string> filler = {};
};

inline const std::vector<AxiomCase>& axiom_cases() {
  static const std::vector<AxiomCase> cases = {
      // TFC1: comparable lengths, more query-term occurrences wins.
      {"TFC1", "a", "a a a x", "a x y z", +1},
      {"TFC1", "a", "a x y z", "a a a x", -1},
      {"TFC1", "a", "a x", "a y", 0},
      {"TFC1", "a", "a a a", "a x x x x x x x x x", 0},  // lengths not comparable
      // TFC3: same total tf, more distinct matched terms wins.
      {"TFC3", "a b", "a b x x", "a a x x", +1},
      {"TFC3", "a b", "a a x x", "a b x x", -1},
      {"TFC3", "a b", "a b x x", "b a y y", 0},
      {"TFC3", "a b", "a b b x", "a a x x", 0},  // totals differ
      // TDC: rarer query terms weigh more.
      {"TDC", "a b", "a x x x", "b x x x", +1, {"b z", "b y", "b w"}},
      {"TDC", "a b", "b x x x", "a x x x", -1, {"b z", "b y", "b w"}},
      {"TDC", "a b", "a x", "a y", 0},
      // LNC1: identical query tf, shorter wins.
      {"LNC1", "a", "a x", "a x y z", +1},
      {"LNC1", "a", "a x y z", "a x", -1},
      {"LNC1", "a", "a x", "a a", 0},
      {"LNC1", "a", "x y", "x y z", 0},  // no query term at all
      // TF_LNC: extra length explained by extra query terms.
      {"TF_LNC", "a", "a a x", "a x", +1},
      {"TF_LNC", "a", "a x", "a a x", -1},
      {"TF_LNC", "a", "a a x x x x", "a x", 0},
      // LB1: strict superset of matched terms with comparable shared tf.
      {"LB1", "a b", "a b x", "a x x", +1},
      {"LB1", "a b", "a x x", "a b x", -1},
      {"LB1", "a b", "a x", "b x", 0},
      {"LB1", "a b", "a b x", "a a a a x", 0},  // shared tf not comparable
      // PROX1: smaller mean pairwise average distance wins.
      {"PROX1", "a b", "a b x x x", "a x x x b", +1},
      {"PROX1", "a b", "a x x x b", "a b x x x", -1},
      {"PROX1", "a b", "a b", "b a", 0},
      // PROX2: smaller covering window wins.
      {"PROX2", "a b", "a b x x", "a x x b", +1},
      {"PROX2", "a b", "a x x b", "a b x x", -1},
      {"PROX2", "a b", "a b x", "x a b", 0},
      {"PROX2", "a b", "a x x x b", "a x", +1},  // more matched terms first
      // PROX3: earlier full-query phrase wins; absent is +inf.
      {"PROX3", "a b", "a b x x", "x x a b", +1},
      {"PROX3", "a b", "x x a b", "a b x x", -1},
      {"PROX3", "a b", "b a x", "x b a", 0},
      {"PROX3", "a b", "x a b", "a x b", +1},
      // PROX4: smaller minimum distance between different query terms wins.
      {"PROX4", "a b", "a x b", "a x x x b", +1},
      {"PROX4", "a b", "a x x x b", "a x b", -1},
      {"PROX4", "a b", "a b", "b a", 0},
      // PROX5: smaller mean nearest-other-term distance wins.
      {"PROX5", "a b", "a b x x", "a x x b", +1},
      {"PROX5", "a b", "a x x b", "a b x x", -1},
      {"PROX5", "a b", "a x", "b x", 0},
      // AND: containing every query term wins.
      {"AND", "a b", "a b", "a x", +1},
      {"AND", "a b", "a x", "a b", -1},
      {"AND", "a b", "a x", "b x", 0},
      {"AND", "a b", "a b x", "b a y y", 0},
  };
  return cases;
}

inline PositionalIndex case_index(const AxiomCase& c) {
  std::vector<Document> docs = {{"d1", c.d1}, {"d2", c.d2}};
  for (std::size_t i = 0; i < c.filler.size(); ++i)
    docs.push_back({"f" + std::to_string(i), c.filler[i]});
  return build_index(docs, AnalyzerConfig::plain());
}

inline int run_case(const AxiomCase& c) {
  const auto index = case_index(c);
  const auto q = Query::parse(index, "q", c.query);
  return value(axiom_preference(c.axiom, index, q, "d1", "d2"));
}

}  // namespace irx::testing
