#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "irx/analysis.hpp"
#include "irx/error.hpp"
#include "irx/index.hpp"
#include "synthetic.hpp"

using namespace irx;

TEST(Porter, ReferenceVocabulary) {
  const std::pair<const char*, const char*> cases[] = {
      {"caresses", "caress"},   {"ponies", "poni"},         {"ties", "ti"},
      {"cats", "cat"},          {"feed", "feed"},           {"agreed", "agre"},
      {"plastered", "plaster"}, {"motoring", "motor"},      {"sing", "sing"},
      {"conflated", "conflat"}, {"troubled", "troubl"},     {"sized", "size"},
      {"hopping", "hop"},       {"falling", "fall"},        {"hissing", "hiss"},
      {"filing", "file"},       {"happy", "happi"},         {"sky", "sky"},
      {"relational", "relat"},  {"conditional", "condit"},  {"rational", "ration"},
      {"digitizer", "digit"},   {"conformabli", "conform"}, {"radicalli", "radic"},
      {"differentli", "differ"}, {"vietnamization", "vietnam"},
      {"predication", "predic"}, {"operator", "oper"},      {"feudalism", "feudal"},
      {"decisiveness", "decis"}, {"hopefulness", "hope"},   {"callousness", "callous"},
      {"formaliti", "formal"},  {"sensibiliti", "sensibl"}, {"triplicate", "triplic"},
      {"formative", "form"},    {"electrical", "electr"},   {"goodness", "good"},
      {"revival", "reviv"},     {"allowance", "allow"},     {"inference", "infer"},
      {"airliner", "airlin"},   {"adjustable", "adjust"},   {"defensible", "defens"},
      {"replacement", "replac"}, {"adoption", "adopt"},     {"communism", "commun"},
      {"activate", "activ"},    {"effective", "effect"},    {"bowdlerize", "bowdler"},
      {"probate", "probat"},    {"cease", "ceas"},          {"controll", "control"},
      {"roll", "roll"},         {"generalization", "gener"}, {"everyday", "everydai"},
      {"temperament", "tempera"}, {"people", "peopl"},
  };
  for (const auto& [in, out] : cases) EXPECT_EQ(porter_stem(in), out) << in;
}

TEST(Porter, LogiRuleMeasuresStemWithL) {
  EXPECT_EQ(porter_stem("biology"), "biolog");
  EXPECT_EQ(porter_stem("archaeology"), "archaeolog");
}

TEST(Porter, NonLetterWordsUnchanged) {
  EXPECT_EQ(porter_stem("6"), "6");
  EXPECT_EQ(porter_stem("covid19"), "covid19");
  EXPECT_EQ(porter_stem("is"), "is");
}

TEST(Tokenize, TableTwoStems) {
  EXPECT_EQ(tokenize("Exons definition BIOLOGY", AnalyzerConfig{}),
            (std::vector<std::string>{"exon", "definit", "biolog"}));
}

TEST(Tokenize, EmptyAndStopwords) {
  EXPECT_TRUE(tokenize("", AnalyzerConfig{}).empty());
  AnalyzerConfig only_the{true, false, {"the"}};
  EXPECT_TRUE(tokenize("the the the", only_the).empty());
  EXPECT_TRUE(tokenize("  ,;!  ", AnalyzerConfig{}).empty());
}

TEST(Tokenize, SplitsOnNonAlphanumeric) {
  EXPECT_EQ(tokenize("SANUK: eat-together, 6.00 pm", AnalyzerConfig::plain()),
            (std::vector<std::string>{"sanuk", "eat", "together", "6", "00", "pm"}));
}

TEST(Tokenize, NonAsciiBytesAreWordCharacters) {
  EXPECT_EQ(tokenize("caf\xc3\xa9 au lait", AnalyzerConfig::plain()),
            (std::vector<std::string>{"caf\xc3\xa9", "au", "lait"}));
}

TEST(Tokenize, StopwordsRemovedBeforeStemming) {
  // "was" is a stopword; its stem "wa" is not.
  AnalyzerConfig config;
  EXPECT_EQ(tokenize("It was raining", config), (std::vector<std::string>{"rain"}));
}

TEST(Tokenize, IdempotentWithoutStemming) {
  const auto docs = irx::testing::synthetic_corpus(20, 30, 3, 12, 5);
  AnalyzerConfig config{true, false, default_stopwords()};
  for (const auto& d : docs) {
    const auto once = tokenize(d.text, config);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    EXPECT_EQ(tokenize(joined, config), once);
  }
}

TEST(Index, SingleDocumentCounts) {
  const std::vector<Document> docs = {{"d1", "a b a"}};
  const auto index = build_index(docs, AnalyzerConfig::plain());
  EXPECT_EQ(index.num_docs(), 1u);
  EXPECT_EQ(index.df("a"), 1u);
  EXPECT_EQ(index.cf("a"), 2u);
  EXPECT_EQ(index.doc_length("d1"), 3);
  const auto pos = index.positions("a", "d1");
  EXPECT_EQ(std::vector<std::uint32_t>(pos.begin(), pos.end()),
            (std::vector<std::uint32_t>{0, 2}));
  EXPECT_TRUE(index.positions("zzz", "d1").empty());
  EXPECT_THROW(index.positions("a", "nope"), NotFound);
}

TEST(Index, EmptyCorpus) {
  const auto index = build_index({}, AnalyzerConfig{});
  EXPECT_EQ(index.num_docs(), 0u);
  EXPECT_EQ(index.avgdl(), 0.0);
  EXPECT_EQ(index.vocabulary_size(), 0u);
}

TEST(Index, TwoIdenticalDocs) {
  const std::vector<Document> docs = {{"d1", "x"}, {"d2", "x"}};
  const auto index = build_index(docs, AnalyzerConfig::plain());
  EXPECT_EQ(index.df("x"), 2u);
  EXPECT_EQ(index.cf("x"), 2u);
  EXPECT_DOUBLE_EQ(index.avgdl(), 1.0);
}

TEST(Index, RejectsBadDocids) {
  const std::vector<Document> dup = {{"d1", "x"}, {"d1", "y"}};
  try {
    build_index(dup, AnalyzerConfig{});
    FAIL() << "duplicate accepted";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("d1"), std::string::npos);
  }
  const std::vector<Document> empty_id = {{"", "x"}};
  EXPECT_THROW(build_index(empty_id, AnalyzerConfig{}), InvalidArgument);
  const std::vector<Document> spaced = {{"a b", "x"}};
  EXPECT_THROW(build_index(spaced, AnalyzerConfig{}), InvalidArgument);
}

TEST(Index, StatisticsAreConsistent) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto index = irx::testing::synthetic_index(30, 40, 0, 25, seed);
    std::uint64_t sum_cf = 0;
    for (const auto& [term, entry] : index.terms()) {
      sum_cf += entry.cf;
      EXPECT_EQ(index.df(term), entry.postings.size());
      std::uint64_t cf = 0;
      for (const auto& p : entry.postings) {
        cf += p.positions.size();
        for (std::size_t i = 1; i < p.positions.size(); ++i)
          EXPECT_LT(p.positions[i - 1], p.positions[i]);
      }
      EXPECT_EQ(cf, entry.cf);
    }
    std::uint64_t sum_len = 0;
    for (std::uint32_t d = 0; d < index.num_docs(); ++d)
      sum_len += static_cast<std::uint64_t>(index.doc_length(index.docid(d)));
    EXPECT_EQ(sum_cf, sum_len);
    EXPECT_EQ(sum_len, index.total_tokens());
  }
}

TEST(Index, SerializationRoundTripIsBitEqual) {
  const auto docs = irx::testing::synthetic_corpus(25, 30, 1, 20, 3);
  const auto a = build_index(docs, AnalyzerConfig{});
  const auto b = build_index(docs, AnalyzerConfig{});
  std::ostringstream sa, sb;
  a.save(sa);
  b.save(sb);
  EXPECT_EQ(sa.str(), sb.str());

  std::istringstream in(sa.str());
  const auto loaded = PositionalIndex::load(in);
  std::ostringstream sc;
  loaded.save(sc);
  EXPECT_EQ(sc.str(), sa.str());
  EXPECT_EQ(loaded.num_docs(), a.num_docs());
  EXPECT_EQ(loaded.vocabulary_size(), a.vocabulary_size());
  EXPECT_DOUBLE_EQ(loaded.avgdl(), a.avgdl());
  EXPECT_EQ(loaded.analyzer(), a.analyzer());
  for (const auto& [term, entry] : a.terms()) EXPECT_EQ(loaded.cf(term), entry.cf);
}

TEST(Index, LoadRejectsGarbage) {
  std::istringstream in("not an index\n");
  EXPECT_THROW(PositionalIndex::load(in), ParseError);
}

TEST(Corpus, JsonlParsing) {
  std::istringstream in(
      "{\"docid\":\"a\",\"text\":\"hello world\"}\n\n{\"docid\":\"b\",\"text\":\"x\"}\n");
  const auto docs = read_corpus_jsonl(in);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[1].docid, "b");
}

TEST(Corpus, JsonlErrorsCarryLineNumbers) {
  std::istringstream bad("{\"docid\":\"a\",\"text\":\"ok\"}\n{\"docid\":\"b\"}\n");
  try {
    read_corpus_jsonl(bad);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream broken("{oops\n");
  EXPECT_THROW(read_corpus_jsonl(broken), ParseError);
}
