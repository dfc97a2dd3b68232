#include "irx/analysis.hpp"

#include <cctype>

namespace irx {

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a",       "about",   "above",  "after",   "again",   "against",
      "all",     "am",      "an",     "and",     "any",     "are",
      "as",      "at",      "be",     "because", "been",    "before",
      "being",   "below",   "between", "both",   "but",     "by",
      "can",     "could",   "did",    "do",      "does",    "doing",
      "down",    "during",  "each",   "few",     "for",     "from",
      "further", "had",     "has",    "have",    "having",  "he",
      "her",     "here",    "hers",   "herself", "him",     "himself",
      "his",     "how",     "i",      "if",      "in",      "into",
      "is",      "it",      "its",    "itself",  "just",    "me",
      "more",    "most",    "my",     "myself",  "no",      "nor",
      "not",     "now",     "of",     "off",     "on",      "once",
      "only",    "or",      "other",  "our",     "ours",    "ourselves",
      "out",     "over",    "own",    "same",    "she",     "should",
      "so",      "some",    "such",   "than",    "that",    "the",
      "their",   "theirs",  "them",   "themselves", "then", "there",
      "these",   "they",    "this",   "those",   "through", "to",
      "too",     "under",   "until",  "up",      "very",    "was",
      "we",      "were",    "what",   "when",    "where",   "which",
      "while",   "who",     "whom",   "why",     "will",    "with",
      "would",   "you",     "your",   "yours",   "yourself", "yourselves",
  };
  return words;
}

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const AnalyzerConfig& config) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           !is_word_byte(static_cast<unsigned char>(text[i])))
      ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i])))
      ++i;
    if (start == i) continue;
    std::string token(text.substr(start, i - start));
    if (config.lowercase)
      for (char& c : token)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (config.stopwords.contains(token)) continue;
    if (config.stem) token = porter_stem(token);
    out.push_back(std::move(token));
  }
  return out;
}

}  // namespace irx
