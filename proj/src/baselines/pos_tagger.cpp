// SPDX-License-Identifier: Apache-2.0
#include "citeneed/baselines/pos_tagger.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "citeneed/corpus/text.hpp"

namespace citeneed::baselines {

std::string_view to_string(PosTag t) {
  static constexpr std::array<std::string_view, kPosTagCount> names = {
      "NOUN", "VERB", "ADJ", "ADV", "PRON", "DET", "ADP", "NUM", "CONJ", "PRT", "PUNCT", "X"};
  return names[static_cast<std::size_t>(t)];
}

std::optional<PosTag> parse_pos_tag(std::string_view s) {
  for (PosTag t : kAllPosTags)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

namespace {

const std::unordered_map<std::string_view, PosTag>& lexicon() {
  static const auto table = [] {
    std::unordered_map<std::string_view, PosTag> m;
    auto add = [&m](PosTag tag, std::initializer_list<std::string_view> words) {
      for (auto w : words) m.emplace(w, tag);
    };
    add(PosTag::DET, {"the", "a", "an", "this", "that", "these", "those", "every", "each", "some", "any", "no",
                      "all", "both", "either", "neither", "another", "such", "many", "few", "several", "most",
                      "much", "more", "less"});
    add(PosTag::PRON, {"i",     "you",    "he",      "she",    "it",    "we",     "they",  "me",    "him",
                       "her",   "us",     "them",    "his",    "its",   "our",    "their", "my",    "your",
                       "who",   "whom",   "whose",   "which",  "what",  "himself", "herself", "itself",
                       "themselves", "someone", "something", "anyone", "everyone", "nothing", "one"});
    add(PosTag::ADP, {"in",     "on",      "at",     "by",      "for",     "with",   "about",  "against",
                      "between", "into",   "through", "during", "before",  "after",  "above",  "below",
                      "from",   "of",      "over",   "under",   "within",  "without", "upon",  "among",
                      "since",  "until",   "towards", "toward", "across",  "behind", "beyond", "near",
                      "despite", "via", "as", "per",    "than",    "like",    "around", "along"});
    add(PosTag::CONJ, {"and", "or", "but", "nor", "yet", "because", "although", "though", "while", "whereas",
                       "unless", "if", "whether"});
    add(PosTag::PRT, {"to", "'s", "'", "up", "off", "out"});
    add(PosTag::ADV, {"not", "n't", "very", "also", "often", "never", "always", "however", "then", "there",
                      "here", "now", "still", "already", "soon", "later", "again", "too", "only", "even",
                      "just", "well", "so", "almost", "ever", "thus", "perhaps", "once", "twice", "where",
                      "when", "why", "how", "further", "rather", "quite"});
    add(PosTag::NUM, {"zero", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
                      "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand", "million",
                      "billion"});
    add(PosTag::VERB, {"is",    "was",    "be",     "are",   "were",   "been",   "being",  "am",     "has",
                       "have",  "had",    "do",     "does",  "did",    "will",   "would",  "can",    "could",
                       "may",   "might",  "shall",  "should", "must",  "say",    "says",   "said",   "tell",
                       "told",  "think",  "thought", "know", "knew",   "known",  "make",   "made",   "take",
                       "took",  "taken",  "give",   "gave",  "given",  "go",     "went",   "become", "became",
                       "find",  "found",  "see",    "saw",   "seen",   "get",    "got",    "come",   "came",
                       "begin", "began",  "hold",   "held",  "write",  "wrote",  "written", "lead",  "led",
                       "claim", "claims", "argue",  "argues", "believe", "believes", "show", "shows",
                       "suggest", "suggests", "report", "reports", "state", "states", "win", "won"});
    add(PosTag::ADJ, {"new", "old", "good", "bad", "great", "large", "small", "big", "long", "short", "high",
                      "low", "early", "late", "first", "last", "other", "same", "own", "major", "main",
                      "important", "best", "former", "young", "able", "true", "false", "second",
                      "third", "next", "whole", "full", "common", "final", "local", "public", "private"});
    add(PosTag::NOUN, {"time", "year", "years", "people", "world", "city", "war", "life", "work",
                       "man", "woman", "men", "women", "day", "days", "part", "number", "team", "film",
                       "album", "song", "band", "book", "school", "river", "town", "family", "game", "king",
                       "church", "party", "house", "name", "area", "group", "season", "century", "law", "laws",
                       "court", "study", "studies", "research", "data"});
    return m;
  }();
  return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

bool any_suffix(std::string_view s, std::initializer_list<std::string_view> suffixes) {
  return std::any_of(suffixes.begin(), suffixes.end(), [&](std::string_view suf) { return ends_with(s, suf); });
}

bool is_number(std::string_view s) {
  bool digit = false;
  for (char c : s) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (std::string_view(",.-/%").find(c) == std::string_view::npos) {
      return false;
    }
  }
  return digit;
}

}  // namespace

PosTag pos_tag(std::string_view token) {
  if (std::none_of(token.begin(), token.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u >= 0x80;
      })) {
    return PosTag::PUNCT;
  }
  if (is_number(token)) return PosTag::NUM;
  const std::string lower = corpus::to_lower(token);
  if (auto it = lexicon().find(lower); it != lexicon().end()) return it->second;
  const std::string_view w = lower;
  if (any_suffix(w, {"ly"})) return PosTag::ADV;
  if (any_suffix(w, {"ing", "ed"})) return PosTag::VERB;
  if (any_suffix(w, {"tion", "tions", "sion", "ment", "ments", "ness", "ity", "ities", "ism", "ist", "ists",
                     "ship", "ance", "ence", "er", "ers", "or", "ors", "ian", "ians", "age", "hood", "dom"})) {
    return PosTag::NOUN;
  }
  if (any_suffix(w, {"ous", "ful", "ive", "able", "ible", "al", "ic", "ical", "less", "ish", "ary", "ant",
                     "ent"})) {
    return PosTag::ADJ;
  }
  if (any_suffix(w, {"ize", "ise", "ify", "izes", "ises", "ifies"})) return PosTag::VERB;
  return PosTag::X;
}

std::vector<PosTag> pos_tag(const std::vector<std::string>& tokens) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const std::string& t : tokens) tags.push_back(pos_tag(t));
  return tags;
}

}  // namespace citeneed::baselines
