// SPDX-License-Identifier: Apache-2.0
#include "citeneed/baselines/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "citeneed/corpus/text.hpp"
#include "citeneed/error.hpp"

namespace citeneed::baselines {

std::string_view to_string(VerbCategory c) {
  switch (c) {
    case VerbCategory::factive: return "factive";
    case VerbCategory::assertive: return "assertive";
    case VerbCategory::entailment: return "entailment";
    case VerbCategory::report: return "report";
  }
  return "report";
}

std::optional<VerbCategory> parse_category(std::string_view s) {
  for (VerbCategory c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

VerbLexicon load_lexicon(const std::filesystem::path& path, VerbCategory category) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open lexicon: " + path.string());
  VerbLexicon lex;
  lex.category = category;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string lemma = corpus::to_lower(corpus::normalize_space(line));
    if (!lemma.empty()) lex.lemmas.insert(lemma);
  }
  if (lex.lemmas.empty()) throw DataError("lexicon has no entries: " + path.string());
  return lex;
}

LexiconSet load_lexicon_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("lexicon directory not found: " + dir.string());
  LexiconSet set;
  for (VerbCategory c : kAllCategories) {
    const auto path = dir / (std::string(to_string(c)) + ".txt");
    if (std::filesystem::exists(path)) set[c] = load_lexicon(path, c);
  }
  return set;
}

namespace {

const std::map<std::string_view, std::string_view>& irregular() {
  static const std::map<std::string_view, std::string_view> table{
      {"am", "be"},           {"are", "be"},        {"began", "begin"},     {"begun", "begin"},
      {"believed", "believe"}, {"been", "be"},      {"brought", "bring"},   {"chose", "choose"},
      {"chosen", "choose"},   {"did", "do"},         {"does", "do"},         {"done", "do"},
      {"felt", "feel"},       {"forgot", "forget"},  {"forgotten", "forget"}, {"found", "find"},
      {"gave", "give"},       {"given", "give"},     {"got", "get"},         {"had", "have"},
      {"has", "have"},        {"held", "hold"},      {"is", "be"},           {"kept", "keep"},
      {"knew", "know"},       {"known", "know"},     {"led", "lead"},        {"left", "leave"},
      {"made", "make"},       {"meant", "mean"},     {"proven", "prove"},    {"ran", "run"},
      {"read", "read"},       {"said", "say"},       {"saw", "see"},         {"seen", "see"},
      {"shown", "show"},      {"sold", "sell"},      {"spoke", "speak"},     {"spoken", "speak"},
      {"stood", "stand"},     {"taken", "take"},     {"taught", "teach"},    {"thought", "think"},
      {"told", "tell"},       {"took", "take"},      {"understood", "understand"}, {"was", "be"},
      {"went", "go"},         {"were", "be"},        {"won", "win"},         {"wrote", "write"},
      {"written", "write"},
  };
  return table;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

bool is_consonant(char c) { return std::string_view("bcdfghjklmnpqrstvwxz").find(c) != std::string_view::npos; }

}  // namespace

std::vector<std::string> lemma_candidates(std::string_view token) {
  std::vector<std::string> out;
  auto push = [&](std::string c) {
    if (c.size() >= 2 && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
  };
  push(std::string(token));
  if (auto it = irregular().find(token); it != irregular().end()) push(std::string(it->second));

  auto stem_forms = [&](std::string_view stem) {
    push(std::string(stem));
    push(std::string(stem) + "e");
    if (stem.size() >= 3 && stem[stem.size() - 1] == stem[stem.size() - 2] && is_consonant(stem.back())) {
      push(std::string(stem.substr(0, stem.size() - 1)));
    }
  };

  if (ends_with(token, "ies") || ends_with(token, "ied")) {
    if (token.size() > 4) push(std::string(token.substr(0, token.size() - 3)) + "y");
  } else if (ends_with(token, "es")) {
    const auto stem = token.substr(0, token.size() - 2);
    push(std::string(stem));
    push(std::string(stem) + "e");
  } else if (ends_with(token, "s") && !ends_with(token, "ss")) {
    push(std::string(token.substr(0, token.size() - 1)));
  }
  if (ends_with(token, "ed") && token.size() > 4) stem_forms(token.substr(0, token.size() - 2));
  if (ends_with(token, "ing") && token.size() > 5) stem_forms(token.substr(0, token.size() - 3));
  return out;
}

}  // namespace citeneed::baselines
