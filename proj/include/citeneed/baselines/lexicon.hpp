// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace citeneed::baselines {

enum class VerbCategory { factive, assertive, entailment, report };
inline constexpr std::array<VerbCategory, 4> kAllCategories = {VerbCategory::factive, VerbCategory::assertive,
                                                               VerbCategory::entailment, VerbCategory::report};

std::string_view to_string(VerbCategory c);
std::optional<VerbCategory> parse_category(std::string_view s);

struct VerbLexicon {
  VerbCategory category = VerbCategory::report;
  std::set<std::string> lemmas;  // lowercase
};

/// One lexicon per category, in kAllCategories order. A category may be
/// empty.
struct LexiconSet {
  std::array<VerbLexicon, 4> lexicons{{{VerbCategory::factive, {}},
                                       {VerbCategory::assertive, {}},
                                       {VerbCategory::entailment, {}},
                                       {VerbCategory::report, {}}}};

  VerbLexicon& operator[](VerbCategory c) { return lexicons[static_cast<std::size_t>(c)]; }
  const VerbLexicon& operator[](VerbCategory c) const { return lexicons[static_cast<std::size_t>(c)]; }
};

/// One lemma per line, UTF-8. Text after '#' is a comment; blank lines are
/// ignored; lemmas are lowercased and trimmed. A file without any lemma is a
/// DataError.
VerbLexicon load_lexicon(const std::filesystem::path& path, VerbCategory category);

/// Loads `<dir>/factive.txt`, `assertive.txt`, `entailment.txt` and
/// `report.txt`; a missing file leaves that category empty.
LexiconSet load_lexicon_dir(const std::filesystem::path& dir);

/// Lemma candidates of a lowercase token, the token itself first, then:
///   irregular table   said -> say, thought -> think, ... (see source);
///   -ies, -ied        -> -y        (denies, denied -> deny);
///   -es               -> stem, stem + "e"   (argues -> argu, argue;
///                                            discusses -> discuss, discusse);
///   -s (not -ss)      -> stem                (claims -> claim);
///   -ed, -ing         -> stem, stem + "e", and the stem without a doubled
///                        final consonant     (stated -> stat, state;
///                                             admitted -> admitt, admit).
/// Candidates are distinct and at least two characters long.
std::vector<std::string> lemma_candidates(std::string_view token);

}  // namespace citeneed::baselines
