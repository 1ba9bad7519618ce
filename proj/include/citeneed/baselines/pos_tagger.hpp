// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace citeneed::baselines {

enum class PosTag { NOUN, VERB, ADJ, ADV, PRON, DET, ADP, NUM, CONJ, PRT, PUNCT, X };
inline constexpr std::size_t kPosTagCount = 12;
inline constexpr std::array<PosTag, kPosTagCount> kAllPosTags = {
    PosTag::NOUN, PosTag::VERB, PosTag::ADJ, PosTag::ADV,  PosTag::PRON,  PosTag::DET,
    PosTag::ADP,  PosTag::NUM,  PosTag::CONJ, PosTag::PRT, PosTag::PUNCT, PosTag::X};

std::string_view to_string(PosTag t);
std::optional<PosTag> parse_pos_tag(std::string_view s);

/// Coarse tagger. Order of rules, first hit wins:
///   1. no letter or digit         -> PUNCT
///   2. digits (with , . - / %)    -> NUM
///   3. built-in closed-class and common-word lexicon
///   4. suffix rules (-ly ADV, -ing/-ed VERB, -tion/-ment/... NOUN,
///      -ous/-ful/-ive/... ADJ, -ize/-ise/-ify VERB)
///   5. anything else              -> X
/// Tokens are lowercased before lookup.
PosTag pos_tag(std::string_view token);
std::vector<PosTag> pos_tag(const std::vector<std::string>& tokens);

}  // namespace citeneed::baselines
