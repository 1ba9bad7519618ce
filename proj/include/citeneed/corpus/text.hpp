// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace citeneed::corpus {

/// Splits text into lowercase tokens.
///
/// The input is decoded as UTF-8 (invalid bytes become U+FFFD). Unicode
/// whitespace separates tokens and is dropped. Every punctuation code point
/// (ASCII punctuation, Latin-1 punctuation, the General Punctuation block,
/// CJK punctuation) is emitted as a token of its own. Everything else is
/// word material. Lowercasing covers ASCII, Latin-1, Latin Extended-A, Greek
/// and Cyrillic capitals; other scripts pass through unchanged.
std::vector<std::string> tokenize(std::string_view text);

/// Lowercase version of `text` under the same mapping `tokenize` uses.
std::string to_lower(std::string_view text);

/// Sentence boundaries as [begin, end) byte offsets, trimmed of whitespace.
///
/// A sentence ends after a run of '.', '?' or '!' plus any closing quotes or
/// brackets, when followed by whitespace or end of text. A lone '.' does not
/// end a sentence when the word before it is on the abbreviation guard list
/// (see `is_guarded_abbreviation`). Text after the last terminator forms a
/// final sentence.
std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view text);

std::vector<std::string> segment_sentences(std::string_view paragraph_text);

/// True for lowercase words such as "dr", "mr", "e.g", "etc" that take a
/// period without ending the sentence.
bool is_guarded_abbreviation(std::string_view lowercase_word);

/// Collapses whitespace runs to a single space and trims both ends.
std::string normalize_space(std::string_view text);

}  // namespace citeneed::corpus
