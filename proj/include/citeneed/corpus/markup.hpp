// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "citeneed/corpus/types.hpp"

namespace citeneed::corpus {

/// Parses the supported subset of wiki markup into sections, paragraphs and
/// statements.
///
/// Recognized:
///   - headings `= h =` through `====== h ======` on their own line;
///   - inline citations `<ref>...</ref>`, `<ref name=.../>`,
///     `<ref name=...>...</ref>`;
///   - citation-needed templates `{{citation needed}}`, `{{cn}}`, `{{fact}}`
///     (case-insensitive, parameters allowed);
///   - blank lines as paragraph breaks.
/// Cleaned but not interpreted: other templates and tables (dropped), HTML
/// comments (dropped), `[[target|label]]` links (label kept; File/Image/
/// Category links dropped), `[url label]` links (label kept), bold/italic
/// quotes and other HTML tags (tag dropped, content kept). List lines
/// (`*`, `#`, `:`, `;`) are skipped.
///
/// A citation marker belongs to the last sentence that starts before it, or
/// to the first sentence of the paragraph when it precedes all text.
/// Unbalanced markers produce a warning and are dropped; the surrounding
/// sentence is kept. Throws DataError("empty article") on blank input.
RawArticle parse_article(std::string_view markup, std::string article_id, QualityClass quality,
                         std::vector<std::string>* warnings = nullptr);

/// Inverse of parse_article for the supported subset: headings, paragraphs,
/// sentences with `<ref>source</ref>` and `{{citation needed}}` markers.
std::string render_article(const RawArticle& article);

}  // namespace citeneed::corpus
