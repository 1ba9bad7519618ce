// SPDX-License-Identifier: Apache-2.0
#include "citeneed/corpus/markup.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "citeneed/corpus/text.hpp"
#include "citeneed/error.hpp"

namespace citeneed::corpus {

namespace {

// Placeholders left in the flattened text where a marker stood.
constexpr char kRefMark = '\x01';
constexpr char kNeedMark = '\x02';

constexpr std::array<std::string_view, 4> kCitationNeededNames = {"citation needed", "cn", "fact",
                                                                  "citation-needed"};
constexpr std::array<std::string_view, 4> kDroppedLinkPrefixes = {"file:", "image:", "category:",
                                                                  "media:"};

bool starts_with_ci(std::string_view s, std::size_t i, std::string_view prefix) {
  if (i + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[i + k])) != prefix[k]) return false;
  }
  return true;
}

std::size_t find_ci(std::string_view s, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= s.size(); ++i) {
    if (starts_with_ci(s, i, needle)) return i;
  }
  return std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

/// Index one past the closing delimiter matching the opener at `i`, with
/// nesting, or npos when unbalanced.
std::size_t match_nested(std::string_view s, std::size_t i, std::string_view open, std::string_view close) {
  int depth = 0;
  while (i < s.size()) {
    if (s.compare(i, open.size(), open) == 0) {
      ++depth;
      i += open.size();
    } else if (s.compare(i, close.size(), close) == 0) {
      --depth;
      i += close.size();
      if (depth == 0) return i;
    } else {
      ++i;
    }
  }
  return std::string_view::npos;
}

class Flattener {
 public:
  explicit Flattener(std::vector<std::string>* warnings) : warnings_(warnings) {}

  std::string run(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) i = step(s, i, out);
    return out;
  }

 private:
  void warn(std::string message) {
    if (warnings_) warnings_->push_back(std::move(message));
  }

  std::size_t step(std::string_view s, std::size_t i, std::string& out) {
    const char c = s[i];
    if (c == kRefMark || c == kNeedMark) return i + 1;

    if (s.compare(i, 4, "<!--") == 0) {
      const std::size_t end = s.find("-->", i + 4);
      if (end == std::string_view::npos) {
        warn("unterminated comment; dropped to end of article");
        return s.size();
      }
      return end + 3;
    }

    if (starts_with_ci(s, i, "<ref") && i + 4 < s.size() &&
        (s[i + 4] == '>' || s[i + 4] == '/' || s[i + 4] == ' ' || s[i + 4] == '\t' || s[i + 4] == '\n')) {
      const std::size_t tag_end = s.find('>', i);
      if (tag_end == std::string_view::npos) {
        warn("unterminated <ref tag; dropped");
        return i + 4;
      }
      if (s[tag_end - 1] == '/') {
        out.push_back(kRefMark);
        return tag_end + 1;
      }
      const std::size_t close = find_ci(s, "</ref", tag_end + 1);
      if (close == std::string_view::npos) {
        warn("unbalanced <ref> without </ref>; opening tag dropped");
        return tag_end + 1;
      }
      const std::size_t close_end = s.find('>', close);
      out.push_back(kRefMark);
      return close_end == std::string_view::npos ? s.size() : close_end + 1;
    }

    if (starts_with_ci(s, i, "</ref")) {
      warn("stray </ref> dropped");
      const std::size_t close_end = s.find('>', i);
      return close_end == std::string_view::npos ? s.size() : close_end + 1;
    }

    if (s.compare(i, 2, "{{") == 0) {
      const std::size_t end = match_nested(s, i, "{{", "}}");
      if (end == std::string_view::npos) {
        warn("unbalanced {{ dropped");
        return i + 2;
      }
      std::string_view inner = s.substr(i + 2, end - i - 4);
      std::string name(trim(inner.substr(0, inner.find('|'))));
      name = to_lower(name);
      std::replace(name.begin(), name.end(), '_', ' ');
      if (std::find(kCitationNeededNames.begin(), kCitationNeededNames.end(), name) !=
          kCitationNeededNames.end()) {
        out.push_back(kNeedMark);
      }
      return end;
    }

    if (s.compare(i, 2, "{|") == 0) {
      const std::size_t end = match_nested(s, i, "{|", "|}");
      if (end == std::string_view::npos) {
        warn("unbalanced table {| dropped");
        return i + 2;
      }
      return end;
    }

    if (s.compare(i, 2, "[[") == 0) {
      const std::size_t end = match_nested(s, i, "[[", "]]");
      if (end == std::string_view::npos) {
        warn("unbalanced [[ dropped");
        return i + 2;
      }
      std::string_view inner = s.substr(i + 2, end - i - 4);
      for (std::string_view prefix : kDroppedLinkPrefixes) {
        if (starts_with_ci(inner, 0, prefix)) return end;
      }
      const std::size_t bar = inner.rfind('|');
      out += run(bar == std::string_view::npos ? inner : inner.substr(bar + 1));
      return end;
    }

    if (c == '[' && (s.compare(i + 1, 7, "http://") == 0 || s.compare(i + 1, 8, "https://") == 0)) {
      const std::size_t end = s.find(']', i);
      if (end != std::string_view::npos) {
        std::string_view inner = s.substr(i + 1, end - i - 1);
        const std::size_t space = inner.find(' ');
        if (space != std::string_view::npos) out += run(inner.substr(space + 1));
        return end + 1;
      }
    }

    if (s.compare(i, 2, "''") == 0) {
      std::size_t j = i;
      while (j < s.size() && s[j] == '\'') ++j;
      return j;
    }

    if (c == '<' && i + 1 < s.size() &&
        (std::isalpha(static_cast<unsigned char>(s[i + 1])) ||
         (s[i + 1] == '/' && i + 2 < s.size() && std::isalpha(static_cast<unsigned char>(s[i + 2]))))) {
      const std::size_t end = s.find('>', i);
      if (end != std::string_view::npos) return end + 1;
    }

    out.push_back(c);
    return i + 1;
  }

  std::vector<std::string>* warnings_;
};

struct Marker {
  std::size_t offset;
  char kind;
};

Paragraph build_paragraph(std::string_view raw, const std::string& article_id, const std::string& heading,
                          bool is_lead) {
  std::string stripped;
  std::vector<Marker> markers;
  for (char c : raw) {
    if (c == kRefMark || c == kNeedMark) {
      markers.push_back({stripped.size(), c});
    } else {
      stripped.push_back(c);
    }
  }

  Paragraph paragraph;
  const auto spans = sentence_spans(stripped);
  if (spans.empty()) return paragraph;

  paragraph.statements.resize(spans.size());
  for (std::size_t k = 0; k < spans.size(); ++k) {
    Statement& st = paragraph.statements[k];
    st.article_id = article_id;
    st.section_heading = heading;
    st.is_lead = is_lead;
    st.text = normalize_space(std::string_view(stripped).substr(spans[k].first, spans[k].second - spans[k].first));
    st.tokens = tokenize(st.text);
  }
  for (const Marker& m : markers) {
    std::size_t owner = 0;
    for (std::size_t k = 0; k < spans.size(); ++k) {
      if (spans[k].first < m.offset) owner = k;
    }
    Statement& st = paragraph.statements[owner];
    if (m.kind == kRefMark) {
      st.has_inline_citation = true;
    } else {
      st.has_citation_needed_tag = true;
    }
  }
  paragraph.has_any_citation = std::any_of(paragraph.statements.begin(), paragraph.statements.end(),
                                           [](const Statement& s) { return s.has_inline_citation; });
  return paragraph;
}

bool heading_text(std::string_view line, std::string& heading) {
  line = trim(line);
  if (line.size() < 3 || line.front() != '=' || line.back() != '=') return false;
  std::size_t lead = 0, tail = 0;
  while (lead < line.size() && line[lead] == '=') ++lead;
  while (tail < line.size() && line[line.size() - 1 - tail] == '=') ++tail;
  const std::size_t level = std::min({lead, tail, std::size_t{6}});
  if (line.size() <= 2 * level) return false;
  std::string inner(line.substr(level, line.size() - 2 * level));
  inner.erase(std::remove_if(inner.begin(), inner.end(),
                             [](char c) { return c == kRefMark || c == kNeedMark; }),
              inner.end());
  heading = normalize_space(inner);
  return true;
}

}  // namespace

RawArticle parse_article(std::string_view markup, std::string article_id, QualityClass quality,
                         std::vector<std::string>* warnings) {
  if (trim(markup).empty()) throw DataError("empty article");

  std::string text(markup);
  text.erase(std::remove(text.begin(), text.end(), '\r'), text.end());
  const std::string flat = Flattener(warnings).run(text);

  RawArticle article;
  article.article_id = std::move(article_id);
  article.title = article.article_id;
  article.quality_class = quality;
  article.sections.push_back(Section{});

  std::string buffer;
  auto flush = [&] {
    if (trim(buffer).empty()) {
      buffer.clear();
      return;
    }
    Section& section = article.sections.back();
    const bool is_lead = article.sections.size() == 1;
    Paragraph p = build_paragraph(buffer, article.article_id, section.heading, is_lead);
    if (!p.statements.empty()) section.paragraphs.push_back(std::move(p));
    buffer.clear();
  };

  std::size_t pos = 0;
  while (pos <= flat.size()) {
    std::size_t nl = flat.find('\n', pos);
    if (nl == std::string::npos) nl = flat.size();
    std::string_view line = std::string_view(flat).substr(pos, nl - pos);
    pos = nl + 1;

    std::string heading;
    const std::string_view trimmed = trim(line);
    if (trimmed.empty()) {
      flush();
    } else if (heading_text(line, heading)) {
      flush();
      article.sections.push_back(Section{heading, {}});
    } else if (trimmed.front() == '*' || trimmed.front() == '#' || trimmed.front() == ':' ||
               trimmed.front() == ';') {
      flush();
    } else {
      if (!buffer.empty()) buffer.push_back(' ');
      buffer.append(line);
    }
  }
  flush();
  return article;
}

std::string render_article(const RawArticle& article) {
  std::string out;
  for (std::size_t s = 0; s < article.sections.size(); ++s) {
    const Section& section = article.sections[s];
    if (s > 0) out += "== " + section.heading + " ==\n\n";
    for (const Paragraph& p : section.paragraphs) {
      for (std::size_t k = 0; k < p.statements.size(); ++k) {
        const Statement& st = p.statements[k];
        if (k) out.push_back(' ');
        out += st.text;
        if (st.has_inline_citation) out += "<ref>source</ref>";
        if (st.has_citation_needed_tag) out += "{{citation needed}}";
      }
      out += "\n\n";
    }
  }
  return out;
}

}  // namespace citeneed::corpus
