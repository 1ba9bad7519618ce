// SPDX-License-Identifier: Apache-2.0
#include "citeneed/corpus/text.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace citeneed::corpus {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

struct Decoded {
  char32_t cp;
  std::size_t length;
};

Decoded decode_at(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {kReplacement, 1};
  }
  if (i + len > s.size()) return {kReplacement, 1};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {kReplacement, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == 0x85 ||
         c == 0xA0 || c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F);
}

char32_t lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return 'i';
    if (c == 0x178) return 0xFF;
    if ((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) return (c % 2 == 1) ? c + 1 : c;
    if (c == 0x138 || c == 0x149 || c == 0x17F) return c;
    return (c % 2 == 0) ? c + 1 : c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

constexpr std::array<std::string_view, 44> kAbbreviations = {
    "adm",  "apr",  "aug",  "capt", "cf",   "co",   "col",  "corp", "dec",  "dr",   "e.g",
    "etc",  "feb",  "fig",  "gen",  "gov",  "i.e",  "inc",  "jan",  "jr",   "jul",  "jun",
    "lt",   "ltd",  "maj",  "mar",  "mr",   "mrs",  "ms",   "mt",   "no",   "nov",  "oct",
    "p",    "pp",   "prof", "rev",  "sen",  "sep",  "sgt",  "sr",   "st",   "u.s",  "vs"};

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

/// Length of a closing quote/bracket at i, or 0.
std::size_t closer_length(std::string_view s, std::size_t i) {
  const char c = s[i];
  if (c == ')' || c == ']' || c == '"' || c == '\'') return 1;
  const Decoded d = decode_at(s, i);
  if (d.cp == 0x201D || d.cp == 0x2019 || d.cp == 0xBB) return d.length;
  return 0;
}

/// Length of a whitespace code point at i, or 0.
std::size_t space_length(std::string_view s, std::size_t i) {
  const Decoded d = decode_at(s, i);
  return is_space(d.cp) ? d.length : 0;
}

}  // namespace

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_at(text, i);
    append_utf8(out, lower(d.cp));
    i += d.length;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_at(text, i);
    i += d.length;
    if (is_space(d.cp)) {
      flush();
    } else if (is_punct(d.cp)) {
      flush();
      std::string p;
      append_utf8(p, d.cp);
      tokens.push_back(std::move(p));
    } else {
      append_utf8(current, lower(d.cp));
    }
  }
  flush();
  return tokens;
}

bool is_guarded_abbreviation(std::string_view lowercase_word) {
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lowercase_word) !=
         kAbbreviations.end();
}

std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view text) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  const std::size_t n = text.size();
  std::size_t i = 0;

  auto skip_space = [&](std::size_t pos) {
    while (pos < n) {
      const std::size_t w = space_length(text, pos);
      if (w == 0) break;
      pos += w;
    }
    return pos;
  };

  std::size_t start = skip_space(0);
  i = start;
  while (i < n) {
    if (!is_terminator(text[i])) {
      i += decode_at(text, i).length;
      continue;
    }
    const std::size_t run_begin = i;
    while (i < n && is_terminator(text[i])) ++i;
    std::size_t end = i;
    while (end < n) {
      const std::size_t c = closer_length(text, end);
      if (c == 0) break;
      end += c;
    }
    const bool at_boundary = end == n || space_length(text, end) > 0;
    if (!at_boundary) {
      i = end;
      continue;
    }
    if (i - run_begin == 1 && text[run_begin] == '.') {
      std::size_t w = run_begin;
      while (w > start && space_length(text, w - 1) == 0 &&
             static_cast<unsigned char>(text[w - 1]) < 0x80 && text[w - 1] != '(' &&
             text[w - 1] != '"' && text[w - 1] != '[') {
        --w;
      }
      if (is_guarded_abbreviation(to_lower(text.substr(w, run_begin - w)))) {
        i = end;
        continue;
      }
    }
    spans.emplace_back(start, end);
    start = skip_space(end);
    i = start;
  }
  if (start < n) {
    std::size_t end = n;
    while (end > start) {
      // Trailing whitespace is at most a few bytes; step back byte-wise over ASCII space.
      const unsigned char c = static_cast<unsigned char>(text[end - 1]);
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        --end;
      } else {
        break;
      }
    }
    if (end > start) spans.emplace_back(start, end);
  }
  return spans;
}

std::vector<std::string> segment_sentences(std::string_view paragraph_text) {
  std::vector<std::string> out;
  for (const auto& [b, e] : sentence_spans(paragraph_text)) {
    out.emplace_back(paragraph_text.substr(b, e - b));
  }
  return out;
}

std::string normalize_space(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (std::size_t i = 0; i < text.size();) {
    const Decoded d = decode_at(text, i);
    if (is_space(d.cp)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.append(text.substr(i, d.length));
    }
    i += d.length;
  }
  return out;
}

}  // namespace citeneed::corpus
