// SPDX-License-Identifier: Apache-2.0
#include "citeneed/encoder/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "citeneed/corpus/text.hpp"
#include "citeneed/error.hpp"

namespace citeneed::encoder {

Vocabulary::Vocabulary() {
  add(kUnkToken);
  add(kPadToken);
}

std::size_t Vocabulary::add(const std::string& token) {
  auto [it, inserted] = index_.try_emplace(token, tokens_.size());
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::size_t Vocabulary::index(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

Vocabulary Vocabulary::from_statements(const std::vector<const corpus::Statement*>& statements) {
  std::set<std::string> distinct;
  for (const corpus::Statement* s : statements) distinct.insert(s->tokens.begin(), s->tokens.end());
  Vocabulary vocab;
  for (const std::string& t : distinct) vocab.add(t);
  return vocab;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool parse_double(std::string_view s, double& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void random_row(std::span<double> row, numerics::Rng& rng) {
  for (double& v : row) v = rng.uniform(-kUnknownInitRange, kUnknownInitRange);
}

}  // namespace

PretrainedVectors load_pretrained(const std::filesystem::path& path, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings: " + path.string());
  PretrainedVectors out;
  out.dim = dim;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (number == 1 && fields.size() == 2) {
      double a = 0, b = 0;
      if (parse_double(fields[0], a) && parse_double(fields[1], b)) continue;  // "count dim" header
    }
    if (fields.size() != dim + 1) {
      throw DataError(path.string() + ":" + std::to_string(number) + ": expected " + std::to_string(dim) +
                      " values, found " + std::to_string(fields.size() - 1));
    }
    std::vector<double> row(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!parse_double(fields[k + 1], row[k]) || !std::isfinite(row[k])) {
        throw DataError(path.string() + ":" + std::to_string(number) + ": bad value \"" +
                        std::string(fields[k + 1]) + "\"");
      }
    }
    out.vectors.try_emplace(std::string(fields[0]), std::move(row));
  }
  return out;
}

WordEmbeddings make_word_embeddings(Vocabulary vocab, std::size_t dim, const PretrainedVectors* pretrained,
                                    numerics::Rng& rng, bool train_pretrained) {
  if (pretrained && pretrained->dim != dim) {
    throw DataError("pretrained embeddings have dimension " + std::to_string(pretrained->dim) +
                    ", model expects " + std::to_string(dim));
  }
  WordEmbeddings emb;
  const std::size_t k = vocab.size();
  emb.matrix = ParamSlot("word_embeddings", Tensor({k, dim}));
  emb.trainable.assign(k, true);
  for (std::size_t i = 0; i < k; ++i) {
    auto row = emb.matrix.value.row(i);
    const std::vector<double>* vec = nullptr;
    if (pretrained && i != Vocabulary::kUnk && i != Vocabulary::kPad) {
      auto it = pretrained->vectors.find(vocab.token(i));
      if (it != pretrained->vectors.end()) vec = &it->second;
    }
    if (vec) {
      std::copy(vec->begin(), vec->end(), row.begin());
      emb.trainable[i] = train_pretrained;
    } else {
      random_row(row, rng);
    }
  }
  emb.vocab = std::move(vocab);
  return emb;
}

std::size_t pretrained_dim(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings: " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> parts;
    for (std::string f; fields >> f;) parts.push_back(f);
    if (parts.empty()) continue;
    if (parts.size() == 2) {
      try {
        std::size_t pos = 0;
        const unsigned long dim = std::stoul(parts[1], &pos);
        if (pos == parts[1].size()) return dim;
      } catch (const std::exception&) {
      }
    }
    return parts.size() - 1;
  }
  throw DataError("embeddings file is empty: " + path.string());
}

PretrainedVectors load_pretrained(const std::filesystem::path& path) { return load_pretrained(path, pretrained_dim(path)); }

void extend_word_embeddings(WordEmbeddings& emb, const std::vector<std::string>& tokens, numerics::Rng& rng,
                            const PretrainedVectors* pretrained, bool train_pretrained) {
  const std::size_t dim = emb.dim();
  if (pretrained && pretrained->dim != dim) {
    throw ShapeError("pretrained vectors have dim " + std::to_string(pretrained->dim) + ", embeddings have " +
                     std::to_string(dim));
  }
  std::vector<double> data(emb.matrix.value.data().begin(), emb.matrix.value.data().end());
  for (const std::string& t : tokens) {
    if (emb.vocab.contains(t)) continue;
    emb.vocab.add(t);
    if (pretrained) {
      if (const auto it = pretrained->vectors.find(t); it != pretrained->vectors.end()) {
        data.insert(data.end(), it->second.begin(), it->second.end());
        emb.trainable.push_back(train_pretrained);
        continue;
      }
    }
    std::vector<double> row(dim);
    random_row(row, rng);
    data.insert(data.end(), row.begin(), row.end());
    emb.trainable.push_back(true);
  }
  emb.matrix = ParamSlot(emb.matrix.name, Tensor({emb.vocab.size(), dim}, std::move(data)));
}

EmbeddedSequence embed_tokens(const std::vector<std::string>& tokens, const WordEmbeddings& emb,
                              std::size_t max_len) {
  if (max_len == 0) throw Error("embed_tokens: max_len must be positive");
  const std::size_t dim = emb.dim();
  EmbeddedSequence seq;
  seq.values = Tensor({max_len, dim});
  seq.mask.assign(max_len, 0);
  seq.rows.assign(max_len, Vocabulary::kPad);
  seq.length = std::min(tokens.size(), max_len);
  for (std::size_t t = 0; t < max_len; ++t) {
    if (t < seq.length) {
      seq.rows[t] = emb.vocab.index(tokens[t]);
      seq.mask[t] = 1;
    }
    const auto src = emb.matrix.value.row(seq.rows[t]);
    std::copy(src.begin(), src.end(), seq.values.row(t).begin());
  }
  return seq;
}

EmbeddedSequence embed_tokens(const corpus::Statement& statement, const WordEmbeddings& emb,
                              std::size_t max_len) {
  return embed_tokens(statement.tokens, emb, max_len);
}

std::string section_key(const std::string& heading, bool is_lead) {
  return is_lead ? std::string(SectionEmbeddings::kLeadKey) : corpus::to_lower(heading);
}

std::size_t SectionEmbeddings::row(const std::string& heading, bool is_lead) const {
  auto it = index.find(section_key(heading, is_lead));
  return it == index.end() ? kUnk : it->second;
}

SectionEmbeddings make_section_embeddings(const std::vector<const corpus::Statement*>& statements,
                                          std::size_t dim, numerics::Rng& rng) {
  std::set<std::string> keys;
  for (const corpus::Statement* s : statements) keys.insert(section_key(s->section_heading, s->is_lead));
  SectionEmbeddings out;
  std::size_t next = 1;
  for (const std::string& k : keys) out.index.emplace(k, next++);
  out.matrix = ParamSlot("section_embeddings", Tensor({next, dim}));
  for (std::size_t r = 0; r < next; ++r) random_row(out.matrix.value.row(r), rng);
  return out;
}

void extend_section_embeddings(SectionEmbeddings& sections, const std::vector<std::string>& keys,
                               numerics::Rng& rng) {
  const std::size_t dim = sections.dim();
  std::vector<double> data(sections.matrix.value.data().begin(), sections.matrix.value.data().end());
  for (const std::string& k : keys) {
    if (sections.index.count(k)) continue;
    sections.index.emplace(k, sections.index.size() + 1);
    std::vector<double> row(dim);
    random_row(row, rng);
    data.insert(data.end(), row.begin(), row.end());
  }
  sections.matrix = ParamSlot(sections.matrix.name, Tensor({sections.index.size() + 1, dim}, std::move(data)));
}

}  // namespace citeneed::encoder
