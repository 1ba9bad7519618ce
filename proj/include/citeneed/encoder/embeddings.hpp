// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "citeneed/corpus/types.hpp"
#include "citeneed/numerics/adam.hpp"
#include "citeneed/numerics/rng.hpp"
#include "citeneed/numerics/tensor.hpp"

namespace citeneed::encoder {

using numerics::Mask;
using numerics::ParamSlot;
using numerics::Tensor;

inline constexpr std::size_t kDefaultEmbeddingDim = 100;
inline constexpr std::size_t kDefaultMaxLen = 60;
inline constexpr double kUnknownInitRange = 0.25;

/// Token <-> row index. Rows 0 and 1 are reserved for <unk> and <pad>.
class Vocabulary {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kPad = 1;
  static constexpr const char* kUnkToken = "<unk>";
  static constexpr const char* kPadToken = "<pad>";

  Vocabulary();

  /// Index of `token`, adding it if new.
  std::size_t add(const std::string& token);
  /// Index of `token`, or kUnk.
  std::size_t index(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.count(token) != 0; }
  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

  /// Every distinct token of the statements, added in sorted order.
  static Vocabulary from_statements(const std::vector<const corpus::Statement*>& statements);

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> tokens_;
};

/// Pretrained vectors in the one-token-per-line text format
/// `token f1 f2 ... fD`. A leading `count dim` header line is skipped.
struct PretrainedVectors {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
};

/// Throws DataError with the line number when a row's width is not `dim`.
PretrainedVectors load_pretrained(const std::filesystem::path& path, std::size_t dim);

/// Width from the `count dim` header, else from the first row.
std::size_t pretrained_dim(const std::filesystem::path& path);

/// load_pretrained with the width taken from the file.
PretrainedVectors load_pretrained(const std::filesystem::path& path);

struct WordEmbeddings {
  Vocabulary vocab;
  ParamSlot matrix;             // vocab.size() x dim
  std::vector<bool> trainable;  // per row

  std::size_t dim() const { return matrix.value.cols(); }
};

/// Rows of tokens found in `pretrained` copy the pretrained vector and are
/// frozen unless `train_pretrained`. Every other row (including <unk> and
/// <pad>) is drawn uniformly from [-0.25, 0.25] in row order and is trainable.
WordEmbeddings make_word_embeddings(Vocabulary vocab, std::size_t dim, const PretrainedVectors* pretrained,
                                    numerics::Rng& rng, bool train_pretrained = false);

/// Appends rows for tokens not yet in the vocabulary, initialized the same way.
void extend_word_embeddings(WordEmbeddings& emb, const std::vector<std::string>& tokens, numerics::Rng& rng,
                            const PretrainedVectors* pretrained = nullptr, bool train_pretrained = false);

struct EmbeddedSequence {
  Tensor values;                  // max_len x dim
  Mask mask;                      // 1 for real tokens
  std::vector<std::size_t> rows;  // embedding row per position (kPad for padding)
  std::size_t length = 0;         // real tokens after truncation
};

/// Looks up each token (unknown -> <unk>), truncates at the tail and pads to
/// max_len with the <pad> row under mask 0.
EmbeddedSequence embed_tokens(const std::vector<std::string>& tokens, const WordEmbeddings& emb,
                              std::size_t max_len);
EmbeddedSequence embed_tokens(const corpus::Statement& statement, const WordEmbeddings& emb,
                              std::size_t max_len);

/// Section-name table. Key is "LEAD" for the lead section and the lowercase
/// heading otherwise; row 0 is the unknown-section row.
struct SectionEmbeddings {
  static constexpr std::size_t kUnk = 0;
  static constexpr const char* kLeadKey = "LEAD";

  std::map<std::string, std::size_t> index;
  ParamSlot matrix;  // (index.size() + 1) x dim

  std::size_t row(const std::string& heading, bool is_lead) const;
  std::size_t dim() const { return matrix.value.cols(); }
};

std::string section_key(const std::string& heading, bool is_lead);

/// Distinct section keys of the statements, sorted; rows uniform [-0.25, 0.25].
SectionEmbeddings make_section_embeddings(const std::vector<const corpus::Statement*>& statements,
                                          std::size_t dim, numerics::Rng& rng);

void extend_section_embeddings(SectionEmbeddings& sections, const std::vector<std::string>& keys,
                               numerics::Rng& rng);

}  // namespace citeneed::encoder
