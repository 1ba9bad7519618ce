// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "citeneed/corpus/corpus_io.hpp"
#include "citeneed/error.hpp"
#include "citeneed/util/digest.hpp"

namespace citeneed::models {

namespace {

constexpr char kMagic[8] = {'C', 'I', 'T', 'E', 'N', 'E', 'E', 'D'};
constexpr std::size_t kDigestSize = 32;

class Writer {
 public:
  void bytes(const void* p, std::size_t n) { out_.append(static_cast<const char*>(p), n); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::string& buffer() { return out_; }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view data, std::string origin) : data_(data), origin_(std::move(origin)) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint64_t n = u64();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  bool at_end() const { return pos_ == data_.size(); }
  [[noreturn]] void fail(const std::string& what) const { throw CheckpointError(origin_ + ": " + what); }

 private:
  void need(std::uint64_t n) const {
    if (n > data_.size() - pos_) fail("unexpected end of checkpoint data");
  }
  std::string_view data_;
  std::string origin_;
  std::size_t pos_ = 0;
};

nlohmann::ordered_json config_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["embed_dim"] = c.dims.embed_dim;
  j["hidden_dim"] = c.dims.hidden_dim;
  j["max_len"] = c.dims.max_len;
  j["learning_rate"] = c.adam.learning_rate;
  j["beta1"] = c.adam.beta1;
  j["beta2"] = c.adam.beta2;
  j["epsilon"] = c.adam.epsilon;
  j["seed"] = c.seed;
  j["split"] = split_flag(c.split);
  j["train_pretrained"] = c.train_pretrained;
  return j;
}

TrainConfig config_from_json(const std::string& text, const Reader& r) {
  try {
    const auto j = nlohmann::json::parse(text);
    TrainConfig c;
    c.epochs = j.at("epochs").get<std::size_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.dims.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.dims.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    c.dims.max_len = j.at("max_len").get<std::size_t>();
    c.adam.learning_rate = j.at("learning_rate").get<double>();
    c.adam.beta1 = j.at("beta1").get<double>();
    c.adam.beta2 = j.at("beta2").get<double>();
    c.adam.epsilon = j.at("epsilon").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    const auto split = parse_split_flag(j.at("split").get<std::string>());
    if (!split) r.fail("bad split in config snapshot");
    c.split = *split;
    c.train_pretrained = j.at("train_pretrained").get<bool>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    r.fail(std::string("bad config snapshot: ") + e.what());
  }
}

void write_encoder_body(Writer& w, const StatementEncoder& enc, const std::vector<const ParamSlot*>& slots) {
  w.u64(slots.size());
  for (const ParamSlot* s : slots) {
    w.str(s->name);
    w.u64(s->value.rank());
    for (std::size_t e : s->value.shape()) w.u64(e);
    for (double v : s->value.data()) w.f64(v);
  }
  const auto& tokens = enc.words.vocab.tokens();
  w.u64(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    w.str(tokens[i]);
    w.u8(enc.words.trainable[i] ? 1 : 0);
  }
  w.u64(enc.sections.index.size());
  for (const auto& [key, row] : enc.sections.index) {
    w.str(key);
    w.u64(row);
  }
}

std::string serialize(CheckpointKind kind, const StatementEncoder& enc, std::size_t out_width,
                      const std::vector<const ParamSlot*>& slots, const TrainConfig& config,
                      const std::array<double, corpus::kReasonCount>* weights) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kCheckpointVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.str(variant_name(enc.variant));
  w.u64(enc.embed_dim());
  w.u64(enc.hidden_dim());
  w.u64(enc.max_len);
  w.u64(out_width);
  w.str(config_json(config).dump());
  write_encoder_body(w, enc, slots);
  if (weights)
    for (double v : *weights) w.f64(v);
  const auto digest = util::sha256(w.buffer());
  w.bytes(digest.data(), digest.size());
  return std::move(w.buffer());
}

struct Header {
  CheckpointKind kind;
  Variant variant;
  ModelDims dims;
  std::size_t out_width;
  TrainConfig config;
};

// Checks magic, checksum and version; returns a reader positioned after the
// version field over the checksummed part.
Reader open_verified(const std::string& bytes, const std::string& origin) {
  if (bytes.size() < sizeof kMagic + 4 + kDigestSize || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    if (bytes.size() >= sizeof kMagic && std::memcmp(bytes.data(), kMagic, sizeof kMagic) == 0) {
      throw CheckpointError(origin + ": checkpoint integrity check failed (file truncated)");
    }
    throw CheckpointError(origin + ": not a checkpoint file");
  }
  const std::string_view body(bytes.data(), bytes.size() - kDigestSize);
  const auto digest = util::sha256(body);
  if (std::memcmp(digest.data(), bytes.data() + body.size(), kDigestSize) != 0) {
    throw CheckpointError(origin + ": checkpoint integrity check failed (checksum mismatch)");
  }
  Reader r(body, origin);
  for (std::size_t i = 0; i < sizeof kMagic; ++i) r.u8();
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    r.fail("unsupported checkpoint format_version: found " + std::to_string(version) + ", expected " +
           std::to_string(kCheckpointVersion));
  }
  return r;
}

Header read_header(Reader& r) {
  Header h;
  const std::uint8_t kind = r.u8();
  if (kind > 1) r.fail("unknown checkpoint kind " + std::to_string(kind));
  h.kind = static_cast<CheckpointKind>(kind);
  const std::string name = r.str();
  const auto v = parse_variant_name(name);
  if (!v) r.fail("unknown variant \"" + name + "\"");
  h.variant = *v;
  h.dims.embed_dim = r.u64();
  h.dims.hidden_dim = r.u64();
  h.dims.max_len = r.u64();
  h.out_width = r.u64();
  h.config = config_from_json(r.str(), r);
  return h;
}

struct StoredTensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;
};

// Reads tensors, vocabulary and section map into a skeleton encoder whose
// parameter names are fixed by the variant, then fills values by name.
template <typename Model>
void read_body(Reader& r, const Header& h, Model& model, std::size_t out_width, const char* dense_prefix) {
  std::map<std::string, StoredTensor> tensors;
  const std::uint64_t n_tensors = r.u64();
  for (std::uint64_t i = 0; i < n_tensors; ++i) {
    std::string name = r.str();
    StoredTensor t;
    const std::uint64_t rank = r.u64();
    if (rank > 4) r.fail("tensor " + name + " has rank " + std::to_string(rank));
    std::uint64_t size = 1;
    for (std::uint64_t k = 0; k < rank; ++k) {
      t.shape.push_back(r.u64());
      size *= t.shape.back();
    }
    if (size > (std::uint64_t{1} << 32)) r.fail("tensor " + name + " is implausibly large");
    t.data.resize(size);
    for (double& v : t.data) v = r.f64();
    if (!tensors.emplace(name, std::move(t)).second) r.fail("duplicate tensor " + name);
  }

  StatementEncoder& enc = model.encoder;
  enc.variant = h.variant;
  enc.max_len = h.dims.max_len;
  const std::uint64_t n_vocab = r.u64();
  std::vector<bool> trainable;
  for (std::uint64_t i = 0; i < n_vocab; ++i) {
    const std::string token = r.str();
    if (enc.words.vocab.add(token) != i) r.fail("vocabulary row " + std::to_string(i) + " is out of order");
    trainable.push_back(r.u8() != 0);
  }
  enc.words.trainable = std::move(trainable);
  const std::uint64_t n_sections = r.u64();
  for (std::uint64_t i = 0; i < n_sections; ++i) {
    std::string key = r.str();
    enc.sections.index.emplace(std::move(key), r.u64());
  }

  const std::size_t e = h.dims.embed_dim, hid = h.dims.hidden_dim;
  enc.words.matrix = ParamSlot("word_embeddings", Tensor({enc.words.vocab.size(), e}));
  if (has_section(h.variant)) {
    enc.sections.matrix = ParamSlot("section_embeddings", Tensor({enc.sections.index.size() + 1, e}));
    enc.section_gru = GruParams::zeros(e, hid, "section_gru");
  }
  enc.forward_gru = GruParams::zeros(e, hid, "gru_fwd");
  if (has_attention(h.variant)) {
    enc.backward_gru = GruParams::zeros(e, hid, "gru_bwd");
    enc.attention = encoder::AttentionParams::zeros(2 * hid, 2 * hid, "attention");
  }
  model.dense = DenseLayer::zeros(enc.output_dim(), out_width, dense_prefix);

  for (ParamSlot* slot : model.slots()) {
    auto it = tensors.find(slot->name);
    if (it == tensors.end()) r.fail("missing tensor " + slot->name);
    if (it->second.shape != slot->value.shape()) {
      r.fail("tensor " + slot->name + " has shape " + numerics::shape_string(it->second.shape) + ", expected " +
             numerics::shape_string(slot->value.shape()));
    }
    *slot = ParamSlot(slot->name, Tensor(it->second.shape, std::move(it->second.data)));
    tensors.erase(it);
  }
  if (!tensors.empty()) r.fail("unexpected tensor " + tensors.begin()->first);
  try {
    model.validate();
  } catch (const Error& err) {
    r.fail(err.what());
  }
}

void write_bytes(const std::string& bytes, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing checkpoint: " + path.string());
}

void expect_kind(const Header& h, CheckpointKind want, const std::string& origin) {
  if (h.kind == want) return;
  if (want == CheckpointKind::reason) {
    throw CheckpointKindError(origin + ": holds a citation-need model; fine-tune it with reason-train to get a "
                                       "reason model");
  }
  throw CheckpointKindError(origin + ": holds a citation-reason model, not a citation-need model");
}

}  // namespace

std::string serialize_checkpoint(const NeedModel& model, const TrainConfig& config) {
  model.validate();
  return serialize(CheckpointKind::need, model.encoder, 1, model.slots(), config, nullptr);
}

std::string serialize_checkpoint(const ReasonModel& model, const TrainConfig& config) {
  model.validate();
  return serialize(CheckpointKind::reason, model.encoder, corpus::kReasonCount, model.slots(), config,
                   &model.class_weights);
}

void save_checkpoint(const NeedModel& model, const TrainConfig& config, const std::filesystem::path& path) {
  write_bytes(serialize_checkpoint(model, config), path);
}

void save_checkpoint(const ReasonModel& model, const TrainConfig& config, const std::filesystem::path& path) {
  write_bytes(serialize_checkpoint(model, config), path);
}

NeedCheckpoint parse_need_checkpoint(const std::string& bytes, const std::string& origin) {
  Reader r = open_verified(bytes, origin);
  const Header h = read_header(r);
  expect_kind(h, CheckpointKind::need, origin);
  if (h.out_width != 1) r.fail("need checkpoint with output width " + std::to_string(h.out_width));
  NeedCheckpoint cp;
  cp.config = h.config;
  read_body(r, h, cp.model, 1, "need_dense");
  if (!r.at_end()) r.fail("trailing bytes before checksum");
  return cp;
}

ReasonCheckpoint parse_reason_checkpoint(const std::string& bytes, const std::string& origin) {
  Reader r = open_verified(bytes, origin);
  const Header h = read_header(r);
  expect_kind(h, CheckpointKind::reason, origin);
  if (h.out_width != corpus::kReasonCount) r.fail("reason checkpoint with output width " + std::to_string(h.out_width));
  ReasonCheckpoint cp;
  cp.config = h.config;
  read_body(r, h, cp.model, corpus::kReasonCount, "reason_dense");
  for (double& w : cp.model.class_weights) w = r.f64();
  if (!r.at_end()) r.fail("trailing bytes before checksum");
  return cp;
}

NeedCheckpoint load_need_checkpoint(const std::filesystem::path& path) {
  return parse_need_checkpoint(corpus::read_file(path), path.string());
}

ReasonCheckpoint load_reason_checkpoint(const std::filesystem::path& path) {
  return parse_reason_checkpoint(corpus::read_file(path), path.string());
}

CheckpointKind checkpoint_kind(const std::filesystem::path& path) {
  const std::string bytes = corpus::read_file(path);
  Reader r = open_verified(bytes, path.string());
  return read_header(r).kind;
}

}  // namespace citeneed::models
