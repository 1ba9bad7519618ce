// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "citeneed/corpus/corpus_io.hpp"
#include "citeneed/error.hpp"
#include "citeneed/models/checkpoint.hpp"
#include "citeneed/models/need_model.hpp"
#include "citeneed/models/reason_model.hpp"
#include "citeneed/numerics/grad_check.hpp"
#include "citeneed/numerics/ops.hpp"
#include "citeneed/util/digest.hpp"
#include "synthetic.hpp"

using namespace citeneed;
using namespace citeneed::models;
using corpus::LabeledInstance;
using corpus::ReasonInstance;

namespace {

constexpr Variant kVariants[] = {Variant::rnn_w, Variant::rnn_ws, Variant::rnna_w, Variant::rnna_ws};

corpus::Statement statement(std::vector<std::string> tokens, std::string heading = "History", bool lead = false) {
  corpus::Statement s;
  s.article_id = "a";
  s.section_heading = std::move(heading);
  s.is_lead = lead;
  s.tokens = std::move(tokens);
  return s;
}

std::vector<LabeledInstance> micro_batch() {
  std::vector<LabeledInstance> out(3);
  out[0].statement = statement({"the", "river", "floods"}, "", true);
  out[0].label = corpus::Label::positive;
  out[1].statement = statement({"she", "said", "that", "it", "rained", "."}, "Career");
  out[1].label = corpus::Label::negative;
  out[2].statement = statement({"unknown", "words", "here", "too"}, "History");
  out[2].label = corpus::Label::positive;
  return out;
}

NeedModel small_model(Variant v, const std::vector<LabeledInstance>& data, std::uint64_t seed = 3) {
  std::vector<const corpus::Statement*> st;
  for (std::size_t i = 0; i + 1 < data.size(); ++i) st.push_back(&data[i].statement);  // last one stays unknown
  numerics::Rng rng(seed);
  return make_need_model(v, ModelDims{4, 3, 8}, st, nullptr, false, rng);
}

std::vector<const LabeledInstance*> pointers(const std::vector<LabeledInstance>& d) {
  std::vector<const LabeledInstance*> out;
  for (const auto& x : d) out.push_back(&x);
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "citeneed_test_models";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("variant spellings") {
  for (Variant v : kVariants) {
    CHECK(parse_variant_name(variant_name(v)) == v);
    CHECK(parse_variant_flag(variant_flag(v)) == v);
  }
  CHECK(parse_variant_flag("rnn-a-s") == Variant::rnna_ws);
  CHECK_FALSE(parse_variant_flag("lstm"));
}

TEST_CASE("representation sizes follow the variant") {
  const auto data = micro_batch();
  CHECK(small_model(Variant::rnn_w, data).encoder.output_dim() == 3);
  CHECK(small_model(Variant::rnn_ws, data).encoder.output_dim() == 6);
  CHECK(small_model(Variant::rnna_w, data).encoder.output_dim() == 6);
  CHECK(small_model(Variant::rnna_ws, data).encoder.output_dim() == 9);
}

TEST_CASE("zero dense layer gives probability one half") {
  const auto data = micro_batch();
  for (Variant v : kVariants) {
    NeedModel m = small_model(v, data);
    m.dense.w.value.fill(0.0);
    for (const auto& inst : data) CHECK(forward_need(m, inst.statement) == 0.5);
  }
}

TEST_CASE("forward_need is pure and matches the manual pipeline") {
  const auto data = micro_batch();
  const NeedModel m = small_model(Variant::rnna_ws, data);
  const auto& s = data[1].statement;
  const double p = forward_need(m, s);
  CHECK(forward_need(m, s) == p);

  const auto seq = encoder::embed_tokens(s, m.encoder.words, m.encoder.max_len);
  const Tensor states =
      encoder::bidirectional_encode(seq.values, seq.mask, m.encoder.forward_gru, m.encoder.backward_gru);
  const auto att = encoder::global_attention(states, seq.mask, m.encoder.attention);
  const Tensor sec = encoder::encode_section(s.section_heading, s.is_lead, m.encoder.sections, m.encoder.section_gru);
  std::vector<double> rep(att.context.data().begin(), att.context.data().end());
  rep.insert(rep.end(), sec.data().begin(), sec.data().end());
  double logit = m.dense.b.value[0];
  for (std::size_t j = 0; j < rep.size(); ++j) logit += m.dense.w.value(0, j) * rep[j];
  CHECK(p == doctest::Approx(1.0 / (1.0 + std::exp(-logit))).epsilon(1e-15));
}

TEST_CASE("variant and feature mismatches are typed errors") {
  const auto data = micro_batch();
  const NeedModel with_s = small_model(Variant::rnn_ws, data);
  CHECK_THROWS_AS(forward_need(with_s, {"a", "b", "c"}, std::nullopt), VariantError);
  const NeedModel vanilla = small_model(Variant::rnn_w, data);
  CHECK(forward_need(vanilla, {"a", "b", "c"}, std::nullopt) > 0.0);
  CHECK_THROWS_AS(predict_with_attention(vanilla, data[0].statement), VariantError);
  CHECK_THROWS_AS(forward_need(vanilla, {}, std::nullopt), DataError);
}

TEST_CASE("attention prediction aligns with tokens") {
  const auto data = micro_batch();
  const NeedModel m = small_model(Variant::rnna_w, data);
  const auto one = predict_with_attention(m, statement({"river"}));
  REQUIRE(one.weights.size() == 1);
  CHECK(one.weights[0] == 1.0);

  numerics::Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> tokens;
    const std::size_t n = 1 + rng.below(12);
    for (std::size_t i = 0; i < n; ++i) tokens.push_back(i % 2 ? "river" : "tok" + std::to_string(rng.below(5)));
    const auto pred = predict_with_attention(m, statement(tokens));
    CHECK(pred.weights.size() == std::min<std::size_t>(n, 8));
    CHECK(pred.tokens.size() == pred.weights.size());
    double sum = 0;
    for (double w : pred.weights) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(pred.probability == forward_need(m, statement(tokens)));
  }
}

TEST_CASE("whole-model gradients pass the finite-difference check") {
  const auto data = micro_batch();
  const auto batch = pointers(data);
  for (Variant v : kVariants) {
    NeedModel m = small_model(v, data);
    for (ParamSlot* s : m.slots()) s->zero_grad();
    need_batch_gradient(m, batch);
    const auto report = numerics::grad_check([&] { return need_batch_loss(m, batch); }, m.slots());
    INFO(variant_name(v), " worst ", report.worst_slot, "[", report.worst_index, "] ", report.max_relative_error);
    CHECK(report.passed);
    CHECK(report.coordinates_checked > 100);
  }
}

TEST_CASE("frozen pretrained rows receive no gradient") {
  const auto data = micro_batch();
  encoder::PretrainedVectors pre;
  pre.dim = 4;
  pre.vectors["river"] = {0.1, 0.2, 0.3, 0.4};
  std::vector<const corpus::Statement*> st{&data[0].statement};
  numerics::Rng rng(1);
  NeedModel m = make_need_model(Variant::rnna_ws, ModelDims{4, 3, 8}, st, &pre, false, rng);
  const std::size_t row = m.encoder.words.vocab.index("river");
  CHECK_FALSE(m.encoder.words.trainable[row]);
  need_batch_gradient(m, pointers(data));
  for (double g : m.encoder.words.matrix.grad.row(row)) CHECK(g == 0.0);
  bool any = false;
  for (double g : m.encoder.words.matrix.grad.row(m.encoder.words.vocab.index("floods"))) any = any || g != 0.0;
  CHECK(any);
}

TEST_CASE("evaluate_need agrees with direct metric computation") {
  const auto data = micro_batch();
  NeedModel m = small_model(Variant::rnn_w, data);
  m.dense.w.value.fill(0.0);
  m.dense.b.value[0] = 10.0;  // everything positive
  const auto report = evaluate_need(m, data);
  CHECK(report.per_class[1].recall == 1.0);
  CHECK(report.per_class[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(report.per_class[0].precision_undefined);

  analysis::ConfusionMatrix cm({"negative", "positive"});
  for (const auto& inst : data) cm.add(inst.label == corpus::Label::positive, forward_need(m, inst.statement) >= 0.5);
  const auto direct = analysis::precision_recall_f1(cm);
  CHECK(direct.macro_f1 == report.macro_f1);
  CHECK(direct.confusion == report.confusion);
  CHECK_THROWS_AS(evaluate_need(m, std::span<const LabeledInstance>()), DataError);
}

TEST_CASE("train_need rejects degenerate corpora") {
  TrainConfig cfg;
  cfg.dims = {4, 3, 8};
  CHECK_THROWS_AS(train_need({}, cfg, Variant::rnn_w), DataError);
  auto data = micro_batch();
  for (auto& d : data) d.label = corpus::Label::positive;
  CHECK_THROWS_AS(train_need(data, cfg, Variant::rnn_w), DataError);
  cfg.epochs = 0;
  CHECK_THROWS(train_need(micro_batch(), cfg, Variant::rnn_w));
}

TEST_CASE("training is deterministic and full-batch loss does not increase") {
  testing::PlantedCueOptions o;
  o.n_sentences = 200;
  o.vocab_size = 60;
  o.n_cues = 4;
  const auto data = testing::planted_cue_corpus(o);
  TrainConfig cfg;
  cfg.dims = {6, 5, 16};
  cfg.epochs = 8;
  cfg.batch_size = 1000;  // full batch
  cfg.seed = 5;
  const auto a = train_need(data, cfg, Variant::rnna_ws);
  const auto b = train_need(data, cfg, Variant::rnna_ws);
  CHECK(serialize_checkpoint(a.model, cfg) == serialize_checkpoint(b.model, cfg));
  REQUIRE(a.history.size() == 8);
  for (std::size_t e = 1; e < a.history.size(); ++e) CHECK(a.history[e].train_loss <= a.history[e - 1].train_loss);

  cfg.seed = 6;
  CHECK(serialize_checkpoint(train_need(data, cfg, Variant::rnna_ws).model, cfg) !=
        serialize_checkpoint(a.model, cfg));
}

TEST_CASE("split modes") {
  const auto half = make_split(10, SplitMode::half, 1);
  CHECK(half.train.size() == 5);
  CHECK(half.eval.size() == 5);
  CHECK(half.validation.empty());
  const auto three = make_split(10, SplitMode::three_way, 1);
  CHECK(three.train.size() == 5);
  CHECK(three.eval.size() == 3);
  CHECK(three.validation.size() == 2);
  std::vector<std::size_t> all = three.train;
  all.insert(all.end(), three.eval.begin(), three.eval.end());
  all.insert(all.end(), three.validation.begin(), three.validation.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < 10; ++i) CHECK(all[i] == i);
  CHECK(parse_split_flag("50/30/20") == SplitMode::three_way);
  CHECK_FALSE(parse_split_flag("60/40"));
}

TEST_CASE("checkpoint round trip gives identical forward outputs") {
  const auto data = micro_batch();
  TrainConfig cfg;
  cfg.dims = {4, 3, 8};
  for (Variant v : kVariants) {
    const NeedModel m = small_model(v, data, 17);
    const auto path = temp_path(std::string(variant_flag(v)) + ".ckpt");
    save_checkpoint(m, cfg, path);
    const NeedCheckpoint back = load_need_checkpoint(path);
    CHECK(back.model.variant() == v);
    CHECK(back.config.dims.hidden_dim == 3);
    numerics::Rng rng(8);
    for (int i = 0; i < 10; ++i) {
      std::vector<std::string> tokens{"the", "tok" + std::to_string(rng.below(3)), "river", "said"};
      const auto s = statement(tokens, i % 2 ? "Career" : "Elsewhere");
      CHECK(forward_need(back.model, s) == forward_need(m, s));
    }
    CHECK(serialize_checkpoint(back.model, back.config) == serialize_checkpoint(m, cfg));
  }
}

TEST_CASE("checkpoint errors") {
  const auto data = micro_batch();
  TrainConfig cfg;
  cfg.dims = {4, 3, 8};
  const NeedModel m = small_model(Variant::rnna_ws, data);
  const std::string bytes = serialize_checkpoint(m, cfg);

  CHECK_THROWS_WITH_AS(parse_need_checkpoint(bytes.substr(0, bytes.size() / 2), "t"),
                       doctest::Contains("integrity"), CheckpointError);
  std::string flipped = bytes;
  flipped[bytes.size() / 2] ^= 1;
  CHECK_THROWS_WITH_AS(parse_need_checkpoint(flipped, "t"), doctest::Contains("integrity"), CheckpointError);
  CHECK_THROWS_AS(parse_need_checkpoint("garbage", "t"), CheckpointError);

  CHECK_THROWS_AS(parse_reason_checkpoint(bytes, "t"), CheckpointKindError);

  // Same payload under another version, with a valid checksum.
  std::string body = bytes.substr(0, bytes.size() - 32);
  body[8] = 2;
  const auto digest = util::sha256(body);
  const std::string v2 = body + std::string(reinterpret_cast<const char*>(digest.data()), 32);
  CHECK_THROWS_WITH_AS(parse_need_checkpoint(v2, "t"), doctest::Contains("found 2, expected 1"), CheckpointError);

  CHECK_THROWS_AS(load_need_checkpoint(temp_path("missing.ckpt")), DataError);
}

TEST_CASE("reason head: gradients, softmax and argmax invariance") {
  testing::PlantedCueOptions o;
  o.vocab_size = 40;
  o.n_cues = 16;
  auto reasons = testing::planted_reason_corpus(1, 2, o);
  reasons.resize(3);
  std::vector<const ReasonInstance*> batch;
  for (const auto& r : reasons) batch.push_back(&r);
  TrainConfig cfg;
  cfg.dims = {4, 3, 8};
  ReasonModel m = init_reason_model(nullptr, batch, cfg, Variant::rnna_ws, nullptr);
  for (ParamSlot* s : m.slots()) s->zero_grad();
  reason_batch_gradient(m, batch);
  const auto report = numerics::grad_check([&] { return reason_batch_loss(m, batch); }, m.slots());
  INFO(report.worst_slot, " ", report.max_relative_error);
  CHECK(report.passed);

  for (const auto& r : reasons) {
    const Tensor p = reason_probabilities(m, r.statement);
    double sum = 0;
    for (double v : p.data()) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    const corpus::Reason before = predict_reason(m, r.statement);
    ReasonModel shifted = m;
    for (double& b : shifted.dense.b.value.data()) b += 3.7;
    CHECK(predict_reason(shifted, r.statement) == before);
  }
}

TEST_CASE("class weights are inverse frequency over present classes") {
  std::vector<ReasonInstance> data(6);
  data[0].reason = data[1].reason = data[2].reason = corpus::Reason::quotation;
  data[3].reason = corpus::Reason::historical;
  data[4].reason = data[5].reason = corpus::Reason::scientific;
  std::vector<const ReasonInstance*> ptrs;
  for (const auto& d : data) ptrs.push_back(&d);
  std::vector<std::string> warnings;
  const auto w = reason_class_weights(ptrs, &warnings);
  CHECK(w[static_cast<std::size_t>(corpus::Reason::quotation)] == doctest::Approx(6.0 / (3 * 3)));
  CHECK(w[static_cast<std::size_t>(corpus::Reason::historical)] == doctest::Approx(6.0 / (3 * 1)));
  CHECK(w[static_cast<std::size_t>(corpus::Reason::scientific)] == doctest::Approx(6.0 / (3 * 2)));
  CHECK(w[static_cast<std::size_t>(corpus::Reason::life)] == 0.0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("statistics") != std::string::npos);
}

TEST_CASE("pretrained and scratch reason models differ only in the encoder") {
  testing::PlantedCueOptions o;
  o.n_sentences = 100;
  o.vocab_size = 60;
  o.n_cues = 16;
  const auto binary = testing::planted_cue_corpus(o);
  TrainConfig cfg;
  cfg.dims = {5, 4, 16};
  cfg.epochs = 1;
  const auto need = train_need(binary, cfg, Variant::rnna_ws);
  const auto reasons = testing::planted_reason_corpus(4, 2, o);
  std::vector<const ReasonInstance*> ptrs;
  for (const auto& r : reasons) ptrs.push_back(&r);

  const ReasonModel pre = init_reason_model(&need.model, ptrs, cfg, Variant::rnna_ws, nullptr);
  const ReasonModel scratch = init_reason_model(nullptr, ptrs, cfg, Variant::rnna_ws, nullptr);
  CHECK(pre.dense.w.value == scratch.dense.w.value);
  CHECK(pre.dense.b.value == scratch.dense.b.value);
  CHECK(pre.class_weights == scratch.class_weights);
  CHECK_FALSE(pre.encoder.forward_gru.w_z.value == scratch.encoder.forward_gru.w_z.value);
  CHECK(pre.encoder.forward_gru.w_z.value == need.model.encoder.forward_gru.w_z.value);
  CHECK(pre.encoder.attention.w_a.value == need.model.encoder.attention.w_a.value);

  TrainConfig wrong = cfg;
  wrong.dims.hidden_dim = 7;
  CHECK_THROWS_AS(init_reason_model(&need.model, ptrs, wrong, Variant::rnna_ws, nullptr), ShapeError);

  const auto path = temp_path("reason.ckpt");
  save_checkpoint(pre, cfg, path);
  const auto back = load_reason_checkpoint(path);
  CHECK(back.model.class_weights == pre.class_weights);
  for (const auto& r : reasons) CHECK(reason_probabilities(back.model, r.statement) == reason_probabilities(pre, r.statement));
  CHECK_THROWS_AS(load_need_checkpoint(path), CheckpointKindError);
  CHECK(checkpoint_kind(path) == CheckpointKind::reason);
}

TEST_CASE("attention concentrates on the planted cue") {
  const auto data = testing::planted_cue_corpus({});
  TrainConfig cfg;
  cfg.dims = {16, 16, 60};
  cfg.batch_size = 10;
  const auto result = train_need(data, cfg, Variant::rnna_ws);
  std::size_t positives = 0, on_cue = 0;
  for (std::size_t i : result.split.eval) {
    const auto& inst = data[i];
    if (inst.label != corpus::Label::positive) continue;
    ++positives;
    const auto pred = predict_with_attention(result.model, inst.statement);
    const std::size_t top =
        static_cast<std::size_t>(std::max_element(pred.weights.begin(), pred.weights.end()) - pred.weights.begin());
    on_cue += pred.tokens[top].rfind("cue", 0) == 0;
  }
  REQUIRE(positives > 0);
  const double share = static_cast<double>(on_cue) / static_cast<double>(positives);
  INFO("max-weight-on-cue share ", share);
  CHECK(share >= 0.8);
}

TEST_CASE("reason models take rows for new tokens from pretrained vectors") {
  testing::PlantedCueOptions o;
  o.vocab_size = 30;
  o.n_cues = 16;
  const auto reasons = testing::planted_reason_corpus(2, 2, o);
  std::vector<const ReasonInstance*> ptrs;
  for (const auto& r : reasons) ptrs.push_back(&r);
  std::string cue;
  for (const auto& t : reasons[0].statement.tokens) {
    if (t.rfind("cue", 0) == 0) cue = t;
  }
  REQUIRE(!cue.empty());
  encoder::PretrainedVectors vectors;
  vectors.dim = 4;
  vectors.vectors[cue] = {0.5, -0.5, 0.25, -0.25};
  TrainConfig cfg;
  cfg.dims = {4, 3, 8};

  const ReasonModel scratch = init_reason_model(nullptr, ptrs, cfg, Variant::rnna_ws, nullptr, &vectors);
  const auto& words = scratch.encoder.words;
  REQUIRE(words.vocab.contains(cue));
  CHECK(words.matrix.value(words.vocab.index(cue), 1) == -0.5);
  CHECK_FALSE(words.trainable[words.vocab.index(cue)]);

  // A need model that never saw the cue gets the vector when extended.
  std::vector<LabeledInstance> binary(2);
  binary[0].statement = statement({"plain", "words"});
  binary[1].statement = statement({"other", "words"});
  binary[1].label = corpus::Label::positive;
  numerics::Rng rng(4);
  const NeedModel need = make_need_model(Variant::rnna_ws, cfg.dims, {&binary[0].statement, &binary[1].statement},
                                         nullptr, false, rng);
  const ReasonModel pre = init_reason_model(&need, ptrs, cfg, Variant::rnna_ws, nullptr, &vectors);
  CHECK(pre.encoder.words.matrix.value(pre.encoder.words.vocab.index(cue), 3) == -0.25);
}
