// SPDX-License-Identifier: Apache-2.0
// Full-scale benchmark against the published reference numbers. Not part of
// the test suite: it needs a featured-article corpus, the crowdsourced
// reason corpus and pretrained vectors, and training takes hours at the
// published sizes.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "citeneed/analysis/benchmark.hpp"
#include "citeneed/analysis/correlation.hpp"
#include "citeneed/analysis/metrics.hpp"
#include "citeneed/baselines/features.hpp"
#include "citeneed/corpus/corpus_io.hpp"
#include "citeneed/encoder/embeddings.hpp"
#include "citeneed/models/checkpoint.hpp"
#include "citeneed/models/need_model.hpp"
#include "citeneed/models/reason_model.hpp"

using namespace citeneed;

namespace {

constexpr int kExitOk = 0, kExitPropertyFailed = 1, kExitData = 2;

void print_targets(std::ostream& out) {
  out << "reference targets\n";
  out << "  RNNa_wS on FA, F1 (no citation / citation / average): " << analysis::kFaNeedTarget.negative_f1 << " / "
      << analysis::kFaNeedTarget.positive_f1 << " / " << analysis::kFaNeedTarget.average_f1 << '\n';
  out << "  lead-section point-biserial r on FA: " << analysis::kFaSectionCorrelation << '\n';
  out << "  reason prediction:\n" << analysis::reason_table(nullptr, nullptr);
  out << "  most frequent reasons: historical, quotation, scientific\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Full-scale benchmark with reference targets (not run in CI)"};
  std::string fa_path, reasons_path, embeddings_path, pretrained_path;
  std::size_t epochs = 10, batch = 100, hidden = 100, embed_dim = 100, max_len = 60;
  std::uint64_t seed = models::kDefaultSeed;
  bool targets_only = false;
  app.add_option("--fa", fa_path, "FA citation-need corpus (JSONL)");
  app.add_option("--reasons", reasons_path, "Citation reason corpus (JSONL)");
  app.add_option("--embeddings", embeddings_path, "Pretrained vectors (text format)");
  app.add_option("--pretrained", pretrained_path, "FA need checkpoint; skips FA training for the reason table");
  app.add_option("--epochs", epochs)->capture_default_str();
  app.add_option("--batch", batch)->capture_default_str();
  app.add_option("--hidden", hidden)->capture_default_str();
  app.add_option("--embed-dim", embed_dim, "Used without --embeddings")->capture_default_str();
  app.add_option("--max-len", max_len)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  app.add_flag("--targets", targets_only, "Print the reference targets and exit");
  CLI11_PARSE(app, argc, argv);

  if (targets_only) {
    print_targets(std::cout);
    return kExitOk;
  }
  if (fa_path.empty() && reasons_path.empty()) {
    std::cerr << "error: give --fa, --reasons or both (or --targets)\n";
    return kExitData;
  }

  int status = kExitOk;
  try {
    std::optional<encoder::PretrainedVectors> vectors;
    if (!embeddings_path.empty()) {
      vectors = encoder::load_pretrained(embeddings_path);
      embed_dim = vectors->dim;
    }
    models::TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.batch_size = batch;
    cfg.dims = {embed_dim, hidden, max_len};
    cfg.seed = seed;
    cfg.validate();
    const encoder::PretrainedVectors* vp = vectors ? &*vectors : nullptr;

    std::optional<models::NeedModel> need_model;
    if (!pretrained_path.empty()) need_model = models::load_need_checkpoint(pretrained_path).model;

    if (!fa_path.empty()) {
      const auto fa = corpus::read_corpus(fa_path);
      std::cout << "== citation need, FA (" << fa.size() << " statements, 50/50 split) ==\n";
      auto result = models::train_need(fa, cfg, models::Variant::rnna_ws, vp);
      std::cout << analysis::need_table(result.eval_report, "measured RNNa_wS") << '\n';
      if (!need_model) need_model = std::move(result.model);

      std::vector<const corpus::Statement*> stmts;
      std::vector<std::uint8_t> labels;
      for (const auto& inst : fa) {
        stmts.push_back(&inst.statement);
        labels.push_back(inst.label == corpus::Label::positive);
      }
      const baselines::FeatureExtractor fx(baselines::LexiconSet{}, nullptr, {false, false, true, false});
      const auto table = baselines::extract_all(fx, stmts);
      const auto report = analysis::correlate_features(table.names, table.rows, labels);
      std::cout << "== lead-section correlation, FA ==\n";
      char line[128];
      if (report.entries.empty()) {
        std::snprintf(line, sizeof line, "measured   undefined (no lead/body variation)\nreference  %.3f\n",
                      analysis::kFaSectionCorrelation);
      } else {
        std::snprintf(line, sizeof line, "measured   %.3f\nreference  %.3f\n", report.entries.front().r,
                      analysis::kFaSectionCorrelation);
      }
      std::cout << line << '\n';
    }

    if (!reasons_path.empty()) {
      const auto reasons = corpus::read_reason_corpus(reasons_path);
      std::cout << "== citation reason (" << reasons.size() << " statements, 50/50 split) ==\n";
      const auto freq = analysis::reason_frequencies(reasons);
      std::cout << "label counts:";
      for (const auto& [r, n] : freq) std::cout << ' ' << corpus::to_string(r) << '=' << n;
      std::cout << '\n';
      const bool top_ok = analysis::top_reasons_match_reference(freq);
      std::cout << "top-3 reasons are {historical, quotation, scientific}: " << (top_ok ? "PASS" : "FAIL") << "\n\n";
      if (!top_ok) status = kExitPropertyFailed;

      std::optional<analysis::EvaluationReport> pre;
      if (need_model) {
        models::TrainConfig rcfg = cfg;
        rcfg.dims.embed_dim = need_model->encoder.embed_dim();
        rcfg.dims.hidden_dim = need_model->encoder.hidden_dim();
        rcfg.dims.max_len = need_model->encoder.max_len;
        pre = models::fine_tune_reason(&*need_model, reasons, rcfg, models::Variant::rnna_ws, vp).eval_report;
      }
      const auto scratch = models::fine_tune_reason(nullptr, reasons, cfg, models::Variant::rnna_ws, vp).eval_report;
      std::cout << analysis::reason_table(pre ? &*pre : nullptr, &scratch);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return status;
}
