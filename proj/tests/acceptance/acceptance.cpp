// SPDX-License-Identifier: Apache-2.0
// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <unistd.h>
#include <vector>

#include "citeneed/analysis/benchmark.hpp"
#include "citeneed/analysis/correlation.hpp"
#include "citeneed/baselines/baseline.hpp"
#include "citeneed/baselines/forest.hpp"
#include "citeneed/corpus/corpus_io.hpp"
#include "citeneed/encoder/gru.hpp"
#include "citeneed/models/checkpoint.hpp"
#include "citeneed/models/need_model.hpp"
#include "citeneed/models/reason_model.hpp"
#include "citeneed/numerics/grad_check.hpp"
#include "synthetic.hpp"

using namespace citeneed;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances and limits.
constexpr double kGradTolerance = 1e-4;
constexpr double kGradStep = 1e-5;
constexpr double kGradSeconds = 30.0;
constexpr double kGruTolerance = 1e-10;
constexpr int kGruCases = 20;
constexpr int kAttentionStatements = 1000;
constexpr double kAttentionSumTolerance = 1e-12;
constexpr double kPlantedF1 = 0.95;
constexpr double kPlantedSeconds = 120.0;
constexpr double kBaselineF1 = 0.9;
constexpr double kPearsonTolerance = 1e-12;
constexpr double kWorkedExample = 0.5774;
constexpr double kWorkedExampleTolerance = 1e-4;
constexpr double kForestAccuracy = 0.95;
constexpr double kReasonF1 = 0.8;
constexpr std::size_t kReasonPerClass = 400;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("citeneed-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int shell(const std::string& cmd) {
  const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

corpus::Statement statement(std::vector<std::string> tokens, std::string heading, bool lead) {
  corpus::Statement s;
  s.article_id = "fixture";
  s.section_heading = std::move(heading);
  s.is_lead = lead;
  s.tokens = std::move(tokens);
  return s;
}

std::vector<corpus::LabeledInstance> fixture_statements() {
  std::vector<corpus::LabeledInstance> out(3);
  out[0].statement = statement({"the", "bridge", "was", "rebuilt", "in", "1613"}, "", true);
  out[0].label = corpus::Label::positive;
  out[1].statement = statement({"critics", "said", "the", "film", "was", "slow", "."}, "Reception", false);
  out[1].label = corpus::Label::negative;
  out[2].statement = statement({"moss", "grows", "on", "the", "parapet"}, "Structure", false);
  out[2].label = corpus::Label::positive;
  return out;
}

// ---- 1 -------------------------------------------------------------------

Outcome gradients() {
  const auto start = Clock::now();
  const auto data = fixture_statements();
  std::vector<const corpus::LabeledInstance*> batch;
  std::vector<const corpus::Statement*> vocab_source;
  for (const auto& d : data) batch.push_back(&d);
  for (std::size_t i = 0; i + 1 < data.size(); ++i) vocab_source.push_back(&data[i].statement);
  const numerics::GradCheckOptions opts{kGradStep, kGradTolerance, 1e-6};

  bool pass = true;
  double worst = 0.0;
  std::string detail;
  for (models::Variant v : {models::Variant::rnn_w, models::Variant::rnn_ws, models::Variant::rnna_w,
                            models::Variant::rnna_ws}) {
    numerics::Rng rng(11);
    models::NeedModel m = models::make_need_model(v, models::ModelDims{4, 3, 8}, vocab_source, nullptr, false, rng);
    for (auto* s : m.slots()) s->zero_grad();
    models::need_batch_gradient(m, batch);
    const auto r = numerics::grad_check([&] { return models::need_batch_loss(m, batch); }, m.slots(), opts);
    pass = pass && r.passed;
    worst = std::max(worst, r.max_relative_error);
    detail += std::string(models::variant_name(v)) + " " + fmt("%.1e", r.max_relative_error) + ", ";
  }

  testing::PlantedCueOptions o;
  o.vocab_size = 40;
  o.n_cues = 16;
  auto reasons = testing::planted_reason_corpus(1, 2, o);
  reasons.resize(3);
  std::vector<const corpus::ReasonInstance*> rbatch;
  for (const auto& r : reasons) rbatch.push_back(&r);
  models::TrainConfig cfg;
  cfg.dims = {4, 3, 8};
  models::ReasonModel rm = models::init_reason_model(nullptr, rbatch, cfg, models::Variant::rnna_ws, nullptr);
  for (auto* s : rm.slots()) s->zero_grad();
  models::reason_batch_gradient(rm, rbatch);
  const auto rr = numerics::grad_check([&] { return models::reason_batch_loss(rm, rbatch); }, rm.slots(), opts);
  pass = pass && rr.passed;
  worst = std::max(worst, rr.max_relative_error);
  detail += "reason head " + fmt("%.1e", rr.max_relative_error);

  const double t = seconds_since(start);
  pass = pass && t < kGradSeconds;
  return {pass, "max rel err " + fmt("%.2e", worst) + " (tol " + fmt("%.0e", kGradTolerance) + "; " + detail +
                    "), " + fmt("%.1f", t) + " s (limit " + fmt("%.0f", kGradSeconds) + " s)"};
}

// ---- 2 -------------------------------------------------------------------

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Outcome gru_oracle() {
  numerics::Rng rng(2718);
  double worst = 0.0;
  for (int c = 0; c < kGruCases; ++c) {
    double w[9];
    for (double& v : w) v = rng.uniform(-2.0, 2.0);
    const double x = rng.uniform(-2.0, 2.0), hp = rng.uniform(-1.0, 1.0);
    encoder::GruParams p = encoder::GruParams::zeros(1, 1);
    auto slots = p.slots();
    for (std::size_t i = 0; i < 9; ++i) slots[i]->value[0] = w[i];
    // w = {W_z, U_z, b_z, W_r, U_r, b_r, W_h, U_h, b_h}
    const double z = sigmoid(w[0] * x + w[1] * hp + w[2]);
    const double r = sigmoid(w[3] * x + w[4] * hp + w[5]);
    const double g = std::tanh(w[6] * x + r * (w[7] * hp + w[8]));
    const double expected = (1.0 - z) * hp + z * g;
    const double got = encoder::gru_cell_step(numerics::Tensor({1}, x), numerics::Tensor({1}, hp), p)[0];
    worst = std::max(worst, std::abs(got - expected));
  }
  return {worst <= kGruTolerance, std::to_string(kGruCases) + " cases, max abs err " + fmt("%.1e", worst) +
                                      " (tol " + fmt("%.0e", kGruTolerance) + ")"};
}

// ---- 3 -------------------------------------------------------------------

Outcome attention_invariants() {
  testing::PlantedCueOptions o;
  o.n_sentences = 200;
  o.vocab_size = 80;
  const auto train = testing::planted_cue_corpus(o);
  std::vector<const corpus::Statement*> st;
  for (const auto& t : train) st.push_back(&t.statement);
  numerics::Rng init(5);
  const auto enc =
      models::make_statement_encoder(models::Variant::rnna_ws, models::ModelDims{6, 5, 20}, st, nullptr, false, init);

  numerics::Rng rng(99);
  double worst_sum = 0.0;
  std::size_t negative = 0, padded_nonzero = 0, padded_positions = 0;
  for (int i = 0; i < kAttentionStatements; ++i) {
    const std::size_t len = 1 + rng.below(28);  // some longer than max_len
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < len; ++t) {
      tokens.push_back(rng.below(10) == 0 ? "never-seen" : testing::filler_token(rng.below(70)));
    }
    const models::SectionInput section{rng.below(2) ? "History" : "Reception", rng.below(5) == 0};
    const auto pass = models::encode_statement(enc, tokens, section);
    const auto& w = pass.attention.result.weights;
    double sum = 0.0;
    for (std::size_t t = 0; t < w.size(); ++t) {
      if (w[t] < 0.0) ++negative;
      if (!pass.input.mask[t]) {
        ++padded_positions;
        if (w[t] != 0.0) ++padded_nonzero;
      }
      sum += w[t];
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
  }
  const bool pass = negative == 0 && padded_nonzero == 0 && worst_sum <= kAttentionSumTolerance;
  return {pass, std::to_string(kAttentionStatements) + " statements: " + std::to_string(negative) +
                    " negative weights, max |sum-1| " + fmt("%.1e", worst_sum) + " (tol " +
                    fmt("%.0e", kAttentionSumTolerance) + "), " + std::to_string(padded_nonzero) + " of " +
                    std::to_string(padded_positions) + " padded positions non-zero"};
}

// ---- 4 -------------------------------------------------------------------

Outcome planted_cue() {
  const testing::PlantedCueOptions opts;  // 2,000 sentences, vocab 500, 10 cues
  const auto data = testing::planted_cue_corpus(opts);
  models::TrainConfig cfg;
  cfg.dims = {16, 16, 20};
  cfg.epochs = 10;
  cfg.batch_size = 10;
  // 50/30/20 uses the same split as the baseline tuner, so both models are
  // compared on identical validation instances.
  cfg.split = models::SplitMode::three_way;
  const auto start = Clock::now();
  const auto result = models::train_need(data, cfg, models::Variant::rnna_ws);
  const double t = seconds_since(start);
  const double rnn_f1 = result.eval_report.macro_f1;
  const double rnn_val_f1 = result.validation_report->macro_f1;

  baselines::LexiconSet lex;
  for (std::size_t k = 0; k < opts.n_cues; ++k) {
    lex[baselines::VerbCategory::report].lemmas.insert(testing::cue_token(k));
  }
  const baselines::FeatureExtractor fx(lex, nullptr, {true, true, true, false});
  const auto base = baselines::run_need_baseline(data, fx, models::kDefaultSeed);
  const double base_f1 = base.tuned.validation.macro_f1;

  const bool pass =
      rnn_f1 >= kPlantedF1 && t <= kPlantedSeconds && base_f1 >= kBaselineF1 && rnn_val_f1 >= base_f1;
  return {pass, "RNNa_wS eval F1 " + fmt("%.4f", rnn_f1) + " (>= " + fmt("%.2f", kPlantedF1) + ") in " +
                    std::to_string(cfg.epochs) + " epochs, " + fmt("%.1f", t) + " s (limit " +
                    fmt("%.0f", kPlantedSeconds) + " s); baseline F1 " + fmt("%.4f", base_f1) + " (>= " +
                    fmt("%.2f", kBaselineF1) + "); same validation part: RNNa_wS " + fmt("%.4f", rnn_val_f1) +
                    " vs baseline " + fmt("%.4f", base_f1) + " (RNN >= baseline)"};
}

// ---- 5 -------------------------------------------------------------------

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

Outcome point_biserial() {
  numerics::Rng rng(404);
  std::vector<std::uint8_t> labels;
  std::vector<double> coded, values;
  for (int i = 0; i < 1000; ++i) {
    const bool y = rng.uniform() < 0.4;
    labels.push_back(y);
    coded.push_back(y ? 1.0 : 0.0);
    values.push_back(rng.uniform(-3.0, 3.0) + (y ? 0.8 : 0.0));
  }
  const double diff = std::abs(analysis::point_biserial(labels, values) - pearson(coded, values));

  const std::vector<std::uint8_t> ex_labels{1, 1, 0, 0};
  const std::vector<double> ex_values{1, 0, 0, 0};
  // (M1 - M0) / s_n * sqrt(p q) with the population standard deviation.
  const double oracle = (0.5 - 0.0) / std::sqrt(0.1875) * std::sqrt(0.5 * 0.5);
  const double ex = analysis::point_biserial(ex_labels, ex_values);
  const bool pass = diff <= kPearsonTolerance && std::abs(ex - oracle) <= kPearsonTolerance &&
                    std::abs(ex - kWorkedExample) <= kWorkedExampleTolerance;
  return {pass, "|r_pb - pearson| " + fmt("%.1e", diff) + " on 1000 instances (tol " +
                    fmt("%.0e", kPearsonTolerance) + "); worked example " + fmt("%.10f", ex) + " vs " +
                    fmt("%.4f", kWorkedExample) + " +- " + fmt("%.0e", kWorkedExampleTolerance)};
}

// ---- 6 -------------------------------------------------------------------

Outcome forest() {
  numerics::Rng rng(606);
  baselines::FeatureMatrix x;
  std::vector<std::size_t> y;
  while (x.size() < 200) {
    const double a = rng.uniform(0, 1), b = rng.uniform(0, 1);
    if (std::abs(a + b - 1.0) < 0.1) continue;
    x.push_back({a, b, rng.uniform(0, 1)});
    y.push_back(a + b > 1.0 ? 1 : 0);
  }
  const auto tuned = baselines::tune_forest(x, y, {"below", "above"}, models::kDefaultSeed);
  const std::size_t c00[] = {4, 0}, c55[] = {5, 5}, c112[] = {1, 1, 2};
  const double g0 = baselines::gini(c00), g1 = baselines::gini(c55), g2 = baselines::gini(c112);
  const bool pass = tuned.validation.accuracy >= kForestAccuracy && g0 == 0.0 && g1 == 0.5 && g2 == 0.625;
  return {pass, "validation accuracy " + fmt("%.4f", tuned.validation.accuracy) + " (>= " +
                    fmt("%.2f", kForestAccuracy) + "); gini " + fmt("%.17g", g0) + ", " + fmt("%.17g", g1) +
                    ", " + fmt("%.17g", g2)};
}

// ---- 7 -------------------------------------------------------------------

Outcome reason_fine_tune() {
  testing::PlantedCueOptions opts;
  opts.n_cues = 16;
  const auto binary = testing::planted_cue_corpus(opts);
  models::TrainConfig cfg;
  cfg.dims = {16, 16, 20};
  cfg.batch_size = 10;
  const auto need = models::train_need(binary, cfg, models::Variant::rnna_ws);
  const fs::path ckpt = work_dir() / "binary.ckpt";
  models::save_checkpoint(need.model, cfg, ckpt);
  const auto loaded = models::load_need_checkpoint(ckpt);

  testing::PlantedCueOptions ropts = opts;
  ropts.seed = 2;
  const auto reasons = testing::planted_reason_corpus(kReasonPerClass, 2, ropts);
  const auto result = models::fine_tune_reason(&loaded.model, reasons, cfg);
  const auto& report = result.eval_report;
  std::size_t predicted_classes = 0;
  for (std::size_t c = 0; c < report.confusion.size(); ++c) predicted_classes += report.confusion.column_sum(c) > 0;
  const bool pass = predicted_classes == corpus::kReasonCount && report.macro_f1 >= kReasonF1;
  return {pass, std::to_string(kReasonPerClass) + " per class, " + std::to_string(report.n_instances) +
                    " held out: " + std::to_string(predicted_classes) + "/8 classes predicted, macro-F1 " +
                    fmt("%.4f", report.macro_f1) + " (>= " + fmt("%.2f", kReasonF1) + ")"};
}

// ---- 8 -------------------------------------------------------------------

Outcome determinism() {
  const std::string cli = quote(CITENEED_CLI);
  const fs::path dir = work_dir() / "determinism";
  fs::create_directories(dir);
  const fs::path articles = fs::path(CITENEED_SOURCE_DIR) / "data" / "fixtures" / "articles.jsonl";

  bool corpora_same = true;
  for (const std::string kind : {"FA", "LQN", "RND"}) {
    const std::string sizes = kind == "RND" ? " --n-total 60" : " --n-pos 10 --n-neg 10";
    for (const char* copy : {"a", "b"}) {
      if (shell(cli + " build-corpus " + kind + " --articles " + quote(articles) + " --out " +
                quote(dir / (kind + copy + ".jsonl")) + sizes + " --seed 31") != 0) {
        return {false, "build-corpus " + kind + " failed"};
      }
    }
    corpora_same = corpora_same && corpus::read_file(dir / (kind + "a.jsonl")) == corpus::read_file(dir / (kind + "b.jsonl"));
  }

  testing::PlantedCueOptions o;
  o.n_sentences = 200;
  o.vocab_size = 100;
  corpus::write_corpus(testing::planted_cue_corpus(o), dir / "planted.jsonl");
  for (const char* copy : {"a", "b"}) {
    if (shell(cli + " train --corpus " + quote(dir / "planted.jsonl") + " --variant rnn-a-s --checkpoint " +
              quote(dir / (std::string(copy) + ".ckpt")) +
              " --epochs 2 --batch 10 --hidden 8 --embed-dim 8 --max-len 16 --seed 77") != 0) {
      return {false, "train failed"};
    }
  }
  const bool ckpt_same = corpus::read_file(dir / "a.ckpt") == corpus::read_file(dir / "b.ckpt");
  return {corpora_same && ckpt_same, std::string("train checkpoints ") + (ckpt_same ? "identical" : "DIFFER") +
                                         "; FA/LQN/RND corpora " + (corpora_same ? "identical" : "DIFFER")};
}

// ---- 9 -------------------------------------------------------------------

Outcome benchmark() {
  bool targets = analysis::kFaNeedTarget.average_f1 == 0.904 && analysis::kFaSectionCorrelation == -0.621;
  const auto& sci = analysis::kReasonTargets[static_cast<std::size_t>(corpus::Reason::scientific)];
  targets = targets && sci.reason == corpus::Reason::scientific && sci.pre_p == 0.62 && sci.pre_r == 0.56 &&
            sci.pre_f1 == 0.59;

  // A corpus led by historical > quotation > scientific, and one that is not.
  testing::PlantedCueOptions o;
  o.vocab_size = 60;
  o.n_cues = 16;
  const auto all = testing::planted_reason_corpus(12, 2, o);
  auto keep = [&](const std::vector<std::size_t>& per_class) {
    std::vector<corpus::ReasonInstance> out;
    std::array<std::size_t, corpus::kReasonCount> seen{};
    for (const auto& r : all) {
      const auto c = static_cast<std::size_t>(r.reason);
      if (seen[c]++ < per_class[c]) out.push_back(r);
    }
    return out;
  };
  // quotation statistics controversial opinion life scientific historical other
  const auto good = keep({10, 4, 3, 3, 2, 9, 12, 5});
  const auto bad = keep({10, 9, 3, 3, 2, 4, 12, 5});
  const fs::path dir = work_dir() / "benchmark";
  fs::create_directories(dir);
  corpus::write_reason_corpus(good, dir / "good.jsonl");
  corpus::write_reason_corpus(bad, dir / "bad.jsonl");
  const bool logic = analysis::top_reasons_match_reference(analysis::reason_frequencies(good)) &&
                     !analysis::top_reasons_match_reference(analysis::reason_frequencies(bad));

  const std::string tool = quote(CITENEED_BENCHMARK);
  const std::string flags = " --epochs 1 --batch 8 --hidden 4 --embed-dim 4 --max-len 16";
  const fs::path out_good = dir / "good.txt";
  const int rc_good =
      std::system((tool + " --reasons " + quote(dir / "good.jsonl") + flags + " > " + quote(out_good) + " 2>&1").c_str());
  const int rc_bad = shell(tool + " --reasons " + quote(dir / "bad.jsonl") + flags);
  const std::string report = corpus::read_file(out_good);
  const bool table = report.find("PASS") != std::string::npos && report.find("avg.") != std::string::npos &&
                     report.find("scientific") != std::string::npos;
  const bool exits = WIFEXITED(rc_good) && WEXITSTATUS(rc_good) == 0 && rc_bad == 1;
  return {targets && logic && table && exits,
          std::string("reference targets ") + (targets ? "recorded" : "MISSING") + "; top-3 check " +
              (logic ? "accepts {historical, quotation, scientific} and rejects others" : "WRONG") +
              "; benchmark tool " + (table && exits ? "reports per-class and avg. rows" : "FAILED") +
              " (full-scale numbers are not reproduced here)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gradient correctness", gradients},
      {"GRU scalar oracle", gru_oracle},
      {"attention invariants", attention_invariants},
      {"synthetic end-to-end", planted_cue},
      {"point-biserial", point_biserial},
      {"forest sanity", forest},
      {"reason fine-tune", reason_fine_tune},
      {"determinism", determinism},
      {"benchmark targets", benchmark},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work_dir());
  return failed == 0 ? 0 : 1;
}
