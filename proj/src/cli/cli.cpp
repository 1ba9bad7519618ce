// SPDX-License-Identifier: Apache-2.0
#include "citeneed/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>

#include "citeneed/analysis/attention_report.hpp"
#include "citeneed/analysis/clustering.hpp"
#include "citeneed/analysis/correlation.hpp"
#include "citeneed/analysis/distribution.hpp"
#include "citeneed/baselines/baseline.hpp"
#include "citeneed/corpus/corpus_io.hpp"
#include "citeneed/corpus/datasets.hpp"
#include "citeneed/corpus/markup.hpp"
#include "citeneed/models/checkpoint.hpp"
#include "citeneed/util/csv.hpp"
#include "common.hpp"

namespace citeneed::cli {

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CITENEED_SEED"); env && *env) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("CITENEED_SEED is not an unsigned integer: ") + env);
  }
  return models::kDefaultSeed;
}

namespace {

const std::vector<std::string> kVariantFlags = {"rnn", "rnn-s", "rnn-a", "rnn-a-s"};
const std::vector<std::string> kSplitFlags = {"50/50", "50/30/20"};

struct TrainFlags {
  std::size_t epochs = 10, batch = 100, hidden = 100, embed = encoder::kDefaultEmbeddingDim,
              max_len = encoder::kDefaultMaxLen;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  std::string split = "50/50";
  std::string embeddings;
  bool train_pretrained = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* hidden_opt = nullptr;
  CLI::Option* embed_opt = nullptr;
  CLI::Option* max_len_opt = nullptr;

  void add_to(CLI::App* app) {
    app->add_option("--epochs", epochs, "Training epochs")->capture_default_str()->check(CLI::PositiveNumber);
    app->add_option("--batch", batch, "Mini-batch size")->capture_default_str()->check(CLI::PositiveNumber);
    hidden_opt = app->add_option("--hidden", hidden, "GRU hidden size")->capture_default_str()->check(CLI::PositiveNumber);
    embed_opt = app->add_option("--embed-dim", embed, "Word/section embedding size without --embeddings")
                    ->capture_default_str()
                    ->check(CLI::PositiveNumber);
    max_len_opt = app->add_option("--max-len", max_len, "Tokens kept per statement")
                      ->capture_default_str()
                      ->check(CLI::PositiveNumber);
    app->add_option("--lr", lr, "Adam learning rate")->capture_default_str()->check(CLI::PositiveNumber);
    seed_opt = app->add_option("--seed", seed, "Random seed (default: $CITENEED_SEED, else 1729)");
    app->add_option("--split", split, "Split mode")->capture_default_str()->check(CLI::IsMember(kSplitFlags));
    app->add_option("--embeddings", embeddings, "Pretrained vectors, word2vec/GloVe text format");
    app->add_flag("--train-pretrained", train_pretrained, "Also update rows copied from --embeddings");
  }

  models::TrainConfig config(std::size_t embed_dim) const {
    if (embed_opt->count() && embed != embed_dim) {
      throw UsageError("--embed-dim " + std::to_string(embed) + " does not match the " + std::to_string(embed_dim) +
                       "-dimensional --embeddings");
    }
    models::TrainConfig cfg;
    cfg.epochs = epochs;
    cfg.batch_size = batch;
    cfg.dims = {embed_dim, hidden, max_len};
    cfg.adam.learning_rate = lr;
    cfg.seed = resolve_seed(seed_opt->count() ? std::optional(seed) : std::nullopt);
    cfg.split = *models::parse_split_flag(split);
    cfg.train_pretrained = train_pretrained;
    cfg.validate();
    return cfg;
  }
};

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

std::string dataset_name(const std::vector<corpus::LabeledInstance>& data) {
  return data.empty() ? "" : std::string(corpus::to_string(data.front().dataset));
}

// ---- build-corpus ----------------------------------------------------------

struct BuildCorpus {
  std::string kind, articles, out;
  std::size_t n_pos = corpus::kDefaultFaPerClass, n_neg = corpus::kDefaultFaPerClass,
              n_total = corpus::kDefaultRndTotal;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("build-corpus", "Sample an FA, LQN or RND dataset from an article dump");
    c->add_option("dataset", kind, "FA, LQN or RND")->required()->check(CLI::IsMember({"FA", "LQN", "RND"}));
    c->add_option("--articles", articles, "Article dump (JSONL)")->required();
    c->add_option("--out", out, "Output corpus (JSONL)")->required();
    c->add_option("--n-pos", n_pos, "Positives (FA, LQN)")->capture_default_str();
    c->add_option("--n-neg", n_neg, "Negatives (FA, LQN)")->capture_default_str();
    c->add_option("--n-total", n_total, "Total instances (RND)")->capture_default_str();
    seed_opt = c->add_option("--seed", seed, "Random seed");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  std::ostream* out_stream = nullptr;
  std::ostream* err_stream = nullptr;

  void run() {
    const std::uint64_t s = resolve_seed(seed_opt->count() ? std::optional(seed) : std::nullopt);
    std::vector<corpus::RawArticle> raw;
    std::vector<std::string> warnings;
    for (auto& src : corpus::read_article_dump(articles)) {
      auto a = corpus::parse_article(src.markup, src.article_id, src.quality, &warnings);
      a.title = src.title;
      a.topic = src.topic;
      raw.push_back(std::move(a));
    }
    print_warnings(warnings, *err_stream);
    std::vector<corpus::LabeledInstance> data;
    if (kind == "FA") {
      std::vector<corpus::RawArticle> featured;
      for (auto& a : raw)
        if (a.quality_class == corpus::QualityClass::featured) featured.push_back(std::move(a));
      data = corpus::build_fa_dataset(featured, n_pos, n_neg, s);
    } else if (kind == "LQN") {
      data = corpus::build_lqn_dataset(raw, n_pos, n_neg, s);
    } else {
      data = corpus::build_rnd_dataset(raw, n_total, s);
    }
    corpus::write_corpus(data, out);
    *out_stream << "wrote " << data.size() << " " << kind << " instances to " << out << '\n';
  }
};

// ---- train -----------------------------------------------------------------

struct Train {
  std::string corpus_path, variant, checkpoint, out;
  TrainFlags flags;
  std::ostream* out_stream = nullptr;
  std::ostream* err_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("train", "Train a citation-need model");
    c->add_option("--corpus", corpus_path, "Labeled corpus (JSONL)")->required();
    c->add_option("--variant", variant, "Model variant")->required()->check(CLI::IsMember(kVariantFlags));
    c->add_option("--checkpoint", checkpoint, "Where to save the model")->required();
    c->add_option("--out", out, "Training summary (JSON)");
    flags.add_to(c);
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto data = corpus::read_corpus(corpus_path);
    const auto pretrained = load_embeddings(flags.embeddings);
    const auto cfg = flags.config(pretrained ? pretrained->dim : flags.embed);
    const auto v = *models::parse_variant_flag(variant);
    auto result = models::train_need(data, cfg, v, pretrained ? &*pretrained : nullptr);
    models::save_checkpoint(result.model, cfg, checkpoint);
    auto& o = *out_stream;
    for (const auto& e : result.history) {
      o << "epoch " << e.epoch << "  loss " << util::fixed(e.train_loss, 4) << "  eval acc "
        << util::fixed(e.eval_accuracy, 4) << "  eval F1 " << util::fixed(e.eval_f1, 4) << '\n';
    }
    const auto& final_report = result.validation_report ? *result.validation_report : result.eval_report;
    o << models::variant_name(v) << " on " << dataset_name(data)
      << (result.validation_report ? " (validation)" : " (eval)") << '\n'
      << analysis::format_report(final_report);
    if (!out.empty()) {
      Json j{{"variant", std::string(models::variant_name(v))},
             {"dataset", dataset_name(data)},
             {"config", config_json(cfg)},
             {"history", history_json(result.history)},
             {"eval", report_json(result.eval_report)}};
      if (result.validation_report) j["validation"] = report_json(*result.validation_report);
      write_file(out, j.dump(2) + "\n");
    }
  }
};

// ---- evaluate / cross-eval -------------------------------------------------

struct Evaluate {
  std::string checkpoint, corpus_path, out;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("evaluate", "Score a citation-need checkpoint on a corpus");
    c->add_option("--checkpoint", checkpoint, "Need checkpoint")->required();
    c->add_option("--corpus", corpus_path, "Labeled corpus (JSONL)")->required();
    c->add_option("--out", out, "Metrics (CSV)");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto ckpt = models::load_need_checkpoint(checkpoint);
    const auto data = corpus::read_corpus(corpus_path);
    const auto report = models::evaluate_need(ckpt.model, data);
    *out_stream << models::variant_name(ckpt.model.variant()) << " on " << dataset_name(data) << '\n'
                << analysis::format_report(report);
    if (!out.empty()) write_file(out, analysis::report_csv(report));
  }
};

struct CrossEval {
  std::string checkpoint, out;
  std::vector<std::string> corpora;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("cross-eval", "Score one checkpoint on several corpora");
    c->add_option("--checkpoint", checkpoint, "Need checkpoint")->required();
    c->add_option("--corpus", corpora, "Labeled corpus; repeat for each dataset")->required();
    c->add_option("--out", out, "Summary (CSV)");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto ckpt = models::load_need_checkpoint(checkpoint);
    std::string csv = "corpus,dataset,precision,recall,f1,accuracy,n\n";
    auto& o = *out_stream;
    o << "model " << models::variant_name(ckpt.model.variant()) << '\n';
    for (const auto& path : corpora) {
      const auto data = corpus::read_corpus(path);
      const auto r = models::evaluate_need(ckpt.model, data);
      o << "\n" << path << " (" << dataset_name(data) << ")\n" << analysis::format_report(r);
      csv += util::csv_field(path) + "," + dataset_name(data) + "," + util::fixed(r.macro_precision, 6) + "," +
             util::fixed(r.macro_recall, 6) + "," + util::fixed(r.macro_f1, 6) + "," + util::fixed(r.accuracy, 6) +
             "," + std::to_string(r.n_instances) + "\n";
    }
    if (!out.empty()) write_file(out, csv);
  }
};

// ---- predict / explain -----------------------------------------------------

struct Predict {
  std::string checkpoint, corpus_path, out;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("predict", "Predict citation need, or the reason, per statement");
    c->add_option("--checkpoint", checkpoint, "Need or reason checkpoint")->required();
    c->add_option("--corpus", corpus_path, "Statements (any corpus JSONL)")->required();
    c->add_option("--out", out, "Predictions (CSV); default standard output");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto statements = corpus::read_statements(corpus_path);
    std::string csv;
    if (models::checkpoint_kind(checkpoint) == models::CheckpointKind::need) {
      const auto ckpt = models::load_need_checkpoint(checkpoint);
      csv = "article_id,section,text,probability\n";
      for (const auto& s : statements) {
        csv += util::csv_field(s.article_id) + "," + util::csv_field(s.is_lead ? "LEAD" : s.section_heading) + "," +
               util::csv_field(s.text) + "," + util::fixed(models::forward_need(ckpt.model, s), 6) + "\n";
      }
    } else {
      const auto ckpt = models::load_reason_checkpoint(checkpoint);
      csv = "article_id,section,text,reason,probability\n";
      for (const auto& s : statements) {
        const auto probs = models::reason_probabilities(ckpt.model, s);
        const auto d = probs.data();
        const auto k = static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
        csv += util::csv_field(s.article_id) + "," + util::csv_field(s.is_lead ? "LEAD" : s.section_heading) + "," +
               util::csv_field(s.text) + "," + std::string(corpus::to_string(corpus::kAllReasons[k])) + "," +
               util::fixed(d[k], 6) + "\n";
      }
    }
    if (out.empty()) {
      *out_stream << csv;
    } else {
      write_file(out, csv);
    }
  }
};

struct Explain {
  std::string checkpoint, corpus_path, out;
  std::size_t limit = 0;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("explain", "Render attention weights as an HTML and text report");
    c->add_option("--checkpoint", checkpoint, "Attention-variant need or reason checkpoint")->required();
    c->add_option("--corpus", corpus_path, "Statements (any corpus JSONL)")->required();
    c->add_option("--out", out, "Report path (.html); a .txt twin is written next to it")->required();
    c->add_option("--limit", limit, "Only the first N statements (0 = all)")->capture_default_str();
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    auto statements = corpus::read_statements(corpus_path);
    if (limit && statements.size() > limit) statements.resize(limit);
    std::vector<analysis::AttentionEntry> entries;
    std::string title;
    if (models::checkpoint_kind(checkpoint) == models::CheckpointKind::need) {
      const auto ckpt = models::load_need_checkpoint(checkpoint);
      entries = analysis::need_attention_entries(ckpt.model, statements);
      title = "Citation need attention: " + std::string(models::variant_name(ckpt.model.variant()));
    } else {
      const auto ckpt = models::load_reason_checkpoint(checkpoint);
      entries = analysis::reason_attention_entries(ckpt.model, statements);
      title = "Citation reason attention: " + std::string(models::variant_name(ckpt.model.variant()));
    }
    analysis::write_attention_report(analysis::render_attention_report(entries, title), out);
    *out_stream << "wrote attention report for " << entries.size() << " statements to " << out << '\n';
  }
};

// ---- reasons ---------------------------------------------------------------

struct ReasonTrain {
  std::string corpus_path, pretrained, checkpoint, out, variant = "rnn-a-s";
  TrainFlags flags;
  std::ostream* out_stream = nullptr;
  std::ostream* err_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("reason-train", "Fine-tune the 8-class citation-reason head");
    c->add_option("--corpus", corpus_path, "Reason corpus (JSONL)")->required();
    c->add_option("--pretrained", pretrained, "Citation-need checkpoint to start from");
    c->add_option("--checkpoint", checkpoint, "Where to save the reason model")->required();
    c->add_option("--variant", variant, "Variant when training from scratch")
        ->capture_default_str()
        ->check(CLI::IsMember(kVariantFlags));
    c->add_option("--out", out, "Training summary (JSON)");
    flags.add_to(c);
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto data = corpus::read_reason_corpus(corpus_path);
    std::optional<models::NeedCheckpoint> base;
    if (!pretrained.empty()) base = models::load_need_checkpoint(pretrained);
    const auto vectors = load_embeddings(flags.embeddings);
    std::size_t embed = vectors ? vectors->dim : flags.embed;
    if (base) {
      // Dimensions not given explicitly follow the checkpoint.
      if (!flags.embed_opt->count() && !vectors) embed = base->model.encoder.words.dim();
      if (!flags.hidden_opt->count()) flags.hidden = base->model.encoder.forward_gru.hidden_dim();
      if (!flags.max_len_opt->count()) flags.max_len = base->model.encoder.max_len;
    }
    const auto cfg = flags.config(embed);
    auto result = models::fine_tune_reason(base ? &base->model : nullptr, data, cfg,
                                           *models::parse_variant_flag(variant), vectors ? &*vectors : nullptr);
    print_warnings(result.warnings, *err_stream);
    models::save_checkpoint(result.model, cfg, checkpoint);
    auto& o = *out_stream;
    for (const auto& e : result.history) {
      o << "epoch " << e.epoch << "  loss " << util::fixed(e.train_loss, 4) << "  eval acc "
        << util::fixed(e.eval_accuracy, 4) << "  eval F1 " << util::fixed(e.eval_f1, 4) << '\n';
    }
    const auto& final_report = result.validation_report ? *result.validation_report : result.eval_report;
    o << "reason model " << models::variant_name(result.model.variant())
      << (base ? " (pretrained)" : " (from scratch)") << '\n'
      << analysis::format_report(final_report);
    if (!out.empty()) {
      Json j{{"variant", std::string(models::variant_name(result.model.variant()))},
             {"pretrained", !pretrained.empty()},
             {"config", config_json(cfg)},
             {"history", history_json(result.history)},
             {"eval", report_json(result.eval_report)}};
      if (result.validation_report) j["validation"] = report_json(*result.validation_report);
      write_file(out, j.dump(2) + "\n");
    }
  }
};

struct ReasonEval {
  std::string checkpoint, corpus_path, out;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("reason-eval", "Score a reason checkpoint on a reason corpus");
    c->add_option("--checkpoint", checkpoint, "Reason checkpoint")->required();
    c->add_option("--corpus", corpus_path, "Reason corpus (JSONL)")->required();
    c->add_option("--out", out, "Metrics (CSV)");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto ckpt = models::load_reason_checkpoint(checkpoint);
    const auto data = corpus::read_reason_corpus(corpus_path);
    const auto report = models::evaluate_reason(ckpt.model, data);
    *out_stream << analysis::format_report(report);
    if (!out.empty()) write_file(out, analysis::report_csv(report));
  }
};

// ---- analysis --------------------------------------------------------------

struct Correlate {
  std::string corpus_path, lexicons, out;
  std::size_t top = 5;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("correlate", "Point-biserial correlation of lexicon and section features");
    c->add_option("--corpus", corpus_path, "Labeled corpus (JSONL)")->required();
    c->add_option("--lexicons", lexicons, "Directory with factive/assertive/entailment/report .txt")->required();
    c->add_option("--top", top, "Features printed")->capture_default_str();
    c->add_option("--out", out, "Every feature (CSV)");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto data = corpus::read_corpus(corpus_path);
    const baselines::FeatureExtractor fx(baselines::load_lexicon_dir(lexicons), nullptr, {true, false, true, false});
    std::vector<const corpus::Statement*> stmts;
    std::vector<std::uint8_t> labels;
    for (const auto& inst : data) {
      stmts.push_back(&inst.statement);
      labels.push_back(inst.label == corpus::Label::positive);
    }
    const auto table = baselines::extract_all(fx, stmts);
    const auto report = analysis::correlate_features(table.names, table.rows, labels);
    auto& o = *out_stream;
    o << "top features on " << dataset_name(data) << " (" << data.size() << " instances)\n";
    for (std::size_t i = 0; i < std::min(top, report.entries.size()); ++i) {
      o << "  " << report.entries[i].feature << "  " << util::fixed(report.entries[i].r, 3) << '\n';
    }
    o << report.omitted.size() << " constant features omitted\n";
    if (!out.empty()) write_file(out, analysis::correlation_csv(report));
  }
};

struct ClusterReasons {
  std::string reasons, embeddings, out;
  std::size_t k = 0, k_max = 15;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::ostream* out_stream = nullptr;
  std::ostream* err_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("cluster-reasons", "k-means over averaged word vectors of free-text reasons");
    c->add_option("--reasons", reasons, "One free-text reason per line")->required();
    c->add_option("--embeddings", embeddings, "Pretrained vectors")->required();
    c->add_option("--k", k, "Clusters (0 = elbow over 1..k-max)")->capture_default_str();
    c->add_option("--k-max", k_max, "Largest k tried by the elbow sweep")->capture_default_str();
    seed_opt = c->add_option("--seed", seed, "Random seed");
    c->add_option("--out", out, "Assignments (CSV)");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    std::vector<std::string> lines;
    {
      std::istringstream in(corpus::read_file(reasons));
      for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
      }
    }
    const auto vectors = *load_embeddings(embeddings);
    const auto rv = analysis::reason_vectors(lines, vectors);
    if (rv.dropped) *err_stream << "warning: " << rv.dropped << " reasons have no known token and were dropped\n";
    if (rv.vectors.empty()) throw DataError("no reason has a known token");
    const std::size_t kmax = std::min(std::max(k_max, k), rv.vectors.size());
    const auto s = resolve_seed(seed_opt->count() ? std::optional(seed) : std::nullopt);
    const auto rep = analysis::cluster_sweep(rv.vectors, kmax, s, k);
    auto& o = *out_stream;
    o << "k = " << rep.k << (k ? " (fixed)" : rep.clear_elbow ? " (elbow)" : " (no clear elbow)") << '\n';
    for (std::size_t i = 0; i < rep.inertias.size(); ++i) {
      o << "  k=" << i + 1 << "  inertia " << util::fixed(rep.inertias[i], 4) << '\n';
    }
    std::vector<std::size_t> sizes(rep.k, 0);
    for (std::size_t a : rep.result.assignments) ++sizes[a];
    for (std::size_t c = 0; c < rep.k; ++c) o << "  cluster " << c << ": " << sizes[c] << " reasons\n";
    if (!out.empty()) write_file(out, analysis::cluster_assignments_csv(lines, rv, rep.result));
  }
};

struct Distribution {
  std::string corpus_path, by = "section", out;
  std::size_t top = 3;
  std::ostream* out_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("distribution", "Most common sections or topics per citation reason");
    c->add_option("--corpus", corpus_path, "Reason corpus (JSONL)")->required();
    c->add_option("--by", by, "Grouping")->capture_default_str()->check(CLI::IsMember({"section", "topic"}));
    c->add_option("--top", top, "Groups per reason (0 = all)")->capture_default_str();
    c->add_option("--out", out, "Table (CSV); default standard output");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto rows =
        analysis::reason_distribution(corpus::read_reason_corpus(corpus_path), *analysis::parse_group_by(by), top);
    const std::string csv = analysis::distribution_csv(rows);
    if (out.empty()) {
      *out_stream << csv;
    } else {
      write_file(out, csv);
    }
  }
};

struct Baseline {
  std::string corpus_path, lexicons, embeddings, out, features;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  std::ostream* out_stream = nullptr;
  std::ostream* err_stream = nullptr;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("baseline", "Lexicon/POS/section (+ word vector) features with a random forest");
    c->add_option("--corpus", corpus_path, "Labeled corpus (JSONL)")->required();
    c->add_option("--lexicons", lexicons, "Directory with factive/assertive/entailment/report .txt")->required();
    c->add_option("--embeddings", embeddings, "Pretrained vectors; adds the mean word vector");
    seed_opt = c->add_option("--seed", seed, "Random seed");
    c->add_option("--out", out, "Validation metrics (CSV)");
    c->add_option("--features", features, "Feature table (CSV)");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    const auto data = corpus::read_corpus(corpus_path);
    const auto vectors = load_embeddings(embeddings);
    const baselines::FeatureExtractor fx(baselines::load_lexicon_dir(lexicons), vectors ? &*vectors : nullptr,
                                         {true, true, true, vectors.has_value()});
    std::vector<std::string> warnings;
    const auto s = resolve_seed(seed_opt->count() ? std::optional(seed) : std::nullopt);
    const auto result = baselines::run_need_baseline(data, fx, s, baselines::kTreeGrid, baselines::kDepthGrid, &warnings);
    print_warnings(warnings, *err_stream);
    auto& o = *out_stream;
    o << "grid (macro-F1 on test):\n";
    for (std::size_t i = 0; i < result.tuned.grid.size(); ++i) {
      const auto& g = result.tuned.grid[i];
      o << "  trees " << g.n_trees << "  depth " << g.max_depth << "  " << util::fixed(g.test_macro_f1, 4)
        << (i == result.tuned.best ? "  *" : "") << '\n';
    }
    o << "validation\n" << analysis::format_report(result.tuned.validation);
    if (!out.empty()) write_file(out, analysis::report_csv(result.tuned.validation));
    if (!features.empty()) {
      std::vector<std::string> labels;
      for (const auto& inst : data) labels.emplace_back(corpus::to_string(inst.label));
      write_file(features, baselines::features_csv(result.features, &labels));
    }
  }
};

struct Run {
  std::string config;
  bool force = false;
  PipelineOverrides ov;
  std::uint64_t seed = 0;
  std::size_t epochs = 0, batch = 0, hidden = 0;
  std::string variant, split, embeddings, out;
  CLI::Option *seed_opt = nullptr, *epochs_opt = nullptr, *batch_opt = nullptr, *hidden_opt = nullptr,
              *variant_opt = nullptr, *split_opt = nullptr, *emb_opt = nullptr, *out_opt = nullptr;
  std::ostream* out_stream = nullptr;
  std::ostream* err_stream = nullptr;
  int status = 0;

  void add(CLI::App& app, std::function<void()>& action) {
    auto* c = app.add_subcommand("run", "Run build, train, evaluate and report stages from a config file");
    c->add_option("--config", config, "Pipeline config (TOML)")->required();
    c->add_flag("--force", force, "Rerun stages whose outputs exist");
    seed_opt = c->add_option("--seed", seed, "Override [pipeline] seed");
    epochs_opt = c->add_option("--epochs", epochs, "Override [train] epochs");
    batch_opt = c->add_option("--batch", batch, "Override [train] batch");
    hidden_opt = c->add_option("--hidden", hidden, "Override [train] hidden");
    variant_opt = c->add_option("--variant", variant, "Override [train] variant")->check(CLI::IsMember(kVariantFlags));
    split_opt = c->add_option("--split", split, "Override [train] split")->check(CLI::IsMember(kSplitFlags));
    emb_opt = c->add_option("--embeddings", embeddings, "Override [train] embeddings");
    out_opt = c->add_option("--out", out, "Override [pipeline] out");
    c->callback([this, &action] { action = [this] { run(); }; });
  }

  void run() {
    if (seed_opt->count()) ov.seed = seed;
    if (epochs_opt->count()) ov.epochs = epochs;
    if (batch_opt->count()) ov.batch = batch;
    if (hidden_opt->count()) ov.hidden = hidden;
    if (variant_opt->count()) ov.variant = variant;
    if (split_opt->count()) ov.split = split;
    if (emb_opt->count()) ov.embeddings = embeddings;
    if (out_opt->count()) ov.out = out;
    status = run_pipeline(config, ov, force, *out_stream, *err_stream);
  }
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Citation need and citation reason toolkit", "citeneed"};
  app.require_subcommand(1);
  app.fallthrough(false);
  std::function<void()> action;

  BuildCorpus build;
  Train train;
  Evaluate evaluate;
  CrossEval cross;
  Predict predict;
  Explain explain;
  ReasonTrain reason_train;
  ReasonEval reason_eval;
  Correlate correlate;
  ClusterReasons cluster;
  Distribution distribution;
  Baseline baseline;
  Run run;

  build.out_stream = train.out_stream = evaluate.out_stream = cross.out_stream = predict.out_stream =
      explain.out_stream = reason_train.out_stream = reason_eval.out_stream = correlate.out_stream =
          cluster.out_stream = distribution.out_stream = baseline.out_stream = run.out_stream = &out;
  build.err_stream = train.err_stream = reason_train.err_stream = cluster.err_stream = baseline.err_stream =
      run.err_stream = &err;

  build.add(app, action);
  train.add(app, action);
  evaluate.add(app, action);
  cross.add(app, action);
  predict.add(app, action);
  explain.add(app, action);
  reason_train.add(app, action);
  reason_eval.add(app, action);
  correlate.add(app, action);
  cluster.add(app, action);
  distribution.add(app, action);
  baseline.add(app, action);
  run.add(app, action);

  std::vector<std::string> argv_storage{"citeneed"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (action) action();
    return run.status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace citeneed::cli
