// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <set>

#include "citeneed/analysis/attention_report.hpp"
#include "citeneed/analysis/correlation.hpp"
#include "citeneed/baselines/features.hpp"
#include "citeneed/cli/cli.hpp"
#include "citeneed/corpus/corpus_io.hpp"
#include "citeneed/corpus/datasets.hpp"
#include "citeneed/corpus/markup.hpp"
#include "citeneed/models/checkpoint.hpp"
#include "citeneed/util/digest.hpp"
#include "common.hpp"

namespace citeneed::cli {

namespace {

namespace fs = std::filesystem;

// Accepted keys per section, with the default used when a key is absent.
const std::map<std::string, std::map<std::string, std::string>>& schema() {
  static const std::map<std::string, std::map<std::string, std::string>> s{
      {"pipeline", {{"out", "pipeline-out"}, {"seed", ""}}},
      {"corpus",
       {{"articles", ""},
        {"corpus", ""},
        {"dataset", "FA"},
        {"n_pos", std::to_string(corpus::kDefaultFaPerClass)},
        {"n_neg", std::to_string(corpus::kDefaultFaPerClass)},
        {"n_total", std::to_string(corpus::kDefaultRndTotal)}}},
      {"train",
       {{"variant", "rnn-a-s"},
        {"epochs", "10"},
        {"batch", "100"},
        {"hidden", "100"},
        {"embed_dim", "100"},
        {"max_len", "60"},
        {"lr", "0.001"},
        {"split", "50/50"},
        {"embeddings", ""}}},
      {"report", {{"explain", "true"}, {"limit", "25"}, {"lexicons", ""}}},
  };
  return s;
}

class Settings {
 public:
  Settings(const fs::path& config) : base_(config.parent_path()) {
    std::vector<CLI::ConfigItem> items;
    try {
      items = CLI::ConfigTOML().from_file(config.string());
    } catch (const CLI::FileError&) {
      throw DataError("cannot read pipeline config: " + config.string());
    } catch (const CLI::ParseError& e) {
      throw DataError("pipeline config " + config.string() + ": " + e.what());
    }
    std::vector<std::string> bad;
    for (const auto& item : items) {
      if (item.name == "++" || item.name == "--") continue;
      const std::string section = item.parents.size() == 1 ? item.parents[0] : "";
      const auto sec = schema().find(section);
      if (item.parents.size() != 1 || sec == schema().end() || !sec->second.count(item.name)) {
        bad.push_back(item.fullname());
        continue;
      }
      if (item.inputs.size() != 1) {
        bad.push_back(item.fullname());
        continue;
      }
      values_[item.fullname()] = item.inputs[0];
    }
    if (!bad.empty()) {
      std::string list;
      for (const auto& b : bad) list += (list.empty() ? "" : ", ") + b;
      throw DataError("pipeline config " + config.string() + ": unknown or malformed keys: " + list);
    }
  }

  std::string str(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    const auto dot = key.find('.');
    return schema().at(key.substr(0, dot)).at(key.substr(dot + 1));
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::size_t count(const std::string& key) const {
    const std::string v = str(key);
    try {
      std::size_t pos = 0;
      const unsigned long long n = std::stoull(v, &pos);
      if (pos == v.size()) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw DataError("pipeline config: " + key + " must be a non-negative integer, got \"" + v + "\"");
  }

  double number(const std::string& key) const {
    const std::string v = str(key);
    try {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw DataError("pipeline config: " + key + " must be a number, got \"" + v + "\"");
  }

  bool flag(const std::string& key) const {
    const std::string v = str(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw DataError("pipeline config: " + key + " must be true or false, got \"" + v + "\"");
  }

  /// Relative paths are taken from the config file's directory.
  std::string path(const std::string& key) const {
    const std::string v = str(key);
    if (v.empty() || fs::path(v).is_absolute()) return v;
    return (base_ / v).lexically_normal().string();
  }

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

 private:
  fs::path base_;
  std::map<std::string, std::string> values_;
};

std::string file_digest(const std::string& path) { return util::sha256_hex(corpus::read_file(path)); }

std::string stage_digest(const std::string& stage, const std::vector<std::pair<std::string, std::string>>& fields) {
  std::string canonical = stage + "\n";
  for (const auto& [k, v] : fields) canonical += k + "=" + v + "\n";
  return util::sha256_hex(canonical).substr(0, 16);
}

struct StageLog {
  std::ostream& out;
  Json manifest = Json::array();

  void record(const std::string& stage, const fs::path& output, bool cached) {
    out << stage << ": " << (cached ? "cached" : "ran") << " -> " << output.string() << '\n';
    manifest.push_back({{"stage", stage}, {"output", output.filename().string()}, {"cached", cached}});
  }
};

}  // namespace

int run_pipeline(const fs::path& config, const PipelineOverrides& ov, bool force, std::ostream& out,
                 std::ostream& err) {
  Settings s(config);
  if (ov.seed) s.set("pipeline.seed", std::to_string(*ov.seed));
  if (ov.epochs) s.set("train.epochs", std::to_string(*ov.epochs));
  if (ov.batch) s.set("train.batch", std::to_string(*ov.batch));
  if (ov.hidden) s.set("train.hidden", std::to_string(*ov.hidden));
  if (ov.variant) s.set("train.variant", *ov.variant);
  if (ov.split) s.set("train.split", *ov.split);
  const std::string embeddings_path = ov.embeddings ? *ov.embeddings : s.path("train.embeddings");
  const fs::path out_dir = ov.out ? fs::path(*ov.out) : fs::path(s.path("pipeline.out"));

  const std::uint64_t seed =
      resolve_seed(s.has("pipeline.seed") ? std::optional<std::uint64_t>(s.count("pipeline.seed")) : std::nullopt);
  const auto variant = models::parse_variant_flag(s.str("train.variant"));
  if (!variant) throw DataError("pipeline config: train.variant must be one of rnn, rnn-s, rnn-a, rnn-a-s");
  const auto split = models::parse_split_flag(s.str("train.split"));
  if (!split) throw DataError("pipeline config: train.split must be 50/50 or 50/30/20");
  const std::string dataset = s.str("corpus.dataset");
  if (dataset != "FA" && dataset != "LQN" && dataset != "RND") {
    throw DataError("pipeline config: corpus.dataset must be FA, LQN or RND");
  }
  if (s.path("corpus.articles").empty() == s.path("corpus.corpus").empty()) {
    throw DataError("pipeline config: set exactly one of corpus.articles and corpus.corpus");
  }

  fs::create_directories(out_dir);
  StageLog log{out};

  // build
  std::string corpus_path = s.path("corpus.corpus");
  if (corpus_path.empty()) {
    const std::string articles = s.path("corpus.articles");
    const std::string h = stage_digest("build", {{"articles", file_digest(articles)},
                                                 {"dataset", dataset},
                                                 {"n_pos", std::to_string(s.count("corpus.n_pos"))},
                                                 {"n_neg", std::to_string(s.count("corpus.n_neg"))},
                                                 {"n_total", std::to_string(s.count("corpus.n_total"))},
                                                 {"seed", std::to_string(seed)}});
    const fs::path target = out_dir / ("corpus-" + h + ".jsonl");
    const bool cached = !force && fs::exists(target);
    if (!cached) {
      std::vector<corpus::RawArticle> raw;
      std::vector<std::string> warnings;
      for (auto& src : corpus::read_article_dump(articles)) {
        auto a = corpus::parse_article(src.markup, src.article_id, src.quality, &warnings);
        a.topic = src.topic;
        raw.push_back(std::move(a));
      }
      for (const auto& w : warnings) err << "warning: " << w << '\n';
      std::vector<corpus::LabeledInstance> data;
      if (dataset == "FA") {
        std::erase_if(raw, [](const auto& a) { return a.quality_class != corpus::QualityClass::featured; });
        data = corpus::build_fa_dataset(raw, s.count("corpus.n_pos"), s.count("corpus.n_neg"), seed);
      } else if (dataset == "LQN") {
        data = corpus::build_lqn_dataset(raw, s.count("corpus.n_pos"), s.count("corpus.n_neg"), seed);
      } else {
        data = corpus::build_rnd_dataset(raw, s.count("corpus.n_total"), seed);
      }
      auto tmp = target;
      tmp += ".tmp";
      corpus::write_corpus(data, tmp);
      fs::rename(tmp, target);
    }
    log.record("build", target, cached);
    corpus_path = target.string();
  }
  const std::string corpus_digest = file_digest(corpus_path);

  // train
  models::TrainConfig cfg;
  const auto vectors = load_embeddings(embeddings_path);
  cfg.epochs = s.count("train.epochs");
  cfg.batch_size = s.count("train.batch");
  cfg.dims = {vectors ? vectors->dim : s.count("train.embed_dim"), s.count("train.hidden"),
              s.count("train.max_len")};
  cfg.adam.learning_rate = s.number("train.lr");
  cfg.seed = seed;
  cfg.split = *split;
  try {
    cfg.validate();
  } catch (const DataError&) {
    throw;
  } catch (const Error& e) {
    throw DataError(std::string("pipeline config: ") + e.what());
  }
  const std::string train_h =
      stage_digest("train", {{"corpus", corpus_digest},
                             {"variant", std::string(models::variant_name(*variant))},
                             {"config", config_json(cfg).dump()},
                             {"embeddings", embeddings_path.empty() ? "" : file_digest(embeddings_path)}});
  const fs::path model_path = out_dir / ("model-" + train_h + ".ckpt");
  const fs::path summary_path = out_dir / ("train-" + train_h + ".json");
  {
    const bool cached = !force && fs::exists(model_path) && fs::exists(summary_path);
    if (!cached) {
      const auto data = corpus::read_corpus(corpus_path);
      auto result = models::train_need(data, cfg, *variant, vectors ? &*vectors : nullptr);
      models::save_checkpoint(result.model, cfg, model_path.string() + ".tmp");
      fs::rename(model_path.string() + ".tmp", model_path);
      Json j{{"variant", std::string(models::variant_name(*variant))},
             {"config", config_json(cfg)},
             {"history", history_json(result.history)},
             {"eval", report_json(result.eval_report)}};
      if (result.validation_report) j["validation"] = report_json(*result.validation_report);
      write_file(summary_path, j.dump(2) + "\n");
    }
    log.record("train", model_path, cached);
  }
  const std::string model_digest = file_digest(model_path.string());

  // evaluate: the held-out part of the same split (validation for 50/30/20)
  std::vector<corpus::LabeledInstance> held_out;
  {
    const auto data = corpus::read_corpus(corpus_path);
    const auto parts = models::make_split(data.size(), cfg.split, cfg.seed);
    for (std::size_t i : cfg.split == models::SplitMode::three_way ? parts.validation : parts.eval) {
      held_out.push_back(data[i]);
    }
  }
  const std::string eval_h = stage_digest("evaluate", {{"model", model_digest}, {"corpus", corpus_digest}});
  const fs::path eval_path = out_dir / ("eval-" + eval_h + ".csv");
  {
    const bool cached = !force && fs::exists(eval_path);
    if (!cached) {
      const auto ckpt = models::load_need_checkpoint(model_path);
      const auto report = models::evaluate_need(ckpt.model, held_out);
      write_file(eval_path, analysis::report_csv(report));
      out << analysis::format_report(report);
    }
    log.record("evaluate", eval_path, cached);
  }

  // report
  if (s.flag("report.explain") && models::has_attention(*variant)) {
    const std::size_t limit = s.count("report.limit");
    const std::string h =
        stage_digest("explain", {{"model", model_digest}, {"corpus", corpus_digest}, {"limit", std::to_string(limit)}});
    const fs::path target = out_dir / ("attention-" + h + ".html");
    const bool cached = !force && fs::exists(target);
    if (!cached) {
      std::vector<corpus::Statement> stmts;
      for (const auto& inst : held_out) {
        if (limit && stmts.size() >= limit) break;
        stmts.push_back(inst.statement);
      }
      const auto ckpt = models::load_need_checkpoint(model_path);
      analysis::write_attention_report(
          analysis::render_attention_report(analysis::need_attention_entries(ckpt.model, stmts),
                                            "Citation need attention: " +
                                                std::string(models::variant_name(*variant))),
          target);
    }
    log.record("explain", target, cached);
  }
  if (const std::string lex = s.path("report.lexicons"); !lex.empty()) {
    std::string lex_digest;
    for (const char* name : {"factive", "assertive", "entailment", "report"}) {
      const fs::path p = fs::path(lex) / (std::string(name) + ".txt");
      lex_digest += fs::exists(p) ? file_digest(p.string()) : "-";
    }
    const std::string h = stage_digest("correlate", {{"corpus", corpus_digest}, {"lexicons", lex_digest}});
    const fs::path target = out_dir / ("correlation-" + h + ".csv");
    const bool cached = !force && fs::exists(target);
    if (!cached) {
      const auto data = corpus::read_corpus(corpus_path);
      const baselines::FeatureExtractor fx(baselines::load_lexicon_dir(lex), nullptr, {true, false, true, false});
      std::vector<const corpus::Statement*> stmts;
      std::vector<std::uint8_t> labels;
      for (const auto& inst : data) {
        stmts.push_back(&inst.statement);
        labels.push_back(inst.label == corpus::Label::positive);
      }
      const auto table = baselines::extract_all(fx, stmts);
      write_file(target, analysis::correlation_csv(analysis::correlate_features(table.names, table.rows, labels)));
    }
    log.record("correlate", target, cached);
  }

  write_file(out_dir / "pipeline.json", Json{{"stages", log.manifest}}.dump(2) + "\n");
  return kExitOk;
}

}  // namespace citeneed::cli
