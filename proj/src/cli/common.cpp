// SPDX-License-Identifier: Apache-2.0
#include "common.hpp"

#include <fstream>
#include <sstream>

#include "citeneed/error.hpp"

namespace citeneed::cli {

std::optional<encoder::PretrainedVectors> load_embeddings(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return encoder::load_pretrained(path);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
    if (!out) throw DataError("write failed: " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

Json report_json(const analysis::EvaluationReport& report) {
  Json classes = Json::array();
  for (const auto& c : report.per_class) {
    classes.push_back({{"class", c.name},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1},
                       {"support", c.support}});
  }
  Json confusion = Json::array();
  for (std::size_t t = 0; t < report.confusion.size(); ++t) {
    Json row = Json::array();
    for (std::size_t p = 0; p < report.confusion.size(); ++p) row.push_back(report.confusion.at(t, p));
    confusion.push_back(row);
  }
  return {{"n_instances", report.n_instances},
          {"accuracy", report.accuracy},
          {"macro_precision", report.macro_precision},
          {"macro_recall", report.macro_recall},
          {"macro_f1", report.macro_f1},
          {"per_class", classes},
          {"confusion", confusion}};
}

Json history_json(const std::vector<models::EpochStats>& history) {
  Json out = Json::array();
  for (const auto& e : history) {
    out.push_back({{"epoch", e.epoch},
                   {"train_loss", e.train_loss},
                   {"eval_accuracy", e.eval_accuracy},
                   {"eval_f1", e.eval_f1}});
  }
  return out;
}

Json config_json(const models::TrainConfig& cfg) {
  return {{"epochs", cfg.epochs},
          {"batch_size", cfg.batch_size},
          {"embed_dim", cfg.dims.embed_dim},
          {"hidden_dim", cfg.dims.hidden_dim},
          {"max_len", cfg.dims.max_len},
          {"learning_rate", cfg.adam.learning_rate},
          {"seed", cfg.seed},
          {"split", std::string(models::split_flag(cfg.split))},
          {"train_pretrained", cfg.train_pretrained}};
}

}  // namespace citeneed::cli
