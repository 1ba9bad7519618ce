// SPDX-License-Identifier: Apache-2.0
#include "citeneed/corpus/corpus_io.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "citeneed/error.hpp"

namespace citeneed::corpus {

namespace {

using Json = nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw DataError("write failed: " + path.string());
}

void write_line(std::ofstream& out, const Json& j) {
  out << j.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
}

Json statement_json(const Statement& s, Label label, DatasetKind dataset) {
  Json j;
  j["schema_version"] = kCorpusSchemaVersion;
  j["article_id"] = s.article_id;
  j["section"] = s.section_heading;
  j["is_lead"] = s.is_lead;
  j["text"] = s.text;
  j["tokens"] = s.tokens;
  j["label"] = std::string(to_string(label));
  j["dataset"] = std::string(to_string(dataset));
  return j;
}

/// Calls `fn(json, line_number)` for every non-empty line.
void for_each_line(const std::filesystem::path& path, const std::function<void(const Json&, std::size_t)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus: " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw DataError(path.string() + ":" + std::to_string(number) + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError(path.string() + ":" + std::to_string(number) + ": expected an object");
    fn(j, number);
  }
}

class LineReader {
 public:
  LineReader(const Json& j, const std::filesystem::path& path, std::size_t line)
      : j_(j), where_(path.string() + ":" + std::to_string(line)) {}

  template <typename T>
  T get(const char* key) const {
    auto it = j_.find(key);
    if (it == j_.end()) throw DataError(where_ + ": missing field \"" + key + "\"");
    try {
      return it->get<T>();
    } catch (const Json::exception&) {
      throw DataError(where_ + ": field \"" + key + "\" has the wrong type");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }

  void check_version() const {
    const int found = get<int>("schema_version");
    if (found != kCorpusSchemaVersion) {
      throw DataError(where_ + ": unsupported schema_version: found " + std::to_string(found) +
                      ", expected " + std::to_string(kCorpusSchemaVersion));
    }
  }

  [[noreturn]] void fail(const std::string& message) const { throw DataError(where_ + ": " + message); }

  Statement statement() const {
    Statement s;
    s.article_id = get<std::string>("article_id");
    s.section_heading = get<std::string>("section");
    s.is_lead = get<bool>("is_lead");
    s.text = get<std::string>("text");
    s.tokens = get<std::vector<std::string>>("tokens");
    return s;
  }

  Label label() const {
    const auto value = get<std::string>("label");
    auto label = parse_label(value);
    if (!label) fail("unknown label \"" + value + "\"");
    return *label;
  }

  DatasetKind dataset() const {
    const auto value = get<std::string>("dataset");
    auto kind = parse_dataset(value);
    if (!kind) fail("unknown dataset \"" + value + "\"");
    return *kind;
  }

 private:
  const Json& j_;
  std::string where_;
};

void restore_flags(Statement& s, Label label, DatasetKind dataset) {
  s.has_inline_citation = label == Label::positive && dataset != DatasetKind::LQN;
  s.has_citation_needed_tag = label == Label::positive && dataset == DatasetKind::LQN;
}

}  // namespace

void write_corpus(const std::vector<LabeledInstance>& instances, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const LabeledInstance& inst : instances) {
    write_line(out, statement_json(inst.statement, inst.label, inst.dataset));
  }
  finish(out, path);
}

std::vector<LabeledInstance> read_corpus(const std::filesystem::path& path) {
  std::vector<LabeledInstance> out;
  for_each_line(path, [&](const Json& j, std::size_t line) {
    LineReader r(j, path, line);
    r.check_version();
    LabeledInstance inst{r.statement(), r.label(), r.dataset()};
    restore_flags(inst.statement, inst.label, inst.dataset);
    out.push_back(std::move(inst));
  });
  return out;
}

void write_reason_corpus(const std::vector<ReasonInstance>& instances, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const ReasonInstance& inst : instances) {
    Json j = statement_json(inst.statement, Label::positive, inst.dataset);
    j["reason"] = std::string(to_string(inst.reason));
    if (!inst.topic.empty()) j["topic"] = inst.topic;
    write_line(out, j);
  }
  finish(out, path);
}

std::vector<ReasonInstance> read_reason_corpus(const std::filesystem::path& path) {
  std::vector<ReasonInstance> out;
  for_each_line(path, [&](const Json& j, std::size_t line) {
    LineReader r(j, path, line);
    r.check_version();
    if (r.label() != Label::positive) r.fail("reason instances must be labeled positive");
    ReasonInstance inst;
    inst.statement = r.statement();
    inst.dataset = r.dataset();
    const auto value = r.get<std::string>("reason");
    auto reason = parse_reason(value);
    if (!reason) r.fail("unknown reason \"" + value + "\"");
    inst.reason = *reason;
    if (r.has("topic")) inst.topic = r.get<std::string>("topic");
    restore_flags(inst.statement, Label::positive, inst.dataset);
    out.push_back(std::move(inst));
  });
  return out;
}

std::vector<Statement> read_statements(const std::filesystem::path& path) {
  std::vector<Statement> out;
  for_each_line(path, [&](const Json& j, std::size_t line) {
    LineReader r(j, path, line);
    r.check_version();
    out.push_back(r.statement());
  });
  return out;
}

std::vector<ArticleSource> read_article_dump(const std::filesystem::path& path) {
  std::vector<ArticleSource> out;
  for_each_line(path, [&](const Json& j, std::size_t line) {
    LineReader r(j, path, line);
    ArticleSource a;
    a.article_id = r.get<std::string>("article_id");
    a.title = r.has("title") ? r.get<std::string>("title") : a.article_id;
    const auto quality = r.get<std::string>("quality");
    auto q = parse_quality(quality);
    if (!q) r.fail("unknown quality \"" + quality + "\"");
    a.quality = *q;
    a.markup = r.get<std::string>("markup");
    if (r.has("topic")) a.topic = r.get<std::string>("topic");
    out.push_back(std::move(a));
  });
  return out;
}

void write_article_dump(const std::vector<ArticleSource>& articles, const std::filesystem::path& path) {
  auto out = open_output(path);
  for (const ArticleSource& a : articles) {
    Json j;
    j["article_id"] = a.article_id;
    j["title"] = a.title;
    j["quality"] = std::string(to_string(a.quality));
    j["markup"] = a.markup;
    if (!a.topic.empty()) j["topic"] = a.topic;
    write_line(out, j);
  }
  finish(out, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace citeneed::corpus
