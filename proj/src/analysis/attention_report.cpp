// SPDX-License-Identifier: Apache-2.0
#include "citeneed/analysis/attention_report.hpp"

#include <algorithm>
#include <fstream>

#include "citeneed/error.hpp"
#include "citeneed/util/csv.hpp"

namespace citeneed::analysis {

using util::fixed;

namespace {

void require_attention(models::Variant v) {
  if (!models::has_attention(v)) {
    throw VariantError("attention report needs an attention variant, got " + std::string(models::variant_name(v)));
  }
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<AttentionEntry> reason_attention_entries(const models::ReasonModel& model,
                                                     const std::vector<corpus::Statement>& statements) {
  require_attention(model.encoder.variant);
  std::array<std::vector<AttentionEntry>, corpus::kReasonCount> groups;
  for (const auto& s : statements) {
    const auto pred = models::reason_attention(model, s);
    const auto probs = models::reason_probabilities(model, s);
    const auto data = probs.data();
    const auto r = static_cast<std::size_t>(std::max_element(data.begin(), data.end()) - data.begin());
    groups[r].push_back({std::string(corpus::to_string(corpus::kAllReasons[r])), data[r], pred.tokens, pred.weights});
  }
  std::vector<AttentionEntry> out;
  for (auto& g : groups) std::move(g.begin(), g.end(), std::back_inserter(out));
  return out;
}

std::vector<AttentionEntry> need_attention_entries(const models::NeedModel& model,
                                                   const std::vector<corpus::Statement>& statements) {
  require_attention(model.encoder.variant);
  std::vector<AttentionEntry> pos, neg;
  for (const auto& s : statements) {
    const auto pred = models::predict_with_attention(model, s);
    if (pred.probability >= 0.5) {
      pos.push_back({"positive", pred.probability, pred.tokens, pred.weights});
    } else {
      neg.push_back({"negative", 1.0 - pred.probability, pred.tokens, pred.weights});
    }
  }
  std::move(neg.begin(), neg.end(), std::back_inserter(pos));
  return pos;
}

RenderedReport render_attention_report(const std::vector<AttentionEntry>& entries, const std::string& title) {
  RenderedReport r;
  r.html =
      "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>" + escape(title) +
      "</title>\n<style>\nbody{font-family:sans-serif;max-width:60em;margin:2em auto}\n"
      ".tok{padding:0 2px;border-radius:2px}\n.legend{font-size:80%;color:#555}\n</style>\n</head>\n<body>\n<h1>" +
      escape(title) + "</h1>\n";
  r.text = title + "\n";
  std::string current;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const AttentionEntry& e = entries[i];
    if (e.tokens.size() != e.weights.size()) throw ShapeError("attention report: tokens and weights differ");
    if (i == 0 || e.group != current) {
      current = e.group;
      r.html += "<h2>" + escape(current) + "</h2>\n";
      r.text += "\n== " + current + " ==\n";
    }
    const double max_w = e.weights.empty() ? 1.0 : *std::max_element(e.weights.begin(), e.weights.end());
    r.html += "<p class=\"stmt\" data-score=\"" + fixed(e.score, 4) + "\">";
    r.text += "[" + fixed(e.score, 4) + "]";
    std::string legend;
    double sum = 0;
    for (std::size_t t = 0; t < e.tokens.size(); ++t) {
      const double alpha = max_w > 0 ? e.weights[t] / max_w : 0.0;
      r.html += (t ? " " : "") + std::string("<span class=\"tok\" style=\"background:rgba(220,40,40,") +
                fixed(alpha, 3) + ")\" title=\"" + fixed(e.weights[t], 4) + "\">" + escape(e.tokens[t]) + "</span>";
      r.text += " " + e.tokens[t] + ":" + fixed(e.weights[t], 4);
      legend += (t ? " " : "") + escape(e.tokens[t]) + "=" + fixed(e.weights[t], 4);
      sum += e.weights[t];
    }
    r.html += "<br><span class=\"legend\">" + legend + " (sum " + fixed(sum, 4) + ")</span></p>\n";
    r.text += "\n";
  }
  r.html += "</body>\n</html>\n";
  return r;
}

void write_attention_report(const RenderedReport& report, const std::filesystem::path& path) {
  auto text_path = path;
  text_path.replace_extension(".txt");
  if (text_path == path) text_path += ".txt";
  for (const auto& [p, content] : {std::pair{path, &report.html}, std::pair{text_path, &report.text}}) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out << *content;
  }
}

}  // namespace citeneed::analysis
