// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "citeneed/analysis/metrics.hpp"
#include "citeneed/encoder/embeddings.hpp"
#include "citeneed/models/config.hpp"

namespace citeneed::cli {

using Json = nlohmann::ordered_json;

std::optional<encoder::PretrainedVectors> load_embeddings(const std::string& path);

/// Writes through a sibling temporary file and a rename, creating parent
/// directories.
void write_file(const std::filesystem::path& path, const std::string& content);

Json report_json(const analysis::EvaluationReport& report);
Json history_json(const std::vector<models::EpochStats>& history);
Json config_json(const models::TrainConfig& cfg);

}  // namespace citeneed::cli
