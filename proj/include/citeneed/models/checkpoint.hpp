// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "citeneed/models/config.hpp"
#include "citeneed/models/need_model.hpp"
#include "citeneed/models/reason_model.hpp"

namespace citeneed::models {

// Checkpoint container, all integers little-endian, strings as u64 length
// followed by UTF-8 bytes:
//
//   magic        8 bytes "CITENEED"
//   version      u32, kCheckpointVersion
//   kind         u8, 0 = need, 1 = reason
//   variant      string ("RNNa_wS", ...)
//   dims         u64 embed_dim, hidden_dim, max_len, output width
//   config       string, JSON snapshot of the TrainConfig
//   tensors      u64 count, then per tensor: name string, u64 rank,
//                u64 extents, IEEE-754 binary64 values in row-major order
//   vocabulary   u64 count, then per row: token string, u8 trainable
//   sections     u64 count, then per key: key string, u64 row
//   weights      reason only: 8 binary64 class weights
//   checksum     32-byte SHA-256 of every preceding byte

inline constexpr std::uint32_t kCheckpointVersion = 1;

enum class CheckpointKind : std::uint8_t { need = 0, reason = 1 };

struct NeedCheckpoint {
  NeedModel model;
  TrainConfig config;
};

struct ReasonCheckpoint {
  ReasonModel model;
  TrainConfig config;
};

void save_checkpoint(const NeedModel& model, const TrainConfig& config, const std::filesystem::path& path);
void save_checkpoint(const ReasonModel& model, const TrainConfig& config, const std::filesystem::path& path);

std::string serialize_checkpoint(const NeedModel& model, const TrainConfig& config);
std::string serialize_checkpoint(const ReasonModel& model, const TrainConfig& config);

/// Errors: CheckpointError for unreadable, truncated, corrupted or
/// wrong-version files and for tensors whose names or shapes do not fit the
/// declared variant; CheckpointKindError when the file holds the other kind.
NeedCheckpoint load_need_checkpoint(const std::filesystem::path& path);
ReasonCheckpoint load_reason_checkpoint(const std::filesystem::path& path);

NeedCheckpoint parse_need_checkpoint(const std::string& bytes, const std::string& origin);
ReasonCheckpoint parse_reason_checkpoint(const std::string& bytes, const std::string& origin);

/// Kind recorded in a checkpoint, after the integrity check.
CheckpointKind checkpoint_kind(const std::filesystem::path& path);

}  // namespace citeneed::models
