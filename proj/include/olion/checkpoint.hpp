// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "olion/optim.hpp"

namespace olion {

/// Versioned training snapshot.
///
/// Byte layout (all integers little-endian):
///   bytes 0..7    magic "OLCKPT01"
///   bytes 8..11   u32 format version (currently 1)
///   bytes 12..19  u64 length of the config JSON
///   bytes 20..27  u64 length of the meta JSON
///   ...           config JSON (canonical run-config echo, UTF-8)
///   ...           meta JSON: {"step_count", "blocks": [{"name", "kind",
///                 "rows", "cols", "step_count", "has_second_moment"}]}
///   ...           payload: per block in manifest order, X entries then the
///                 momentum buffer then (when present) the second-moment
///                 buffer, each row-major IEEE-754 binary64 little-endian
///   last 8 bytes  u64 FNV-1a64 checksum of the payload
///
/// A pretty-printed manifest is written next to the binary as
/// `<file>.manifest.json`. Save -> load -> save is byte-identical.
struct Checkpoint {
  nlohmann::json config;
  int64_t step_count = 0;
  std::vector<ParamBlock> blocks;
  std::vector<OptimizerState> states;
};

inline constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// Throws VersionMismatch on a foreign magic/version and CorruptCheckpoint
/// when the payload checksum disagrees.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace olion
