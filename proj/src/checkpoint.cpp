// SPDX-License-Identifier: Apache-2.0
#include "olion/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "olion/errors.hpp"
#include "olion/io.hpp"

namespace olion {

namespace {

constexpr char kMagic[8] = {'O', 'L', 'C', 'K', 'P', 'T', '0', '1'};

void append_u32(std::string& out, uint32_t value) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

void append_u64(std::string& out, uint64_t value) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

void append_f64(std::string& out, double value) {
  append_u64(out, std::bit_cast<uint64_t>(value));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  uint32_t read_u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(next_byte()) << (8 * i);
    return v;
  }

  uint64_t read_u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(next_byte()) << (8 * i);
    return v;
  }

  double read_f64() { return std::bit_cast<double>(read_u64()); }

  std::string read_bytes(size_t count) {
    require(count);
    std::string out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }

  size_t pos() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  uint8_t next_byte() {
    require(1);
    return static_cast<uint8_t>(bytes_[pos_++]);
  }

  void require(size_t count) {
    if (pos_ + count > bytes_.size()) {
      throw Error(ErrorCode::CorruptCheckpoint, "checkpoint truncated");
    }
  }

  const std::string& bytes_;
  size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  if (ckpt.blocks.size() != ckpt.states.size()) {
    throw Error(ErrorCode::ShapeMismatch, "checkpoint: blocks/states count mismatch");
  }

  nlohmann::json meta;
  meta["step_count"] = ckpt.step_count;
  auto block_list = nlohmann::json::array();
  for (size_t b = 0; b < ckpt.blocks.size(); ++b) {
    const ParamBlock& block = ckpt.blocks[b];
    const OptimizerState& state = ckpt.states[b];
    block_list.push_back(
        {{"name", block.name},
         {"kind", block.kind == BlockKind::MatrixShaped ? "matrix" : "fallback_1d"},
         {"rows", block.matrix.rows()},
         {"cols", block.matrix.cols()},
         {"step_count", state.step_count},
         {"has_second_moment", !state.second_moment.empty()}});
  }
  meta["blocks"] = block_list;

  std::string config_json = ckpt.config.dump();
  std::string meta_json = meta.dump();

  std::string payload;
  for (size_t b = 0; b < ckpt.blocks.size(); ++b) {
    for (double v : ckpt.blocks[b].matrix.data()) append_f64(payload, v);
    for (double v : ckpt.states[b].momentum.data()) append_f64(payload, v);
    for (double v : ckpt.states[b].second_moment.data()) append_f64(payload, v);
  }

  std::string bytes;
  bytes.append(kMagic, sizeof(kMagic));
  append_u32(bytes, kCheckpointVersion);
  append_u64(bytes, config_json.size());
  append_u64(bytes, meta_json.size());
  bytes += config_json;
  bytes += meta_json;
  uint64_t checksum = fnv1a64(payload.data(), payload.size());
  bytes += payload;
  append_u64(bytes, checksum);

  write_file_bytes(path, bytes);

  nlohmann::json manifest;
  manifest["format_version"] = kCheckpointVersion;
  manifest["config"] = ckpt.config;
  manifest["meta"] = meta;
  char checksum_hex[24];
  std::snprintf(checksum_hex, sizeof(checksum_hex), "%016llx",
                static_cast<unsigned long long>(checksum));
  manifest["payload_checksum_fnv1a64"] = checksum_hex;
  write_file_bytes(path.string() + ".manifest.json", manifest.dump(2) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::string bytes = read_file_bytes(path);
  Reader reader(bytes);

  std::string magic = reader.read_bytes(sizeof(kMagic));
  if (std::memcmp(magic.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::VersionMismatch, "not a checkpoint file: " + path.string());
  }
  uint32_t version = reader.read_u32();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "unsupported checkpoint version " + std::to_string(version));
  }
  uint64_t config_len = reader.read_u64();
  uint64_t meta_len = reader.read_u64();

  Checkpoint ckpt;
  nlohmann::json meta;
  try {
    ckpt.config = nlohmann::json::parse(reader.read_bytes(config_len));
    meta = nlohmann::json::parse(reader.read_bytes(meta_len));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptCheckpoint,
                std::string("checkpoint header unreadable: ") + e.what());
  }

  if (reader.remaining() < 8) {
    throw Error(ErrorCode::CorruptCheckpoint, "checkpoint truncated");
  }
  size_t payload_size = reader.remaining() - 8;
  size_t payload_start = reader.pos();
  std::string payload = reader.read_bytes(payload_size);
  uint64_t stored_checksum = reader.read_u64();
  if (fnv1a64(payload.data(), payload.size()) != stored_checksum) {
    throw Error(ErrorCode::CorruptCheckpoint, "payload checksum mismatch");
  }

  Reader payload_reader(bytes);
  payload_reader.read_bytes(payload_start);

  ckpt.step_count = meta.at("step_count").get<int64_t>();
  for (const auto& entry : meta.at("blocks")) {
    ParamBlock block;
    block.name = entry.at("name").get<std::string>();
    block.kind = entry.at("kind").get<std::string>() == "matrix"
                     ? BlockKind::MatrixShaped
                     : BlockKind::Fallback1d;
    int rows = entry.at("rows").get<int>();
    int cols = entry.at("cols").get<int>();
    bool has_v = entry.at("has_second_moment").get<bool>();

    block.matrix = Matrix(rows, cols);
    for (double& v : block.matrix.data()) v = payload_reader.read_f64();

    OptimizerState state;
    state.step_count = entry.at("step_count").get<int64_t>();
    state.momentum = Matrix(rows, cols);
    for (double& v : state.momentum.data()) v = payload_reader.read_f64();
    if (has_v) {
      state.second_moment = Matrix(rows, cols);
      for (double& v : state.second_moment.data()) v = payload_reader.read_f64();
    }
    ckpt.blocks.push_back(std::move(block));
    ckpt.states.push_back(std::move(state));
  }
  if (payload_reader.pos() != payload_start + payload_size) {
    throw Error(ErrorCode::CorruptCheckpoint, "payload size disagrees with manifest");
  }
  return ckpt;
}

}  // namespace olion
