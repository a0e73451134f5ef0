// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace olion {

/// Floats in every CSV are printed with 17 significant digits so that
/// re-parsing reproduces the exact double.
std::string format_g17(double value);

/// Append-only CSV writer; the header row is written on construction.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void write_row(const std::vector<std::string>& cells);
  const std::filesystem::path& path() const { return path_; }
  void flush() { out_.flush(); }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::string& bytes);
void ensure_directory(const std::filesystem::path& dir);

/// FNV-1a 64-bit, used as the checkpoint payload checksum.
uint64_t fnv1a64(const void* data, size_t size);

}  // namespace olion
