// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs every verification criterion at its pinned
// tolerance and prints one pass/fail line per criterion.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "olion/verify.hpp"

int main(int argc, char** argv) {
  std::filesystem::path scratch =
      argc > 1 ? argv[1]
               : std::filesystem::temp_directory_path() / "olion_acceptance";
  std::error_code ec;
  std::filesystem::remove_all(scratch, ec);

  auto results = olion::verify::run_all(scratch, std::cout);
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
