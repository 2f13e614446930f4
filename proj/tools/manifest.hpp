#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fparadox_cli {

/// Everything needed to re-execute a run: the exact argument vector, the
/// parsed parameters, and digests of every input file.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::optional<std::uint64_t> master_seed;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, sha256 hex
  std::vector<std::string> argv;                                    // without program name
};

std::string sha256_file(const std::string& path);

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

}  // namespace fparadox_cli
