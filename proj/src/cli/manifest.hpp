#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace stepflow::cli {

struct RunManifest {
  std::string command;
  nlohmann::json config;
  nlohmann::json coefficients;
  nlohmann::json grid;
  std::uint64_t seed = 0;
  double wall_clock_s = 0.0;
  std::vector<std::filesystem::path> outputs;
};

/// FNV-1a 64 of the file bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

/// Writes <dir>/manifest.json, replacing any earlier one.
void write_manifest(const RunManifest& m, const std::filesystem::path& dir);

}  // namespace stepflow::cli
