#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "config.hpp"

#ifndef STEPFLOW_VERSION
#define STEPFLOW_VERSION "dev"
#endif

namespace stepflow::cli {

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read output " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[static_cast<std::size_t>(i)]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  nlohmann::json digests = nlohmann::json::object();
  for (const auto& p : m.outputs) digests[p.filename().string()] = file_digest(p);
  const nlohmann::json j = {{"command", m.command},     {"config", m.config},
                            {"coefficients", m.coefficients}, {"grid", m.grid},
                            {"seed", m.seed},           {"version", STEPFLOW_VERSION},
                            {"wall_clock_s", m.wall_clock_s}, {"outputs", digests}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw ConfigError("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

}  // namespace stepflow::cli
