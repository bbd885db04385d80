#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "stepflow/coefficients.hpp"
#include "stepflow/evolution.hpp"
#include "stepflow/field.hpp"

namespace stepflow::cli {

using nlohmann::json;

// Anything the user can fix by editing a config or flag; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json load_json(const std::filesystem::path& path);

// Coefficient block, one of
//   {"preset": "baseline"}
//   {"material": {"g1":..,"g3":..,"a":..,"nu":..,"G":..,"r_c":..,"eps0":..}}
//   {"nondimensional": {"c1":1,"c2":1,"c3":1,"a":0.01}}
ModelCoefficients coefficients_from(const json& block, const std::string& where);
PhysicalParams material_from(const json& block, const std::string& where);

json coefficients_json(const ModelCoefficients& c);

struct RunConfig {
  ModelCoefficients coeffs;
  Grid grid;
  Vec2 slope{0.0, 0.0};
  json initial;
  EvolutionConfig evolution;
  std::uint64_t seed = 0;
};

/// Parses the evolve schema; throws ConfigError naming the offending field.
RunConfig run_config_from(const json& j);

/// Builds the initial field named by cfg.initial.
ScalarField initial_field(const RunConfig& cfg);

}  // namespace stepflow::cli
