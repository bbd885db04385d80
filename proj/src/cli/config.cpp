#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "stepflow/errors.hpp"
#include "stepflow/experiments.hpp"
#include "stepflow/field_io.hpp"
#include "stepflow/random_field.hpp"

namespace stepflow::cli {
namespace {

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + where + "." + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw ConfigError("field '" + where + "." + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

}  // namespace

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

PhysicalParams material_from(const json& m, const std::string& where) {
  PhysicalParams p;
  p.g1 = number(m, "g1", where);
  p.g3 = number(m, "g3", where);
  p.a = number(m, "a", where);
  p.nu = number(m, "nu", where);
  p.G = number(m, "G", where);
  p.r_c = number_or(m, "r_c", p.a, where);
  p.eps0 = number(m, "eps0", where);
  return p;
}

ModelCoefficients coefficients_from(const json& block, const std::string& where) {
  try {
    if (block.contains("preset")) {
      const json& v = block.at("preset");
      if (!v.is_string()) throw ConfigError("field '" + where + ".preset' must be a string");
      const auto p = physical_preset(v.get<std::string>());
      if (!p) throw ConfigError("unknown preset '" + v.get<std::string>() + "' (baseline, si113, si111)");
      PhysicalParams m = *p;
      if (block.contains("eps0")) m.eps0 = number(block, "eps0", where);
      return derive_coefficients(m);
    }
    if (block.contains("material")) return derive_coefficients(material_from(block.at("material"), where + ".material"));
    if (block.contains("nondimensional")) {
      const json& n = block.at("nondimensional");
      const std::string w = where + ".nondimensional";
      return ModelCoefficients::nondimensional(number(n, "c1", w), number(n, "c2", w), number(n, "c3", w),
                                               number(n, "a", w));
    }
  } catch (const InvalidInput& e) {
    throw ConfigError("field '" + where + "': " + e.what());
  }
  throw ConfigError("field '" + where + "' needs one of 'preset', 'material', 'nondimensional'");
}

json coefficients_json(const ModelCoefficients& c) {
  json j = {{"c1", c.c1},       {"c2", c.c2}, {"c3", c.c3},
            {"gamma0", c.gamma0}, {"beta", c.beta}, {"a", c.a},
            {"beta_branch", beta_first_branch(c.c1, c.c3, c.gamma0) ? "sqrt" : "inverse_gamma0"},
            {"strict_convexity_modulus", c.strict_convexity_modulus()}};
  if (c.sigma0) j["sigma0"] = *c.sigma0;
  return j;
}

RunConfig run_config_from(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  RunConfig cfg;
  cfg.coeffs = coefficients_from(require(j, "coefficients", "config"), "coefficients");

  const json& g = require(j, "grid", "config");
  const json& n = require(g, "n", "grid");
  if (!n.is_number_integer()) throw ConfigError("field 'grid.n' must be an integer");
  try {
    cfg.grid = Grid::make(n.get<int>(), number(g, "L", "grid"));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("field 'grid': ") + e.what());
  }

  if (j.contains("slope")) {
    const json& s = j.at("slope");
    if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
      throw ConfigError("field 'slope' must be a two-number array");
    }
    cfg.slope = {s[0].get<double>(), s[1].get<double>()};
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("field 'seed' must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.initial = j.value("initial", json{{"kind", "flat+noise"}});

  const json& e = require(j, "evolution", "config");
  EvolutionConfig& ev = cfg.evolution;
  ev.t_end = number(e, "t_end", "evolution");
  if (e.contains("dt") && !e.at("dt").is_null()) ev.dt = number(e, "dt", "evolution");
  if (e.contains("kappa") && !e.at("kappa").is_null()) ev.kappa = number(e, "kappa", "evolution");
  const std::string ctl = e.value("dt_control", std::string("adaptive"));
  if (ctl == "adaptive") {
    ev.dt_control = DtControl::Adaptive;
  } else if (ctl == "fixed") {
    ev.dt_control = DtControl::Fixed;
  } else {
    throw ConfigError("field 'evolution.dt_control' must be 'fixed' or 'adaptive'");
  }
  ev.record_every = e.value("record_every", 1);
  ev.max_steps = e.value("max_steps", std::size_t{0});
  ev.max_halvings = e.value("max_halvings", 20);
  return cfg;
}

ScalarField initial_field(const RunConfig& cfg) {
  const json& ini = cfg.initial;
  const std::string kind = ini.value("kind", std::string("flat+noise"));
  const Grid& g = cfg.grid;
  try {
    if (kind == "flat+noise") {
      return random_smooth_field(g, cfg.slope, number_or(ini, "amplitude", 1e-3, "initial"), ini.value("kmax", 4),
                                 cfg.seed);
    }
    if (kind == "meander") {
      const int m = ini.value("m", 1);
      MeanderProfile p{number(ini, "A", "initial"), 2.0 * std::numbers::pi * m / g.L, cfg.slope[0]};
      return meander_field(p, g);
    }
    if (kind == "bunch") {
      BunchProfile p{number(ini, "H", "initial"), number(ini, "rho", "initial"), g.L};
      p.validate();
      const double B = p.H / g.L;
      return ScalarField::sample(g, {B, 0.0},
                                 [&](double x, double) { return bunch_height(p, x) - B * (x - 0.5 * g.L); });
    }
    if (kind == "snapshot") {
      ScalarField f = read_snapshot(require(ini, "path", "initial").get<std::string>());
      if (!(f.grid() == g)) throw ConfigError("snapshot grid does not match 'grid'");
      return f;
    }
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("field 'initial': ") + e.what());
  }
  throw ConfigError("field 'initial.kind' must be flat+noise, meander, bunch or snapshot");
}

}  // namespace stepflow::cli
