#pragma once

// Run configuration: a single JSON document. Parse errors throw ConfigError
// naming the offending key; the CLI maps those to exit code 2.

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "vsheet/core_state.hpp"
#include "vsheet/errors.hpp"
#include "vsheet/scan.hpp"

namespace vsheet {

using Json = nlohmann::json;

struct Tolerances {
  double det_zero = 1e-6;
  double eig_residual = 1e-10;
  double diag_residual = 1e-9;
  double root_refine = 1e-12;
};

struct Sweep {
  enum class Param { Vbar, FScale, C };
  Param parameter = Param::Vbar;
  double from = 0.0;
  double to = 1.0;
  int steps = 2;
};

struct RunConfig {
  PlanarBackground background;
  ScanGrid grid;
  Tolerances tolerances;
  std::optional<Sweep> sweep;
  std::uint64_t seed = 0;
  double gamma_min = 1e-4;
  int threads = 1;
  bool oracle_violate_involution = false;  // debug knob for the oracle suite
};

namespace detail {

inline double require_number(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required key \"" + key + "\"", key);
  if (!j.at(key).is_number()) throw ConfigError("key \"" + key + "\" must be a number", key);
  return j.at(key).get<double>();
}

inline Vec3 require_vec3(const Json& j, const std::string& key) {
  if (!j.contains(key)) throw ConfigError("missing required key \"" + key + "\"", key);
  const Json& a = j.at(key);
  if (!a.is_array() || a.size() != 3 || !a[0].is_number() || !a[1].is_number() ||
      !a[2].is_number())
    throw ConfigError("key \"" + key + "\" must be a 3-element numeric array", key);
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

inline PressureLaw parse_law(const Json& j) {
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("law requires a string key \"kind\"", "law.kind");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fixed_sound_speed") return PressureLaw::fixed_sound_speed(require_number(j, "c"));
  if (kind == "gamma_law")
    return PressureLaw::gamma_law(require_number(j, "A"), require_number(j, "gamma"));
  throw ConfigError("law.kind must be \"gamma_law\" or \"fixed_sound_speed\"", "law.kind");
}

}  // namespace detail

inline RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  if (!j.contains("background") || !j.at("background").is_object())
    throw ConfigError("missing required object \"background\"", "background");
  const Json& bg = j.at("background");
  cfg.background.rho = detail::require_number(bg, "rho");
  cfg.background.vbar = detail::require_number(bg, "vbar");
  cfg.background.F1 = detail::require_vec3(bg, "F1");
  cfg.background.F2 = detail::require_vec3(bg, "F2");
  if (bg.contains("law")) cfg.background.law = detail::parse_law(bg.at("law"));
  try {
    cfg.background.validate();
    cfg.background.sound_speed();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid background: ") + e.what(), "background");
  }

  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    if (g.contains("theta_points")) {
      cfg.grid.theta_points = static_cast<int>(detail::require_number(g, "theta_points"));
      if (cfg.grid.theta_points < 8)
        throw ConfigError("grid.theta_points must be >= 8", "grid.theta_points");
    }
    if (g.contains("delta_points")) {
      cfg.grid.delta_points = static_cast<int>(detail::require_number(g, "delta_points"));
      if (cfg.grid.delta_points < 64)
        throw ConfigError("grid.delta_points must be >= 64", "grid.delta_points");
    }
    if (g.contains("gamma_levels")) {
      const Json& gl = g.at("gamma_levels");
      if (!gl.is_array() || gl.empty())
        throw ConfigError("grid.gamma_levels must be a nonempty array", "grid.gamma_levels");
      cfg.grid.gamma_levels.clear();
      for (const auto& v : gl) {
        if (!v.is_number() || !(v.get<double>() > 0.0))
          throw ConfigError("grid.gamma_levels entries must be positive numbers",
                            "grid.gamma_levels");
        cfg.grid.gamma_levels.push_back(v.get<double>());
      }
    }
  }

  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    auto pick = [&](const char* key, double& slot) {
      if (t.contains(key)) {
        slot = detail::require_number(t, key);
        if (!(slot > 0.0))
          throw ConfigError(std::string("tolerances.") + key + " must be positive",
                            std::string("tolerances.") + key);
      }
    };
    pick("det_zero", cfg.tolerances.det_zero);
    pick("eig_residual", cfg.tolerances.eig_residual);
    pick("diag_residual", cfg.tolerances.diag_residual);
    pick("root_refine", cfg.tolerances.root_refine);
  }

  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const Json& s = j.at("sweep");
    Sweep sw;
    if (!s.contains("parameter") || !s.at("parameter").is_string())
      throw ConfigError("sweep requires a string key \"parameter\"", "sweep.parameter");
    const std::string p = s.at("parameter").get<std::string>();
    if (p == "vbar")
      sw.parameter = Sweep::Param::Vbar;
    else if (p == "f_scale")
      sw.parameter = Sweep::Param::FScale;
    else if (p == "c")
      sw.parameter = Sweep::Param::C;
    else
      throw ConfigError("sweep.parameter must be one of vbar, f_scale, c", "sweep.parameter");
    sw.from = detail::require_number(s, "from");
    sw.to = detail::require_number(s, "to");
    sw.steps = static_cast<int>(detail::require_number(s, "steps"));
    if (!(sw.from < sw.to)) throw ConfigError("sweep.from must be < sweep.to", "sweep.from");
    if (sw.steps < 2) throw ConfigError("sweep.steps must be >= 2", "sweep.steps");
    cfg.sweep = sw;
  }

  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("gamma_min")) {
    cfg.gamma_min = detail::require_number(j, "gamma_min");
    if (!(cfg.gamma_min > 0.0)) throw ConfigError("gamma_min must be positive", "gamma_min");
  }
  if (j.contains("threads")) cfg.threads = static_cast<int>(detail::require_number(j, "threads"));
  if (j.contains("oracle") && j.at("oracle").is_object()) {
    const Json& o = j.at("oracle");
    if (o.contains("violate_involution"))
      cfg.oracle_violate_involution = o.at("violate_involution").get<bool>();
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(), "");
  }
  return parse_config(j);
}

}  // namespace vsheet
