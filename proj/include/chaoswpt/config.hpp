#pragma once

// JSON run configuration with key=value overrides.
//
// Precedence, lowest first: built-in defaults, config file, CHAOSWPT_SEED,
// --set overrides. Unknown keys are errors.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "chaoswpt/harvester.hpp"
#include "chaoswpt/montecarlo.hpp"
#include "chaoswpt/receiver.hpp"
#include "chaoswpt/verify.hpp"

namespace chaoswpt {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct AppConfig {
  RunConfig run{};
  double p_t_dbm = 30.0;
  PaprMode papr_mode = PaprMode::per_symbol;

  std::vector<std::size_t> betas = default_beta_grid();
  std::vector<double> distances{20.0, 30.0};
  std::vector<PsiMode> modes{PsiMode::bypass, PsiMode::full};

  std::optional<double> r_c;
  std::optional<double> r_nc;

  std::size_t verify_samples = 1000000;
  std::vector<std::size_t> clt_betas{4, 25};
};

namespace detail {

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

inline double as_real(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

inline double as_positive(const nlohmann::json& v, const std::string& key) {
  const double d = as_real(v, key);
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError(key, "must be positive");
  return d;
}

inline std::uint64_t as_unsigned(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(key, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && d < 1.8e19 && std::floor(d) == d) return static_cast<std::uint64_t>(d);
  }
  throw ConfigError(key, "expected a non-negative integer");
}

inline std::size_t as_count(const nlohmann::json& v, const std::string& key) {
  const std::uint64_t n = as_unsigned(v, key);
  if (n == 0) throw ConfigError(key, "must be >= 1");
  return static_cast<std::size_t>(n);
}

inline std::string as_string(const nlohmann::json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

template <typename T, typename F>
std::vector<T> as_list(const nlohmann::json& v, const std::string& key, F each) {
  if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a nonempty array");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(each(e, key));
  return out;
}

// Override values are parsed as JSON when they parse, otherwise taken as strings.
inline nlohmann::json parse_override_value(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;
  }
}

inline void apply_key(AppConfig& c, const std::string& key, const nlohmann::json& v) {
  try {
    if (key == "beta") {
      c.run.beta = as_count(v, key);
    } else if (key == "r") {
      c.run.r = as_positive(v, key);
    } else if (key == "alpha") {
      c.run.alpha = as_positive(v, key);
    } else if (key == "psi_mode") {
      c.run.psi_mode = parse_psi_mode(as_string(v, key));
    } else if (key == "psi") {
      c.run.psi = as_count(v, key);
    } else if (key == "k2") {
      c.run.circuit.k2 = as_positive(v, key);
    } else if (key == "k4") {
      c.run.circuit.k4 = as_positive(v, key);
    } else if (key == "r_ant") {
      c.run.circuit.r_ant = as_positive(v, key);
    } else if (key == "p_t_dbm") {
      c.p_t_dbm = as_real(v, key);
      c.run.circuit.p_t = dbm_to_watts(c.p_t_dbm);
    } else if (key == "p_t_w") {
      c.run.circuit.p_t = as_positive(v, key);
      c.p_t_dbm = watts_to_dbm(c.run.circuit.p_t);
    } else if (key == "n_frames") {
      c.run.n_frames = as_count(v, key);
    } else if (key == "seed") {
      c.run.seed = as_unsigned(v, key);
    } else if (key == "map_degree") {
      const std::uint64_t d = as_unsigned(v, key);
      if (d < 2 || d > 1000) throw ConfigError(key, "must be in [2, 1000]");
      c.run.map_degree = static_cast<int>(d);
    } else if (key == "threads") {
      c.run.threads = static_cast<unsigned>(as_unsigned(v, key));
    } else if (key == "papr_mode") {
      c.papr_mode = parse_papr_mode(as_string(v, key));
    } else if (key == "betas") {
      c.betas = as_list<std::size_t>(v, key, as_count);
    } else if (key == "distances") {
      c.distances = as_list<double>(v, key, as_positive);
    } else if (key == "modes") {
      c.modes = as_list<PsiMode>(v, key, [](const nlohmann::json& e, const std::string& k) {
        return parse_psi_mode(as_string(e, k));
      });
    } else if (key == "r_c") {
      c.r_c = as_positive(v, key);
    } else if (key == "r_nc") {
      c.r_nc = as_positive(v, key);
    } else if (key == "verify_samples") {
      c.verify_samples = as_count(v, key);
    } else if (key == "clt_betas") {
      c.clt_betas = as_list<std::size_t>(v, key, as_count);
    } else {
      throw ConfigError(key, "unknown configuration key");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace detail

inline nlohmann::json parse_config_text(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", origin + ":" + std::to_string(detail::line_of_offset(text, e.byte)) +
                              ": parse error: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("", origin + ": top level must be a JSON object");
  return j;
}

/// Merge and validate. `file_text` is the config file contents (empty for none),
/// `env_seed` the CHAOSWPT_SEED value if set, `overrides` the key=value list.
inline AppConfig build_config(const std::string& file_text, const std::string& origin,
                              const std::optional<std::string>& env_seed,
                              const std::vector<std::string>& overrides) {
  nlohmann::json merged = nlohmann::json::object();
  if (!file_text.empty()) merged = parse_config_text(file_text, origin);
  const bool file_has_both_powers = merged.contains("p_t_dbm") && merged.contains("p_t_w");
  if (file_has_both_powers) throw ConfigError("p_t_w", "give either p_t_dbm or p_t_w, not both");

  if (env_seed) {
    try {
      std::size_t used = 0;
      const unsigned long long s = std::stoull(*env_seed, &used);
      if (used != env_seed->size()) throw std::invalid_argument("trailing characters");
      merged["seed"] = static_cast<std::uint64_t>(s);
    } catch (const std::exception&) {
      throw ConfigError("CHAOSWPT_SEED", "not an unsigned integer: '" + *env_seed + "'");
    }
  }

  for (const std::string& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("", "override '" + ov + "' is not key=value");
    const std::string key = ov.substr(0, eq);
    // a later power override replaces whichever unit came before it
    if (key == "p_t_dbm") merged.erase("p_t_w");
    if (key == "p_t_w") merged.erase("p_t_dbm");
    merged[key] = detail::parse_override_value(ov.substr(eq + 1));
  }

  AppConfig cfg;
  for (const auto& [key, value] : merged.items()) detail::apply_key(cfg, key, value);
  try {
    cfg.run.validate();
  } catch (const std::exception& e) {
    throw ConfigError("", e.what());
  }
  return cfg;
}

inline AppConfig load_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides) {
  std::string text;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("", "cannot open config file '" + *path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) text.clear();
  }
  std::optional<std::string> env;
  if (const char* s = std::getenv("CHAOSWPT_SEED"); s != nullptr && *s != '\0') env = s;
  return build_config(text, path.value_or("<none>"), env, overrides);
}

inline nlohmann::json to_json(const AppConfig& c) {
  nlohmann::json modes = nlohmann::json::array();
  for (PsiMode m : c.modes) modes.push_back(std::string(to_string(m)));
  nlohmann::json j{
      {"beta", c.run.beta},
      {"r", c.run.r},
      {"alpha", c.run.alpha},
      {"psi_mode", std::string(to_string(c.run.psi_mode))},
      {"psi", c.run.psi},
      {"k2", c.run.circuit.k2},
      {"k4", c.run.circuit.k4},
      {"r_ant", c.run.circuit.r_ant},
      {"p_t_w", c.run.circuit.p_t},
      {"n_frames", c.run.n_frames},
      {"seed", c.run.seed},
      {"map_degree", c.run.map_degree},
      {"papr_mode", std::string(to_string(c.papr_mode))},
      {"betas", c.betas},
      {"distances", c.distances},
      {"modes", modes},
      {"verify_samples", c.verify_samples},
      {"clt_betas", c.clt_betas},
  };
  if (c.r_c) j["r_c"] = *c.r_c;
  if (c.r_nc) j["r_nc"] = *c.r_nc;
  return j;
}

}  // namespace chaoswpt
