#include "bubble/cli/config.hpp"

#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "bubble/number_format.hpp"

namespace bubble::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string prefix(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

template <typename T>
T parse_number(const std::string& key, const std::string& text, int line) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(line, "'" + key + "' expects a number, got '" + text + "'");
  }
  return value;
}

const ConfigKey* find_key(const std::string& name) {
  for (const ConfigKey& k : config_keys()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

}  // namespace

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(prefix(line) + message), line_(line) {}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"radius", "length", "interface radius r_s", &RunConfig::radius, true},
      {"outer", "length", "outer wall radius R", &RunConfig::outer, true},
      {"nu_minus", "viscosity", "inner fluid viscosity", &RunConfig::nu_minus, true},
      {"nu_plus", "viscosity", "outer fluid viscosity", &RunConfig::nu_plus, true},
      {"rho_minus", "density", "inner fluid density", &RunConfig::rho_minus, true},
      {"rho_plus", "density", "outer fluid density", &RunConfig::rho_plus, true},
      {"mu", "force/length", "surface tension coefficient", &RunConfig::mu, true},
      {"mode", "-", "angular wavenumber m >= 0", &RunConfig::mode, false},
      {"n_inner", "cells", "radial intervals in the inner disk", &RunConfig::n_inner, true},
      {"n_outer", "cells", "radial intervals in the outer annulus", &RunConfig::n_outer, true},
      {"horizon", "time", "final time T", &RunConfig::horizon, true},
      {"steps", "-", "implicit Euler steps", &RunConfig::steps, true},
      {"seed", "-", "random seed", &RunConfig::seed, false},
      {"control_normal", "force/length", "constant normal interface force amplitude",
       &RunConfig::control_normal, false},
      {"control_azimuthal", "force/length", "constant azimuthal interface force amplitude",
       &RunConfig::control_azimuthal, false},
      {"initial", "-", "initial data: zero or random (seeded)", &RunConfig::initial, false},
      {"output", "path", "trajectory CSV (stdout when empty)", &RunConfig::output, false},
      {"json", "path", "JSON report (none when empty)", &RunConfig::json, false},
  };
  return keys;
}

std::string config_value(const RunConfig& config, const ConfigKey& key) {
  return std::visit(
      [&](auto member) -> std::string {
        const auto& v = config.*member;
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v.empty() ? "\"\"" : v;
        } else {
          return std::to_string(v);
        }
      },
      key.field);
}

std::string config_help() {
  const RunConfig defaults;
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "  %-18s %-10s %-13s %s\n", "key", "default", "units",
                "description");
  out << line;
  for (const ConfigKey& k : config_keys()) {
    std::snprintf(line, sizeof(line), "  %-18s %-10s %-13s %s%s\n", k.name,
                  config_value(defaults, k).c_str(), k.units, k.help,
                  k.positive ? " (> 0)" : "");
    out << line;
  }
  return out.str();
}

void set_config_value(RunConfig& config, const std::string& name, const std::string& value,
                      int line) {
  const ConfigKey* key = find_key(name);
  if (key == nullptr) throw ConfigError(line, "unknown key '" + name + "'");
  std::visit(
      [&](auto member) {
        auto& target = config.*member;
        using T = std::decay_t<decltype(target)>;
        if constexpr (std::is_same_v<T, std::string>) {
          target = value;
        } else {
          const T parsed = parse_number<T>(name, value, line);
          if (key->positive && !(parsed > T(0))) {
            throw ConfigError(line, "'" + name + "' must be strictly positive, got " + value);
          }
          if constexpr (std::is_same_v<T, int>) {
            if (parsed < 0) throw ConfigError(line, "'" + name + "' must be >= 0, got " + value);
          }
          target = parsed;
        }
      },
      key->field);
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig config = base;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string stripped = trim(raw);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key before '='");
    if (find_key(key) == nullptr) throw ConfigError(line, "unknown key '" + key + "'");
    if (const auto it = seen.find(key); it != seen.end()) {
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(it->second) + ")");
    }
    seen[key] = line;
    set_config_value(config, key, value, line);
  }
  return config;
}

void check_writable(const std::string& path) {
  if (path.empty()) return;
  std::filesystem::path dir = std::filesystem::path(path).parent_path();
  if (dir.empty()) dir = ".";
  if (!std::filesystem::is_directory(dir) || ::access(dir.c_str(), W_OK) != 0) {
    throw ConfigError(0, "output location '" + path + "' is not writable");
  }
}

void validate_config(const RunConfig& config) {
  if (!(config.radius < config.outer)) {
    throw ConfigError(0, "'radius' must be smaller than 'outer'");
  }
  if (config.initial != "zero" && config.initial != "random") {
    throw ConfigError(0, "'initial' must be zero or random, got '" + config.initial + "'");
  }
  if (config.n_inner < 3 || config.n_outer < 3) {
    throw ConfigError(0, "'n_inner' and 'n_outer' must be at least 3");
  }
  check_writable(config.output);
  check_writable(config.json);
}

}  // namespace bubble::cli
