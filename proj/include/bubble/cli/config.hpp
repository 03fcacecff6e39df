#pragma once

// Flat `key = value` run configuration shared by the command-line tools.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bubble/fluid_params.hpp"

namespace bubble::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command = "simulate";
  double radius = 1.0;
  double outer = 2.0;
  double nu_minus = 1.0;
  double nu_plus = 1.0;
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double mu = 1.0;
  int mode = 2;
  int n_inner = 64;
  int n_outer = 64;
  double horizon = 0.5;
  int steps = 100;
  std::uint64_t seed = 1;
  double control_normal = 1.0;
  double control_azimuthal = 0.0;
  std::string initial = "zero";
  std::string output;
  std::string json;

  FluidParams params() const { return {nu_plus, nu_minus, rho_plus, rho_minus, mu}; }
  AnnularGeometry geom() const { return {radius, outer}; }
};

struct ConfigKey {
  const char* name;
  const char* units;
  const char* help;
  std::variant<double RunConfig::*, int RunConfig::*, std::uint64_t RunConfig::*,
               std::string RunConfig::*>
      field;
  bool positive;  ///< must be strictly positive
};

/// Every accepted key, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// Text of the current value of `key` (defaults when `config` is default).
std::string config_value(const RunConfig& config, const ConfigKey& key);

/// Multi-line table "key  default  units  description" for --help.
std::string config_help();

/// Error with the offending line (0 when not tied to a line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses `text` on top of `base`. Blank lines and lines starting with '#'
/// are skipped. Unknown keys, duplicate keys, malformed values and
/// non-positive physical parameters raise ConfigError.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});

/// Sets one key from text, as for a command-line override.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value,
                      int line = 0);

/// Cross-key checks: r_s < R, known initial-data kind, writable output
/// locations.
void validate_config(const RunConfig& config);

/// Throws ConfigError when the directory that would hold `path` does not
/// exist or is not writable. Empty paths are accepted.
void check_writable(const std::string& path);

}  // namespace bubble::cli
