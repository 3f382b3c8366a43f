#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "camobo/driver.hpp"

namespace camobo {

/// Value of a flat TOML key: scalar or one-level array of scalars.
struct TomlValue {
  using Scalar = std::variant<bool, std::int64_t, double, std::string>;
  std::variant<Scalar, std::vector<Scalar>> value;
};

/// Parses the flat subset of TOML used by run configs: `key = value`
/// lines, comments, strings, integers, floats, booleans and arrays.
/// Tables are rejected. Throws ConfigError with the line number.
std::map<std::string, TomlValue> parse_flat_toml(const std::string& text);

struct ConfigFile {
  RunConfig run;
  std::string output_dir = "out";
};

/// Builds a config from parsed keys. Unknown keys and missing required
/// keys (`problem`, `iterations`) raise ConfigError naming the key.
ConfigFile config_from_toml(const std::map<std::string, TomlValue>& keys);
ConfigFile load_config(const std::string& path);

}  // namespace camobo
