#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "taco/common.hpp"

namespace taco {

// Minimal TOML-syntax reader covering what bench configs need: top-level
// `key = value` lines with strings, integers, floats, booleans, arrays
// (including multiline) and inline tables. Section headers are out of scope.
class ConfigValue {
 public:
  using Array = std::vector<ConfigValue>;
  using Table = std::map<std::string, ConfigValue>;
  using Storage = std::variant<std::string, int64_t, double, bool, Array, Table>;

  ConfigValue() : v_(std::string{}) {}
  explicit ConfigValue(Storage v) : v_(std::move(v)) {}

  bool is_string() const { return std::holds_alternative<std::string>(v_); }
  bool is_table() const { return std::holds_alternative<Table>(v_); }
  bool is_array() const { return std::holds_alternative<Array>(v_); }

  const std::string& as_string() const;
  int64_t as_int() const;
  double as_double() const;
  bool as_bool() const;
  const Array& as_array() const;
  const Table& as_table() const;

 private:
  Storage v_;
};

using ConfigTable = ConfigValue::Table;

ConfigTable parse_config(const std::string& text);
ConfigTable load_config(const std::filesystem::path& path);

}  // namespace taco
