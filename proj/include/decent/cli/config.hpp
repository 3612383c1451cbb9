#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "decent/incentive.hpp"

namespace decent::cli {

using Json = nlohmann::ordered_json;

enum class KeyType { number, integer, string, number_list, string_list };

const char* to_string(KeyType type) noexcept;

struct KeySpec {
  std::string name;
  KeyType type = KeyType::number;
  Json fallback;  // null marks a required key
  std::string help;
};

const std::vector<std::string>& commands();

// Keys accepted by a subcommand, in echo order.
const std::vector<KeySpec>& schema(const std::string& command);

// Subcommands that draw random numbers and therefore carry a seed.
bool is_randomized(const std::string& command);

struct RunConfig {
  std::string command;
  Json values;  // every schema key, resolved, in schema order
  bool seed_generated = false;

  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t seed() const;
  std::string text(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> texts(const std::string& key) const;
};

// Checks keys and types, applies defaults and fills a missing seed from the
// system entropy source. Strings are accepted for every type and parsed, so
// that command-line flags and JSON files share one path.
RunConfig resolve_config(const std::string& command, const Json& raw);

// Reads a flat JSON object, or the "config" object of an earlier report.
Json load_config_file(const std::string& path, const std::string& command);

// Incentive model described by the shared model keys.
IncentiveModel model_from_config(const RunConfig& config);

}  // namespace decent::cli
