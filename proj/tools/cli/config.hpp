#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "zeroprop/errors.hpp"
#include "zeroprop/optimizer.hpp"
#include "zeroprop/proportions.hpp"

namespace zeroprop::cli {

/// Config validation failure; `field` is the dotted key path ("section5.q_raw").
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : "config error at " + field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class OutputMode { human, machine };

/// Search settings without the initial point (taken from the sections).
struct SearchConfig {
  Target target = Target::maximize_kappa;
  std::map<std::string, Interval> bounds;
  bool free_shapes = false;
  std::vector<int> shape_degrees;
  int budget = 1000;
  int restarts = 0;
  std::uint64_t seed = 0;
};

struct RunConfig {
  SectionFourParams section4;
  SectionFiveParams section5;
  std::optional<SearchConfig> search;
  OutputMode output = OutputMode::human;
  /// Synthetic constants that bypass kernel evaluation.
  std::optional<double> given_c;
  std::optional<double> given_c1;
};

/// The built-in parameter set used by `reproduce`.
RunConfig default_config();
nlohmann::json default_config_json();

RunConfig parse_config(const nlohmann::json& doc);
/// Parses JSON text; syntax errors report line and column.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies "dotted.key=value" to a JSON document; the value is parsed as JSON
/// when possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

nlohmann::json to_json(const RunConfig& cfg);
/// Exact-round-tripping text for a rational: shortest decimal or "num/den".
std::string rational_text(const Rational& q);

SearchSpec make_search_spec(const RunConfig& cfg);

}  // namespace zeroprop::cli
