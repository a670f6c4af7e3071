#pragma once

// JSON configuration: construction recipes and experiment descriptions.

#include "rank1/construction.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace rank1 {

using json = nlohmann::ordered_json;

/// Raised for malformed or unknown configuration; maps to a usage exit.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// {"family": "utv1"} or
/// {"h1": 1, "base_width": "1/1", "stages": {"r": 2, "spacers": ["zero", {"rule": "j_times_h"}]}}.
ConstructionParams construction_from_json(const json& j);
json construction_to_json(const ConstructionParams& p);

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"geometry", "measure", "limits",   "scan",     "eq4",
                                              "joinings", "products", "spectral", "oracle", "acceptance"};
  return names;
}

struct ExperimentConfig {
  std::string experiment;
  std::vector<ConstructionParams> constructions;
  json params = json::object();
  std::string out_path;        // empty: stdout
  std::string format = "json";  // json | csv

  /// Checks the top level and the parameter keys of the chosen experiment.
  static ExperimentConfig from_json(const json& j);
  json to_json() const;
};

/// Reads a file and parses it as JSON, wrapping errors in ConfigError.
json read_json_file(const std::string& path);

}  // namespace rank1
