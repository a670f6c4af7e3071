#pragma once

// Named experiments driven by an ExperimentConfig, rendered as CSV or JSON.

#include "rank1/config.hpp"
#include "rank1/verdict.hpp"

#include <string>
#include <vector>

namespace rank1 {

inline constexpr const char* kToolName = "rank1";
inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
  std::string experiment;
  Verdict verdict = Verdict::pass;
  json resolved = json::object();  // params with defaults filled in
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json summary = json::object();
};

/// Bad parameters throw ConfigError; everything else is a runtime failure.
Report run_experiment(const ExperimentConfig& cfg);

/// Full output text; the resolved config and tool version are embedded.
std::string render(const Report& report, const ExperimentConfig& cfg);

/// Writes through a sibling temp file and a rename, so a failed run never
/// leaves a partial file behind.
void write_atomically(const std::string& path, const std::string& content);

/// 0 pass, 1 fail, 2 inconclusive.
inline int exit_code(Verdict v) { return v == Verdict::pass ? 0 : v == Verdict::fail ? 1 : 2; }
inline constexpr int kUsageExit = 64;

}  // namespace rank1
