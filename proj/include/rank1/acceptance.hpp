#pragma once

// The nine acceptance checks, each reduced to one verdict line.

#include "rank1/verdict.hpp"

#include <string>
#include <vector>

namespace rank1 {

struct CriterionResult {
  int id = 0;
  std::string title;
  Verdict verdict = Verdict::pass;
  std::string detail;
  double seconds = 0;
};

inline constexpr int kCriterionCount = 9;

CriterionResult run_criterion(int id);
/// Every criterion when `ids` is empty.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {});

/// "PASS  3 iterated halving (0.4 s): ..."
std::string format_line(const CriterionResult& r);

}  // namespace rank1
