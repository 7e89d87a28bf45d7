#pragma once

// The nine reproduction criteria, each evaluated end to end with its own
// tolerance and runtime bound.

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace selfaction {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  /// Measured quantities behind the verdict.
  std::string detail;
  double seconds = 0;
};

struct Criterion {
  int id;
  std::string name;
  std::function<CriterionResult()> run;
};

const std::vector<Criterion>& acceptance_criteria();

/// Runs every criterion in order; exceptions become failures.
std::vector<CriterionResult> run_acceptance();

/// "PASS  3 moment identities: ..." style single line.
std::string format_result(const CriterionResult& result);

nlohmann::json to_json(const CriterionResult& result);

}  // namespace selfaction
