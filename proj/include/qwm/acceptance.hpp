#pragma once

#include <functional>
#include <string>
#include <vector>

namespace qwm {

struct CriterionResult {
  std::string id;
  std::string title;
  bool passed = false;
  /// Measured errors and, on failure, where they occurred.
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Criterion ids such as "A7"; empty runs all of them.
  std::vector<std::string> criteria;
  unsigned threads = 0;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_result;
};

/// All criterion ids in run order.
std::vector<std::string> acceptance_ids();

/// Runs the selected criteria in id order. Throws InvalidArgument on an
/// unknown id.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// "A7 PASS  title: detail [0.01 s]"
std::string format_result(const CriterionResult& result);

}  // namespace qwm
