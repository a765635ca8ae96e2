#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rggld {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned threads = 0;
  std::uint64_t seed = 20141;
};

std::string format_result_line(const CriterionResult& r);

/// Runs every acceptance criterion in order. `on_result` is called as each
/// criterion finishes. A criterion fails if its check fails or it overruns
/// its time budget.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace rggld
