#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace forestcalc {

struct SuiteOptions {
  bool quick = false;
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  double budget = 0;
  std::string detail;
};

/// Runs the numbered acceptance checks 1..11. Each result passes only if its
/// check holds and it finished within its time budget. `progress` (optional)
/// is called after each check.
std::vector<CriterionResult> run_acceptance(const SuiteOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress = {});

/// "criterion 3: PASS  weakening positivity  (1.2 s / 300 s)  detail"
std::string format_line(const CriterionResult& r);

} // namespace forestcalc
