#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string details;  // deterministic for a fixed seed; no wall-clock values
  double elapsed_s = 0.0;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> results;
  bool all_pass() const;
};

/// One line per criterion plus a summary. Wall-clock timings are excluded
/// (runtime budgets appear only as a yes/no token), so reruns with the same
/// seed render byte-identically.
std::string report_text(const VerifyReport& report);

/// Runs the acceptance criteria. An empty selection runs all nine. Criterion 9
/// (determinism) reruns the other selected criteria with the same seed and
/// compares the rendered reports byte for byte.
VerifyReport run_verify(std::uint64_t seed, const std::vector<int>& criteria = {});

}  // namespace cflow
