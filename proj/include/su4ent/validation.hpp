#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace su4ent {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double residual = 0;
  double tolerance = 0;
};

struct ValidationOptions {
  int n_max = 4;
  std::uint64_t seed = 1;
  /// Where the pyramid cache round trip is written; a temp file if unset.
  std::optional<std::filesystem::path> pyramid_cache;
  /// Overwrite part of the cache before reloading it (fault injection).
  bool inject_cache_fault = false;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

/// Invariant suites of every module for N <= n_max, plus oracle equivalence
/// for N <= min(n_max, 4). Oracle suites are refused when n_max exceeds the cap.
ValidationReport run_validation(const ValidationOptions& opts);

void print_report(std::ostream& os, const ValidationReport& r);

}  // namespace su4ent
