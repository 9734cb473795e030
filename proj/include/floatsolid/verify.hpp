#pragma once

// Property suites over every module. Each suite is deterministic for a fixed
// config (random draws come from the config seed) and reports its numbers as
// JSON; no timings or addresses enter the reports.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "floatsolid/config.hpp"

namespace floatsolid {

struct SuiteResult {
  std::string name;
  int criterion = 0;  ///< acceptance criterion number, 0 for module invariants
  bool pass = false;
  std::string summary;
  nlohmann::ordered_json details;

  nlohmann::ordered_json to_json() const;
};

struct VerifyOptions {
  bool inject_fault = false;       ///< corrupt M^{-1} in the algebra suite
  std::vector<std::string> only;   ///< run only these suites (empty = all)
};

struct VerifyReport {
  std::vector<SuiteResult> suites;

  bool pass() const;
  /// nullptr when every suite passed.
  const SuiteResult* first_failure() const;
};

/// Names of all suites in execution order.
std::vector<std::string> suite_names();

/// Throws ConfigError for an unknown suite name in options.only.
VerifyReport run_verify(const Config& config, const VerifyOptions& options = {});

/// Exact bytes written for one suite report.
std::string report_text(const SuiteResult& suite);

/// Writes <dir>/verify_<name>.json per suite and verify_summary.json.
void write_reports(const VerifyReport& report, const std::filesystem::path& dir);

}  // namespace floatsolid
