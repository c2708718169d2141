#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conecalc/io.hpp"
#include "conecalc/mapcone.hpp"
#include "conecalc/verdict.hpp"

namespace conecalc {

struct SuiteOptions {
  int n = 0;       // 0: the suite's default dimension(s)
  int trials = 0;  // 0: the suite's default trial count
  std::uint64_t seed = 0;
  OracleOptions oracle;
};

// One property checked by a suite. Some checks expect a refutation (a
// designed counterexample); those pass when the report is Refuted with a
// witness that re-checks.
struct SuiteCheck {
  std::string name;
  bool expect_refuted = false;
  PropertyReport report;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> table;  // extra human-readable lines
};

struct SuiteResult {
  std::string suite;
  int n = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<SuiteCheck> checks;
  double seconds = 0.0;

  bool passed() const;
};

/// Registered suite names in run order, without "all".
const std::vector<std::string>& suite_names();

/// Runs one suite. Throws UnknownSuite.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

/// {suite, n, seed, trials, status, checks[], violations[]}; timings only
/// when requested, so reports stay byte-identical across runs.
Json suite_to_json(const SuiteResult& r, bool timings);
std::string suite_to_text(const SuiteResult& r, bool timings);

}  // namespace conecalc
