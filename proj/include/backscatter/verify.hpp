#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace backscatter::verify {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // worst observed metric (suite-specific)
  std::string note;

  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  std::uint64_t seed = 20250810;
  std::string only;                 // run a single suite by name, empty = all
  bool corrupt_quadrature = false;  // fault-injection hook for the sphere suite
  int threads = 1;
};

// Suites: parseval, spheres, trace, singular, pv, polarization,
// multilinearity. Deterministic under a fixed seed.
std::vector<SuiteResult> run_verify(const VerifyOptions& options);

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace backscatter::verify
