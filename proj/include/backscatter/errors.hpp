#pragma once

#include <stdexcept>
#include <string>

namespace backscatter {

// Numerical diagnostics: the computation ran but its own error controls
// tripped. The CLI maps these to exit code 2.
class NumericalDiagnostic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Profile asked for a radius beyond its sampled window.
class ExtrapolationError : public NumericalDiagnostic {
 public:
  using NumericalDiagnostic::NumericalDiagnostic;
};

// PV tail probes show the family has not decayed at r_max.
class TailTruncationError : public NumericalDiagnostic {
 public:
  using NumericalDiagnostic::NumericalDiagnostic;
};

// Family fails the local-smoothness diagnostic near r = 1, or a panel
// refinement did not converge.
class ConvergenceFailure : public NumericalDiagnostic {
 public:
  using NumericalDiagnostic::NumericalDiagnostic;
};

// Spectrum not yet asymptotic over the requested fit window.
class InsufficientResolution : public NumericalDiagnostic {
 public:
  InsufficientResolution(const std::string& what, double residual)
      : NumericalDiagnostic(what), residual_rms(residual) {}
  double residual_rms;
};

// Estimated evaluation count exceeds the configured budget.
class CostBudgetExceeded : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace backscatter
