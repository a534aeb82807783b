#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace entperc {

enum class ThresholdKind { Lower, Upper, CubicRoot, ClassicalPc };

std::string_view to_string(ThresholdKind kind);

/// A solved threshold: alpha1 (Lower/Upper), alpha0 (CubicRoot) or a bond
/// density (ClassicalPc).
struct ThresholdEstimate {
  double value = 0.0;
  ThresholdKind kind = ThresholdKind::Lower;
  std::string method;
  double residual = 0.0;          // |f| of the defining equation at `value`
  std::optional<double> std_error;  // Monte Carlo estimates only
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = true;
};

/// A root bracket or convergence check failed. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entperc
