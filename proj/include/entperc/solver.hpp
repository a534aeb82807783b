#pragma once

// Analytic thresholds of the entanglement protocols: where an SCP curve
// crosses a percolation threshold (lower) and where it saturates at 1
// (upper).

#include <functional>
#include <string>
#include <vector>

#include "entperc/threshold.hpp"

namespace entperc {

/// An average-SCP curve alpha1 -> S on [0, 1/2]. `saturation_margin` is the
/// unclamped expression whose sign says whether S has reached 1 (>= 0 means
/// saturated); it is what upper_threshold bisects, since S itself is flat
/// past saturation.
struct ScpCurve {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> saturation_margin;
};

ScpCurve cep_curve();      // 2 alpha1
ScpCurve zz_curve();       // scp_zz
ScpCurve xz_curve();       // scp_xz
ScpCurve optimal_curve();  // optimize_basis(...).value, two-value family

/// Smallest alpha1 with curve(alpha1) = target_pc. The curve is checked to be
/// nondecreasing on a 10^3 grid first. Throws NumericalError when the check
/// fails or the target is not bracketed by S(0) and S(1/2).
ThresholdEstimate lower_threshold(const ScpCurve& curve, double target_pc);

/// Smallest alpha1 at which the curve reaches 1. Returns 1/2 when it only
/// saturates at the end point.
ThresholdEstimate upper_threshold(const ScpCurve& curve);

/// The real root of a^3 - a^2 + a - 1/2 in [1/2, 1].
ThresholdEstimate cubic_root_alpha0();

/// lower/upper threshold of the optimized curve against the honeycomb p_c.
ThresholdEstimate optimal_lower_threshold();
ThresholdEstimate optimal_upper_threshold();

struct ThresholdRow {
  std::string protocol;
  std::string lattice;  // lattice whose p_c the lower threshold targets
  double target_pc;
  ThresholdEstimate lower;
  ThresholdEstimate upper;
};

/// CEP on the triangular lattice, then QEP (triangular -> honeycomb) with the
/// ZZ, XZ and optimized measurements.
std::vector<ThresholdRow> table2();

}  // namespace entperc
