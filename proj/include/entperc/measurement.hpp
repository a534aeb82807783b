#pragma once

// Bell-measurement families for entanglement swapping and the search for
// the measurement that maximizes the average SCP.

#include <cstddef>

#include "entperc/quantum.hpp"

namespace entperc {

/// Computational-basis measurement: outcomes {p_min, p_min, p_max, p_max}.
MeasurementSpec zz_basis(const LinkState& link);

/// Equiprobable measurement: all four outcomes 1/4.
MeasurementSpec xz_basis();

/// Two-distinct-value family {p, p, 1/2-p, 1/2-p}, p_min <= p <= 1/4.
/// p = p_min is the ZZ basis and p = 1/4 the XZ basis.
struct TwoValueBasis {
  double p_small = 0.25;
};

/// Throws std::invalid_argument unless p_min <= p_small <= 1/4 (within kTolerance).
MeasurementSpec two_value_basis(const LinkState& link, double p_small);
MeasurementSpec two_value_basis(const LinkState& link, TwoValueBasis basis);

/// alpha0^2 alpha1 / sqrt(1 - 2 alpha1), the outcome probability at which
/// distilling the smaller-probability outcome just reaches certainty.
/// Diverges as alpha1 -> 1/2 (returns +inf there).
double saturating_p_small(const LinkState& link);

/// Closed-form optimum of the two-value family: saturating_p_small clamped
/// into [p_min, 1/4]. Returns 1/4 at alpha1 = 1/2.
double optimal_p_small(const LinkState& link);

enum class BasisObjective { PartialSwap, FullSwap };

struct BasisOptimum {
  MeasurementSpec spec;
  double p_small;
  double value;
};

/// Maximizes the objective over the two-value family: a 1024-point grid on
/// [p_min, 1/4] followed by golden-section refinement around the best cell.
/// Deterministic.
BasisOptimum optimize_basis(const LinkState& link,
                            BasisObjective objective = BasisObjective::PartialSwap);

struct GeneralSearchResult {
  MeasurementSpec spec;
  double value;
  std::size_t evaluated;
};

/// Exhaustive grid over all Bell measurements: three outcomes on a
/// `points_per_dim` grid of [p_min, p_max], the fourth fixed by
/// normalization. Used to test the two-value restriction, not to optimize.
GeneralSearchResult general_basis_search(const LinkState& link, std::size_t points_per_dim = 50,
                                         BasisObjective objective = BasisObjective::PartialSwap);

}  // namespace entperc
