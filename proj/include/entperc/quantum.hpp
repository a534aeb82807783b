#pragma once

// Closed-form algebra for partially entangled two-qubit links: Schmidt
// states, singlet conversion, Bell-measurement outcomes, distillation and
// the average singlet-conversion probability (SCP) of swapped links.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace entperc {

/// Comparison tolerance for precondition checks on probabilities.
inline constexpr double kTolerance = 1e-9;

/// Tolerance on the normalization of outcome multisets.
inline constexpr double kNormTolerance = 1e-12;

/// A pure two-qubit state sqrt(alpha0)|00> + sqrt(alpha1)|11>, alpha0 >= alpha1.
struct LinkState {
  double alpha0 = 1.0;
  double alpha1 = 0.0;

  friend bool operator==(const LinkState&, const LinkState&) = default;
};

/// Builds the state from its smaller Schmidt coefficient.
/// Throws std::invalid_argument unless 0 <= alpha1 <= 1/2.
LinkState make_link_state(double alpha1);

double singlet_conversion_prob(const LinkState& link);

struct OutcomeBounds {
  double p_min = 0.0;
  double p_max = 0.0;
};

/// Range of any single Bell-measurement outcome probability when swapping
/// two copies of `link`: [alpha0*alpha1, 1/2 - alpha0*alpha1].
OutcomeBounds outcome_bounds(const LinkState& link);

/// A Bell measurement, represented by its orderless multiset of four
/// outcome probabilities. Stored sorted, so equality ignores order.
class MeasurementSpec {
 public:
  /// Throws std::invalid_argument if a probability is negative or the
  /// multiset does not sum to one within kNormTolerance.
  explicit MeasurementSpec(std::array<double, 4> probs);

  const std::array<double, 4>& probs() const noexcept { return probs_; }
  double operator[](std::size_t m) const noexcept { return probs_[m]; }

  /// True when every outcome lies in [p_min, p_max] of `link` (within kTolerance).
  bool valid_for(const LinkState& link) const noexcept;

  /// Throws std::invalid_argument when !valid_for(link).
  void check(const LinkState& link) const;

  friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;

 private:
  std::array<double, 4> probs_;
};

/// One measurement outcome: its probability and the smaller Schmidt
/// coefficient of the post-measurement pair.
struct SwapOutcome {
  double prob = 0.0;
  double lambda = 0.0;
};

/// Smaller Schmidt coefficient of the outer pair after an outcome of
/// probability `p_m`. Equals exactly 1/2 at p_m = p_min.
/// Throws std::invalid_argument if p_m is outside [p_min, p_max] by more
/// than kTolerance.
double outcome_lambda(const LinkState& link, double p_m);

std::array<SwapOutcome, 4> swap_outcomes(const LinkState& link, const MeasurementSpec& meas);

/// Optimal probability of distilling one singlet from two pairs with
/// smaller Schmidt coefficients beta1 and gamma1.
double distill_prob(double beta1, double gamma1);

/// Average SCP of full swapping: measure, then singlet-convert the outcome.
double full_swap_avg_scp(const LinkState& link, const MeasurementSpec& meas);

/// Average SCP of partial swapping: measure, then distill the outcome
/// together with a fresh copy of `link`.
double partial_swap_avg_scp(const LinkState& link, const MeasurementSpec& meas);

/// Partial swapping in the computational (ZZ) basis, closed form.
double scp_zz(const LinkState& link);

/// Partial swapping in the XZ basis (all outcomes 1/4), closed form.
double scp_xz(const LinkState& link);

struct ScpCurvePoint {
  double alpha1 = 0.0;
  double scp = 0.0;
};

/// Samples `curve` at each alpha1 of `grid`.
std::vector<ScpCurvePoint> sample_curve(const std::function<double(double)>& curve,
                                        const std::vector<double>& grid);

}  // namespace entperc
