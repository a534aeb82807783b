#include "entperc/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace entperc {

namespace {

bool in_unit_half(double x) { return x >= -kTolerance && x <= 0.5 + kTolerance; }

}  // namespace

LinkState make_link_state(double alpha1) {
  if (!(alpha1 >= 0.0 && alpha1 <= 0.5)) {
    std::ostringstream msg;
    msg << "alpha1 must be the smaller Schmidt coefficient in [0, 1/2], got " << alpha1;
    throw std::invalid_argument(msg.str());
  }
  return LinkState{1.0 - alpha1, alpha1};
}

double singlet_conversion_prob(const LinkState& link) { return 2.0 * link.alpha1; }

OutcomeBounds outcome_bounds(const LinkState& link) {
  const double p_min = link.alpha0 * link.alpha1;
  return {p_min, 0.5 - p_min};
}

MeasurementSpec::MeasurementSpec(std::array<double, 4> probs) : probs_(probs) {
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("outcome probability outside [0, 1]");
  }
  const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
  if (std::abs(total - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "outcome probabilities sum to " << total << ", not 1";
    throw std::invalid_argument(msg.str());
  }
  std::sort(probs_.begin(), probs_.end());
}

bool MeasurementSpec::valid_for(const LinkState& link) const noexcept {
  const auto [p_min, p_max] = outcome_bounds(link);
  return std::all_of(probs_.begin(), probs_.end(), [&](double p) {
    return p >= p_min - kTolerance && p <= p_max + kTolerance;
  });
}

void MeasurementSpec::check(const LinkState& link) const {
  if (!valid_for(link)) {
    const auto [p_min, p_max] = outcome_bounds(link);
    std::ostringstream msg;
    msg << "measurement {" << probs_[0] << ", " << probs_[1] << ", " << probs_[2] << ", "
        << probs_[3] << "} is not a Bell measurement for alpha1 = " << link.alpha1
        << " (outcomes must lie in [" << p_min << ", " << p_max << "])";
    throw std::invalid_argument(msg.str());
  }
}

double outcome_lambda(const LinkState& link, double p_m) {
  const auto [p_min, p_max] = outcome_bounds(link);
  if (p_m < p_min - kTolerance || p_m > p_max + kTolerance) {
    std::ostringstream msg;
    msg << "outcome probability " << p_m << " outside [" << p_min << ", " << p_max << "]";
    throw std::invalid_argument(msg.str());
  }
  if (p_m <= p_min) return 0.5;
  // 1 - p_min^2/p^2 in factored form, exact zero at p = p_min.
  const double radicand = std::clamp((p_m - p_min) * (p_m + p_min) / (p_m * p_m), 0.0, 1.0);
  return 0.5 * (1.0 - std::sqrt(radicand));
}

std::array<SwapOutcome, 4> swap_outcomes(const LinkState& link, const MeasurementSpec& meas) {
  meas.check(link);
  std::array<SwapOutcome, 4> out;
  for (std::size_t m = 0; m < 4; ++m) out[m] = {meas[m], outcome_lambda(link, meas[m])};
  return out;
}

double distill_prob(double beta1, double gamma1) {
  if (!in_unit_half(beta1) || !in_unit_half(gamma1)) {
    throw std::invalid_argument("distillation inputs must be smaller Schmidt coefficients in [0, 1/2]");
  }
  return std::min(1.0, 2.0 * (1.0 - (1.0 - beta1) * (1.0 - gamma1)));
}

double full_swap_avg_scp(const LinkState& link, const MeasurementSpec& meas) {
  double total = 0.0;
  for (const auto& o : swap_outcomes(link, meas)) total += o.prob * 2.0 * o.lambda;
  return total;
}

double partial_swap_avg_scp(const LinkState& link, const MeasurementSpec& meas) {
  double total = 0.0;
  for (const auto& o : swap_outcomes(link, meas)) total += o.prob * distill_prob(link.alpha1, o.lambda);
  return std::min(total, 1.0);
}

double scp_zz(const LinkState& link) {
  const double a0 = link.alpha0;
  const double a1 = link.alpha1;
  const double singlet_mass = 2.0 * a0 * a1;
  const double distill = std::min(1.0, 2.0 * (1.0 - a0 * a0 * a0 / (a0 * a0 + a1 * a1)));
  return singlet_mass + (1.0 - singlet_mass) * distill;
}

double scp_xz(const LinkState& link) {
  const double a0 = link.alpha0;
  const double a1 = link.alpha1;
  const double radicand = std::max(0.0, 1.0 - 16.0 * a0 * a0 * a1 * a1);
  return std::min(1.0, 2.0 - a0 * (1.0 + std::sqrt(radicand)));
}

std::vector<ScpCurvePoint> sample_curve(const std::function<double(double)>& curve,
                                        const std::vector<double>& grid) {
  std::vector<ScpCurvePoint> points;
  points.reserve(grid.size());
  for (double a1 : grid) points.push_back({a1, curve(a1)});
  return points;
}

}  // namespace entperc
