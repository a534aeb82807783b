#include "entperc/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace entperc {

namespace {

constexpr std::size_t kCoarseGrid = 1024;
constexpr int kGoldenIterations = 200;

double evaluate(const LinkState& link, const MeasurementSpec& spec, BasisObjective objective) {
  return objective == BasisObjective::PartialSwap ? partial_swap_avg_scp(link, spec)
                                                  : full_swap_avg_scp(link, spec);
}

// Family member with p_small pulled into range; the optimizer evaluates at
// grid points that may overshoot the bounds by rounding.
MeasurementSpec family_member(const LinkState& link, double p_small) {
  const double p_min = outcome_bounds(link).p_min;
  p_small = std::clamp(p_small, p_min, 0.25);
  return MeasurementSpec({p_small, p_small, 0.5 - p_small, 0.5 - p_small});
}

}  // namespace

MeasurementSpec zz_basis(const LinkState& link) {
  const auto [p_min, p_max] = outcome_bounds(link);
  return MeasurementSpec({p_min, p_min, p_max, p_max});
}

MeasurementSpec xz_basis() { return MeasurementSpec({0.25, 0.25, 0.25, 0.25}); }

MeasurementSpec two_value_basis(const LinkState& link, double p_small) {
  const double p_min = outcome_bounds(link).p_min;
  if (p_small < p_min - kTolerance || p_small > 0.25 + kTolerance) {
    std::ostringstream msg;
    msg << "p_small = " << p_small << " outside [" << p_min << ", 0.25]";
    throw std::invalid_argument(msg.str());
  }
  return family_member(link, p_small);
}

MeasurementSpec two_value_basis(const LinkState& link, TwoValueBasis basis) {
  return two_value_basis(link, basis.p_small);
}

double saturating_p_small(const LinkState& link) {
  const double gap = 1.0 - 2.0 * link.alpha1;
  if (gap <= 0.0) return std::numeric_limits<double>::infinity();
  return link.alpha0 * link.alpha0 * link.alpha1 / std::sqrt(gap);
}

double optimal_p_small(const LinkState& link) {
  const double p_min = outcome_bounds(link).p_min;
  return std::clamp(saturating_p_small(link), p_min, 0.25);
}

BasisOptimum optimize_basis(const LinkState& link, BasisObjective objective) {
  const double lo = outcome_bounds(link).p_min;
  const double hi = 0.25;
  auto f = [&](double p) { return evaluate(link, family_member(link, p), objective); };

  if (hi - lo <= 0.0) return {family_member(link, hi), hi, f(hi)};

  const double step = (hi - lo) / static_cast<double>(kCoarseGrid - 1);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < kCoarseGrid; ++i) {
    const double v = f(lo + step * static_cast<double>(i));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double a = lo + step * static_cast<double>(best > 0 ? best - 1 : 0);
  double b = std::min(hi, lo + step * static_cast<double>(best + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < kGoldenIterations && (b - a) > 1e-15; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }

  double arg = fc >= fd ? c : d;
  double value = std::max(fc, fd);
  if (best_value > value) {
    arg = lo + step * static_cast<double>(best);
    value = best_value;
  }
  arg = std::clamp(arg, lo, hi);
  return {family_member(link, arg), arg, value};
}

GeneralSearchResult general_basis_search(const LinkState& link, std::size_t points_per_dim,
                                         BasisObjective objective) {
  if (points_per_dim < 2) throw std::invalid_argument("general_basis_search needs >= 2 points per dimension");
  const auto [p_min, p_max] = outcome_bounds(link);
  const double step = (p_max - p_min) / static_cast<double>(points_per_dim - 1);

  GeneralSearchResult best{zz_basis(link), evaluate(link, zz_basis(link), objective), 1};
  for (std::size_t i = 0; i < points_per_dim; ++i) {
    const double p1 = p_min + step * static_cast<double>(i);
    for (std::size_t j = i; j < points_per_dim; ++j) {
      const double p2 = p_min + step * static_cast<double>(j);
      for (std::size_t k = j; k < points_per_dim; ++k) {
        const double p3 = p_min + step * static_cast<double>(k);
        const double p4 = 1.0 - p1 - p2 - p3;
        if (p4 < p_min - kTolerance || p4 > p_max + kTolerance) continue;
        const MeasurementSpec spec({p1, p2, p3, std::max(p4, 0.0)});
        const double v = evaluate(link, spec, objective);
        ++best.evaluated;
        if (v > best.value) {
          best.value = v;
          best.spec = spec;
        }
      }
    }
  }
  return best;
}

}  // namespace entperc
