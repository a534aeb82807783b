#include "entperc/solver.hpp"

#include <cmath>
#include <sstream>

#include "entperc/lattice.hpp"
#include "entperc/measurement.hpp"
#include "entperc/quantum.hpp"

namespace entperc {

namespace {

constexpr int kMonotoneGrid = 1000;
constexpr double kMonotoneSlack = 1e-12;

double zz_margin(double a1) {
  const double a0 = 1.0 - a1;
  return 2.0 * (1.0 - a0 * a0 * a0 / (a0 * a0 + a1 * a1)) - 1.0;
}

double xz_margin(double a1) {
  const double a0 = 1.0 - a1;
  return 1.0 - a0 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 16.0 * a0 * a0 * a1 * a1)));
}

void check_nondecreasing(const ScpCurve& curve) {
  double prev = curve.value(0.0);
  for (int i = 1; i <= kMonotoneGrid; ++i) {
    const double a = 0.5 * i / kMonotoneGrid;
    const double s = curve.value(a);
    if (s < prev - kMonotoneSlack) {
      std::ostringstream msg;
      msg << curve.name << " curve decreases near alpha1 = " << a << " (" << prev << " -> " << s << ")";
      throw NumericalError(msg.str());
    }
    prev = s;
  }
}

// Bisects until the bracket can no longer shrink in double precision.
// `above(x)` must be false at lo and true at hi.
template <class Pred>
std::pair<double, double> bisect(double lo, double hi, Pred above) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (above(mid) ? hi : lo) = mid;
  }
  return {lo, hi};
}

}  // namespace

ScpCurve cep_curve() {
  return {"cep", [](double a1) { return singlet_conversion_prob(make_link_state(a1)); },
          [](double a1) { return 2.0 * a1 - 1.0; }};
}

ScpCurve zz_curve() {
  return {"zz", [](double a1) { return scp_zz(make_link_state(a1)); }, zz_margin};
}

ScpCurve xz_curve() {
  return {"xz", [](double a1) { return scp_xz(make_link_state(a1)); }, xz_margin};
}

ScpCurve optimal_curve() {
  return {"optimal", [](double a1) { return optimize_basis(make_link_state(a1)).value; },
          [](double a1) { return saturating_p_small(make_link_state(a1)) - 0.25; }};
}

ThresholdEstimate lower_threshold(const ScpCurve& curve, double target_pc) {
  check_nondecreasing(curve);
  const double s0 = curve.value(0.0);
  const double s1 = curve.value(0.5);
  if (!(s0 < target_pc && target_pc < s1)) {
    std::ostringstream msg;
    msg << curve.name << " curve does not bracket p_c = " << target_pc << ": S(0) = " << s0 << ", S(1/2) = " << s1;
    throw NumericalError(msg.str());
  }
  const auto [lo, hi] = bisect(0.0, 0.5, [&](double a) { return curve.value(a) >= target_pc; });
  const double r_lo = std::abs(curve.value(lo) - target_pc);
  const double r_hi = std::abs(curve.value(hi) - target_pc);

  ThresholdEstimate est;
  est.kind = ThresholdKind::Lower;
  est.value = r_lo < r_hi ? lo : hi;
  est.residual = std::min(r_lo, r_hi);
  est.bracket_lo = lo;
  est.bracket_hi = hi;
  std::ostringstream method;
  method << "bisection of S_" << curve.name << "(alpha1) = " << target_pc;
  est.method = method.str();
  return est;
}

ThresholdEstimate upper_threshold(const ScpCurve& curve) {
  if (curve.saturation_margin(0.5) < 0.0) {
    throw NumericalError(curve.name + " curve does not reach 1 at alpha1 = 1/2");
  }
  ThresholdEstimate est;
  est.kind = ThresholdKind::Upper;
  est.method = "bisection of the unclamped saturation condition of S_" + curve.name;
  if (curve.saturation_margin(0.0) >= 0.0) {
    est.value = 0.0;
    est.residual = 0.0;
    return est;
  }
  const auto [lo, hi] = bisect(0.0, 0.5, [&](double a) { return curve.saturation_margin(a) >= 0.0; });
  // hi is the smallest representable alpha1 found saturated; for CEP it stays 1/2.
  est.value = hi;
  est.residual = std::abs(curve.saturation_margin(hi));
  est.bracket_lo = lo;
  est.bracket_hi = hi;
  return est;
}

ThresholdEstimate cubic_root_alpha0() {
  auto f = [](double a) { return ((a - 1.0) * a + 1.0) * a - 0.5; };
  double lo = 0.5;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= 0.0 ? hi : lo) = mid;
  }
  ThresholdEstimate est;
  est.kind = ThresholdKind::CubicRoot;
  est.value = 0.5 * (lo + hi);
  est.residual = std::abs(f(est.value));
  est.bracket_lo = lo;
  est.bracket_hi = hi;
  est.method = "bisection of a^3 - a^2 + a - 1/2 on [0.5, 1]";
  return est;
}

ThresholdEstimate optimal_lower_threshold() {
  return lower_threshold(optimal_curve(), classical_pc(LatticeKind::Hexagonal));
}

ThresholdEstimate optimal_upper_threshold() { return upper_threshold(optimal_curve()); }

std::vector<ThresholdRow> table2() {
  const double pc_tri = classical_pc(LatticeKind::Triangular);
  const double pc_hex = classical_pc(LatticeKind::Hexagonal);
  std::vector<ThresholdRow> rows;
  const auto cep = cep_curve();
  rows.push_back({"cep", "triangular", pc_tri, lower_threshold(cep, pc_tri), upper_threshold(cep)});
  for (const auto& curve : {zz_curve(), xz_curve(), optimal_curve()}) {
    rows.push_back({"qep-" + curve.name, "hexagonal", pc_hex, lower_threshold(curve, pc_hex), upper_threshold(curve)});
  }
  return rows;
}

}  // namespace entperc
