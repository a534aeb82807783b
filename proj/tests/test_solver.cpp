#include <doctest.h>

#include <cmath>
#include <numbers>

#include "entperc/lattice.hpp"
#include "entperc/solver.hpp"

using namespace entperc;

namespace {
const double kPcTri = 2 * std::sin(std::numbers::pi / 18);
const double kPcHex = 1 - kPcTri;
}  // namespace

TEST_CASE("lower thresholds: frozen high-precision values") {
  const auto cep = lower_threshold(cep_curve(), kPcTri);
  CHECK(cep.value == doctest::Approx(0.1736481776669303).epsilon(1e-14));
  CHECK(lower_threshold(zz_curve(), kPcHex).value == doctest::Approx(0.1987530311937165).epsilon(1e-13));
  CHECK(lower_threshold(xz_curve(), kPcHex).value == doctest::Approx(0.2199817916024996).epsilon(1e-13));
  CHECK(optimal_lower_threshold().value == doctest::Approx(0.1961203695462653).epsilon(1e-12));
}

TEST_CASE("upper thresholds: frozen high-precision values") {
  CHECK(upper_threshold(cep_curve()).value == 0.5);
  CHECK(upper_threshold(zz_curve()).value == doctest::Approx(0.3522011287389576).epsilon(1e-13));
  CHECK(upper_threshold(xz_curve()).value == doctest::Approx(0.3245993588169267).epsilon(1e-13));
  CHECK(optimal_upper_threshold().value == doctest::Approx(0.3245993588169267).epsilon(1e-12));
}

TEST_CASE("every threshold satisfies its defining equation") {
  for (const auto& row : table2()) {
    CAPTURE(row.protocol);
    CHECK(row.lower.residual <= 1e-10);
    CHECK(row.upper.residual <= 1e-10);
    CHECK(row.lower.kind == ThresholdKind::Lower);
    CHECK(row.upper.kind == ThresholdKind::Upper);
    CHECK_FALSE(row.lower.method.empty());
  }
}

TEST_CASE("saturation really starts at the upper threshold") {
  for (const auto& curve : {zz_curve(), xz_curve(), optimal_curve()}) {
    const double up = upper_threshold(curve).value;
    CAPTURE(curve.name);
    CHECK(curve.value(up + 1e-9) == 1.0);
    CHECK(curve.value(up - 1e-6) < 1.0);
  }
}

TEST_CASE("cubic root") {
  const auto root = cubic_root_alpha0();
  CHECK(root.kind == ThresholdKind::CubicRoot);
  CHECK(root.value == doctest::Approx(0.6478).epsilon(1e-4));
  CHECK(root.residual <= 1e-10);
  CHECK(std::abs((1 - root.value) - upper_threshold(zz_curve()).value) <= 1e-6);
}

TEST_CASE("threshold table ordering") {
  const auto t = table2();
  REQUIRE(t.size() == 4);
  CHECK(t[0].protocol == "cep");
  CHECK(t[0].target_pc == doctest::Approx(classical_pc(LatticeKind::Triangular)));
  CHECK(t[1].target_pc == doctest::Approx(classical_pc(LatticeKind::Hexagonal)));
  const double cep = t[0].lower.value, zz = t[1].lower.value, xz = t[2].lower.value, opt = t[3].lower.value;
  CHECK(cep < opt);
  CHECK(opt < zz);
  CHECK(zz < xz);
  CHECK(opt <= std::min(zz, xz));
  CHECK(t[2].upper.value == doctest::Approx(t[3].upper.value).epsilon(1e-12));
  CHECK(t[3].upper.value < t[1].upper.value);
  CHECK(t[1].upper.value < t[0].upper.value);
}

TEST_CASE("bracket and monotonicity failures are numerical errors") {
  const ScpCurve flat{"flat", [](double) { return 0.1; }, [](double) { return -1.0; }};
  CHECK_THROWS_AS(lower_threshold(flat, 0.5), NumericalError);
  CHECK_THROWS_AS(upper_threshold(flat), NumericalError);
  const ScpCurve bump{"bump", [](double a) { return std::sin(8 * a); }, [](double) { return 0.0; }};
  CHECK_THROWS_AS(lower_threshold(bump, 0.5), NumericalError);
  try {
    lower_threshold(flat, 0.5);
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("S(0)") != std::string::npos);
  }
}

TEST_CASE("a curve saturated everywhere has upper threshold 0") {
  const ScpCurve one{"one", [](double) { return 1.0; }, [](double) { return 1.0; }};
  CHECK(upper_threshold(one).value == 0.0);
}
