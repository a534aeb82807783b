#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "entperc/protocol.hpp"

using namespace entperc;

namespace {

RunParams params(int L, std::uint64_t trials, Observable obs = Observable::Wrapping, std::uint64_t seed = 1) {
  RunParams p;
  p.L = L;
  p.trials = trials;
  p.observable = obs;
  p.seed = seed;
  return p;
}

BasisChoice named(NamedBasis b) { return {b, std::nullopt}; }

// Empirical open rate within 5 sigma of the rate the bonds are drawn from.
void check_rate(const ProtocolRun& run, double expected) {
  const double n = static_cast<double>(run.bonds_sampled);
  const double sigma = std::sqrt(expected * (1 - expected) / n);
  CAPTURE(run.spec.alpha1);
  CAPTURE(expected);
  CHECK(run.closed_form_rate == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(run.empirical_bond_rate - expected) <= 5 * sigma + 1e-12);
}

}  // namespace

TEST_CASE("names round-trip") {
  for (auto n : {ProtocolName::Cep, ProtocolName::QepTriHex, ProtocolName::QepKagomeSquare}) {
    CHECK(parse_protocol_name(to_string(n)) == n);
  }
  for (auto b : {NamedBasis::ZZ, NamedBasis::XZ, NamedBasis::Optimal}) CHECK(parse_basis(to_string(b)) == b);
  for (auto m : {SamplingMode::PerOutcome, SamplingMode::EffectiveRate}) CHECK(parse_sampling_mode(to_string(m)) == m);
  CHECK_FALSE(parse_protocol_name("qep"));
  CHECK(named(NamedBasis::XZ).label() == "xz");
}

TEST_CASE("basis resolution") {
  const auto link = make_link_state(0.3);
  CHECK(resolve_basis(named(NamedBasis::ZZ), link) == zz_basis(link));
  CHECK(resolve_basis(named(NamedBasis::XZ), link) == xz_basis());
  CHECK(resolve_basis(named(NamedBasis::Optimal), link) == optimize_basis(link).spec);
  BasisChoice custom{NamedBasis::ZZ, MeasurementSpec({0.22, 0.23, 0.27, 0.28})};
  CHECK(resolve_basis(custom, link) == *custom.custom);
  CHECK(custom.label().rfind("custom", 0) == 0);
  BasisChoice bad{NamedBasis::ZZ, MeasurementSpec({0.01, 0.49, 0.25, 0.25})};
  CHECK_THROWS_AS(resolve_basis(bad, link), std::invalid_argument);
}

TEST_CASE("CEP is bond percolation at density 2 alpha1") {
  CHECK(run_cep(LatticeKind::Triangular, 0.0, params(12, 50)).estimate.estimate == 0.0);
  CHECK(run_cep(LatticeKind::Triangular, 0.5, params(12, 50)).estimate.estimate == 1.0);
  const auto run = run_cep(LatticeKind::Square, 0.2, params(16, 200));
  check_rate(run, 0.4);
  CHECK(run.spec.name == ProtocolName::Cep);
  CHECK(run.bonds_sampled == 200u * 2u * 16u * 16u);
}

TEST_CASE("CEP observables on open lattices") {
  const auto crossing = run_cep(LatticeKind::Square, 0.5, params(8, 20, Observable::Crossing));
  CHECK(crossing.estimate.estimate == 1.0);
  const auto corner = run_cep(LatticeKind::Triangular, 0.33, params(12, 2000, Observable::TwoPoint));
  CHECK(corner.estimate.estimate > 0.3);
  CHECK(corner.estimate.estimate < 1.0);
}

TEST_CASE("tri-hex QEP: extremes") {
  CHECK(run_qep_tri_hex(0.34, named(NamedBasis::XZ), SamplingMode::PerOutcome, params(12, 100)).estimate.estimate ==
        1.0);
  CHECK(run_qep_tri_hex(0.0, named(NamedBasis::XZ), SamplingMode::PerOutcome, params(12, 100)).estimate.estimate ==
        0.0);
  CHECK(run_qep_tri_hex(0.0, named(NamedBasis::ZZ), SamplingMode::PerOutcome, params(12, 100)).estimate.estimate ==
        0.0);
  CHECK(run_qep_tri_hex(0.5, named(NamedBasis::Optimal), SamplingMode::EffectiveRate, params(12, 100))
            .estimate.estimate == 1.0);
}

TEST_CASE("tri-hex QEP: per-outcome bonds open at the average SCP") {
  for (double a1 : {0.1, 0.2, 0.3, 0.4}) {
    const auto link = make_link_state(a1);
    check_rate(run_qep_tri_hex(a1, named(NamedBasis::ZZ), SamplingMode::PerOutcome, params(12, 200)), scp_zz(link));
    check_rate(run_qep_tri_hex(a1, named(NamedBasis::XZ), SamplingMode::PerOutcome, params(12, 200)), scp_xz(link));
    check_rate(run_qep_tri_hex(a1, named(NamedBasis::Optimal), SamplingMode::PerOutcome, params(12, 200)),
               optimize_basis(link).value);
    check_rate(run_qep_tri_hex(a1, named(NamedBasis::ZZ), SamplingMode::EffectiveRate, params(12, 200)),
               scp_zz(link));
  }
}

TEST_CASE("tri-hex QEP: both sampling modes give the same connectivity statistics") {
  const auto per = run_qep_tri_hex(0.2, named(NamedBasis::ZZ), SamplingMode::PerOutcome, params(12, 3000));
  const auto eff = run_qep_tri_hex(0.2, named(NamedBasis::ZZ), SamplingMode::EffectiveRate, params(12, 3000, Observable::Wrapping, 2));
  const double sigma = std::hypot(per.estimate.std_error, eff.estimate.std_error);
  CHECK(std::abs(per.estimate.estimate - eff.estimate.estimate) <= 5 * sigma);
}

TEST_CASE("tri-hex QEP: dimension and observable errors") {
  try {
    run_qep_tri_hex(0.3, named(NamedBasis::ZZ), SamplingMode::PerOutcome, params(32, 10));
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("try --L 33") != std::string::npos);
  }
  CHECK_THROWS_AS(run_qep_tri_hex(0.3, named(NamedBasis::ZZ), SamplingMode::PerOutcome,
                                  params(12, 10, Observable::Crossing)),
                  std::invalid_argument);
  const auto two_point =
      run_qep_tri_hex(0.34, named(NamedBasis::XZ), SamplingMode::PerOutcome, params(12, 10, Observable::TwoPoint));
  CHECK(two_point.estimate.estimate == 1.0);
}

TEST_CASE("kagome-square QEP: ZZ swaps keep every bond at 2 alpha1") {
  for (double a1 : {0.1, 0.255, 0.4}) {
    const auto run = run_qep_kagome_square(a1, params(8, 200));
    check_rate(run, 2 * a1);
    CHECK(run.spec.kind == LatticeKind::Kagome);
  }
}

TEST_CASE("kagome-square QEP: other bases mix two rates") {
  const double a1 = 0.3;
  const auto link = make_link_state(a1);
  const double expected = 0.5 * (2 * a1 + full_swap_avg_scp(link, xz_basis()));
  check_rate(run_qep_kagome_square(a1, params(8, 300), named(NamedBasis::XZ)), expected);
  check_rate(run_qep_kagome_square(a1, params(8, 300), named(NamedBasis::XZ), SamplingMode::EffectiveRate), expected);
  // the optimal full-swap measurement is ZZ
  check_rate(run_qep_kagome_square(a1, params(8, 300), named(NamedBasis::Optimal)), 2 * a1);
}

TEST_CASE("runs are reproducible and independent of the worker count") {
  auto p = params(12, 300);
  p.workers = 1;
  const auto one = run_qep_tri_hex(0.2, named(NamedBasis::XZ), SamplingMode::PerOutcome, p);
  p.workers = 4;
  const auto four = run_qep_tri_hex(0.2, named(NamedBasis::XZ), SamplingMode::PerOutcome, p);
  CHECK(one.estimate.estimate == four.estimate.estimate);
  CHECK(one.empirical_bond_rate == four.empirical_bond_rate);
}

TEST_CASE("dispatch and comparison") {
  ProtocolSpec cep;
  cep.name = ProtocolName::Cep;
  cep.kind = LatticeKind::Triangular;
  ProtocolSpec qep;
  qep.name = ProtocolName::QepTriHex;
  qep.basis = named(NamedBasis::XZ);
  const auto runs = compare({cep, qep}, {0.1, 0.34}, params(12, 50));
  REQUIRE(runs.size() == 4);
  CHECK(runs[0].spec.alpha1 == 0.1);
  CHECK(runs[1].spec.name == ProtocolName::QepTriHex);
  CHECK(runs[3].estimate.estimate == 1.0);
  cep.alpha1 = 0.1;
  CHECK(run_protocol(cep, params(12, 50)).estimate.estimate == runs[0].estimate.estimate);
  CHECK_THROWS_AS(compare({cep}, {}, params(12, 5)), std::invalid_argument);
  CHECK_THROWS_AS(run_cep(LatticeKind::Square, 0.7, params(8, 5)), std::invalid_argument);
}
