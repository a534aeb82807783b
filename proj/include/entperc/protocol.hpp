#pragma once

// Entanglement-percolation protocols on finite lattices. Each protocol
// turns the quantum link payloads into independent open/closed bonds and
// measures connectivity with the percolation engine. An open bond is a
// singlet, and swapping along a path of singlets always succeeds, so
// protocol success is exactly connectivity of open bonds.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entperc/lattice.hpp"
#include "entperc/measurement.hpp"
#include "entperc/percolation.hpp"
#include "entperc/quantum.hpp"

namespace entperc {

enum class ProtocolName { Cep, QepTriHex, QepKagomeSquare };
enum class NamedBasis { ZZ, XZ, Optimal };
enum class SamplingMode { PerOutcome, EffectiveRate };

std::string_view to_string(ProtocolName name);
std::string_view to_string(NamedBasis basis);
std::string_view to_string(SamplingMode mode);
std::optional<ProtocolName> parse_protocol_name(std::string_view s);
std::optional<NamedBasis> parse_basis(std::string_view s);
std::optional<SamplingMode> parse_sampling_mode(std::string_view s);

/// A named basis, or an explicit outcome multiset when `custom` is set.
struct BasisChoice {
  NamedBasis named = NamedBasis::ZZ;
  std::optional<MeasurementSpec> custom;

  std::string label() const;
};

/// Concrete measurement for `link`. Optimal maximizes the partial-swap SCP
/// when `partial` is true and the full-swap SCP otherwise.
MeasurementSpec resolve_basis(const BasisChoice& basis, const LinkState& link, bool partial = true);

struct ProtocolSpec {
  ProtocolName name = ProtocolName::Cep;
  double alpha1 = 0.0;
  BasisChoice basis;                            // QEP only
  SamplingMode mode = SamplingMode::PerOutcome;  // QEP only
  LatticeKind kind = LatticeKind::Triangular;   // CEP only
};

struct RunParams {
  int L = 24;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0xC0FFEE;
  Observable observable = Observable::Wrapping;
  unsigned workers = 0;
};

struct ProtocolRun {
  ProtocolSpec spec;
  RunParams params;
  PercolationEstimate estimate;
  double empirical_bond_rate = 0.0;  // opened / sampled bonds over all trials
  double closed_form_rate = 0.0;     // average SCP the bonds are drawn from
  std::uint64_t bonds_sampled = 0;
};

/// Singlet-convert every link (density 2 alpha1), then percolate on `kind`.
/// Wrapping runs on a periodic lattice; Crossing and TwoPoint on an open one.
ProtocolRun run_cep(LatticeKind kind, double alpha1, const RunParams& params);

/// Triangular lattice, partial swaps to a double-link honeycomb, then
/// distillation of each double link. L must be divisible by 3. PerOutcome
/// draws the measurement outcome of every double link and then the
/// distillation success; EffectiveRate opens each bond with the average SCP.
ProtocolRun run_qep_tri_hex(double alpha1, const BasisChoice& basis, SamplingMode mode,
                            const RunParams& params);

/// Kagome lattice, full swaps to a square lattice. Swap-generated links open
/// with the full-swap SCP (2 alpha1 in the ZZ basis), original links with 2 alpha1.
ProtocolRun run_qep_kagome_square(double alpha1, const RunParams& params,
                                  const BasisChoice& basis = {}, SamplingMode mode = SamplingMode::PerOutcome);

ProtocolRun run_protocol(const ProtocolSpec& spec, const RunParams& params);

/// Every spec at every alpha1 of the grid (spec.alpha1 is overridden), all
/// with the same seed so protocols see common random numbers.
std::vector<ProtocolRun> compare(const std::vector<ProtocolSpec>& protocols, const std::vector<double>& alpha1_grid,
                                 const RunParams& params);

}  // namespace entperc
