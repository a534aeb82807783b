#include "entperc/protocol.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace entperc {

std::string_view to_string(ProtocolName name) {
  switch (name) {
    case ProtocolName::Cep: return "cep";
    case ProtocolName::QepTriHex: return "qep-tri-hex";
    case ProtocolName::QepKagomeSquare: return "qep-kagome-square";
  }
  return "?";
}

std::string_view to_string(NamedBasis basis) {
  switch (basis) {
    case NamedBasis::ZZ: return "zz";
    case NamedBasis::XZ: return "xz";
    case NamedBasis::Optimal: return "optimal";
  }
  return "?";
}

std::string_view to_string(SamplingMode mode) {
  return mode == SamplingMode::PerOutcome ? "per-outcome" : "effective-rate";
}

std::optional<ProtocolName> parse_protocol_name(std::string_view s) {
  for (auto n : {ProtocolName::Cep, ProtocolName::QepTriHex, ProtocolName::QepKagomeSquare}) {
    if (s == to_string(n)) return n;
  }
  return std::nullopt;
}

std::optional<NamedBasis> parse_basis(std::string_view s) {
  for (auto b : {NamedBasis::ZZ, NamedBasis::XZ, NamedBasis::Optimal}) {
    if (s == to_string(b)) return b;
  }
  return std::nullopt;
}

std::optional<SamplingMode> parse_sampling_mode(std::string_view s) {
  for (auto m : {SamplingMode::PerOutcome, SamplingMode::EffectiveRate}) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

std::string BasisChoice::label() const {
  if (!custom) return std::string(to_string(named));
  std::ostringstream out;
  out << "custom{" << (*custom)[0] << ' ' << (*custom)[1] << ' ' << (*custom)[2] << ' ' << (*custom)[3] << '}';
  return out.str();
}

MeasurementSpec resolve_basis(const BasisChoice& basis, const LinkState& link, bool partial) {
  if (basis.custom) {
    basis.custom->check(link);
    return *basis.custom;
  }
  switch (basis.named) {
    case NamedBasis::ZZ: return zz_basis(link);
    case NamedBasis::XZ: return xz_basis();
    case NamedBasis::Optimal:
      return optimize_basis(link, partial ? BasisObjective::PartialSwap : BasisObjective::FullSwap).spec;
  }
  throw std::logic_error("unknown basis");
}

namespace {

// Draws a measurement outcome, then whether the resulting link becomes a
// singlet. Two draws per bond.
struct OutcomeBond {
  std::array<double, 4> cumulative{};
  std::array<double, 4> success{};

  bool sample(TrialStream& s) const {
    const double u = s.uniform();
    std::size_t m = 0;
    while (m < 3 && u >= cumulative[m]) ++m;
    return s.bernoulli(success[m]);
  }
};

// `partial`: distill the outcome with a fresh |alpha>; otherwise convert it alone.
OutcomeBond make_outcome_bond(const LinkState& link, const MeasurementSpec& meas, bool partial) {
  OutcomeBond bond;
  double acc = 0.0;
  const auto outcomes = swap_outcomes(link, meas);
  for (std::size_t m = 0; m < 4; ++m) {
    acc += outcomes[m].prob;
    bond.cumulative[m] = acc;
    bond.success[m] = partial ? distill_prob(link.alpha1, outcomes[m].lambda) : 2.0 * outcomes[m].lambda;
  }
  bond.cumulative[3] = 1.0;
  return bond;
}

struct UniformBond {
  double p;
  bool operator()(EdgeId, TrialStream& s) const { return s.bernoulli(p); }
};

struct DoubleLinkBond {
  OutcomeBond bond;
  bool operator()(EdgeId, TrialStream& s) const { return bond.sample(s); }
};

struct MixedBond {
  const std::vector<std::uint8_t>* is_swap;
  OutcomeBond swap;
  double swap_rate;
  bool per_outcome;
  double original_rate;

  bool operator()(EdgeId e, TrialStream& s) const {
    if (!(*is_swap)[e]) return s.bernoulli(original_rate);
    return per_outcome ? swap.sample(s) : s.bernoulli(swap_rate);
  }
};

ObservableSpec periodic_observable(const LatticeGraph& graph, Observable o, const char* protocol) {
  switch (o) {
    case Observable::Wrapping: return {Observable::Wrapping, 0, 0};
    case Observable::TwoPoint: return corner_to_corner(graph);
    case Observable::Crossing: break;
  }
  throw std::invalid_argument(std::string(protocol) +
                              " runs on a periodic lattice; use the wrapping or two-point observable");
}

template <class Sampler>
ProtocolRun finish(const ProtocolSpec& spec, const RunParams& params, const LatticeGraph& graph,
                   const ObservableSpec& obs, const Sampler& sampler, double closed_form_rate) {
  const auto tally = run_trials(graph, obs, {params.trials, params.seed, params.workers}, sampler, true);
  ProtocolRun run;
  run.spec = spec;
  run.params = params;
  run.estimate = make_estimate(tally.successes, tally.trials, params.observable);
  run.bonds_sampled = tally.bonds_sampled;
  run.empirical_bond_rate =
      tally.bonds_sampled ? static_cast<double>(tally.bonds_opened) / static_cast<double>(tally.bonds_sampled) : 0.0;
  run.closed_form_rate = closed_form_rate;
  return run;
}

}  // namespace

ProtocolRun run_cep(LatticeKind kind, double alpha1, const RunParams& params) {
  const LinkState link = make_link_state(alpha1);
  const double p = singlet_conversion_prob(link);
  const Boundary boundary = params.observable == Observable::Wrapping ? Boundary::Periodic : Boundary::Open;
  const auto graph = build(kind, params.L, params.L, boundary);
  const ObservableSpec obs = params.observable == Observable::TwoPoint ? corner_to_corner(graph)
                                                                       : ObservableSpec{params.observable, 0, 0};
  ProtocolSpec spec;
  spec.name = ProtocolName::Cep;
  spec.alpha1 = alpha1;
  spec.kind = kind;
  return finish(spec, params, graph, obs, UniformBond{p}, p);
}

ProtocolRun run_qep_tri_hex(double alpha1, const BasisChoice& basis, SamplingMode mode, const RunParams& params) {
  const LinkState link = make_link_state(alpha1);
  if (params.L % 3 != 0) {
    std::ostringstream msg;
    msg << "qep-tri-hex needs L divisible by 3 for the 3-colouring of the triangular lattice (got L = " << params.L
        << "); try --L " << (params.L / 3 + 1) * 3;
    throw std::invalid_argument(msg.str());
  }
  const MeasurementSpec meas = resolve_basis(basis, link, true);
  const auto plan = transform_tri_to_hex(build(LatticeKind::Triangular, params.L, params.L, Boundary::Periodic));
  const ObservableSpec obs = periodic_observable(plan.bonds, params.observable, "qep-tri-hex");
  const double rate = partial_swap_avg_scp(link, meas);

  ProtocolSpec spec;
  spec.name = ProtocolName::QepTriHex;
  spec.alpha1 = alpha1;
  spec.basis = basis;
  spec.mode = mode;
  if (mode == SamplingMode::PerOutcome) {
    return finish(spec, params, plan.bonds, obs, DoubleLinkBond{make_outcome_bond(link, meas, true)}, rate);
  }
  return finish(spec, params, plan.bonds, obs, UniformBond{rate}, rate);
}

ProtocolRun run_qep_kagome_square(double alpha1, const RunParams& params, const BasisChoice& basis,
                                  SamplingMode mode) {
  const LinkState link = make_link_state(alpha1);
  const MeasurementSpec meas = resolve_basis(basis, link, false);
  const auto plan = transform_kagome_to_square(build(LatticeKind::Kagome, params.L, params.L, Boundary::Periodic));
  const ObservableSpec obs = periodic_observable(plan.bonds, params.observable, "qep-kagome-square");

  std::vector<std::uint8_t> is_swap(plan.bond_payloads.size());
  std::size_t swaps = 0;
  for (std::size_t i = 0; i < is_swap.size(); ++i) {
    is_swap[i] = plan.bond_payloads[i].swap_outcome.has_value();
    swaps += is_swap[i];
  }
  const double swap_rate = full_swap_avg_scp(link, meas);
  const double original_rate = singlet_conversion_prob(link);
  const double n = static_cast<double>(is_swap.size());
  const double rate = (static_cast<double>(swaps) * swap_rate + (n - static_cast<double>(swaps)) * original_rate) / n;

  ProtocolSpec spec;
  spec.name = ProtocolName::QepKagomeSquare;
  spec.alpha1 = alpha1;
  spec.basis = basis;
  spec.mode = mode;
  spec.kind = LatticeKind::Kagome;
  const MixedBond sampler{&is_swap, make_outcome_bond(link, meas, false), swap_rate,
                          mode == SamplingMode::PerOutcome, original_rate};
  return finish(spec, params, plan.bonds, obs, sampler, rate);
}

ProtocolRun run_protocol(const ProtocolSpec& spec, const RunParams& params) {
  switch (spec.name) {
    case ProtocolName::Cep: return run_cep(spec.kind, spec.alpha1, params);
    case ProtocolName::QepTriHex: return run_qep_tri_hex(spec.alpha1, spec.basis, spec.mode, params);
    case ProtocolName::QepKagomeSquare: return run_qep_kagome_square(spec.alpha1, params, spec.basis, spec.mode);
  }
  throw std::logic_error("unknown protocol");
}

std::vector<ProtocolRun> compare(const std::vector<ProtocolSpec>& protocols, const std::vector<double>& alpha1_grid,
                                 const RunParams& params) {
  if (alpha1_grid.empty()) throw std::invalid_argument("compare needs a nonempty alpha1 grid");
  std::vector<ProtocolRun> runs;
  runs.reserve(protocols.size() * alpha1_grid.size());
  for (double a1 : alpha1_grid) {
    for (ProtocolSpec spec : protocols) {
      spec.alpha1 = a1;
      runs.push_back(run_protocol(spec, params));
    }
  }
  return runs;
}

}  // namespace entperc
