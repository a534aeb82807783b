#pragma once

// Bond-percolation Monte Carlo on LatticeGraph.
//
// Every trial draws from its own TrialStream(seed, trial), edges consume
// their draws in edge order, and trial results are merged as integer
// counts. Estimates therefore depend only on (seed, parameters, trials),
// never on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "entperc/disjoint_set.hpp"
#include "entperc/lattice.hpp"
#include "entperc/rng.hpp"
#include "entperc/threshold.hpp"

namespace entperc {

enum class Observable { Wrapping, Crossing, TwoPoint };

std::string_view to_string(Observable o);
std::optional<Observable> parse_observable(std::string_view name);

struct BondConfig {
  const LatticeGraph* graph = nullptr;
  std::vector<std::uint8_t> open;  // one flag per edge
};

/// Opens each edge independently with probability p.
BondConfig sample_bonds(const LatticeGraph& graph, double p, TrialStream& stream);

/// Cluster label per node: the smallest node id of its open cluster.
std::vector<std::uint32_t> find_clusters(const BondConfig& config);

/// True when some open cluster winds around a periodic direction.
bool has_wrapping_cluster(const BondConfig& config);

struct PercolationEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  Observable observable = Observable::Wrapping;
};

/// estimate = successes / trials, stderr = sqrt(est (1 - est) / trials).
PercolationEstimate make_estimate(std::uint64_t successes, std::uint64_t trials, Observable observable);

struct McOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0xC0FFEE;
  unsigned workers = 0;  // 0: hardware concurrency
};

unsigned resolve_workers(unsigned requested, std::uint64_t trials);

/// What a trial measures. For TwoPoint, `a` and `b` are the endpoints.
/// Crossing means an open cluster touching both the smallest-x and the
/// largest-x column of cells.
struct ObservableSpec {
  Observable kind = Observable::Wrapping;
  NodeId a = 0;
  NodeId b = 0;
};

/// Node 0 and the node farthest from it in hops (first one on ties). On
/// open lattices built by build() these are opposite corners.
ObservableSpec corner_to_corner(const LatticeGraph& graph);

struct TrialTally {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t bonds_sampled = 0;
  std::uint64_t bonds_opened = 0;
};

namespace detail {

class TrialEvaluator {
 public:
  TrialEvaluator(const LatticeGraph& graph, const ObservableSpec& spec);

  /// Runs one trial. `open_edge(e, stream)` decides edge e and must consume
  /// a fixed number of draws. With `sample_all` false the trial may stop as
  /// soon as its outcome is decided.
  template <class Sampler>
  bool run(TrialStream& stream, Sampler& open_edge, bool sample_all, TrialTally& tally);

 private:
  bool crossing_now();

  const LatticeGraph& graph_;
  ObservableSpec spec_;
  DisjointSet plain_;
  WindingDisjointSet winding_;
  std::vector<std::uint8_t> left_;
  std::vector<std::uint8_t> right_;
};

template <class Sampler>
bool TrialEvaluator::run(TrialStream& stream, Sampler& open_edge, bool sample_all, TrialTally& tally) {
  const auto edges = graph_.edges();
  bool success = false;
  switch (spec_.kind) {
    case Observable::Wrapping: winding_.reset(graph_.node_count()); break;
    default: plain_.reset(graph_.node_count()); break;
  }
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const bool open = open_edge(e, stream);
    ++tally.bonds_sampled;
    if (!open) continue;
    ++tally.bonds_opened;
    if (success) continue;
    const Edge& edge = edges[e];
    if (spec_.kind == Observable::Wrapping) {
      success = !winding_.unite(edge.a, edge.b, edge.wrap).is_zero();
    } else if (plain_.unite(edge.a, edge.b) && spec_.kind == Observable::TwoPoint) {
      success = plain_.find(spec_.a) == plain_.find(spec_.b);
    }
    if (success && !sample_all) break;
  }
  if (spec_.kind == Observable::Crossing) success = crossing_now();
  return success;
}

}  // namespace detail

/// Runs `trials` independent trials split across workers. `sampler(e,
/// stream)` must be safe to call concurrently. When `outcomes` is non-null
/// it receives one 0/1 entry per trial, indexed by trial number.
template <class Sampler>
TrialTally run_trials(const LatticeGraph& graph, const ObservableSpec& spec, const McOptions& opts,
                      const Sampler& sampler, bool sample_all = false,
                      std::vector<std::uint8_t>* outcomes = nullptr) {
  const unsigned workers = resolve_workers(opts.workers, opts.trials);
  if (outcomes) outcomes->assign(opts.trials, 0);
  std::vector<TrialTally> tallies(workers);

  auto work = [&](unsigned w) {
    detail::TrialEvaluator eval(graph, spec);
    Sampler local = sampler;
    TrialTally& tally = tallies[w];
    const std::uint64_t begin = opts.trials * w / workers;
    const std::uint64_t end = opts.trials * (w + 1) / workers;
    for (std::uint64_t t = begin; t < end; ++t) {
      TrialStream stream(opts.seed, t);
      const bool ok = eval.run(stream, local, sample_all, tally);
      ++tally.trials;
      if (ok) ++tally.successes;
      if (outcomes) (*outcomes)[t] = ok ? 1 : 0;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  TrialTally total;
  for (const auto& t : tallies) {
    total.trials += t.trials;
    total.successes += t.successes;
    total.bonds_sampled += t.bonds_sampled;
    total.bonds_opened += t.bonds_opened;
  }
  return total;
}

/// Uniform bond density p on `graph`.
PercolationEstimate percolation_estimate(const LatticeGraph& graph, double p, const ObservableSpec& spec,
                                         const McOptions& opts);

/// Wrapping probability on a periodic L x L lattice of `kind`.
PercolationEstimate wrapping_probability(LatticeKind kind, double p, int L, std::uint64_t trials,
                                         std::uint64_t seed, unsigned workers = 0);

/// Fraction of trials in which a and b share an open cluster, edge e open
/// with probability edge_probs[e]. Throws std::invalid_argument if a == b or
/// the probability vector does not match the edge count.
PercolationEstimate two_point_connectivity(const LatticeGraph& graph, std::span<const double> edge_probs,
                                           NodeId a, NodeId b, const McOptions& opts);

struct PcLevel {
  double p;
  std::uint64_t successes;
  std::uint64_t trials;
};

struct PcEstimate {
  ThresholdEstimate threshold;
  std::vector<PcLevel> levels;  // in evaluation order
};

/// Bisection in p for the density at which the wrapping probability on a
/// periodic L x L lattice crosses 1/2. All levels share random numbers, so
/// the estimated curve is monotone. Stops when the bracket is below 5e-4 or
/// the level is within one standard error of 1/2. The value interpolates
/// between the evaluated levels bracketing 1/2; stderr comes from a
/// bootstrap over trials.
PcEstimate estimate_pc(LatticeKind kind, int L, std::uint64_t trials, std::uint64_t seed,
                       unsigned workers = 0);

}  // namespace entperc
