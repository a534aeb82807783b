#include "entperc/percolation.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace entperc {

std::string_view to_string(Observable o) {
  switch (o) {
    case Observable::Wrapping: return "wrapping";
    case Observable::Crossing: return "crossing";
    case Observable::TwoPoint: return "two-point";
  }
  return "?";
}

std::optional<Observable> parse_observable(std::string_view name) {
  for (auto o : {Observable::Wrapping, Observable::Crossing, Observable::TwoPoint}) {
    if (name == to_string(o)) return o;
  }
  return std::nullopt;
}

std::string_view to_string(ThresholdKind kind) {
  switch (kind) {
    case ThresholdKind::Lower: return "lower";
    case ThresholdKind::Upper: return "upper";
    case ThresholdKind::CubicRoot: return "cubic-root";
    case ThresholdKind::ClassicalPc: return "classical-pc";
  }
  return "?";
}

BondConfig sample_bonds(const LatticeGraph& graph, double p, TrialStream& stream) {
  BondConfig config{&graph, std::vector<std::uint8_t>(graph.edge_count())};
  for (auto& flag : config.open) flag = stream.bernoulli(p) ? 1 : 0;
  return config;
}

std::vector<std::uint32_t> find_clusters(const BondConfig& config) {
  const auto& g = *config.graph;
  DisjointSet dsu(g.node_count());
  const auto edges = g.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (config.open[e]) dsu.unite(edges[e].a, edges[e].b);
  }
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> root_label(g.node_count(), kUnset);
  std::vector<std::uint32_t> labels(g.node_count());
  for (std::uint32_t n = 0; n < g.node_count(); ++n) {
    auto& label = root_label[dsu.find(n)];
    if (label == kUnset) label = n;
    labels[n] = label;
  }
  return labels;
}

bool has_wrapping_cluster(const BondConfig& config) {
  const auto& g = *config.graph;
  WindingDisjointSet dsu(g.node_count());
  const auto edges = g.edges();
  for (EdgeId e = 0; e < edges.size(); ++e) {
    if (config.open[e] && !dsu.unite(edges[e].a, edges[e].b, edges[e].wrap).is_zero()) return true;
  }
  return false;
}

PercolationEstimate make_estimate(std::uint64_t successes, std::uint64_t trials, Observable observable) {
  PercolationEstimate est;
  est.trials = trials;
  est.observable = observable;
  if (trials == 0) return est;
  est.estimate = static_cast<double>(successes) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

unsigned resolve_workers(unsigned requested, std::uint64_t trials) {
  unsigned w = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (trials < w) w = static_cast<unsigned>(std::max<std::uint64_t>(trials, 1));
  return w;
}

ObservableSpec corner_to_corner(const LatticeGraph& graph) {
  if (graph.node_count() < 2) throw std::invalid_argument("two-point observable needs at least two nodes");
  const auto inc = graph.incidence();
  std::vector<std::int64_t> dist(graph.node_count(), -1);
  std::deque<NodeId> queue{0};
  dist[0] = 0;
  NodeId far = 0;
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    if (dist[n] > dist[far] || (dist[n] == dist[far] && n < far)) far = n;
    for (EdgeId e : inc[n]) {
      const Edge& edge = graph.edge(e);
      const NodeId m = edge.a == n ? edge.b : edge.a;
      if (dist[m] < 0) {
        dist[m] = dist[n] + 1;
        queue.push_back(m);
      }
    }
  }
  if (far == 0) throw std::invalid_argument("lattice graph is disconnected from node 0");
  return {Observable::TwoPoint, 0, far};
}

namespace detail {

TrialEvaluator::TrialEvaluator(const LatticeGraph& graph, const ObservableSpec& spec)
    : graph_(graph), spec_(spec) {
  if (spec.kind == Observable::TwoPoint) {
    if (spec.a >= graph.node_count() || spec.b >= graph.node_count()) {
      throw std::invalid_argument("two-point endpoint out of range");
    }
    if (spec.a == spec.b) throw std::invalid_argument("two-point endpoints must differ");
  }
  if (spec.kind == Observable::Crossing) {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    for (const auto& c : graph.nodes()) {
      lo = std::min(lo, c.x);
      hi = std::max(hi, c.x);
    }
    left_.assign(graph.node_count(), 0);
    right_.assign(graph.node_count(), 0);
    for (NodeId n = 0; n < graph.node_count(); ++n) {
      left_[n] = graph.coord(n).x == lo;
      right_[n] = graph.coord(n).x == hi;
    }
  }
}

bool TrialEvaluator::crossing_now() {
  std::vector<std::uint8_t> touches(graph_.node_count(), 0);
  for (NodeId n = 0; n < graph_.node_count(); ++n) {
    if (left_[n]) touches[plain_.find(n)] |= 1;
  }
  for (NodeId n = 0; n < graph_.node_count(); ++n) {
    if (right_[n] && (touches[plain_.find(n)] & 1)) return true;
  }
  return false;
}

}  // namespace detail

namespace {

struct UniformSampler {
  double p;
  bool operator()(EdgeId, TrialStream& s) const { return s.bernoulli(p); }
};

struct PerEdgeSampler {
  std::span<const double> probs;
  bool operator()(EdgeId e, TrialStream& s) const { return s.bernoulli(probs[e]); }
};

}  // namespace

PercolationEstimate percolation_estimate(const LatticeGraph& graph, double p, const ObservableSpec& spec,
                                         const McOptions& opts) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bond density must lie in [0, 1]");
  const auto tally = run_trials(graph, spec, opts, UniformSampler{p});
  return make_estimate(tally.successes, tally.trials, spec.kind);
}

PercolationEstimate wrapping_probability(LatticeKind kind, double p, int L, std::uint64_t trials,
                                         std::uint64_t seed, unsigned workers) {
  const auto graph = build(kind, L, L, Boundary::Periodic);
  return percolation_estimate(graph, p, {Observable::Wrapping, 0, 0}, {trials, seed, workers});
}

PercolationEstimate two_point_connectivity(const LatticeGraph& graph, std::span<const double> edge_probs,
                                           NodeId a, NodeId b, const McOptions& opts) {
  if (edge_probs.size() != graph.edge_count()) {
    throw std::invalid_argument("one open probability per edge is required");
  }
  for (double p : edge_probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability outside [0, 1]");
  }
  const auto tally = run_trials(graph, {Observable::TwoPoint, a, b}, opts, PerEdgeSampler{edge_probs});
  return make_estimate(tally.successes, tally.trials, Observable::TwoPoint);
}

namespace {

// Crossing of 1/2 by linear interpolation between evaluated levels. The
// curve is monotone in p because levels share random numbers; (0, 0) and
// (1, 1) close the ends.
double interpolate_crossing(std::vector<std::pair<double, double>> curve) {
  curve.emplace_back(0.0, 0.0);
  curve.emplace_back(1.0, 1.0);
  std::sort(curve.begin(), curve.end());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const auto [p0, r0] = curve[i - 1];
    const auto [p1, r1] = curve[i];
    if (r0 < 0.5 && r1 >= 0.5) {
      if (r1 == r0) return p1;
      return p0 + (0.5 - r0) * (p1 - p0) / (r1 - r0);
    }
  }
  return curve.back().first;
}

}  // namespace

PcEstimate estimate_pc(LatticeKind kind, int L, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw std::invalid_argument("estimate_pc needs at least one trial");
  constexpr double kBracketTolerance = 5e-4;
  constexpr int kMaxSteps = 30;
  constexpr int kBootstrap = 200;

  const auto graph = build(kind, L, L, Boundary::Periodic);
  const ObservableSpec spec{Observable::Wrapping, 0, 0};
  const McOptions opts{trials, seed, workers};

  PcEstimate out;
  std::vector<std::vector<std::uint8_t>> outcomes;
  double lo = 0.0;
  double hi = 1.0;
  bool converged = false;
  for (int step = 0; step < kMaxSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    std::vector<std::uint8_t> trial_outcomes;
    const auto tally = run_trials(graph, spec, opts, UniformSampler{mid}, false, &trial_outcomes);
    out.levels.push_back({mid, tally.successes, tally.trials});
    outcomes.push_back(std::move(trial_outcomes));
    const auto est = make_estimate(tally.successes, tally.trials, Observable::Wrapping);
    if (est.estimate < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= kBracketTolerance || std::abs(est.estimate - 0.5) <= est.std_error) {
      converged = true;
      break;
    }
  }

  auto crossing = [&](const std::vector<std::uint64_t>* picks) {
    std::vector<std::pair<double, double>> curve;
    for (std::size_t l = 0; l < out.levels.size(); ++l) {
      std::uint64_t hits = 0;
      if (picks) {
        for (auto t : *picks) hits += outcomes[l][t];
      } else {
        hits = out.levels[l].successes;
      }
      curve.emplace_back(out.levels[l].p, static_cast<double>(hits) / static_cast<double>(trials));
    }
    return interpolate_crossing(std::move(curve));
  };

  const double value = crossing(nullptr);
  std::mt19937_64 boot_rng(mix64(seed ^ 0xB007B007ULL));
  std::uniform_int_distribution<std::uint64_t> pick(0, trials - 1);
  std::vector<std::uint64_t> picks(trials);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int b = 0; b < kBootstrap; ++b) {
    for (auto& t : picks) t = pick(boot_rng);
    const double v = crossing(&picks);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / kBootstrap;
  const double var = std::max(0.0, sum_sq / kBootstrap - mean * mean);

  auto& th = out.threshold;
  th.value = value;
  th.kind = ThresholdKind::ClassicalPc;
  std::ostringstream method;
  method << "wrapping-probability bisection at level 0.5, L=" << L << ", trials/level=" << trials;
  th.method = method.str();
  // Residual at the evaluated level nearest the interpolated crossing.
  const auto nearest = std::min_element(out.levels.begin(), out.levels.end(), [&](const auto& x, const auto& y) {
    return std::abs(x.p - value) < std::abs(y.p - value);
  });
  th.residual = std::abs(static_cast<double>(nearest->successes) / static_cast<double>(nearest->trials) - 0.5);
  th.std_error = std::sqrt(var);
  th.bracket_lo = lo;
  th.bracket_hi = hi;
  th.converged = converged;
  return out;
}

}  // namespace entperc
