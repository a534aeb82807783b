#include <doctest.h>

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>

#include "entperc/disjoint_set.hpp"
#include "entperc/percolation.hpp"
#include "entperc/rng.hpp"
#include "oracles.hpp"

using namespace entperc;
using oracle::random_graph;

namespace {

// Wrapping by BFS: give every node of a cluster an unrolled winding; a
// node reached twice with different windings closes a wrapping cycle.
bool wraps_bfs(const BondConfig& c) {
  const auto& g = *c.graph;
  const auto inc = g.incidence();
  std::vector<char> seen(g.node_count(), 0);
  std::vector<Winding> at(g.node_count());
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (seen[s]) continue;
    seen[s] = 1;
    std::deque<NodeId> q{s};
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop_front();
      for (EdgeId e : inc[v]) {
        if (!c.open[e]) continue;
        const auto& ed = g.edge(e);
        const NodeId w = ed.a == v ? ed.b : ed.a;
        const Winding step = ed.a == v ? ed.wrap : -ed.wrap;
        const Winding target = at[v] + step;
        if (!seen[w]) {
          seen[w] = 1;
          at[w] = target;
          q.push_back(w);
        } else if (!(at[w] == target)) {
          return true;
        }
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("trial streams are reproducible and decorrelated") {
  TrialStream a(1, 7), b(1, 7), c(1, 8), d(2, 7);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  TrialStream u(42, 0);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("disjoint set") {
  DisjointSet d(5);
  CHECK(d.unite(0, 1));
  CHECK(d.unite(3, 4));
  CHECK_FALSE(d.unite(1, 0));
  CHECK(d.find(0) == d.find(1));
  CHECK(d.find(2) != d.find(0));
  CHECK(d.size_of(4) == 2);
  d.reset(3);
  CHECK(d.size() == 3);
  CHECK(d.find(1) == 1);
}

TEST_CASE("winding disjoint set separates wrapping from contractible cycles") {
  WindingDisjointSet d(3);
  CHECK(d.unite(0, 1, {}).is_zero());
  CHECK(d.unite(1, 2, {}).is_zero());
  CHECK(d.unite(2, 0, {1, 0}) == Winding{1, 0});

  WindingDisjointSet e(3);
  CHECK(e.unite(0, 1, {}).is_zero());
  CHECK(e.unite(1, 2, {0, 1}).is_zero());
  CHECK(e.unite(2, 0, {0, -1}).is_zero());  // goes back the way it came
}

TEST_CASE("cluster labels agree with the transitive closure") {
  std::mt19937_64 rng(2024);
  std::bernoulli_distribution coin(0.5);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto g = random_graph(rng, 12, 20);
    BondConfig c{&g, std::vector<std::uint8_t>(g.edge_count())};
    for (auto& o : c.open) o = coin(rng);
    REQUIRE(oracle::labels_match_closure(c));
    const auto labels = find_clusters(c);
    for (NodeId i = 0; i < g.node_count(); ++i) CHECK(labels[i] <= i);
  }
}

TEST_CASE("wrapping detection agrees with the BFS winding oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pd(0.2, 0.8);
  for (auto k : {LatticeKind::Square, LatticeKind::Triangular, LatticeKind::Hexagonal, LatticeKind::Kagome}) {
    for (int twist : {0, 1}) {
      const auto g = build(k, 4, 3, Boundary::Periodic, twist);
      for (int rep = 0; rep < 300; ++rep) {
        TrialStream s(rng(), 0);
        const auto c = sample_bonds(g, pd(rng), s);
        REQUIRE(has_wrapping_cluster(c) == wraps_bfs(c));
      }
    }
  }
}

TEST_CASE("wrapping edge cases") {
  const auto g = build(LatticeKind::Square, 5, 5, Boundary::Periodic);
  BondConfig c{&g, std::vector<std::uint8_t>(g.edge_count(), 0)};
  CHECK_FALSE(has_wrapping_cluster(c));
  // one closed row of horizontal bonds
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (g.coord(ed.a).y == 0 && g.coord(ed.b).y == 0) c.open[e] = 1;
  }
  CHECK(has_wrapping_cluster(c));
  // a single plaquette does not wrap
  std::fill(c.open.begin(), c.open.end(), 0);
  const NodeId corners[] = {*g.find({1, 1, 0}), *g.find({2, 1, 0}), *g.find({2, 2, 0}), *g.find({1, 2, 0})};
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    int hit = 0;
    for (NodeId n : corners) hit += (ed.a == n) + (ed.b == n);
    if (hit == 2) c.open[e] = 1;
  }
  CHECK(std::count(c.open.begin(), c.open.end(), 1) == 4);
  CHECK_FALSE(has_wrapping_cluster(c));
  // open lattices never wrap
  const auto open = build(LatticeKind::Square, 5, 5, Boundary::Open);
  CHECK_FALSE(has_wrapping_cluster(BondConfig{&open, std::vector<std::uint8_t>(open.edge_count(), 1)}));
}

TEST_CASE("two-point connectivity agrees with exhaustive enumeration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pd(0.0, 1.0);
  int checked = 0;
  while (checked < 25) {
    const auto g = random_graph(rng, 8, 15);
    if (g.edge_count() == 0) continue;
    std::vector<double> probs(g.edge_count());
    for (auto& p : probs) p = pd(rng);
    const NodeId a = 0, b = static_cast<NodeId>(g.node_count() - 1);
    const double exact = oracle::exact_two_point(g, probs, a, b);
    const std::uint64_t n = 40000;
    const auto est = two_point_connectivity(g, probs, a, b, {n, 1000 + static_cast<std::uint64_t>(checked), 2});
    const double sigma = std::sqrt(exact * (1 - exact) / n);
    CAPTURE(exact);
    CHECK(std::abs(est.estimate - exact) <= 5 * sigma + 1e-12);
    ++checked;
  }
}

TEST_CASE("two-point connectivity validates its input") {
  const auto g = build(LatticeKind::Square, 3, 3, Boundary::Open);
  const std::vector<double> ok(g.edge_count(), 0.5);
  CHECK_THROWS_AS(two_point_connectivity(g, ok, 0, 0, {}), std::invalid_argument);
  CHECK_THROWS_AS(two_point_connectivity(g, ok, 0, 99, {}), std::invalid_argument);
  CHECK_THROWS_AS(two_point_connectivity(g, std::vector<double>(3, 0.5), 0, 1, {}), std::invalid_argument);
  CHECK_THROWS_AS(two_point_connectivity(g, std::vector<double>(g.edge_count(), 1.5), 0, 1, {}),
                  std::invalid_argument);
}

TEST_CASE("wrapping probability agrees with a naive simulation") {
  const auto g = build(LatticeKind::Square, 6, 6, Boundary::Periodic);
  const std::uint64_t n = 20000;
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < n; ++t) {
    BondConfig c{&g, std::vector<std::uint8_t>(g.edge_count())};
    for (auto& o : c.open) o = coin(rng);
    hits += wraps_bfs(c);
  }
  const double naive = static_cast<double>(hits) / n;
  const auto est = percolation_estimate(g, 0.5, {Observable::Wrapping, 0, 0}, {n, 77, 0});
  const double sigma = std::hypot(est.std_error, std::sqrt(naive * (1 - naive) / n));
  CHECK(std::abs(est.estimate - naive) <= 5 * sigma);
}

TEST_CASE("estimates do not depend on the worker count") {
  const auto g = build(LatticeKind::Triangular, 10, 10, Boundary::Periodic);
  const ObservableSpec spec{Observable::Wrapping, 0, 0};
  const auto one = percolation_estimate(g, 0.35, spec, {500, 9, 1});
  for (unsigned w : {2u, 3u, 7u}) {
    const auto many = percolation_estimate(g, 0.35, spec, {500, 9, w});
    CHECK(many.estimate == one.estimate);
  }
  const auto other_seed = percolation_estimate(g, 0.35, spec, {500, 10, 1});
  CHECK(other_seed.estimate != one.estimate);
}

TEST_CASE("common random numbers make every trial monotone in p") {
  const auto g = build(LatticeKind::Square, 8, 8, Boundary::Periodic);
  std::vector<std::uint8_t> lo, hi;
  struct Uniform {
    double p;
    bool operator()(EdgeId, TrialStream& s) const { return s.bernoulli(p); }
  };
  run_trials(g, {Observable::Wrapping, 0, 0}, {300, 3, 2}, Uniform{0.45}, false, &lo);
  run_trials(g, {Observable::Wrapping, 0, 0}, {300, 3, 2}, Uniform{0.55}, false, &hi);
  for (std::size_t t = 0; t < lo.size(); ++t) CHECK(lo[t] <= hi[t]);
}

TEST_CASE("sampling every bond counts every bond") {
  const auto g = build(LatticeKind::Square, 6, 6, Boundary::Periodic);
  struct Uniform {
    double p;
    bool operator()(EdgeId, TrialStream& s) const { return s.bernoulli(p); }
  };
  const auto tally = run_trials(g, {Observable::Wrapping, 0, 0}, {50, 1, 1}, Uniform{0.9}, true);
  CHECK(tally.bonds_sampled == 50 * g.edge_count());
  CHECK(tally.successes == 50);
}

TEST_CASE("observables at the extremes") {
  for (auto k : {LatticeKind::Square, LatticeKind::Triangular, LatticeKind::Hexagonal, LatticeKind::Kagome}) {
    const auto open = build(k, 6, 6, Boundary::Open);
    const auto per = build(k, 6, 6, Boundary::Periodic);
    const auto corner = corner_to_corner(open);
    for (double p : {0.0, 1.0}) {
      CHECK(percolation_estimate(per, p, {Observable::Wrapping, 0, 0}, {20, 1, 1}).estimate == p);
      CHECK(percolation_estimate(open, p, {Observable::Crossing, 0, 0}, {20, 1, 1}).estimate == p);
      CHECK(percolation_estimate(open, p, corner, {20, 1, 1}).estimate == p);
    }
  }
  CHECK_THROWS_AS(percolation_estimate(build(LatticeKind::Square, 3, 3, Boundary::Open), 1.2,
                                       {Observable::Crossing, 0, 0}, {}),
                  std::invalid_argument);
}

TEST_CASE("corner to corner picks opposite corners") {
  const auto g = build(LatticeKind::Square, 5, 4, Boundary::Open);
  const auto spec = corner_to_corner(g);
  CHECK(g.coord(spec.a) == NodeCoord{0, 0, 0});
  CHECK(g.coord(spec.b) == NodeCoord{4, 3, 0});
}

TEST_CASE("estimate and standard error") {
  const auto e = make_estimate(30, 100, Observable::Crossing);
  CHECK(e.estimate == doctest::Approx(0.3));
  CHECK(e.std_error == doctest::Approx(std::sqrt(0.3 * 0.7 / 100)));
  CHECK(make_estimate(0, 0, Observable::Wrapping).estimate == 0.0);
  CHECK(resolve_workers(8, 3) == 3);
  CHECK(resolve_workers(2, 100) == 2);
  CHECK(resolve_workers(0, 100) >= 1);
}

TEST_CASE("observable names round-trip") {
  for (auto o : {Observable::Wrapping, Observable::Crossing, Observable::TwoPoint}) {
    CHECK(parse_observable(to_string(o)) == o);
  }
  CHECK_FALSE(parse_observable("spanning"));
}

TEST_CASE("threshold estimate on a small square lattice") {
  const auto pc = estimate_pc(LatticeKind::Square, 16, 400, 123);
  CHECK(pc.threshold.value == doctest::Approx(0.5).epsilon(0.03));
  CHECK(pc.threshold.kind == ThresholdKind::ClassicalPc);
  REQUIRE(pc.threshold.std_error);
  CHECK(*pc.threshold.std_error > 0.0);
  CHECK(*pc.threshold.std_error < 0.05);
  CHECK(pc.threshold.bracket_lo <= pc.threshold.bracket_hi);
  CHECK_FALSE(pc.levels.empty());
  // reproducible
  CHECK(estimate_pc(LatticeKind::Square, 16, 400, 123, 3).threshold.value == pc.threshold.value);
}
