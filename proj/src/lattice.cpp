#include "entperc/lattice.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace entperc {

namespace {

struct Offset {
  int from_sub;
  int dx;
  int dy;
  int to_sub;
};

// Per-cell edge generators. Edge id in a periodic build is
// cell * offsets.size() + k, which the transformations rely on.
std::span<const Offset> cell_offsets(LatticeKind kind) {
  static constexpr Offset square[] = {{0, 1, 0, 0}, {0, 0, 1, 0}};
  static constexpr Offset triangular[] = {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, -1, 1, 0}};
  static constexpr Offset hexagonal[] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}};
  // A = 0, B = 1 (at a1/2), C = 2 (at a2/2).
  static constexpr Offset kagome[] = {{0, 0, 0, 1}, {0, 0, 0, 2}, {1, 0, 0, 2},
                                      {1, 1, 0, 0}, {2, 0, 1, 0}, {1, 1, -1, 2}};
  switch (kind) {
    case LatticeKind::Square: return square;
    case LatticeKind::Triangular: return triangular;
    case LatticeKind::Hexagonal: return hexagonal;
    case LatticeKind::Kagome: return kagome;
  }
  return {};
}

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Wrapped {
  int x;
  int y;
  Winding wrap;
};

Wrapped wrap_cell(const LatticeShape& s, int x, int y) {
  const int ny = floor_div(y, s.height);
  const int y0 = y - ny * s.height;
  const int x1 = x - ny * s.twist;
  const int nx = floor_div(x1, s.width);
  return {x1 - nx * s.width, y0, {nx, ny}};
}

NodeId pristine_id(const LatticeShape& s, int x, int y, int sub) {
  return static_cast<NodeId>((y * s.width + x) * sites_per_cell(s.kind) + sub);
}

// Far end of `e` seen from `from`, with the winding of that step.
std::pair<NodeId, Winding> step_from(const Edge& e, NodeId from) {
  if (e.a == from) return {e.b, e.wrap};
  return {e.a, -e.wrap};
}

void require_pristine_periodic(const LatticeGraph& g, LatticeKind kind, const char* what) {
  if (g.kind() != kind) {
    throw std::invalid_argument(std::string(what) + " requires a " + std::string(to_string(kind)) +
                                " lattice, got " + std::string(to_string(g.kind())));
  }
  if (g.boundary() != Boundary::Periodic) {
    throw std::invalid_argument(std::string(what) + " requires a periodic lattice");
  }
  const auto& s = g.shape();
  const std::size_t cells = static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height);
  if (g.node_count() != cells * static_cast<std::size_t>(sites_per_cell(kind)) ||
      g.edge_count() != cells * cell_offsets(kind).size()) {
    throw std::invalid_argument(std::string(what) + " requires a pristine lattice from build()");
  }
}

// Result graph over the surviving source nodes, keeping source coordinates.
struct Survivors {
  std::vector<NodeCoord> coords;
  std::vector<std::int64_t> new_id;  // -1 for removed nodes
};

Survivors collect_survivors(const LatticeGraph& src, const std::vector<bool>& removed) {
  Survivors s;
  s.new_id.assign(src.node_count(), -1);
  for (NodeId n = 0; n < src.node_count(); ++n) {
    if (removed[n]) continue;
    s.new_id[n] = static_cast<std::int64_t>(s.coords.size());
    s.coords.push_back(src.coord(n));
  }
  return s;
}

}  // namespace

std::string_view to_string(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Triangular: return "triangular";
    case LatticeKind::Square: return "square";
    case LatticeKind::Hexagonal: return "hexagonal";
    case LatticeKind::Kagome: return "kagome";
  }
  return "?";
}

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::Open ? "open" : "periodic";
}

std::string_view to_string(PayloadTag tag) {
  return tag == PayloadTag::Original ? "original" : "swap";
}

std::optional<LatticeKind> parse_lattice_kind(std::string_view name) {
  for (auto k : {LatticeKind::Triangular, LatticeKind::Square, LatticeKind::Hexagonal, LatticeKind::Kagome}) {
    if (name == to_string(k)) return k;
  }
  if (name == "honeycomb") return LatticeKind::Hexagonal;
  return std::nullopt;
}

double classical_pc(LatticeKind kind) {
  const double two_sin = 2.0 * std::sin(std::numbers::pi / 18.0);
  switch (kind) {
    case LatticeKind::Triangular: return two_sin;
    case LatticeKind::Square: return 0.5;
    case LatticeKind::Hexagonal: return 1.0 - two_sin;
    case LatticeKind::Kagome: return 0.5244053;  // Monte Carlo estimate, not exact
  }
  return 0.0;
}

int coordination(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Triangular: return 6;
    case LatticeKind::Square: return 4;
    case LatticeKind::Hexagonal: return 3;
    case LatticeKind::Kagome: return 4;
  }
  return 0;
}

int sites_per_cell(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::Hexagonal: return 2;
    case LatticeKind::Kagome: return 3;
    default: return 1;
  }
}

std::size_t LatticeGraph::CoordHash::operator()(const NodeCoord& c) const noexcept {
  const auto h = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) ^
                 (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.y)) << 4) ^
                 static_cast<std::uint64_t>(c.sub);
  return std::hash<std::uint64_t>{}(h);
}

LatticeGraph::LatticeGraph(LatticeShape shape, std::vector<NodeCoord> nodes, std::vector<Edge> edges)
    : shape_(shape), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  index_.reserve(nodes_.size());
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (!index_.emplace(nodes_[n], n).second) throw std::invalid_argument("duplicate node coordinate");
  }
  for (const auto& e : edges_) {
    if (e.a >= nodes_.size() || e.b >= nodes_.size()) throw std::invalid_argument("edge endpoint out of range");
    if (e.a == e.b) throw std::invalid_argument("self-loop in lattice graph");
  }
}

std::optional<NodeId> LatticeGraph::find(NodeCoord c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> LatticeGraph::degrees() const {
  std::vector<std::size_t> deg(nodes_.size(), 0);
  for (const auto& e : edges_) {
    ++deg[e.a];
    ++deg[e.b];
  }
  return deg;
}

std::vector<std::vector<EdgeId>> LatticeGraph::incidence() const {
  std::vector<std::vector<EdgeId>> inc(nodes_.size());
  for (EdgeId i = 0; i < edges_.size(); ++i) {
    inc[edges_[i].a].push_back(i);
    inc[edges_[i].b].push_back(i);
  }
  return inc;
}

LatticeGraph build(LatticeKind kind, int width, int height, Boundary boundary, int twist) {
  if (width < 2 || height < 2) {
    std::ostringstream msg;
    msg << "lattice dimensions must be >= 2, got " << width << "x" << height;
    throw std::invalid_argument(msg.str());
  }
  if (twist < 0 || twist >= width) throw std::invalid_argument("twist must lie in [0, width)");
  if (twist != 0 && boundary != Boundary::Periodic) throw std::invalid_argument("twist requires a periodic boundary");

  const LatticeShape shape{kind, width, height, boundary, twist};
  const int subs = sites_per_cell(kind);
  const auto offsets = cell_offsets(kind);

  std::vector<NodeCoord> nodes;
  nodes.reserve(static_cast<std::size_t>(width * height * subs));
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int s = 0; s < subs; ++s) nodes.push_back({x, y, s});

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(width * height) * offsets.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (const auto& o : offsets) {
        const int tx = x + o.dx;
        const int ty = y + o.dy;
        const NodeId a = pristine_id(shape, x, y, o.from_sub);
        if (boundary == Boundary::Open) {
          if (tx < 0 || tx >= width || ty < 0 || ty >= height) continue;
          edges.push_back({a, pristine_id(shape, tx, ty, o.to_sub), {}, PayloadTag::Original});
        } else {
          const auto w = wrap_cell(shape, tx, ty);
          edges.push_back({a, pristine_id(shape, w.x, w.y, o.to_sub), w.wrap, PayloadTag::Original});
        }
      }
    }
  }
  return LatticeGraph(shape, std::move(nodes), std::move(edges));
}

TransformationPlan transform_tri_to_hex(const LatticeGraph& tri) {
  require_pristine_periodic(tri, LatticeKind::Triangular, "triangular-to-hexagonal transformation");
  const auto& s = tri.shape();
  if (s.width % 3 != 0 || (s.twist + 2 * s.height) % 3 != 0) {
    std::ostringstream msg;
    msg << "triangular-to-hexagonal transformation needs width divisible by 3 and (twist + 2*height) "
           "divisible by 3 (got "
        << s.width << "x" << s.height << ", twist " << s.twist << "); try L = " << (s.width / 3 + 1) * 3;
    throw std::invalid_argument(msg.str());
  }

  auto color = [](const NodeCoord& c) { return ((c.x + 2 * c.y) % 3 + 3) % 3; };
  std::vector<bool> removed(tri.node_count(), false);
  std::vector<NodeId> removed_ids;
  for (NodeId n = 0; n < tri.node_count(); ++n) {
    if (color(tri.coord(n)) == 0) {
      removed[n] = true;
      removed_ids.push_back(n);
    }
  }
  const Survivors surv = collect_survivors(tri, removed);

  // Each up-pointing triangle {b, b+(1,0), b+(0,1)} has exactly one removed
  // vertex; the swap there joins the other two, parallel to their edge.
  std::vector<SwapInstruction> swaps;
  std::vector<Edge> result_edges;
  std::vector<Edge> bond_edges;
  std::vector<BondPayload> payloads;
  const auto edge_id = [](NodeId n, int k) { return static_cast<EdgeId>(3 * n + static_cast<NodeId>(k)); };

  for (NodeId base = 0; base < tri.node_count(); ++base) {
    const EdgeId e_right = edge_id(base, 0);
    const EdgeId e_up = edge_id(base, 1);
    const NodeId right = tri.edge(e_right).b;
    const EdgeId e_diag = edge_id(right, 2);  // right -> up
    const NodeId corners[3] = {base, right, tri.edge(e_up).b};
    const EdgeId triangle_edges[3] = {e_right, e_up, e_diag};
    // The edge opposite corner i is the one not touching it.
    const EdgeId opposite[3] = {e_diag, e_up, e_right};

    int mid = -1;
    for (int i = 0; i < 3; ++i)
      if (removed[corners[i]]) mid = i;
    if (mid < 0) throw std::logic_error("up triangle without a removed vertex");

    const NodeId middle = corners[mid];
    EdgeId pair[2];
    int found = 0;
    for (EdgeId e : triangle_edges) {
      if (e != opposite[mid]) pair[found++] = e;
    }
    swaps.push_back({middle, pair[0], pair[1], SwapMode::Partial});

    const auto [u, wu] = step_from(tri.edge(pair[0]), middle);
    const auto [v, wv] = step_from(tri.edge(pair[1]), middle);
    const Edge& orig = tri.edge(opposite[mid]);
    const auto ru = static_cast<NodeId>(surv.new_id[u]);
    const auto rv = static_cast<NodeId>(surv.new_id[v]);

    // Orient the swap link like the parallel original edge.
    Edge swap_link{ru, rv, wv - wu, PayloadTag::SwapOutcome};
    if (orig.a != u) swap_link = {rv, ru, wu - wv, PayloadTag::SwapOutcome};
    const Edge orig_link{static_cast<NodeId>(surv.new_id[orig.a]), static_cast<NodeId>(surv.new_id[orig.b]),
                         orig.wrap, PayloadTag::Original};
    if (!(swap_link.wrap == orig_link.wrap)) throw std::logic_error("swap outcome is not parallel to its original");

    const auto first = static_cast<EdgeId>(result_edges.size());
    result_edges.push_back(orig_link);
    result_edges.push_back(swap_link);
    bond_edges.push_back(swap_link);
    payloads.push_back({first, first + 1});
  }

  LatticeShape shape = s;
  shape.kind = LatticeKind::Hexagonal;
  LatticeGraph result(shape, surv.coords, std::move(result_edges));
  LatticeGraph bonds(shape, surv.coords, std::move(bond_edges));
  return {std::move(swaps), std::move(removed_ids), std::move(result), std::move(bonds), std::move(payloads)};
}

TransformationPlan transform_kagome_to_square(const LatticeGraph& kagome) {
  require_pristine_periodic(kagome, LatticeKind::Kagome, "kagome-to-square transformation");
  const auto& s = kagome.shape();
  constexpr int kPerCell = 6;
  const auto cell_edge = [&](int x, int y, int k) {
    const auto w = wrap_cell(s, x, y);
    return static_cast<EdgeId>((w.y * s.width + w.x) * kPerCell + k);
  };

  std::vector<bool> removed(kagome.node_count(), false);
  std::vector<NodeId> removed_ids;
  for (NodeId n = 0; n < kagome.node_count(); ++n) {
    if (kagome.coord(n).sub == 2) {
      removed[n] = true;
      removed_ids.push_back(n);
    }
  }
  const Survivors surv = collect_survivors(kagome, removed);
  const auto rid = [&](NodeId n) { return static_cast<NodeId>(surv.new_id[n]); };

  std::vector<Edge> result_edges;
  std::vector<BondPayload> payloads;
  // Horizontal A-B chains stay untouched.
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      for (int k : {0, 3}) {
        const Edge& e = kagome.edge(cell_edge(x, y, k));
        payloads.push_back({static_cast<EdgeId>(result_edges.size()), std::nullopt});
        result_edges.push_back({rid(e.a), rid(e.b), e.wrap, PayloadTag::Original});
      }
    }
  }

  std::vector<SwapInstruction> swaps;
  for (int y = 0; y < s.height; ++y) {
    for (int x = 0; x < s.width; ++x) {
      const NodeId middle = pristine_id(s, x, y, 2);
      const EdgeId lower_left = cell_edge(x, y, 1);       // A(x,y) - C
      const EdgeId lower_right = cell_edge(x, y, 2);      // B(x,y) - C
      const EdgeId upper_right = cell_edge(x, y, 4);      // C - A(x,y+1)
      const EdgeId upper_left = cell_edge(x - 1, y + 1, 5);  // B(x-1,y+1) - C
      for (auto [e1, e2] : {std::pair{lower_left, upper_left}, std::pair{lower_right, upper_right}}) {
        swaps.push_back({middle, e1, e2, SwapMode::Full});
        const auto [u, wu] = step_from(kagome.edge(e1), middle);
        const auto [v, wv] = step_from(kagome.edge(e2), middle);
        payloads.push_back({std::nullopt, static_cast<EdgeId>(result_edges.size())});
        result_edges.push_back({rid(u), rid(v), wv - wu, PayloadTag::SwapOutcome});
      }
    }
  }

  LatticeShape shape = s;
  shape.kind = LatticeKind::Square;
  LatticeGraph result(shape, surv.coords, result_edges);
  LatticeGraph bonds(shape, surv.coords, std::move(result_edges));
  return {std::move(swaps), std::move(removed_ids), std::move(result), std::move(bonds), std::move(payloads)};
}

void write_edge_list(std::ostream& out, const LatticeGraph& graph) {
  for (const auto& e : graph.edges()) {
    const auto& a = graph.coord(e.a);
    const auto& b = graph.coord(e.b);
    out << a.x << ',' << a.y << ',' << a.sub << ' ' << b.x << ',' << b.y << ',' << b.sub << ' '
        << to_string(e.payload) << '\n';
  }
}

}  // namespace entperc
