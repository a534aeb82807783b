#pragma once

// Finite lattice graphs and the swap-based lattice transformations.
//
// Node indexing is row-major over unit cells with a sub-cell index:
//   id = (y * width + x) * sites_per_cell + sub
// so exported edge lists are stable across runs and machines.
//
// A periodic lattice identifies (x + width, y) ~ (x, y) and
// (x + twist, y + height) ~ (x, y). twist = 0 is the ordinary torus; a
// nonzero twist gives a helical boundary, which is what the transformed
// lattices live on. Every edge records how many times it crosses each of
// the two periods, so cluster winding can be tracked exactly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace entperc {

enum class LatticeKind { Triangular, Square, Hexagonal, Kagome };
enum class Boundary { Open, Periodic };
enum class PayloadTag { Original, SwapOutcome };

std::string_view to_string(LatticeKind kind);
std::string_view to_string(Boundary boundary);
std::string_view to_string(PayloadTag tag);
std::optional<LatticeKind> parse_lattice_kind(std::string_view name);

/// Critical bond density of classical bond percolation.
double classical_pc(LatticeKind kind);

/// Edges per node of the infinite lattice.
int coordination(LatticeKind kind);

int sites_per_cell(LatticeKind kind);

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct NodeCoord {
  int x = 0;
  int y = 0;
  int sub = 0;

  friend bool operator==(const NodeCoord&, const NodeCoord&) = default;
};

/// Number of periods crossed going from an edge's first to second endpoint.
struct Winding {
  std::int32_t n1 = 0;
  std::int32_t n2 = 0;

  Winding operator+(Winding o) const { return {n1 + o.n1, n2 + o.n2}; }
  Winding operator-(Winding o) const { return {n1 - o.n1, n2 - o.n2}; }
  Winding operator-() const { return {-n1, -n2}; }
  bool is_zero() const { return n1 == 0 && n2 == 0; }
  friend bool operator==(const Winding&, const Winding&) = default;
};

struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  Winding wrap;
  PayloadTag payload = PayloadTag::Original;
};

struct LatticeShape {
  LatticeKind kind = LatticeKind::Square;
  int width = 0;
  int height = 0;
  Boundary boundary = Boundary::Periodic;
  int twist = 0;
};

class LatticeGraph {
 public:
  LatticeGraph(LatticeShape shape, std::vector<NodeCoord> nodes, std::vector<Edge> edges);

  const LatticeShape& shape() const noexcept { return shape_; }
  LatticeKind kind() const noexcept { return shape_.kind; }
  Boundary boundary() const noexcept { return shape_.boundary; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  std::span<const NodeCoord> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const NodeCoord& coord(NodeId n) const { return nodes_.at(n); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }

  std::optional<NodeId> find(NodeCoord c) const;

  /// Edge count incident on each node (a double link counts twice).
  std::vector<std::size_t> degrees() const;

  /// Adjacency lists: for each node, the ids of incident edges.
  std::vector<std::vector<EdgeId>> incidence() const;

 private:
  struct CoordHash {
    std::size_t operator()(const NodeCoord& c) const noexcept;
  };

  LatticeShape shape_;
  std::vector<NodeCoord> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<NodeCoord, NodeId, CoordHash> index_;
};

/// Pristine lattice of width x height unit cells. All edges carry the
/// Original payload. Throws std::invalid_argument for dimensions < 2 or a
/// twist outside [0, width) (a nonzero twist requires Periodic).
LatticeGraph build(LatticeKind kind, int width, int height, Boundary boundary, int twist = 0);

enum class SwapMode { Full, Partial };

/// Entanglement swap at `middle` joining the far ends of two of its edges.
struct SwapInstruction {
  NodeId middle = 0;  // node id in the source lattice
  EdgeId first = 0;   // source edge ids
  EdgeId second = 0;
  SwapMode mode = SwapMode::Partial;
};

/// Payload slots collapsed into one percolation bond of the transformed
/// lattice. Indices refer to result.edges().
struct BondPayload {
  std::optional<EdgeId> original;
  std::optional<EdgeId> swap_outcome;
};

struct TransformationPlan {
  std::vector<SwapInstruction> swaps;
  std::vector<NodeId> removed;  // source ids of the swap middles
  LatticeGraph result;          // every payload link as its own edge
  LatticeGraph bonds;           // one edge per bond, same node ids as result
  std::vector<BondPayload> bond_payloads;
};

/// Partial swaps at the (x + 2y) mod 3 == 0 sites of a periodic triangular
/// lattice. At each such site its six edges are paired as (0, 60), (120,
/// 180), (240, 300) degrees, i.e. one swap per up-pointing triangle. The
/// remaining sites form a honeycomb whose every edge is a double link: the
/// untouched original plus the swap outcome. Requires width % 3 == 0 and
/// (twist + 2 height) % 3 == 0.
TransformationPlan transform_tri_to_hex(const LatticeGraph& tri);

/// Full swaps at every C site (sub 2) of a periodic kagome lattice, pairing
/// its lower-left with upper-left and lower-right with upper-right edges.
/// The A-B chains stay as original horizontal links, the swap outcomes
/// become the vertical links of a square lattice.
TransformationPlan transform_kagome_to_square(const LatticeGraph& kagome);

/// One line per edge: `x,y,sub x,y,sub tag`.
void write_edge_list(std::ostream& out, const LatticeGraph& graph);

}  // namespace entperc
