#pragma once

#include <cstdint>
#include <vector>

#include "entperc/lattice.hpp"

namespace entperc {

/// Union-find with path halving and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n);
  std::uint32_t find(std::uint32_t x);
  /// Returns false when x and y were already connected.
  bool unite(std::uint32_t x, std::uint32_t y);
  std::uint32_t size_of(std::uint32_t x) { return size_[find(x)]; }
  std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

/// Union-find that also stores each node's winding relative to its root,
/// so a cycle that wraps around a periodic lattice is detected when it
/// closes. Follows the displacement-vector scheme of Newman and Ziff.
class WindingDisjointSet {
 public:
  explicit WindingDisjointSet(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n);

  struct Root {
    std::uint32_t id;
    Winding offset;  // node position = root position + offset
  };
  Root find(std::uint32_t x);

  /// Adds the bond a -> b, where b sits at a + wrap periods. Returns the
  /// net winding of the cycle closed by this bond (zero when it merges two
  /// clusters or closes a contractible loop).
  Winding unite(std::uint32_t a, std::uint32_t b, Winding wrap);

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<Winding> offset_;
};

}  // namespace entperc
