#include "entperc/disjoint_set.hpp"

#include <numeric>
#include <utility>

namespace entperc {

void DisjointSet::reset(std::size_t n) {
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), 0u);
  size_.assign(n, 1);
}

std::uint32_t DisjointSet::find(std::uint32_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSet::unite(std::uint32_t x, std::uint32_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  return true;
}

void WindingDisjointSet::reset(std::size_t n) {
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), 0u);
  size_.assign(n, 1);
  offset_.assign(n, Winding{});
}

WindingDisjointSet::Root WindingDisjointSet::find(std::uint32_t x) {
  // Two passes: locate the root accumulating the offset, then compress.
  std::uint32_t root = x;
  Winding total{};
  while (parent_[root] != root) {
    total = total + offset_[root];
    root = parent_[root];
  }
  Winding remaining = total;
  while (parent_[x] != root && parent_[x] != x) {
    const std::uint32_t next = parent_[x];
    const Winding step = offset_[x];
    parent_[x] = root;
    offset_[x] = remaining;
    remaining = remaining - step;
    x = next;
  }
  return {root, total};
}

Winding WindingDisjointSet::unite(std::uint32_t a, std::uint32_t b, Winding wrap) {
  const Root ra = find(a);
  const Root rb = find(b);
  if (ra.id == rb.id) return ra.offset + wrap - rb.offset;

  // pos(rb) = pos(a) + wrap - offset(b) = pos(ra) + offset(a) + wrap - offset(b)
  const Winding rb_from_ra = ra.offset + wrap - rb.offset;
  if (size_[ra.id] >= size_[rb.id]) {
    parent_[rb.id] = ra.id;
    offset_[rb.id] = rb_from_ra;
    size_[ra.id] += size_[rb.id];
  } else {
    parent_[ra.id] = rb.id;
    offset_[ra.id] = -rb_from_ra;
    size_[rb.id] += size_[ra.id];
  }
  return {};
}

}  // namespace entperc
