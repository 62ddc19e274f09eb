#pragma once

#include <utility>

#include "htg/dual.hpp"
#include "htg/marching_tables.hpp"
#include "htg/polydata.hpp"

namespace htg {

namespace detail {

// Iso crossing on a dual-cell edge.  Endpoints are ordered by source global
// index before interpolating, so the two cells sharing an edge produce the
// crossing point bit-identically.
inline Vec3 edge_crossing(const DualCell& c, int a, int b, double iso) {
  if (c.sources[static_cast<std::size_t>(a)] > c.sources[static_cast<std::size_t>(b)])
    std::swap(a, b);
  const double va = c.values[static_cast<std::size_t>(a)];
  const double vb = c.values[static_cast<std::size_t>(b)];
  const double t = (iso - va) / (vb - va);
  const auto& pa = c.points[static_cast<std::size_t>(a)];
  const auto& pb = c.points[static_cast<std::size_t>(b)];
  return pa + (pb - pa) * t;
}

inline bool above(const DualCell& c, int corner, double iso) {
  return c.values[static_cast<std::size_t>(corner)] > iso;
}

}  // namespace detail

/// Iso point on a dual segment (d = 1): emits one vertex cell when the two
/// cell values straddle the iso value.
inline void march_segment(const DualCell& cell, double iso, PointBank& bank,
                          PolygonalOutput& out) {
  if (detail::above(cell, 0, iso) == detail::above(cell, 1, iso)) return;
  out.verts.push_back(bank.intern(detail::edge_crossing(cell, 0, 1, iso)));
}

/// Marching squares over one dual quad (d = 2, corners in binary order).
/// The two ambiguous diagonal cases are resolved by the cell-average rule.
inline void march_square(const DualCell& cell, double iso, PointBank& bank,
                         PolygonalOutput& out) {
  // Ring edges of the binary-ordered quad (00,10,11,01):
  // e0=(0,1) e1=(1,3) e2=(3,2) e3=(2,0).
  static constexpr int kEdge[4][2] = {{0, 1}, {1, 3}, {3, 2}, {2, 0}};
  // Segments per configuration (pairs of crossed edges, -1 terminated);
  // configurations 6 and 9 are the ambiguous diagonals.
  static constexpr std::int8_t kSegments[16][5] = {
      {-1, -1, -1, -1, -1}, {3, 0, -1, -1, -1},  {0, 1, -1, -1, -1},  {3, 1, -1, -1, -1},
      {2, 3, -1, -1, -1},   {0, 2, -1, -1, -1},  {0, 0, 0, 0, 0},     {1, 2, -1, -1, -1},
      {1, 2, -1, -1, -1},   {0, 0, 0, 0, 0},     {0, 2, -1, -1, -1},  {2, 3, -1, -1, -1},
      {3, 1, -1, -1, -1},   {0, 1, -1, -1, -1},  {3, 0, -1, -1, -1},  {-1, -1, -1, -1, -1},
  };

  int config = 0;
  for (int i = 0; i < 4; ++i)
    if (detail::above(cell, i, iso)) config |= 1 << i;
  if (config == 0 || config == 15) return;

  const auto emit = [&](int ea, int eb) {
    const auto a = bank.intern(detail::edge_crossing(cell, kEdge[ea][0], kEdge[ea][1], iso));
    const auto b = bank.intern(detail::edge_crossing(cell, kEdge[eb][0], kEdge[eb][1], iso));
    if (a != b) out.lines.push_back({a, b});
  };

  if (config == 6 || config == 9) {
    double avg = 0;
    for (int i = 0; i < 4; ++i) avg += cell.values[static_cast<std::size_t>(i)];
    const bool center_above = avg / 4 > iso;
    // Separate the corners that disagree with the connected center region.
    const bool isolate_below = (config == 6) == center_above;
    if (isolate_below) {
      emit(3, 0);  // around corner 0
      emit(1, 2);  // around corner 3
    } else {
      emit(0, 1);  // around corner 1
      emit(2, 3);  // around corner 2
    }
    return;
  }
  const auto& segs = kSegments[config];
  for (int s = 0; s + 1 < 5 && segs[s] >= 0; s += 2) emit(segs[s], segs[s + 1]);
}

/// Marching cubes over one dual hexahedron (d = 3, corners in binary
/// order) using the standard 256-case table with its fixed tie-breaking.
inline void march_cube(const DualCell& cell, double iso, PointBank& bank, PolygonalOutput& out) {
  // Binary corner index of each table vertex (table ring axis differs from
  // the binary layout).
  static constexpr int kMine[8] = {0, 1, 5, 4, 2, 3, 7, 6};

  int config = 0;
  for (int b = 0; b < 8; ++b)
    if (detail::above(cell, kMine[b], iso)) config |= 1 << b;
  if (mc::kEdgeTable[config] == 0) return;

  std::uint32_t crossing[12];
  for (int e = 0; e < 12; ++e)
    if (mc::kEdgeTable[config] & (1u << e))
      crossing[e] = bank.intern(detail::edge_crossing(cell, kMine[mc::kEdgeVertices[e][0]],
                                                      kMine[mc::kEdgeVertices[e][1]], iso));
  for (int t = 0; mc::kTriTable[config][t] != -1; t += 3) {
    const auto a = crossing[mc::kTriTable[config][t]];
    const auto b = crossing[mc::kTriTable[config][t + 1]];
    const auto c = crossing[mc::kTriTable[config][t + 2]];
    if (a == b || b == c || a == c) continue;  // degenerate on collapsed edges
    out.polys.push_back({a, b, c});
  }
}

/// Dispatch on dimensionality.
inline void march_dual_cell(int d, const DualCell& cell, double iso, PointBank& bank,
                            PolygonalOutput& out) {
  switch (d) {
    case 1: march_segment(cell, iso, bank, out); break;
    case 2: march_square(cell, iso, bank, out); break;
    default: march_cube(cell, iso, bank, out); break;
  }
}

}  // namespace htg
