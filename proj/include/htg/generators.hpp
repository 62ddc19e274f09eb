#pragma once

#include <cstdint>
#include <random>

#include "htg/cursors.hpp"
#include "htg/grid.hpp"

namespace htg {

namespace detail {

// Fixed uniform mapping of one mt19937_64 draw onto [0,1); the generator
// and this mapping are both pinned by the standard, so grids are
// bit-identical across platforms for equal seeds.
inline double canonical_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Masks every strict vertex whose children are all masked, bottom-up, so
// generated masks never leave hidden lato sensu cells behind.
inline bool propagate_mask(HyperTreeGrid& g, const HyperTree& tree, std::uint64_t start,
                           std::uint32_t v) {
  if (g.mask_get(start + v)) return true;
  if (tree.is_leaf(v)) return false;
  bool all = true;
  for (int i = 0; i < tree.children_per_node(); ++i)
    all = propagate_mask(g, tree, start, tree.child(v, i)) && all;
  if (all) g.mask_set(start + v, true);
  return all;
}

inline void attach_depth_field(HyperTreeGrid& g) {
  const auto depth = g.attach_field("Depth");
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto& tree = g.tree_at_slot(s);
    if (!tree) continue;
    for (std::uint32_t v = 0; v < tree->vertex_count(); ++v)
      g.set_value(depth, g.start_at_slot(s) + v, tree->vertex_depth(v));
  }
}

}  // namespace detail

/// Seeded random refinement: every leaf above the depth cap splits with
/// probability `split_probability`, trees in slot order, BFS within each
/// tree.  Attaches a "Depth" attribute (vertex depth as a real).  Unit
/// cell coordinates.
inline HyperTreeGrid generate_random(int d, int f, std::array<int, 3> extent, int depth_max,
                                     double split_probability, std::uint64_t seed) {
  require(split_probability >= 0 && split_probability <= 1,
          "generate_random: probability outside [0,1]");
  std::array<std::vector<double>, 3> coords;
  for (int k = 0; k < d; ++k)
    for (int i = 0; i <= extent[static_cast<std::size_t>(k)]; ++i)
      coords[static_cast<std::size_t>(k)].push_back(i);
  HyperTreeGrid g(d, f, extent, coords, d == 3 ? 0 : 2);

  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto tc = g.coords_of_slot(s);
    std::vector<std::pair<std::uint32_t, int>> queue{{0u, 0}};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const auto [v, depth] = queue[q];
      if (depth >= depth_max) continue;
      if (detail::canonical_draw(rng) >= split_probability) continue;
      const auto eldest = g.subdivide(tc, v);
      for (int i = 0; i < ipow(f, d); ++i)
        queue.emplace_back(eldest + static_cast<std::uint32_t>(i), depth + 1);
    }
  }
  g.finalize();
  detail::attach_depth_field(g);
  return g;
}

/// First octant of a truncated unit ball: ternary trees over a 5x5x6 root
/// layout by default, refined wherever a cell straddles the unit sphere
/// (corner sign change of q = 1 - |x|^2), masked wherever a cell lies
/// entirely outside the ball or above the truncation plane z = 0.9.
inline HyperTreeGrid generate_octant(std::array<int, 3> resolution = {5, 5, 6}, int f = 3,
                                     int levels = 5) {
  const double step = 0.2;
  std::array<std::vector<double>, 3> coords;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i <= resolution[static_cast<std::size_t>(k)]; ++i)
      coords[static_cast<std::size_t>(k)].push_back(step * i);
  HyperTreeGrid g(3, f, resolution, coords, 0);

  const auto q = [](double x, double y, double z) { return 1.0 - x * x - y * y - z * z; };
  const auto crosses_sphere = [&](const Vec3& lo, const Vec3& hi) {
    double qmin = 1e300, qmax = -1e300;
    for (int c = 0; c < 8; ++c) {
      const double v = q(c & 1 ? hi[0] : lo[0], c & 2 ? hi[1] : lo[1], c & 4 ? hi[2] : lo[2]);
      qmin = std::min(qmin, v);
      qmax = std::max(qmax, v);
    }
    return qmin <= 0 && qmax >= 0;
  };

  struct Item {
    std::uint32_t vertex;
    Vec3 lo, hi;
    int depth;
  };
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto tc = g.coords_of_slot(s);
    const auto e = g.tree_embedding(tc);
    std::vector<Item> queue{{0u, e.origin, e.origin + e.size, 0}};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const Item it = queue[i];
      if (it.depth >= levels || !crosses_sphere(it.lo, it.hi)) continue;
      const auto eldest = g.subdivide(tc, it.vertex);
      const Vec3 child_size = (it.hi - it.lo) * (1.0 / f);
      for (int c = 0; c < ipow(f, 3); ++c) {
        const auto cc = child_coords(3, f, c);
        Vec3 lo = it.lo;
        for (int k = 0; k < 3; ++k) lo[k] += cc[k] * child_size[k];
        queue.push_back({eldest + static_cast<std::uint32_t>(c), lo, lo + child_size, it.depth + 1});
      }
    }
  }
  g.finalize();
  detail::attach_depth_field(g);

  // Mask everything outside the truncated octant region.
  const double zcut = 0.9;
  g.attach_mask();
  std::function<void(const GeometricCursor&)> mark = [&](const GeometricCursor& c) {
    const Vec3 lo = c.origin();
    const Vec3 hi = c.origin() + c.size();
    if (c.state().tree->is_leaf(c.vertex())) {
      double qmax = -1e300;
      for (int i = 0; i < 8; ++i)
        qmax = std::max(qmax, q(i & 1 ? hi[0] : lo[0], i & 2 ? hi[1] : lo[1], i & 4 ? hi[2] : lo[2]));
      if (qmax < 0 || lo[2] >= zcut) g.mask_set(c.global_index(), true);
      return;
    }
    for (int i = 0; i < ipow(f, 3); ++i) {
      GeometricCursor child = c;
      child.to_child(i);
      mark(child);
    }
  };
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    mark(GeometricCursor::at_root(g, g.coords_of_slot(s)));
    detail::propagate_mask(g, *g.tree_at_slot(s), g.start_at_slot(s), 0);
  }
  return g;
}

}  // namespace htg
