// Builds a small binary quadtree grid refined toward a circular front,
// thresholds it by depth, iso-contours the depth field and writes the
// results next to the binary.

#include <iostream>

#include "htg/htg.hpp"

int main() {
  // 3x2 root layout over [0,3]x[0,2]; refine cells crossing a circle.
  htg::HyperTreeGrid grid(2, 2, {3, 2, 1}, {{{0, 1, 2, 3}, {0, 1, 2}, {}}}, 2);
  const auto crosses = [](const htg::Vec3& lo, const htg::Vec3& hi) {
    const auto q = [](double x, double y) {
      return 1.2 * 1.2 - (x - 1.4) * (x - 1.4) - (y - 1.0) * (y - 1.0);
    };
    const double v0 = q(lo[0], lo[1]), v1 = q(hi[0], lo[1]);
    const double v2 = q(lo[0], hi[1]), v3 = q(hi[0], hi[1]);
    return std::min({v0, v1, v2, v3}) <= 0 && std::max({v0, v1, v2, v3}) >= 0;
  };
  for (std::size_t s = 0; s < grid.slot_count(); ++s) {
    const auto tc = grid.coords_of_slot(s);
    const auto e = grid.tree_embedding(tc);
    struct Item {
      std::uint32_t v;
      htg::Vec3 lo, hi;
      int depth;
    };
    std::vector<Item> queue{{0u, e.origin, {e.origin[0] + e.size[0], e.origin[1] + e.size[1], 0}, 0}};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const auto it = queue[i];
      if (it.depth >= 4 || !crosses(it.lo, it.hi)) continue;
      const auto eldest = grid.subdivide(tc, it.v);
      for (int c = 0; c < 4; ++c) {
        const double hx = (it.hi[0] - it.lo[0]) / 2, hy = (it.hi[1] - it.lo[1]) / 2;
        const htg::Vec3 lo{it.lo[0] + (c & 1 ? hx : 0), it.lo[1] + (c & 2 ? hy : 0), 0};
        queue.push_back({eldest + static_cast<std::uint32_t>(c),
                         lo,
                         {lo[0] + hx, lo[1] + hy, 0},
                         it.depth + 1});
      }
    }
  }
  grid.finalize();
  htg::detail::attach_depth_field(grid);

  std::cout << "grid: " << grid.vertex_count() << " vertices, " << grid.leaf_count()
            << " leaves, depth " << grid.max_depth() << "\n";

  const auto banded = htg::threshold(grid, "Depth", 1, 3);
  htg::export_obj(htg::geometry(banded), "demo_band.obj");

  const auto iso = htg::contour(grid, "Depth", {1.25, 2.5, 3.75});
  htg::export_obj(iso, "demo_contours.obj");
  htg::export_csv_points(htg::cell_centers(grid), "demo_centers.csv");

  std::cout << "wrote demo_band.obj (" << htg::geometry(banded).polys.size() << " quads), "
            << "demo_contours.obj (" << iso.lines.size() << " segments), demo_centers.csv\n";
  return 0;
}
