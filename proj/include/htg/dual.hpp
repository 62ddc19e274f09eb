#pragma once

#include <cstdlib>
#include <functional>
#include <string>

#include "htg/cursors.hpp"
#include "htg/polydata.hpp"

namespace htg {

/// One cell of the virtual dual mesh: 2^d primal leaf centers in binary
/// corner order (bit k of the corner = high side along axis k), with the
/// attribute value and global index of each source cell.  A cell may be
/// degenerate when one source leaf covers several corners.
struct DualCell {
  int corner_count = 0;
  std::array<Vec3, 8> points{};
  std::array<double, 8> values{};
  std::array<std::uint64_t, 8> sources{};
};

/// Ownership of the dual cell at corner `corner` of the supercursor's
/// center leaf.  The owner is the deepest touching leaf, ties broken
/// toward the greatest cursor index; any masked, invalid or non-leaf
/// participant suppresses the dual cell entirely.
inline bool is_owner(const MooreSupercursor& s, int corner) {
  const int d = s.grid().dimension();
  const int depth = s.center().depth;
  const int omega = center_cursor(Neighborhood::moore, d);
  for (int k : corner_neighbor_cursors(d, corner)) {
    if (s.is_masked(k) || !s.is_leaf(k)) return false;
    if (k > omega && s.state(k).depth == depth) return false;
  }
  return true;
}

/// Builds the dual cell owned at `corner`; requires is_owner(s, corner).
/// `field` supplies the per-corner scalar; pass SIZE_MAX for value 0.
inline DualCell generate_dual_cell(const MooreSupercursor& s, int corner,
                                   std::size_t field = SIZE_MAX) {
  require(is_owner(s, corner), "generate_dual_cell: corner is not owned by this leaf");
  const int d = s.grid().dimension();
  DualCell cell;
  cell.corner_count = ipow(2, d);
  const auto row = corner_neighbor_cursors(d, corner);
  for (int j = 0; j < cell.corner_count; ++j) {
    const auto& st = s.state(row[static_cast<std::size_t>(j)]);
    cell.points[static_cast<std::size_t>(j)] = st.origin + st.size * 0.5;
    cell.sources[static_cast<std::size_t>(j)] = s.global_index(row[static_cast<std::size_t>(j)]);
    cell.values[static_cast<std::size_t>(j)] =
        field == SIZE_MAX ? 0.0 : s.value(field, row[static_cast<std::size_t>(j)]);
  }
  return cell;
}

/// Boundary adjustment of one dual point: every coordinate whose source
/// leaf face lies on the outer grid boundary is clamped onto it, so the
/// adjusted dual boundary coincides with the primal boundary.
inline Vec3 adjust_dual_point(const HyperTreeGrid& g, Vec3 point, const Vec3& leaf_origin,
                              const Vec3& leaf_size) {
  const auto [origin, size] = g.grid_bounds();
  for (int k = 0; k < g.dimension(); ++k) {
    const double lo = origin[k];
    const double hi = origin[k] + size[k];
    const double tol = 1e-13 * (std::abs(lo) + std::abs(hi) + size[k]);
    if (std::abs(leaf_origin[k] - lo) <= tol) point[k] = lo;
    if (std::abs(leaf_origin[k] + leaf_size[k] - hi) <= tol) point[k] = hi;
  }
  return point;
}

namespace detail {

inline std::uint64_t max_cells_guard() {
  if (const char* env = std::getenv("HTG_MAX_CELLS")) {
    const auto v = std::strtoull(env, nullptr, 10);
    if (v > 0) return v;
  }
  return 50'000'000ull;
}

}  // namespace detail

/// Materializes the entire dual mesh: one cell per owned corner of every
/// effective unmasked leaf, with exact-coordinate point merging.  Meant for
/// prototyping and small inputs only; guarded by HTG_MAX_CELLS.
inline UnstructuredMesh build_full_dual(const HyperTreeGrid& g, bool adjusted = false,
                                        std::size_t field = SIZE_MAX) {
  require(g.finalized(), "build_full_dual: grid not finalized");
  require(g.vertex_count() <= detail::max_cells_guard(),
          "build_full_dual: input exceeds HTG_MAX_CELLS guard");
  const int d = g.dimension();
  UnstructuredMesh mesh;
  mesh.corners = ipow(2, d);
  PointBank bank;
  const bool with_values = field != SIZE_MAX;

  std::function<void(MooreSupercursor&)> walk = [&](MooreSupercursor& s) {
    if (s.is_masked()) return;
    if (s.is_leaf()) {
      for (int corner = 0; corner < mesh.corners; ++corner) {
        if (!is_owner(s, corner)) continue;
        const auto cell = generate_dual_cell(s, corner, field);
        const auto row = corner_neighbor_cursors(d, corner);
        for (int j = 0; j < cell.corner_count; ++j) {
          Vec3 p = cell.points[static_cast<std::size_t>(j)];
          if (adjusted) {
            const auto& st = s.state(row[static_cast<std::size_t>(j)]);
            p = adjust_dual_point(g, p, st.origin, st.size);
          }
          mesh.connectivity.push_back(bank.intern(p));
        }
        if (with_values) {
          double sum = 0;
          for (int j = 0; j < cell.corner_count; ++j) sum += cell.values[static_cast<std::size_t>(j)];
          mesh.cell_scalars.push_back(sum / cell.corner_count);
        }
      }
      return;
    }
    for (int i = 0; i < ipow(g.factor(), d); ++i) {
      MooreSupercursor child = s;
      child.to_child(i);
      walk(child);
    }
  };

  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    auto cur = MooreSupercursor::at_root(g, g.coords_of_slot(s));
    walk(cur);
  }
  mesh.points = bank.take_points();
  return mesh;
}

}  // namespace htg
