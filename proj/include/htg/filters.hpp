#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <variant>

#include "htg/contour.hpp"
#include "htg/cursors.hpp"
#include "htg/polydata.hpp"

namespace htg {

namespace detail {

/// Visits every effective unmasked leaf with a geometric cursor.
template <class Fn>
void for_each_leaf(const HyperTreeGrid& g, Fn&& fn) {
  std::function<void(const GeometricCursor&)> walk = [&](const GeometricCursor& c) {
    if (c.is_masked()) return;
    if (c.is_leaf()) {
      fn(c);
      return;
    }
    const int n = ipow(g.factor(), g.dimension());
    for (int i = 0; i < n; ++i) {
      GeometricCursor child = c;
      child.to_child(i);
      walk(child);
    }
  };
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    if (!g.tree_at_slot(s)) continue;
    walk(GeometricCursor::at_root(g, g.coords_of_slot(s)));
  }
}

// Shared skeleton of the masking filters: `keep` decides per effective
// leaf; coarse vertices whose entire descent vanishes are masked as well,
// so no hidden subtree can resurface as a lato sensu leaf.
// Returns true when the subtree under `c` is empty after filtering.
template <class Keep>
bool mask_by_predicate(HyperTreeGrid& out, const GeometricCursor& c, const Keep& keep) {
  const std::uint64_t i = c.global_index();
  if (c.is_masked()) return true;
  if (c.is_leaf()) {
    const bool kept = keep(c);
    if (!kept) out.mask_set(i, true);
    return !kept;
  }
  bool all_empty = true;
  const int n = ipow(out.factor(), out.dimension());
  for (int k = 0; k < n; ++k) {
    GeometricCursor child = c;
    child.to_child(k);
    all_empty = mask_by_predicate(out, child, keep) && all_empty;
  }
  if (all_empty) out.mask_set(i, true);
  return all_empty;
}

template <class Keep>
HyperTreeGrid masking_filter(const HyperTreeGrid& g, const Keep& keep) {
  require(g.finalized(), "filter: grid not finalized");
  HyperTreeGrid out = g;
  out.ensure_unique_mask();
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    if (!g.tree_at_slot(s)) continue;
    // Structure decisions read the input state; bits land in the copy.
    mask_by_predicate(out, GeometricCursor::at_root(g, g.coords_of_slot(s)), keep);
  }
  return out;
}

}  // namespace detail

/// Truncates refinement at `depth_max`.  A vertex at the limit becomes an
/// output leaf as soon as one cell in its descent is effectively present;
/// otherwise it is masked.  The output carries a mask only if the input
/// does.
inline HyperTreeGrid depth_limiter(const HyperTreeGrid& g, int depth_max) {
  require(g.finalized(), "depth_limiter: grid not finalized");
  require(depth_max >= 0, "depth_limiter: negative depth");
  std::array<std::vector<double>, 3> coords;
  for (int k = 0; k < 3; ++k) coords[static_cast<std::size_t>(k)] = g.coordinates(k);
  HyperTreeGrid out(g.dimension(), g.factor(), g.extent(), coords, g.orientation());
  for (std::size_t f = 0; f < g.field_count(); ++f) out.attach_field(g.field_name(f));
  if (g.has_mask()) out.attach_mask();

  // Retention rule at the depth limit: the cut vertex stays visible iff at
  // least one of its children is effectively unmasked (deeper descendants
  // under a masked child are non-existent anyway).
  const auto has_unmasked_descendant = [&](const GridCursor& c) -> bool {
    const auto& tree = *c.state().tree;
    const std::uint64_t base = g.start_at_slot(c.state().slot) + tree.eldest_child(c.vertex());
    for (int i = 0; i < tree.children_per_node(); ++i)
      if (!g.mask_get(base + static_cast<std::uint64_t>(i))) return true;
    return false;
  };

  std::function<void(const GridCursor&, const TreeCoords&, std::uint32_t)> copy =
      [&](const GridCursor& in, const TreeCoords& tc, std::uint32_t out_vertex) {
        const std::uint64_t gi = in.global_index();
        for (std::size_t f = 0; f < g.field_count(); ++f)
          out.set_local_value(f, tc, out_vertex, g.value(f, gi));
        const bool own_masked = g.has_mask() && g.mask_get(gi);
        const bool topological_leaf = in.state().tree->is_leaf(in.vertex());
        if (topological_leaf || own_masked) {
          if (g.has_mask()) out.set_local_mask(tc, out_vertex, own_masked);
          return;
        }
        if (in.depth() >= depth_max) {
          // Cut here: present iff the hidden descent is not entirely masked.
          if (g.has_mask()) out.set_local_mask(tc, out_vertex, !has_unmasked_descendant(in));
          return;
        }
        if (g.has_mask()) out.set_local_mask(tc, out_vertex, false);
        const auto eldest = out.subdivide(tc, out_vertex);
        const int n = ipow(g.factor(), g.dimension());
        for (int i = 0; i < n; ++i) {
          GridCursor child = in;
          child.to_child(i);
          copy(child, tc, eldest + static_cast<std::uint32_t>(i));
        }
      };

  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto tc = g.coords_of_slot(s);
    if (!g.tree_at_slot(s)) {
      out.clear_tree(tc);
      continue;
    }
    out.set_slot_parity(s, g.parity_at_slot(s));
    copy(GridCursor::at_root(g, tc), tc, 0);
  }
  out.finalize();
  return out;
}

/// Masks every effective leaf whose attribute value falls outside
/// [lo, hi]; the output always carries a mask and shares topology and
/// attribute storage with the input.
inline HyperTreeGrid threshold(const HyperTreeGrid& g, const std::string& field, double lo,
                               double hi) {
  const auto idx = g.field_index(field);
  require(idx.has_value(), "threshold: unknown field '" + field + "'");
  return detail::masking_filter(g, [&, f = *idx](const GeometricCursor& c) {
    const double v = c.value(f);
    return v >= lo && v <= hi;
  });
}

/// Geometric clip condition: half-space, box, or quadric.
struct ClipHalfspace {
  int axis = 0;
  double omega = 0;
  int side = +1;  // +1 keeps cells on/above omega, -1 on/below
};
struct ClipBox {
  Vec3 origin{0, 0, 0};
  Vec3 size{0, 0, 0};
};
struct ClipQuadric {
  // q(x) = c0 + c1 x + c2 y + c3 z + c4 x^2 + c5 y^2 + c6 z^2
  //        + c7 xy + c8 yz + c9 zx
  std::array<double, 10> c{};

  double eval(const Vec3& p) const {
    const double x = p[0], y = p[1], z = p[2];
    return c[0] + c[1] * x + c[2] * y + c[3] * z + c[4] * x * x + c[5] * y * y + c[6] * z * z +
           c[7] * x * y + c[8] * y * z + c[9] * z * x;
  }
};
using ClipMode = std::variant<ClipHalfspace, ClipBox, ClipQuadric>;

/// Masks out leaves failing a geometric condition.  Half-space and box
/// modes keep intersecting cells; quadric mode keeps a leaf only when the
/// function is nonnegative at all of its corners.
inline HyperTreeGrid axis_clip(const HyperTreeGrid& g, const ClipMode& mode) {
  if (const auto* q = std::get_if<ClipQuadric>(&mode)) {
    bool all_zero = true;
    for (double c : q->c) all_zero = all_zero && c == 0.0;
    require(!all_zero, "axis_clip: quadric with all-zero coefficients");
  }
  if (const auto* h = std::get_if<ClipHalfspace>(&mode))
    require(h->axis >= 0 && h->axis < 3 && (h->side == 1 || h->side == -1),
            "axis_clip: bad half-space parameters");

  const int d = g.dimension();
  return detail::masking_filter(g, [&](const GeometricCursor& c) -> bool {
    const Vec3 lo = c.origin();
    const Vec3 hi = c.origin() + c.size();
    if (const auto* h = std::get_if<ClipHalfspace>(&mode)) {
      return h->side > 0 ? hi[h->axis] >= h->omega : lo[h->axis] <= h->omega;
    }
    if (const auto* b = std::get_if<ClipBox>(&mode)) {
      for (int k = 0; k < d; ++k)
        if (hi[k] < b->origin[k] || lo[k] > b->origin[k] + b->size[k]) return false;
      return true;
    }
    const auto& q = std::get<ClipQuadric>(mode);
    for (int corner = 0; corner < ipow(2, d); ++corner) {
      Vec3 p = lo;
      for (int k = 0; k < d; ++k)
        if (corner & (1 << k)) p[k] = hi[k];
      if (q.eval(p) < 0) return false;
    }
    return true;
  });
}

/// Reflects the grid across the hyperplane x_axis = omega.  Topology,
/// attribute arrays and the mask are shared with the input; only the
/// coordinate list, the root layout and the child parity flags change.
inline HyperTreeGrid axis_reflection(const HyperTreeGrid& g, int axis, double omega) {
  require(g.finalized(), "axis_reflection: grid not finalized");
  require(axis >= 0 && axis < 3, "axis_reflection: bad axis");
  HyperTreeGrid out = g;
  const auto& src = g.coordinates(axis);
  std::vector<double> reflected(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) reflected[i] = 2 * omega - src[src.size() - 1 - i];
  out.set_axis_coordinates(axis, std::move(reflected));
  if (axis < g.dimension()) {
    std::vector<std::size_t> perm(g.slot_count());
    for (std::size_t s = 0; s < g.slot_count(); ++s) {
      auto c = g.coords_of_slot(s);
      c[axis] = g.extent()[axis] - 1 - c[axis];
      perm[s] = g.slot_of(c);
    }
    out.permute_slots(perm);
    out.toggle_parity(axis);
  }
  return out;
}

/// Cross-section of a d>=2 grid with an axis-aligned plane; the output is
/// a (d-1)-dimensional grid whose leaves are the intersected input leaves.
/// Cells are half-open: a plane on an interface selects the cell whose
/// lower face lies on it.
inline HyperTreeGrid axis_cut(const HyperTreeGrid& g, int axis, double w) {
  require(g.finalized(), "axis_cut: grid not finalized");
  const int d = g.dimension();
  require(d >= 2, "axis_cut: input must be at least 2-dimensional");
  require(axis >= 0 && axis < d, "axis_cut: bad axis");
  const auto& cut_coords = g.coordinates(axis);
  require(w > cut_coords.front() && w < cut_coords.back(),
          "axis_cut: plane outside grid bounds");

  // Slab index, half-open [x_i, x_{i+1}).
  int slab = static_cast<int>(std::upper_bound(cut_coords.begin(), cut_coords.end(), w) -
                              cut_coords.begin()) -
             1;
  if (cut_coords[static_cast<std::size_t>(slab)] == w && slab < g.extent()[axis]) {
    // exactly on an interface: keep the upper cell (whose lower face it is)
  } else if (slab >= g.extent()[axis]) {
    slab = g.extent()[axis] - 1;
  }

  // Remaining input axes, ascending, become the output's storage axes.
  std::array<int, 2> rem{-1, -1};
  int nrem = 0;
  for (int k = 0; k < d; ++k)
    if (k != axis) rem[static_cast<std::size_t>(nrem++)] = k;

  // World axes used by the input; the output orientation is the world axis
  // that the cut removes.
  std::array<int, 3> world{0, 1, 2};
  if (d == 2) {
    int n = 0;
    for (int k = 0; k < 3; ++k)
      if (k != g.orientation()) world[static_cast<std::size_t>(n++)] = k;
  }
  const int out_orientation = world[static_cast<std::size_t>(axis)];

  std::array<int, 3> out_extent{1, 1, 1};
  std::array<std::vector<double>, 3> out_coords;
  for (int k = 0; k < nrem; ++k) {
    out_extent[static_cast<std::size_t>(k)] = g.extent()[rem[static_cast<std::size_t>(k)]];
    out_coords[static_cast<std::size_t>(k)] = g.coordinates(rem[static_cast<std::size_t>(k)]);
  }
  out_coords[static_cast<std::size_t>(d - 1)] = {w, w};
  if (d - 1 < 2) out_coords[2] = g.coordinates(2);

  HyperTreeGrid out(d - 1, g.factor(), out_extent, out_coords, out_orientation);
  for (std::size_t f = 0; f < g.field_count(); ++f) out.attach_field(g.field_name(f));
  if (g.has_mask()) out.attach_mask();

  const int fct = g.factor();
  std::function<void(const GeometricCursor&, const TreeCoords&, std::uint32_t)> copy =
      [&](const GeometricCursor& in, const TreeCoords& tc, std::uint32_t out_vertex) {
        const std::uint64_t gi = in.global_index();
        for (std::size_t f = 0; f < g.field_count(); ++f)
          out.set_local_value(f, tc, out_vertex, g.value(f, gi));
        if (g.has_mask()) out.set_local_mask(tc, out_vertex, g.mask_get(gi));
        if (in.state().tree->is_leaf(in.vertex())) return;

        // Geometric child layer crossed by the plane, half-open cells.
        const double child_size = in.size()[axis] / fct;
        int layer = static_cast<int>(std::floor((w - in.origin()[axis]) / child_size));
        layer = std::clamp(layer, 0, fct - 1);
        const bool flip = (in.state().parity >> axis) & 1;
        const int layer_topo = flip ? fct - 1 - layer : layer;

        const auto eldest = out.subdivide(tc, out_vertex);
        for (int oc = 0; oc < ipow(fct, d - 1); ++oc) {
          const auto out_cc = child_coords(d - 1, fct, oc);
          std::array<int, 3> in_cc{0, 0, 0};
          for (int k = 0; k < nrem; ++k)
            in_cc[rem[static_cast<std::size_t>(k)]] = out_cc[static_cast<std::size_t>(k)];
          in_cc[axis] = layer_topo;
          GeometricCursor child = in;
          child.to_child(child_index(d, fct, in_cc));
          copy(child, tc, eldest + static_cast<std::uint32_t>(oc));
        }
      };

  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto tc = g.coords_of_slot(s);
    if (tc[axis] != slab) continue;
    TreeCoords otc{0, 0, 0};
    for (int k = 0; k < nrem; ++k)
      otc[static_cast<std::size_t>(k)] = tc[rem[static_cast<std::size_t>(k)]];
    if (!g.tree_at_slot(s)) {
      out.clear_tree(otc);
      continue;
    }
    std::uint8_t out_parity = 0;
    for (int k = 0; k < nrem; ++k)
      if ((g.parity_at_slot(s) >> rem[static_cast<std::size_t>(k)]) & 1)
        out_parity |= static_cast<std::uint8_t>(1u << k);
    out.set_slot_parity(out.slot_of(otc), out_parity);
    copy(GeometricCursor::at_root(g, tc), otc, 0);
  }
  out.finalize();
  return out;
}

/// Centers of the effective unmasked leaves; vertex cells are emitted when
/// `as_polydata` is set.  The first attached field, when present, becomes
/// the per-point scalar.
inline PolygonalOutput cell_centers(const HyperTreeGrid& g, bool as_polydata = false) {
  require(g.finalized(), "cell_centers: grid not finalized");
  PolygonalOutput out;
  const bool with_scalar = g.field_count() > 0;
  detail::for_each_leaf(g, [&](const GeometricCursor& c) {
    const auto id = static_cast<std::uint32_t>(out.points.size());
    out.points.push_back(c.cell_center());
    if (with_scalar) out.point_scalars.push_back(c.value(0));
    if (as_polydata) out.verts.push_back(id);
  });
  return out;
}

namespace detail {

// Quad of one cell face, outward winding; axes (b, c) span the face plane.
inline std::vector<std::uint32_t> face_quad(PointBank& bank, const Vec3& lo, const Vec3& hi,
                                            int axis, bool high_side) {
  const int b = axis == 0 ? 1 : 0;
  const int c = axis == 2 ? 1 : 2;
  const double x = high_side ? hi[axis] : lo[axis];
  auto corner = [&](bool pb, bool pc) {
    Vec3 p;
    p[axis] = x;
    p[b] = pb ? hi[b] : lo[b];
    p[c] = pc ? hi[c] : lo[c];
    return bank.intern(p);
  };
  if (high_side) return {corner(false, false), corner(true, false), corner(true, true), corner(false, true)};
  return {corner(false, false), corner(false, true), corner(true, true), corner(true, false)};
}

}  // namespace detail

/// Outside surface of the grid.  For d < 3 every effective leaf becomes a
/// cell outline; for d = 3 a face is emitted exactly when it is not shared
/// with an effective unmasked cell (so masked or out-of-grid neighbors
/// expose it, refined or coarser unmasked neighbors do not).
inline PolygonalOutput geometry(const HyperTreeGrid& g) {
  require(g.finalized(), "geometry: grid not finalized");
  PolygonalOutput out;
  PointBank bank;
  const bool with_scalar = g.field_count() > 0;
  const int d = g.dimension();

  if (d < 3) {
    detail::for_each_leaf(g, [&](const GeometricCursor& c) {
      const Vec3 lo = c.origin();
      const Vec3 hi = c.origin() + c.size();
      if (d == 1) {
        Vec3 b = lo;
        b[0] = hi[0];
        out.lines.push_back({bank.intern(lo), bank.intern(b)});
      } else {
        const auto p = [&](bool px, bool py) {
          return bank.intern(Vec3{px ? hi[0] : lo[0], py ? hi[1] : lo[1], lo[2]});
        };
        out.polys.push_back({p(false, false), p(true, false), p(true, true), p(false, true)});
      }
      if (with_scalar) out.cell_scalars.push_back(c.value(0));
    });
    out.points = bank.take_points();
    return out;
  }

  std::function<void(const VonNeumannSupercursor&)> walk = [&](const VonNeumannSupercursor& s) {
    if (s.is_masked()) return;
    if (!s.is_leaf()) {
      for (int i = 0; i < ipow(g.factor(), d); ++i) {
        VonNeumannSupercursor child = s;
        child.to_child(i);
        walk(child);
      }
      return;
    }
    const Vec3 lo = s.center().origin;
    const Vec3 hi = s.center().origin + s.center().size;
    for (int k = 0; k < s.cursors(); ++k) {
      if (k == s.center_index()) continue;
      if (s.state(k).valid() && !s.is_masked(k)) continue;  // shared face
      const auto w = cursor_offset(Neighborhood::von_neumann, d, k);
      const int axis = w[0] != 0 ? 0 : (w[1] != 0 ? 1 : 2);
      out.polys.push_back(detail::face_quad(bank, lo, hi, axis, w[axis] > 0));
      if (with_scalar) out.cell_scalars.push_back(s.value(0, s.center_index()));
    }
  };
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    if (!g.tree_at_slot(s)) continue;
    walk(VonNeumannSupercursor::at_root(g, g.coords_of_slot(s)));
  }
  out.points = bank.take_points();
  return out;
}

/// Arbitrary-plane cut.  Primal mode intersects every effective leaf box
/// with the plane (exact geometry, T-junctions allowed); dual mode runs
/// the two-stage dual pipeline on the signed point-plane distance, giving
/// a conforming output.
inline PolygonalOutput plane_cutter(const HyperTreeGrid& g, const Vec3& normal, double offset,
                                    bool dual_mode = false) {
  require(g.finalized(), "plane_cutter: grid not finalized");
  require(dot(normal, normal) > 0, "plane_cutter: degenerate plane normal");
  const int d = g.dimension();

  if (dual_mode) {
    HyperTreeGrid work = g;
    const auto tmp = work.attach_field("__plane_distance");
    detail::for_each_leaf(work, [&](const GeometricCursor& c) {
      work.set_value(tmp, c.global_index(), dot(c.cell_center(), normal) - offset);
    });
    return contour(work, tmp, {0.0});
  }

  PolygonalOutput out;
  PointBank bank;
  const bool with_scalar = g.field_count() > 0;
  detail::for_each_leaf(g, [&](const GeometricCursor& c) {
    const Vec3 lo = c.origin();
    const Vec3 hi = c.origin() + c.size();
    // Corner distances in binary corner order.
    std::array<double, 8> dist;
    std::array<Vec3, 8> corner;
    const int ncorner = ipow(2, d);
    for (int i = 0; i < ncorner; ++i) {
      Vec3 p = lo;
      for (int k = 0; k < d; ++k)
        if (i & (1 << k)) p[k] = hi[k];
      corner[static_cast<std::size_t>(i)] = p;
      dist[static_cast<std::size_t>(i)] = dot(p, normal) - offset;
    }
    std::vector<Vec3> pts;
    auto push_unique = [&](const Vec3& p) {
      for (const auto& q : pts)
        if (q == p) return;
      pts.push_back(p);
    };
    for (int i = 0; i < ncorner; ++i)
      if (dist[static_cast<std::size_t>(i)] == 0) push_unique(corner[static_cast<std::size_t>(i)]);
    for (int i = 0; i < ncorner; ++i)
      for (int k = 0; k < d; ++k) {
        if (i & (1 << k)) continue;
        const int j = i | (1 << k);
        const double da = dist[static_cast<std::size_t>(i)];
        const double db = dist[static_cast<std::size_t>(j)];
        if (da * db < 0) {
          const double t = da / (da - db);
          push_unique(corner[static_cast<std::size_t>(i)] +
                      (corner[static_cast<std::size_t>(j)] - corner[static_cast<std::size_t>(i)]) * t);
        }
      }
    if (pts.empty()) return;
    if (d == 1 || pts.size() == 1) {
      if (pts.size() == 1) {
        out.verts.push_back(bank.intern(pts[0]));
        if (with_scalar) out.cell_scalars.push_back(c.value(0));
      }
      return;
    }
    if (d == 2 || pts.size() == 2) {
      if (pts.size() == 2) {
        out.lines.push_back({bank.intern(pts[0]), bank.intern(pts[1])});
        if (with_scalar) out.cell_scalars.push_back(c.value(0));
      }
      return;
    }
    // Sort the convex section polygon around its centroid in the plane.
    Vec3 centroid{0, 0, 0};
    for (const auto& p : pts) centroid = centroid + p;
    centroid = centroid * (1.0 / static_cast<double>(pts.size()));
    const Vec3 n = normal;
    Vec3 u = std::abs(n[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 nu{n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};
    const Vec3 nv{n[1] * nu[2] - n[2] * nu[1], n[2] * nu[0] - n[0] * nu[2],
                  n[0] * nu[1] - n[1] * nu[0]};
    std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
      return std::atan2(dot(a - centroid, nv), dot(a - centroid, nu)) <
             std::atan2(dot(b - centroid, nv), dot(b - centroid, nu));
    });
    std::vector<std::uint32_t> poly;
    for (const auto& p : pts) poly.push_back(bank.intern(p));
    out.polys.push_back(std::move(poly));
    if (with_scalar) out.cell_scalars.push_back(c.value(0));
  });
  out.points = bank.take_points();
  return out;
}

/// Byte cost the explicit representation would have, without building it:
/// replicated points, 4-byte connectivity, per-cell scalars per field.
inline std::uint64_t to_unstructured_model_bytes(const HyperTreeGrid& g,
                                                 std::uint64_t effective_leaves) {
  const auto corners = static_cast<std::uint64_t>(ipow(2, g.dimension()));
  return 24 * corners * effective_leaves + 4 * corners * effective_leaves +
         8 * effective_leaves * g.field_count();
}

/// Fully explicit cell list of the effective leaves, with points
/// replicated per cell; prototyping aid and reference for footprint
/// comparisons.
inline UnstructuredMesh to_unstructured(const HyperTreeGrid& g) {
  require(g.finalized(), "to_unstructured: grid not finalized");
  require(g.leaf_count() <= detail::max_cells_guard(),
          "to_unstructured: input exceeds HTG_MAX_CELLS guard");
  const int d = g.dimension();
  UnstructuredMesh mesh;
  mesh.corners = ipow(2, d);
  const bool with_scalar = g.field_count() > 0;
  detail::for_each_leaf(g, [&](const GeometricCursor& c) {
    const Vec3 lo = c.origin();
    const Vec3 hi = c.origin() + c.size();
    for (int i = 0; i < mesh.corners; ++i) {
      Vec3 p = lo;
      for (int k = 0; k < d; ++k)
        if (i & (1 << k)) p[k] = hi[k];
      mesh.connectivity.push_back(static_cast<std::uint32_t>(mesh.points.size()));
      mesh.points.push_back(p);
    }
    if (with_scalar) mesh.cell_scalars.push_back(c.value(0));
  });
  return mesh;
}

}  // namespace htg
