#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "htg/dual.hpp"
#include "htg/marching.hpp"

namespace htg {

/// Pre-selection state for dual-based contouring: one sign bit per vertex
/// and iso-value (true when the cell value is strictly above it), plus one
/// shared truth bit marking coarse cells whose descent straddles some
/// iso-value.  Leaf truth entries stay false by convention.
struct SignArrays {
  std::vector<BitVec> signs;
  BitVec truth;
};

namespace detail {

// Post-order sign propagation: a leaf stores its own comparisons; a coarse
// vertex inherits the common sign of its unmasked children, or raises its
// truth bit on the first disagreement (or any child with a raised bit).
inline bool preprocess_vertex(const GridCursor& c, std::size_t field,
                              const std::vector<double>& isovalues, SignArrays& out) {
  const std::uint64_t i = c.global_index();
  if (c.is_leaf()) {
    const double v = c.value(field);
    for (std::size_t j = 0; j < isovalues.size(); ++j) out.signs[j].set(i, v > isovalues[j]);
    return false;
  }
  bool truth = false;
  bool first = true;
  const int n = c.state().tree->children_per_node();
  for (int k = 0; k < n; ++k) {
    GridCursor child = c;
    child.to_child(k);
    if (child.is_masked()) continue;
    truth = preprocess_vertex(child, field, isovalues, out) || truth;
    if (!truth) {
      const std::uint64_t g = child.global_index();
      for (std::size_t j = 0; j < isovalues.size(); ++j) {
        if (first)
          out.signs[j].set(i, out.signs[j].get(g));
        else if (out.signs[j].get(i) != out.signs[j].get(g))
          truth = true;
      }
      first = false;
    }
  }
  out.truth.set(i, truth);
  return truth;
}

}  // namespace detail

/// Builds the sign and truth arrays for a set of iso-values (the cheap
/// first stage of the contour pipeline; plain grid cursors only).
inline SignArrays contour_preprocess(const HyperTreeGrid& g, std::size_t field,
                                     const std::vector<double>& isovalues) {
  require(g.finalized(), "contour_preprocess: grid not finalized");
  require(field < g.field_count(), "contour_preprocess: unknown field");
  require(!isovalues.empty(), "contour_preprocess: no iso-values");
  SignArrays out;
  out.signs.assign(isovalues.size(), BitVec(g.array_length(), false));
  out.truth = BitVec(g.array_length(), false);
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    if (!g.tree_at_slot(s)) continue;
    const auto root = GridCursor::at_root(g, g.coords_of_slot(s));
    if (root.is_masked()) continue;
    detail::preprocess_vertex(root, field, isovalues, out);
  }
  return out;
}

namespace detail {

inline void contour_recurse(const MooreSupercursor& s, std::size_t field,
                            const std::vector<double>& isovalues, const SignArrays* pre,
                            PointBank& bank, PolygonalOutput& out) {
  if (s.is_masked()) return;
  const int d = s.grid().dimension();
  if (s.is_leaf()) {
    for (int corner = 0; corner < ipow(2, d); ++corner) {
      if (!is_owner(s, corner)) continue;
      const DualCell cell = generate_dual_cell(s, corner, field);
      for (double iso : isovalues) march_dual_cell(d, cell, iso, bank, out);
    }
    return;
  }
  if (pre) {
    const std::uint64_t i = s.global_index();
    bool fire = pre->truth.get(i);
    for (int k = 0; k < s.cursors() && !fire; ++k) {
      if (k == s.center_index()) continue;
      if (!s.state(k).valid() || s.is_masked(k)) continue;
      const std::uint64_t l = s.global_index(k);
      fire = pre->truth.get(l);
      for (std::size_t j = 0; j < isovalues.size() && !fire; ++j)
        fire = pre->signs[j].get(i) != pre->signs[j].get(l);
    }
    if (!fire) return;
  }
  for (int i = 0; i < ipow(s.grid().factor(), d); ++i) {
    MooreSupercursor child = s;
    child.to_child(i);
    contour_recurse(child, field, isovalues, pre, bank, out);
  }
}

}  // namespace detail

/// Dual-based iso-contouring: segments for d=2, triangles for d=3, points
/// for d=1.  With `two_stage` (the default) the sign arrays prune the
/// descent; the output is identical to the unconditional traversal.
inline PolygonalOutput contour(const HyperTreeGrid& g, std::size_t field,
                               const std::vector<double>& isovalues, bool two_stage = true) {
  require(g.finalized(), "contour: grid not finalized");
  require(field < g.field_count(), "contour: unknown field");
  require(!isovalues.empty(), "contour: no iso-values");
  SignArrays pre;
  if (two_stage) pre = contour_preprocess(g, field, isovalues);
  PolygonalOutput out;
  PointBank bank;
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    if (!g.tree_at_slot(s)) continue;
    const auto root = MooreSupercursor::at_root(g, g.coords_of_slot(s));
    detail::contour_recurse(root, field, isovalues, two_stage ? &pre : nullptr, bank, out);
  }
  out.points = bank.take_points();
  return out;
}

inline PolygonalOutput contour(const HyperTreeGrid& g, const std::string& field,
                               const std::vector<double>& isovalues, bool two_stage = true) {
  const auto idx = g.field_index(field);
  require(idx.has_value(), "contour: unknown field '" + field + "'");
  return contour(g, *idx, isovalues, two_stage);
}

/// Per-tree parallel contour with a deterministic slot-order merge; the
/// output is identical to the sequential path.
inline PolygonalOutput contour_threaded(const HyperTreeGrid& g, std::size_t field,
                                        const std::vector<double>& isovalues, int threads,
                                        bool two_stage = true) {
  if (threads <= 1) return contour(g, field, isovalues, two_stage);
  require(g.finalized(), "contour: grid not finalized");
  require(field < g.field_count(), "contour: unknown field");
  require(!isovalues.empty(), "contour: no iso-values");
  SignArrays pre;
  if (two_stage) pre = contour_preprocess(g, field, isovalues);

  std::vector<PolygonalOutput> partial(g.slot_count());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next.fetch_add(1); s < g.slot_count(); s = next.fetch_add(1)) {
      if (!g.tree_at_slot(s)) continue;
      PointBank bank;
      const auto root = MooreSupercursor::at_root(g, g.coords_of_slot(s));
      detail::contour_recurse(root, field, isovalues, two_stage ? &pre : nullptr, bank,
                              partial[s]);
      partial[s].points = bank.take_points();
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  PolygonalOutput out;
  PointBank bank;
  for (const auto& p : partial) {
    std::vector<std::uint32_t> remap(p.points.size());
    for (std::size_t i = 0; i < p.points.size(); ++i) remap[i] = bank.intern(p.points[i]);
    for (auto v : p.verts) out.verts.push_back(remap[v]);
    for (const auto& l : p.lines) out.lines.push_back({remap[l[0]], remap[l[1]]});
    for (const auto& f : p.polys) {
      std::vector<std::uint32_t> poly;
      poly.reserve(f.size());
      for (auto id : f) poly.push_back(remap[id]);
      out.polys.push_back(std::move(poly));
    }
  }
  out.points = bank.take_points();
  return out;
}

}  // namespace htg
