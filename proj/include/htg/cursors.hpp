#pragma once

#include <cstdint>
#include <vector>

#include "htg/grid.hpp"
#include "htg/indexing.hpp"

namespace htg {

/// Position of one tracked cursor: tree, vertex, accumulated mask state and
/// the geometric embedding of the current cell.  A default-constructed
/// state (tree == nullptr) is the invalid cursor used beyond the grid
/// boundary and for absent trees; it reads as a masked leaf.
struct CursorState {
  const HyperTree* tree = nullptr;
  std::uint32_t slot = 0;
  std::uint32_t vertex = 0;
  std::uint16_t depth = 0;
  std::uint8_t parity = 0;
  bool masked = false;  // own bit or any ancestor bit along the descent
  Vec3 origin{0, 0, 0};
  Vec3 size{0, 0, 0};

  bool valid() const { return tree != nullptr; }
};

namespace detail {

// Geometric child index <-> stored (topological) child index under the
// slot's reflection parity.  Identity when no axis is flipped.
inline int apply_parity(int d, int f, std::uint8_t parity, int index) {
  if (parity == 0) return index;
  auto c = child_coords(d, f, index);
  for (int k = 0; k < d; ++k)
    if (parity & (1u << k)) c[k] = f - 1 - c[k];
  return child_index(d, f, c);
}

inline CursorState root_state(const HyperTreeGrid& g, const TreeCoords& c) {
  CursorState st;
  if (!g.in_extent(c)) return st;
  const std::size_t s = g.slot_of(c);
  if (!g.tree_at_slot(s)) return st;
  st.tree = g.tree_at_slot(s).get();
  st.slot = static_cast<std::uint32_t>(s);
  st.vertex = 0;
  st.depth = 0;
  st.parity = g.parity_at_slot(s);
  st.masked = g.has_mask() && g.mask_get(g.start_at_slot(s));
  const auto e = g.tree_embedding(c);
  st.origin = e.origin;
  st.size = e.size;
  return st;
}

// Descends a state into the child with the given geometric index,
// maintaining depth, cumulative mask and embedding.
inline void descend(const HyperTreeGrid& g, CursorState& st, int geo_index) {
  const int d = g.dimension();
  const int f = g.factor();
  const int topo = apply_parity(d, f, st.parity, geo_index);
  st.vertex = st.tree->child(st.vertex, topo);
  st.depth = static_cast<std::uint16_t>(st.depth + 1);
  if (g.has_mask()) st.masked = st.masked || g.mask_get(g.start_at_slot(st.slot) + st.vertex);
  const auto c = child_coords(d, f, geo_index);
  for (int k = 0; k < d; ++k) {
    st.size[k] /= f;
    st.origin[k] += c[k] * st.size[k];
  }
}

inline bool state_masked(const CursorState& st) { return !st.valid() || st.masked; }

// Effective leaf: a true leaf, an invalid cursor, or a strict node whose
// children are all directly masked (a leaf for all processing purposes).
inline bool state_leaf(const HyperTreeGrid& g, const CursorState& st) {
  if (!st.valid()) return true;
  if (st.tree->is_leaf(st.vertex)) return true;
  if (!g.has_mask()) return false;
  const std::uint64_t base = g.start_at_slot(st.slot) + st.tree->eldest_child(st.vertex);
  for (int i = 0; i < st.tree->children_per_node(); ++i)
    if (!g.mask_get(base + static_cast<std::uint64_t>(i))) return false;
  return true;
}

}  // namespace detail

/// DFS cursor over a single hypertree; no grid or geometry awareness.
class TreeCursor {
 public:
  explicit TreeCursor(const HyperTree& tree) : tree_(&tree) {}

  std::uint32_t vertex() const { return vertex_; }
  int depth() const { return static_cast<int>(path_.size()); }
  bool is_leaf() const { return tree_->is_leaf(vertex_); }
  const std::vector<std::pair<std::uint32_t, int>>& path() const { return path_; }

  void to_child(int i) {
    require(!is_leaf(), "TreeCursor::to_child: called on a leaf");
    require(i >= 0 && i < tree_->children_per_node(), "TreeCursor::to_child: child out of range");
    path_.emplace_back(vertex_, i);
    vertex_ = tree_->child(vertex_, i);
  }

  void to_root() {
    vertex_ = 0;
    path_.clear();
  }

 private:
  const HyperTree* tree_;
  std::uint32_t vertex_ = 0;
  std::vector<std::pair<std::uint32_t, int>> path_;  // replay diagnostics
};

/// Grid-aware DFS cursor without geometry; the light tool for output
/// construction and pre-processing passes.
class GridCursor {
 public:
  static GridCursor at_root(const HyperTreeGrid& g, const TreeCoords& c) {
    require(g.in_extent(c), "GridCursor: coordinates out of extent");
    GridCursor cur;
    cur.grid_ = &g;
    cur.coords_ = c;
    cur.st_ = detail::root_state(g, c);
    return cur;
  }

  bool valid() const { return st_.valid(); }
  std::uint32_t vertex() const { return st_.vertex; }
  int depth() const { return st_.depth; }
  const TreeCoords& tree_coords() const { return coords_; }
  const CursorState& state() const { return st_; }

  bool is_leaf() const { return detail::state_leaf(*grid_, st_); }
  bool is_masked() const { return detail::state_masked(st_); }

  std::uint64_t global_index() const {
    require(st_.valid(), "GridCursor::global_index: invalid cursor");
    return grid_->start_at_slot(st_.slot) + st_.vertex;
  }

  double value(std::size_t field) const { return grid_->value(field, global_index()); }

  void to_child(int i) {
    require(st_.valid() && !st_.tree->is_leaf(st_.vertex), "GridCursor::to_child: not a strict node");
    require(i >= 0 && i < st_.tree->children_per_node(), "GridCursor::to_child: child out of range");
    const int geo = detail::apply_parity(grid_->dimension(), grid_->factor(), st_.parity, i);
    detail::descend(*grid_, st_, geo);
  }

 protected:
  const HyperTreeGrid* grid_ = nullptr;
  TreeCoords coords_{0, 0, 0};
  CursorState st_;
};

/// Grid cursor that additionally maintains the embedding of the current
/// cell (origin and size, unused axes kept at size 0).
class GeometricCursor : public GridCursor {
 public:
  static GeometricCursor at_root(const HyperTreeGrid& g, const TreeCoords& c) {
    GeometricCursor cur;
    static_cast<GridCursor&>(cur) = GridCursor::at_root(g, c);
    return cur;
  }
  const Vec3& origin() const { return st_.origin; }
  const Vec3& size() const { return st_.size; }
  Vec3 cell_center() const { return st_.origin + st_.size * 0.5; }
};

/// Supercursor: a center cursor plus a cursor per neighborhood slot, all
/// updated together on descent.  Neighbor entries never point deeper than
/// the center; a neighbor may be a strict node, and one cell may appear in
/// several entries.
///
/// Descent snapshots every tracked cursor, then rebuilds slot j from the
/// parent's slot P[child][j]; when that cursor sits on an effective strict
/// node it is descended into child C[child][j].  The supercursor itself is
/// never descended recursively.
template <Neighborhood Kind>
class Supercursor {
 public:
  static Supercursor at_root(const HyperTreeGrid& g, const TreeCoords& c) {
    require(g.in_extent(c), "Supercursor: coordinates out of extent");
    Supercursor s;
    s.grid_ = &g;
    s.tables_ = &traversal_tables(Kind, g.dimension(), g.factor());
    s.center_ = center_cursor(Kind, g.dimension());
    s.states_.resize(static_cast<std::size_t>(cursor_count(Kind, g.dimension())));
    for (int j = 0; j < static_cast<int>(s.states_.size()); ++j) {
      const auto w = cursor_offset(Kind, g.dimension(), j);
      s.states_[static_cast<std::size_t>(j)] =
          detail::root_state(g, {c[0] + w[0], c[1] + w[1], c[2] + w[2]});
    }
    return s;
  }

  const HyperTreeGrid& grid() const { return *grid_; }
  int cursors() const { return static_cast<int>(states_.size()); }
  int center_index() const { return center_; }
  const CursorState& state(int k) const { return states_[static_cast<std::size_t>(k)]; }
  const CursorState& center() const { return states_[static_cast<std::size_t>(center_)]; }
  const std::vector<int>& path() const { return path_; }

  bool is_masked(int k) const { return detail::state_masked(state(k)); }
  bool is_leaf(int k) const { return detail::state_leaf(*grid_, state(k)); }
  bool is_masked() const { return is_masked(center_); }
  bool is_leaf() const { return is_leaf(center_); }

  std::uint64_t global_index(int k) const {
    const auto& st = state(k);
    require(st.valid(), "Supercursor::global_index: invalid cursor");
    return grid_->start_at_slot(st.slot) + st.vertex;
  }
  std::uint64_t global_index() const { return global_index(center_); }

  double value(std::size_t field, int k) const { return grid_->value(field, global_index(k)); }

  /// Descends into child `i` (stored child index of the center's tree).
  void to_child(int i) {
    require(!is_leaf(), "Supercursor::to_child: center is an effective leaf");
    const int d = grid_->dimension();
    const int f = grid_->factor();
    require(i >= 0 && i < ipow(f, d), "Supercursor::to_child: child out of range");
    const int geo = detail::apply_parity(d, f, center().parity, i);
    const std::vector<CursorState> snapshot = states_;
    for (int j = 0; j < cursors(); ++j) {
      const int k = tables_->parent_cursor(geo, j);
      auto& st = states_[static_cast<std::size_t>(j)];
      st = snapshot[static_cast<std::size_t>(k)];
      if (!detail::state_leaf(*grid_, st)) detail::descend(*grid_, st, tables_->child_index_entry(geo, j));
    }
    path_.push_back(i);
  }

 private:
  const HyperTreeGrid* grid_ = nullptr;
  const TraversalTables* tables_ = nullptr;
  int center_ = 0;
  std::vector<CursorState> states_;
  std::vector<int> path_;
};

using VonNeumannSupercursor = Supercursor<Neighborhood::von_neumann>;
using MooreSupercursor = Supercursor<Neighborhood::moore>;

}  // namespace htg
