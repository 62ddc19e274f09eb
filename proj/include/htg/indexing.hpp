#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "htg/common.hpp"

namespace htg {

/// Neighborhood connectivity of a supercursor: face-adjacent (2d+1 cursors
/// including the center) or fully adjacent (3^d cursors).
enum class Neighborhood : std::uint8_t { von_neumann, moore };

inline const char* to_string(Neighborhood k) {
  return k == Neighborhood::von_neumann ? "von_neumann" : "moore";
}

/// Rank of child coordinates: sum of c_k * f^k, axis 0 least significant.
/// This is the child index map used everywhere a cell subdivision is
/// enumerated; its inverse is child_coords.
inline int child_index(int d, int f, const std::array<int, 3>& c) {
  require(d >= 1 && d <= 3 && (f == 2 || f == 3), "child_index: bad (d,f)");
  int idx = 0, w = 1;
  for (int k = 0; k < d; ++k) {
    require(c[k] >= 0 && c[k] < f, "child_index: coordinate out of range");
    idx += c[k] * w;
    w *= f;
  }
  return idx;
}

inline std::array<int, 3> child_coords(int d, int f, int index) {
  require(d >= 1 && d <= 3 && (f == 2 || f == 3), "child_coords: bad (d,f)");
  require(index >= 0 && index < ipow(f, d), "child_coords: index out of range");
  std::array<int, 3> c{0, 0, 0};
  for (int k = 0; k < d; ++k) {
    c[k] = index % f;
    index /= f;
  }
  return c;
}

/// Number of cursors tracked by a supercursor of the given flavor.
inline int cursor_count(Neighborhood k, int d) {
  return k == Neighborhood::moore ? ipow(3, d) : 2 * d + 1;
}

/// Cursor index of the supercursor center.
inline int center_cursor(Neighborhood k, int d) {
  return k == Neighborhood::moore ? (ipow(3, d) - 1) / 2 : d;
}

namespace detail {

// Moore rank of an offset in {-1,0,1}^d: treat (offset+1) as child
// coordinates with branching factor 3.  The center lands on (3^d-1)/2.
inline int moore_rank(int d, const std::array<int, 3>& w) {
  int r = 0, p = 1;
  for (int k = 0; k < d; ++k) {
    r += (w[k] + 1) * p;
    p *= 3;
  }
  return r;
}

inline std::array<int, 3> moore_offset(int d, int rank) {
  std::array<int, 3> w{0, 0, 0};
  for (int k = 0; k < d; ++k) {
    w[k] = rank % 3 - 1;
    rank /= 3;
  }
  return w;
}

// Von Neumann cursor list: offsets with L1 norm <= 1, ordered by Moore rank.
// Index d is always the center.
inline const std::vector<std::array<int, 3>>& von_neumann_offsets(int d) {
  static std::map<int, std::vector<std::array<int, 3>>> cache;
  auto it = cache.find(d);
  if (it == cache.end()) {
    std::vector<std::array<int, 3>> offs;
    for (int r = 0; r < ipow(3, d); ++r) {
      const auto w = moore_offset(d, r);
      int l1 = 0;
      for (int k = 0; k < d; ++k) l1 += std::abs(w[k]);
      if (l1 <= 1) offs.push_back(w);
    }
    it = cache.emplace(d, std::move(offs)).first;
  }
  return it->second;
}

}  // namespace detail

/// Lattice offset in {-1,0,1}^d addressed by a cursor index of the given
/// neighborhood flavor.  Axes beyond d are 0.
inline std::array<int, 3> cursor_offset(Neighborhood k, int d, int cursor) {
  require(cursor >= 0 && cursor < cursor_count(k, d), "cursor_offset: cursor out of range");
  if (k == Neighborhood::moore) return detail::moore_offset(d, cursor);
  return detail::von_neumann_offsets(d)[static_cast<std::size_t>(cursor)];
}

/// Inverse of cursor_offset; -1 when the offset is not in the flavor's set.
inline int cursor_index_of_offset(Neighborhood k, int d, const std::array<int, 3>& w) {
  for (int a = d; a < 3; ++a)
    if (w[a] != 0) return -1;
  for (int a = 0; a < d; ++a)
    if (w[a] < -1 || w[a] > 1) return -1;
  if (k == Neighborhood::moore) return detail::moore_rank(d, w);
  const auto& offs = detail::von_neumann_offsets(d);
  for (std::size_t j = 0; j < offs.size(); ++j)
    if (offs[j] == w) return static_cast<int>(j);
  return -1;
}

/// Moore cursor indices of the 2^d cells sharing corner `corner` with the
/// center cell, ascending.  Corners are indexed like binary child
/// coordinates (bit k of `corner` = high side along axis k).
inline std::vector<int> corner_neighbor_cursors(int d, int corner) {
  require(d >= 1 && d <= 3, "corner_neighbor_cursors: bad d");
  require(corner >= 0 && corner < ipow(2, d), "corner_neighbor_cursors: corner out of range");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(ipow(2, d)));
  for (int j = 0; j < ipow(2, d); ++j) {
    std::array<int, 3> w{0, 0, 0};
    for (int k = 0; k < d; ++k) w[k] = ((corner >> k) & 1) - 1 + ((j >> k) & 1);
    out.push_back(detail::moore_rank(d, w));
  }
  return out;
}

/// Pre-computed supercursor descent tables for one (flavor, d, f).
///
/// For child c of a cell and cursor slot j with offset w, put q = c + w on
/// the child-level lattice.  The cell q belongs to the parent-level
/// neighbor floor(q/f), and is that neighbor's child with coordinates
/// q mod f.  to_parent_cursor stores the cursor index of floor(q/f);
/// to_child_index stores the child index of q mod f.  Both tables are
/// indexed by child * cursor_count + cursor.
struct TraversalTables {
  Neighborhood kind;
  int dimension = 0;
  int factor = 0;
  int child_count = 0;
  int cursors = 0;
  std::vector<std::uint8_t> to_parent_cursor;
  std::vector<std::uint8_t> to_child_index;

  int parent_cursor(int child, int cursor) const {
    return to_parent_cursor[static_cast<std::size_t>(child) * cursors + cursor];
  }
  int child_index_entry(int child, int cursor) const {
    return to_child_index[static_cast<std::size_t>(child) * cursors + cursor];
  }
  std::size_t entries() const { return to_parent_cursor.size() + to_child_index.size(); }
};

inline TraversalTables generate_traversal_tables(Neighborhood kind, int d, int f) {
  require(d >= 1 && d <= 3 && (f == 2 || f == 3), "generate_traversal_tables: bad (d,f)");
  TraversalTables t;
  t.kind = kind;
  t.dimension = d;
  t.factor = f;
  t.child_count = ipow(f, d);
  t.cursors = cursor_count(kind, d);
  t.to_parent_cursor.resize(static_cast<std::size_t>(t.child_count) * t.cursors);
  t.to_child_index.resize(static_cast<std::size_t>(t.child_count) * t.cursors);
  for (int ci = 0; ci < t.child_count; ++ci) {
    const auto c = child_coords(d, f, ci);
    for (int j = 0; j < t.cursors; ++j) {
      const auto w = cursor_offset(kind, d, j);
      std::array<int, 3> p{0, 0, 0}, r{0, 0, 0};
      for (int k = 0; k < d; ++k) {
        const int q = c[k] + w[k];
        p[k] = q < 0 ? -1 : q / f;  // floor division, q >= -1
        r[k] = q - p[k] * f;
      }
      const int pc = cursor_index_of_offset(kind, d, p);
      require(pc >= 0, "generate_traversal_tables: parent offset escapes neighborhood");
      const std::size_t slot = static_cast<std::size_t>(ci) * t.cursors + j;
      t.to_parent_cursor[slot] = static_cast<std::uint8_t>(pc);
      t.to_child_index[slot] = static_cast<std::uint8_t>(child_index(d, f, r));
    }
  }
  return t;
}

/// Shared per-(kind,d,f) tables, generated once on first use.
inline const TraversalTables& traversal_tables(Neighborhood kind, int d, int f) {
  static const std::array<TraversalTables, 12> all = [] {
    std::array<TraversalTables, 12> a;
    int i = 0;
    for (auto kind : {Neighborhood::von_neumann, Neighborhood::moore})
      for (int d = 1; d <= 3; ++d)
        for (int f = 2; f <= 3; ++f) a[i++] = generate_traversal_tables(kind, d, f);
    return a;
  }();
  const int ki = kind == Neighborhood::von_neumann ? 0 : 1;
  return all[static_cast<std::size_t>(ki * 6 + (d - 1) * 2 + (f - 2))];
}

/// Count of tables and total entries over all supported configurations:
/// 2 neighborhood flavors x 2 table kinds x d in 1..3 x f in 2..3.
inline std::pair<int, long> table_census() {
  int tables = 0;
  long entries = 0;
  for (auto kind : {Neighborhood::von_neumann, Neighborhood::moore})
    for (int d = 1; d <= 3; ++d)
      for (int f = 2; f <= 3; ++f) {
        const auto& t = traversal_tables(kind, d, f);
        tables += 2;
        entries += static_cast<long>(t.entries());
      }
  return {tables, entries};
}

}  // namespace htg
