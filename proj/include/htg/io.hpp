#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "htg/grid.hpp"
#include "htg/polydata.hpp"

namespace htg {

namespace detail {

// Little-endian fixed-width scalar I/O (the build targets are all
// little-endian; a byte-swapping port would localize here).
template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is, const char* what) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  require(static_cast<bool>(is), std::string("read_grid: truncated payload (") + what + ")");
  return v;
}

// BFS vertex order of one tree; identity for BFS-built trees.
inline std::vector<std::uint32_t> bfs_order(const HyperTree& t) {
  std::vector<std::uint32_t> order;
  order.reserve(t.vertex_count());
  order.push_back(0);
  for (std::size_t q = 0; q < order.size(); ++q) {
    const auto v = order[q];
    if (t.is_leaf(v)) continue;
    for (int i = 0; i < t.children_per_node(); ++i) order.push_back(t.child(v, i));
  }
  return order;
}

}  // namespace detail

inline constexpr char kGridMagic[4] = {'H', 'T', 'G', '1'};

/// Writes the grid in the versioned binary format.  Vertex order is
/// canonicalized to BFS per tree (a no-op for BFS-built grids); mask and
/// attribute entries are permuted alongside.
inline void write_grid(const HyperTreeGrid& g, const std::string& path) {
  require(g.finalized(), "write_grid: grid not finalized");
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), "write_grid: cannot open '" + path + "'");

  os.write(kGridMagic, 4);
  detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(g.dimension()));
  detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(g.factor()));
  detail::put<std::uint8_t>(os, static_cast<std::uint8_t>(g.orientation()));
  std::uint8_t flags = 0;
  if (g.has_mask()) flags |= 1;
  // Cumulative-start check, recorded for readers that care.
  {
    std::uint64_t next = 0;
    bool cumulative = true;
    for (std::size_t s = 0; s < g.slot_count(); ++s) {
      if (!g.tree_at_slot(s)) continue;
      cumulative = cumulative && g.start_at_slot(s) == next;
      next += g.tree_at_slot(s)->vertex_count();
    }
    if (!cumulative) flags |= 2;
  }
  detail::put<std::uint8_t>(os, flags);
  for (int k = 0; k < 3; ++k) detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.extent()[k]));

  std::uint64_t present = 0;
  for (std::size_t s = 0; s < g.slot_count(); ++s)
    if (g.tree_at_slot(s)) ++present;
  detail::put<std::uint64_t>(os, present);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(g.field_count()));
  detail::put<std::uint32_t>(os, 0);

  for (int k = 0; k < 3; ++k) {
    const auto& list = g.coordinates(k);
    detail::put<std::uint64_t>(os, list.size());
    for (double v : list) detail::put<double>(os, v);
  }

  std::vector<std::vector<std::uint32_t>> orders(g.slot_count());
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto& tree = g.tree_at_slot(s);
    if (!tree) continue;
    const auto tc = g.coords_of_slot(s);
    orders[s] = detail::bfs_order(*tree);
    for (int k = 0; k < 3; ++k) detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(tc[k]));
    detail::put<std::uint8_t>(os, g.parity_at_slot(s));
    detail::put<std::uint64_t>(os, g.start_at_slot(s));
    const std::uint64_t nv = tree->vertex_count();
    detail::put<std::uint64_t>(os, nv);
    std::vector<std::uint8_t> bits((nv + 7) / 8, 0);
    for (std::uint64_t b = 0; b < nv; ++b)
      if (!tree->is_leaf(orders[s][b])) bits[b >> 3] |= static_cast<std::uint8_t>(1u << (b & 7));
    os.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  }

  if (g.has_mask()) {
    std::vector<std::uint8_t> bits;
    std::uint64_t b = 0;
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < g.slot_count(); ++s)
      if (g.tree_at_slot(s)) total += g.tree_at_slot(s)->vertex_count();
    bits.assign((total + 7) / 8, 0);
    for (std::size_t s = 0; s < g.slot_count(); ++s) {
      const auto& tree = g.tree_at_slot(s);
      if (!tree) continue;
      for (std::uint64_t v = 0; v < tree->vertex_count(); ++v, ++b)
        if (g.mask_get(g.start_at_slot(s) + orders[s][v]))
          bits[b >> 3] |= static_cast<std::uint8_t>(1u << (b & 7));
    }
    os.write(reinterpret_cast<const char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  }

  for (std::size_t f = 0; f < g.field_count(); ++f) {
    const auto& name = g.field_name(f);
    detail::put<std::uint16_t>(os, static_cast<std::uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    for (std::size_t s = 0; s < g.slot_count(); ++s) {
      const auto& tree = g.tree_at_slot(s);
      if (!tree) continue;
      for (std::uint64_t v = 0; v < tree->vertex_count(); ++v)
        detail::put<double>(os, g.value(f, g.start_at_slot(s) + orders[s][v]));
    }
  }
  require(static_cast<bool>(os), "write_grid: write failure on '" + path + "'");
}

inline HyperTreeGrid read_grid(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), "read_grid: cannot open '" + path + "'");
  char magic[4];
  is.read(magic, 4);
  require(static_cast<bool>(is) && std::memcmp(magic, kGridMagic, 4) == 0,
          "read_grid: bad magic in '" + path + "'");

  const auto d = detail::get<std::uint8_t>(is, "dimension");
  const auto f = detail::get<std::uint8_t>(is, "factor");
  const auto orientation = detail::get<std::uint8_t>(is, "orientation");
  const auto flags = detail::get<std::uint8_t>(is, "flags");
  std::array<int, 3> extent;
  for (int k = 0; k < 3; ++k) extent[k] = static_cast<int>(detail::get<std::uint32_t>(is, "extent"));
  const auto tree_count = detail::get<std::uint64_t>(is, "tree count");
  const auto field_count = detail::get<std::uint32_t>(is, "field count");
  detail::get<std::uint32_t>(is, "reserved");

  std::array<std::vector<double>, 3> coords;
  for (int k = 0; k < 3; ++k) {
    const auto len = detail::get<std::uint64_t>(is, "coordinate length");
    coords[static_cast<std::size_t>(k)].resize(len);
    for (auto& v : coords[static_cast<std::size_t>(k)]) v = detail::get<double>(is, "coordinate");
  }

  HyperTreeGrid g(d, f, extent, coords, orientation);
  std::vector<bool> present(g.slot_count(), false);
  std::vector<std::uint64_t> starts(g.slot_count(), 0);
  const int children = ipow(f, d);

  for (std::uint64_t t = 0; t < tree_count; ++t) {
    TreeCoords tc;
    for (int k = 0; k < 3; ++k) tc[k] = static_cast<int>(detail::get<std::uint32_t>(is, "tree coords"));
    require(g.in_extent(tc), "read_grid: tree coordinates outside extent");
    const auto parity = detail::get<std::uint8_t>(is, "parity");
    const auto start = detail::get<std::uint64_t>(is, "start");
    const auto nv = detail::get<std::uint64_t>(is, "vertex count");
    std::vector<std::uint8_t> bits((nv + 7) / 8);
    is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
    require(static_cast<bool>(is), "read_grid: truncated refinement bitstring");

    std::uint64_t strict = 0;
    for (std::uint64_t b = 0; b < nv; ++b)
      if (bits[b >> 3] & (1u << (b & 7))) ++strict;
    const auto tag = std::to_string(tc[0]) + "," + std::to_string(tc[1]) + "," + std::to_string(tc[2]);
    require(nv == 1 + strict * static_cast<std::uint64_t>(children),
            "read_grid: inconsistent refinement bitstring for tree (" + tag + ")");

    for (std::uint64_t v = 0; v < nv; ++v)
      if (bits[v >> 3] & (1u << (v & 7))) {
        require(v < g.tree_at(tc)->vertex_count(),
                "read_grid: refinement bit for nonexistent vertex in tree (" + tag + ")");
        g.subdivide(tc, static_cast<std::uint32_t>(v));
      }
    require(g.tree_at(tc)->vertex_count() == nv,
            "read_grid: refinement bitstring does not close for tree (" + tag + ")");
    const auto slot = g.slot_of(tc);
    present[slot] = true;
    starts[slot] = start;
    g.set_slot_parity(slot, parity);
  }
  for (std::size_t s = 0; s < g.slot_count(); ++s)
    if (!present[s]) g.clear_tree(g.coords_of_slot(s));
  g.finalize(starts);

  if (flags & 1) {
    g.attach_mask();
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < g.slot_count(); ++s)
      if (g.tree_at_slot(s)) total += g.tree_at_slot(s)->vertex_count();
    std::vector<std::uint8_t> bits((total + 7) / 8);
    is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
    require(static_cast<bool>(is), "read_grid: truncated mask");
    std::uint64_t b = 0;
    for (std::size_t s = 0; s < g.slot_count(); ++s) {
      const auto& tree = g.tree_at_slot(s);
      if (!tree) continue;
      for (std::uint64_t v = 0; v < tree->vertex_count(); ++v, ++b)
        if (bits[b >> 3] & (1u << (b & 7))) g.mask_set(g.start_at_slot(s) + v, true);
    }
  }

  for (std::uint32_t f_i = 0; f_i < field_count; ++f_i) {
    const auto name_len = detail::get<std::uint16_t>(is, "field name length");
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    require(static_cast<bool>(is), "read_grid: truncated field name");
    const auto idx = g.attach_field(name);
    for (std::size_t s = 0; s < g.slot_count(); ++s) {
      const auto& tree = g.tree_at_slot(s);
      if (!tree) continue;
      for (std::uint64_t v = 0; v < tree->vertex_count(); ++v)
        g.set_value(idx, g.start_at_slot(s) + v, detail::get<double>(is, "field value"));
    }
  }
  return g;
}

/// Structural and value-level equality (topology, coordinates, starts,
/// parity, mask, attributes).
inline bool grid_equal(const HyperTreeGrid& a, const HyperTreeGrid& b) {
  if (a.dimension() != b.dimension() || a.factor() != b.factor() || a.extent() != b.extent() ||
      a.orientation() != b.orientation() || a.field_count() != b.field_count() ||
      a.has_mask() != b.has_mask())
    return false;
  for (int k = 0; k < 3; ++k)
    if (a.coordinates(k) != b.coordinates(k)) return false;
  for (std::size_t s = 0; s < a.slot_count(); ++s) {
    const auto& ta = a.tree_at_slot(s);
    const auto& tb = b.tree_at_slot(s);
    if ((ta == nullptr) != (tb == nullptr)) return false;
    if (!ta) continue;
    if (a.start_at_slot(s) != b.start_at_slot(s) || a.parity_at_slot(s) != b.parity_at_slot(s))
      return false;
    if (ta->vertex_count() != tb->vertex_count() ||
        ta->eldest_child_list() != tb->eldest_child_list() ||
        ta->parent_of_eldest_list() != tb->parent_of_eldest_list())
      return false;
    for (std::uint64_t v = 0; v < ta->vertex_count(); ++v) {
      const auto ga = a.start_at_slot(s) + v;
      if (a.has_mask() && a.mask_get(ga) != b.mask_get(ga)) return false;
      for (std::size_t f = 0; f < a.field_count(); ++f)
        if (a.value(f, ga) != b.value(f, ga)) return false;
    }
  }
  for (std::size_t f = 0; f < a.field_count(); ++f)
    if (a.field_name(f) != b.field_name(f)) return false;
  return true;
}

/// Human-readable structure dump, one line per tree.
inline void dump_grid_text(const HyperTreeGrid& g, std::ostream& os) {
  os << "htg d=" << g.dimension() << " f=" << g.factor() << " extent=" << g.extent()[0] << "x"
     << g.extent()[1] << "x" << g.extent()[2] << " orientation=" << g.orientation()
     << " vertices=" << g.vertex_count() << " leaves=" << g.leaf_count()
     << " depth=" << g.max_depth() << " mask=" << (g.has_mask() ? "yes" : "no")
     << " fields=" << g.field_count() << "\n";
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    const auto tc = g.coords_of_slot(s);
    os << "tree (" << tc[0] << "," << tc[1] << "," << tc[2] << ")";
    const auto& tree = g.tree_at_slot(s);
    if (!tree) {
      os << " absent\n";
      continue;
    }
    os << " start=" << g.start_at_slot(s) << " vertices=" << tree->vertex_count()
       << " strict=" << tree->strict_node_count() << " depth=" << tree->depth();
    if (g.parity_at_slot(s)) os << " parity=" << static_cast<int>(g.parity_at_slot(s));
    os << "\n";
  }
}

// -- polygonal exports --------------------------------------------------------

namespace detail {

inline void format_double(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace detail

/// Wavefront OBJ export: v records for points, then p/l/f cells in
/// generation order, 1-based indices.
inline void export_obj(const PolygonalOutput& poly, const std::string& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "export_obj: cannot open '" + path + "'");
  for (const auto& p : poly.points) {
    os << "v ";
    detail::format_double(os, p[0]);
    os << " ";
    detail::format_double(os, p[1]);
    os << " ";
    detail::format_double(os, p[2]);
    os << "\n";
  }
  for (auto v : poly.verts) os << "p " << v + 1 << "\n";
  for (const auto& l : poly.lines) os << "l " << l[0] + 1 << " " << l[1] + 1 << "\n";
  for (const auto& f : poly.polys) {
    os << "f";
    for (auto id : f) os << " " << id + 1;
    os << "\n";
  }
  require(static_cast<bool>(os), "export_obj: write failure on '" + path + "'");
}

/// Minimal OBJ reader covering the records export_obj writes.
inline PolygonalOutput read_obj(const std::string& path) {
  std::ifstream is(path);
  require(static_cast<bool>(is), "read_obj: cannot open '" + path + "'");
  PolygonalOutput out;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 p{};
      ss >> p[0] >> p[1] >> p[2];
      out.points.push_back(p);
    } else if (tag == "p") {
      std::uint32_t a;
      ss >> a;
      out.verts.push_back(a - 1);
    } else if (tag == "l") {
      std::uint32_t a, b;
      ss >> a >> b;
      out.lines.push_back({a - 1, b - 1});
    } else if (tag == "f") {
      std::vector<std::uint32_t> face;
      std::uint32_t id;
      while (ss >> id) face.push_back(id - 1);
      out.polys.push_back(std::move(face));
    }
  }
  return out;
}

/// CSV of points, one row per point, with the per-point scalar when the
/// output carries one.
inline void export_csv_points(const PolygonalOutput& poly, const std::string& path) {
  std::ofstream os(path);
  require(static_cast<bool>(os), "export_csv_points: cannot open '" + path + "'");
  const bool with_scalar = poly.point_scalars.size() == poly.points.size() && !poly.points.empty();
  os << (with_scalar ? "x,y,z,scalar\n" : "x,y,z\n");
  for (std::size_t i = 0; i < poly.points.size(); ++i) {
    detail::format_double(os, poly.points[i][0]);
    os << ",";
    detail::format_double(os, poly.points[i][1]);
    os << ",";
    detail::format_double(os, poly.points[i][2]);
    if (with_scalar) {
      os << ",";
      detail::format_double(os, poly.point_scalars[i]);
    }
    os << "\n";
  }
  require(static_cast<bool>(os), "export_csv_points: write failure on '" + path + "'");
}

}  // namespace htg
