#pragma once

#include <cstdint>
#include <cstring>
#include <unordered_map>
#include <vector>

#include "htg/common.hpp"

namespace htg {

/// Polygonal data set: points plus vertex / line / polygon cells.
/// Optional scalars attach per point (e.g. cell-center values) or per cell
/// in emission order.
struct PolygonalOutput {
  std::vector<Vec3> points;
  std::vector<std::uint32_t> verts;
  std::vector<std::array<std::uint32_t, 2>> lines;
  std::vector<std::vector<std::uint32_t>> polys;
  std::vector<double> point_scalars;
  std::vector<double> cell_scalars;

  std::size_t cell_count() const { return verts.size() + lines.size() + polys.size(); }

  bool operator==(const PolygonalOutput& o) const {
    return points == o.points && verts == o.verts && lines == o.lines && polys == o.polys &&
           point_scalars == o.point_scalars && cell_scalars == o.cell_scalars;
  }
};

/// Explicit cell list; `corners` is 2 (lines), 4 (quads) or 8 (voxels),
/// cells index into `points` with binary corner order (bit k = high side
/// along axis k).
struct UnstructuredMesh {
  int corners = 0;
  std::vector<Vec3> points;
  std::vector<std::uint32_t> connectivity;
  std::vector<double> cell_scalars;

  std::size_t cell_count() const {
    return corners == 0 ? 0 : connectivity.size() / static_cast<std::size_t>(corners);
  }

  /// Modeled byte cost of this explicit representation: 3 x 8-byte reals
  /// per point, 4-byte connectivity ids, 8-byte per-cell scalars.
  std::uint64_t model_bytes() const {
    return 24ull * points.size() + 4ull * connectivity.size() + 8ull * cell_scalars.size();
  }
};

/// Deduplicating point collector with bitwise coordinate identity and
/// deterministic, insertion-ordered indices.
class PointBank {
 public:
  std::uint32_t intern(const Vec3& p) {
    const Key k = key_of(p);
    auto it = index_.find(k);
    if (it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(points_.size());
    points_.push_back(p);
    index_.emplace(k, id);
    return id;
  }

  const std::vector<Vec3>& points() const { return points_; }
  std::vector<Vec3> take_points() { return std::move(points_); }
  std::size_t size() const { return points_.size(); }

 private:
  struct Key {
    std::array<std::uint64_t, 3> bits;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 0xcbf29ce484222325ull;
      for (auto b : k.bits) {
        h ^= b;
        h *= 0x100000001b3ull;
      }
      return h;
    }
  };

  static Key key_of(const Vec3& p) {
    Key k{};
    for (int i = 0; i < 3; ++i) {
      const double v = p[i] == 0.0 ? 0.0 : p[i];  // collapse -0.0 onto +0.0
      std::uint64_t b;
      std::memcpy(&b, &v, sizeof b);
      k.bits[static_cast<std::size_t>(i)] = b;
    }
    return k;
  }

  std::vector<Vec3> points_;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
};

}  // namespace htg
