#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "htg/hypertree.hpp"

namespace htg {

/// Axis-aligned box of one hypertree (or cell) inside the 3D embedding.
/// Unused axes carry size 0.  `orientation` names the fixed world axis
/// (normal for d=2, alignment axis for d=1) and is 0 when d=3.
struct GeometricEmbedding {
  Vec3 origin{0, 0, 0};
  Vec3 size{0, 0, 0};
  int orientation = 0;
};

/// Tree position in the Cartesian grid of roots.
using TreeCoords = std::array<int, 3>;

/// Byte counts under the canonical accounting model: 4-byte topology
/// indices, 8-byte reals, 1-bit mask entries.
struct MemoryReport {
  std::uint64_t topology_bytes = 0;
  std::uint64_t coordinates_bytes = 0;
  std::uint64_t mask_bytes = 0;
  std::uint64_t attribute_bytes = 0;
  std::uint64_t total_bytes = 0;
};

/// Cartesian arrangement of hypertrees sharing (d, f), with rectilinear
/// coordinates, per-tree global index starts, an optional material mask and
/// named cell-centered attribute fields.
///
/// Lifecycle: construct, subdivide trees, then finalize().  Finalization
/// freezes topology and assigns global index starts (cumulative by default,
/// explicit override allowed).  Copies are shallow: tree topology, field
/// arrays and the mask are shared between copies.
class HyperTreeGrid {
 public:
  HyperTreeGrid(int dimension, int factor, std::array<int, 3> extent,
                std::array<std::vector<double>, 3> coordinates, int orientation = 0)
      : dimension_(dimension), factor_(factor), orientation_(orientation), extent_(extent) {
    require(dimension >= 1 && dimension <= 3, "grid: dimension must be 1..3");
    require(factor == 2 || factor == 3, "grid: factor must be 2 or 3");
    require(dimension == 3 ? orientation == 0 : (orientation >= 0 && orientation <= 2),
            "grid: bad orientation");
    for (int k = 0; k < 3; ++k) {
      if (k < dimension_) {
        require(extent_[k] >= 1, "grid: extent must be positive");
      } else {
        require(extent_[k] == 1, "grid: extent must be 1 beyond the dimension");
      }
      auto& list = coordinates[static_cast<std::size_t>(k)];
      if (k >= dimension_) {
        if (list.empty()) list = {0.0, 0.0};
        if (list.size() == 1) list = {list[0], list[0]};
        require(list.size() == 2 && list[0] == list[1],
                "grid: unused axis must have a degenerate coordinate pair");
      } else {
        require(list.size() == static_cast<std::size_t>(extent_[k]) + 1,
                "grid: coordinate list length must be extent+1");
        for (std::size_t i = 0; i + 1 < list.size(); ++i)
          require(list[i] < list[i + 1], "grid: coordinates must be strictly increasing");
      }
      coords_[static_cast<std::size_t>(k)] = std::move(list);
    }
    slots_.resize(static_cast<std::size_t>(extent_[0]) * extent_[1] * extent_[2]);
    for (auto& s : slots_) s.tree = std::make_shared<HyperTree>(dimension_, factor_);
  }

  int dimension() const { return dimension_; }
  int factor() const { return factor_; }
  int orientation() const { return orientation_; }
  const std::array<int, 3>& extent() const { return extent_; }
  const std::vector<double>& coordinates(int axis) const { return coords_[static_cast<std::size_t>(axis)]; }
  bool finalized() const { return finalized_; }

  std::size_t slot_count() const { return slots_.size(); }

  bool in_extent(const TreeCoords& c) const {
    for (int k = 0; k < 3; ++k)
      if (c[k] < 0 || c[k] >= extent_[k]) return false;
    return true;
  }

  /// Linear slot order: lexicographic over (i,j,k), k varying fastest.
  std::size_t slot_of(const TreeCoords& c) const {
    require(in_extent(c), "grid: tree coordinates out of extent");
    return (static_cast<std::size_t>(c[0]) * extent_[1] + c[1]) * extent_[2] + c[2];
  }

  TreeCoords coords_of_slot(std::size_t s) const {
    const int k = static_cast<int>(s % extent_[2]);
    const int j = static_cast<int>((s / extent_[2]) % extent_[1]);
    const int i = static_cast<int>(s / (static_cast<std::size_t>(extent_[1]) * extent_[2]));
    return {i, j, k};
  }

  const HyperTreePtr& tree_at(const TreeCoords& c) const { return slots_[slot_of(c)].tree; }
  const HyperTreePtr& tree_at_slot(std::size_t s) const { return slots_[s].tree; }
  std::uint64_t start_at_slot(std::size_t s) const { return slots_[s].start; }
  std::uint8_t parity_at_slot(std::size_t s) const { return slots_[s].parity; }

  /// Marks a tree as absent; absent trees read as fully masked regions.
  void clear_tree(const TreeCoords& c) {
    require(!finalized_, "grid: cannot clear trees after finalization");
    slots_[slot_of(c)].tree = nullptr;
  }

  /// Splits a leaf of the addressed tree; returns the eldest child vertex.
  /// Attached fields and the mask grow with zero / unmasked entries.
  std::uint32_t subdivide(const TreeCoords& c, std::uint32_t vertex) {
    require(!finalized_, "grid: cannot subdivide after finalization");
    const std::size_t s = slot_of(c);
    require(slots_[s].tree != nullptr, "grid: tree is absent");
    const std::uint32_t eldest = slots_[s].tree->subdivide(vertex);
    const std::size_t grown = slots_[s].tree->vertex_count();
    for (auto& f : fields_) f.local[s].resize(grown, 0.0);
    if (local_mask_) (*local_mask_)[s].resize(grown, false);
    return eldest;
  }

  /// Freezes topology and assigns global index starts.  Without explicit
  /// starts they are cumulative vertex counts in linear slot order.
  void finalize(std::optional<std::vector<std::uint64_t>> explicit_starts = std::nullopt) {
    require(!finalized_, "grid: already finalized");
    if (explicit_starts) {
      require(explicit_starts->size() == slots_.size(), "finalize: starts size mismatch");
      std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
      for (std::size_t s = 0; s < slots_.size(); ++s) {
        slots_[s].start = (*explicit_starts)[s];
        if (slots_[s].tree)
          ranges.emplace_back(slots_[s].start, slots_[s].start + slots_[s].tree->vertex_count());
      }
      std::sort(ranges.begin(), ranges.end());
      for (std::size_t i = 0; i + 1 < ranges.size(); ++i)
        require(ranges[i].second <= ranges[i + 1].first, "finalize: overlapping index ranges");
      array_length_ = ranges.empty() ? 0 : ranges.back().second;
    } else {
      std::uint64_t next = 0;
      for (auto& s : slots_) {
        s.start = next;
        if (s.tree) next += s.tree->vertex_count();
      }
      array_length_ = next;
    }
    finalized_ = true;
    for (auto& f : fields_) {
      f.data = std::make_shared<std::vector<double>>(array_length_, 0.0);
      for (std::size_t s = 0; s < slots_.size(); ++s)
        for (std::size_t v = 0; v < f.local[s].size(); ++v)
          (*f.data)[slots_[s].start + v] = f.local[s][v];
      f.local.clear();
    }
    if (local_mask_) {
      mask_ = std::make_shared<BitVec>(array_length_, false);
      for (std::size_t s = 0; s < slots_.size(); ++s)
        for (std::size_t v = 0; v < (*local_mask_)[s].size(); ++v)
          mask_->set(slots_[s].start + v, (*local_mask_)[s][v]);
      local_mask_.reset();
    }
  }

  // -- global indexing ------------------------------------------------------

  std::uint64_t global_index(const TreeCoords& c, std::uint32_t local) const {
    require(finalized_, "global_index: grid not finalized");
    const std::size_t s = slot_of(c);
    require(slots_[s].tree != nullptr, "global_index: tree is absent");
    require(local < slots_[s].tree->vertex_count(), "global_index: local index out of range");
    return slots_[s].start + local;
  }

  /// Length of global attribute arrays (max global index + 1).
  std::uint64_t array_length() const { return array_length_; }

  std::uint64_t vertex_count() const {
    std::uint64_t n = 0;
    for (const auto& s : slots_)
      if (s.tree) n += s.tree->vertex_count();
    return n;
  }
  std::uint64_t leaf_count() const {
    std::uint64_t n = 0;
    for (const auto& s : slots_)
      if (s.tree) n += s.tree->leaf_count();
    return n;
  }
  int max_depth() const {
    int m = 0;
    for (const auto& s : slots_)
      if (s.tree) m = std::max(m, s.tree->depth());
    return m;
  }

  // -- geometry -------------------------------------------------------------

  GeometricEmbedding tree_embedding(const TreeCoords& c) const {
    require(in_extent(c), "tree_embedding: coordinates out of extent");
    GeometricEmbedding e;
    e.orientation = orientation_;
    for (int k = 0; k < 3; ++k) {
      const auto& list = coords_[static_cast<std::size_t>(k)];
      e.origin[k] = list[static_cast<std::size_t>(c[k])];
      e.size[k] = k < dimension_ ? list[static_cast<std::size_t>(c[k]) + 1] - e.origin[k] : 0.0;
    }
    return e;
  }

  std::pair<Vec3, Vec3> grid_bounds() const {
    Vec3 origin{0, 0, 0}, size{0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      const auto& list = coords_[static_cast<std::size_t>(k)];
      origin[k] = list.front();
      size[k] = k < dimension_ ? list.back() - list.front() : 0.0;
    }
    return {origin, size};
  }

  // -- material mask ---------------------------------------------------------

  bool has_mask() const { return mask_ != nullptr || local_mask_.has_value(); }

  void attach_mask() {
    if (has_mask()) return;
    if (finalized_) {
      mask_ = std::make_shared<BitVec>(array_length_, false);
    } else {
      local_mask_.emplace(slots_.size());
      for (std::size_t s = 0; s < slots_.size(); ++s)
        if (slots_[s].tree) (*local_mask_)[s].assign(slots_[s].tree->vertex_count(), false);
    }
  }

  void set_local_mask(const TreeCoords& c, std::uint32_t local, bool flag) {
    require(!finalized_, "set_local_mask: grid already finalized");
    attach_mask();
    (*local_mask_)[slot_of(c)][local] = flag;
  }

  bool mask_get(std::uint64_t g) const {
    require(g < array_length_, "mask_get: index out of range");
    return mask_ ? mask_->get(g) : false;
  }

  void mask_set(std::uint64_t g, bool flag) {
    require(finalized_, "mask_set: grid not finalized");
    require(g < array_length_, "mask_set: index out of range");
    attach_mask();
    mask_->set(g, flag);
  }

  const std::shared_ptr<BitVec>& mask_data() const { return mask_; }
  void set_mask_data(std::shared_ptr<BitVec> m) { mask_ = std::move(m); }

  /// Clones the mask storage when shared with another grid.
  void ensure_unique_mask() {
    attach_mask();
    if (mask_.use_count() > 1) mask_ = std::make_shared<BitVec>(*mask_);
  }

  // -- attribute fields -------------------------------------------------------

  std::size_t field_count() const { return fields_.size(); }

  std::size_t attach_field(const std::string& name) {
    require(!field_index(name).has_value(), "attach_field: duplicate field name");
    Field f;
    f.name = name;
    if (finalized_) {
      f.data = std::make_shared<std::vector<double>>(array_length_, 0.0);
    } else {
      f.local.resize(slots_.size());
      for (std::size_t s = 0; s < slots_.size(); ++s)
        if (slots_[s].tree) f.local[s].assign(slots_[s].tree->vertex_count(), 0.0);
    }
    fields_.push_back(std::move(f));
    return fields_.size() - 1;
  }

  std::optional<std::size_t> field_index(const std::string& name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
      if (fields_[i].name == name) return i;
    return std::nullopt;
  }

  const std::string& field_name(std::size_t i) const { return fields_[i].name; }

  double value(std::size_t field, std::uint64_t g) const {
    require(finalized_, "value: grid not finalized");
    return (*fields_[field].data)[g];
  }
  void set_value(std::size_t field, std::uint64_t g, double v) {
    require(finalized_, "set_value: grid not finalized");
    (*fields_[field].data)[g] = v;
  }
  void set_local_value(std::size_t field, const TreeCoords& c, std::uint32_t local, double v) {
    require(!finalized_, "set_local_value: grid already finalized");
    fields_[field].local[slot_of(c)][local] = v;
  }

  const std::shared_ptr<std::vector<double>>& field_data(std::size_t i) const { return fields_[i].data; }
  void set_field_data(std::size_t i, std::shared_ptr<std::vector<double>> d) {
    fields_[i].data = std::move(d);
  }
  void ensure_unique_field(std::size_t i) {
    if (fields_[i].data.use_count() > 1)
      fields_[i].data = std::make_shared<std::vector<double>>(*fields_[i].data);
  }

  // -- memory model -----------------------------------------------------------

  MemoryReport memory_report() const {
    MemoryReport r;
    for (const auto& s : slots_)
      if (s.tree) r.topology_bytes += s.tree->topology_model_bytes();
    for (const auto& list : coords_) r.coordinates_bytes += 8 * list.size();
    const std::uint64_t nv = vertex_count();
    if (has_mask()) r.mask_bytes = (nv + 7) / 8;
    r.attribute_bytes = 8 * nv * fields_.size();
    r.total_bytes = r.topology_bytes + r.coordinates_bytes + r.mask_bytes + r.attribute_bytes;
    return r;
  }

  // -- geometry-rewriting hooks (axis reflection) ------------------------------

  /// Replaces one coordinate list; lengths must match, used axes must stay
  /// strictly increasing.
  void set_axis_coordinates(int axis, std::vector<double> list) {
    auto& dst = coords_[static_cast<std::size_t>(axis)];
    require(list.size() == dst.size(), "set_axis_coordinates: length mismatch");
    if (axis < dimension_)
      for (std::size_t i = 0; i + 1 < list.size(); ++i)
        require(list[i] < list[i + 1], "set_axis_coordinates: not strictly increasing");
    dst = std::move(list);
  }

  /// Reorders slots: new slot s takes the old slot perm[s], with its tree,
  /// global index start and parity.
  void permute_slots(const std::vector<std::size_t>& perm) {
    require(perm.size() == slots_.size(), "permute_slots: size mismatch");
    std::vector<Slot> next(slots_.size());
    for (std::size_t s = 0; s < perm.size(); ++s) next[s] = slots_[perm[s]];
    slots_ = std::move(next);
  }

  /// Flips the geometric interpretation of child coordinates along `axis`
  /// in every tree (reflection support; attribute arrays are untouched).
  void toggle_parity(int axis) {
    for (auto& s : slots_) s.parity ^= static_cast<std::uint8_t>(1u << axis);
  }

  void set_slot_parity(std::size_t s, std::uint8_t parity) { slots_[s].parity = parity; }

 private:
  struct Slot {
    HyperTreePtr tree;
    std::uint64_t start = 0;
    std::uint8_t parity = 0;
  };
  struct Field {
    std::string name;
    std::shared_ptr<std::vector<double>> data;       // finalized storage
    std::vector<std::vector<double>> local;          // construction storage
  };

  int dimension_;
  int factor_;
  int orientation_;
  std::array<int, 3> extent_;
  std::array<std::vector<double>, 3> coords_;
  std::vector<Slot> slots_;
  std::vector<Field> fields_;
  std::shared_ptr<BitVec> mask_;
  std::optional<std::vector<std::vector<bool>>> local_mask_;
  bool finalized_ = false;
  std::uint64_t array_length_ = 0;
};

/// Convenience constructor mirroring the grid's primary creation contract.
inline HyperTreeGrid new_grid(int dimension, int factor, std::array<int, 3> extent,
                              std::array<std::vector<double>, 3> coordinates, int orientation = 0) {
  return HyperTreeGrid(dimension, factor, extent, std::move(coordinates), orientation);
}

}  // namespace htg
