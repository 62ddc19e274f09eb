#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "htg/common.hpp"

namespace htg {

/// Refinement tree of a single root cell, topology only.
///
/// Leaves are implicit: the per-vertex eldest-child lookup is the only
/// structure consulted during traversal, and the canonical storage cost
/// accounts one eldest-child index per strict node plus one parent
/// back-reference per non-root child block (4 bytes each).
class HyperTree {
 public:
  HyperTree(int dimension, int factor) : dimension_(dimension), factor_(factor) {
    require(dimension >= 1 && dimension <= 3, "HyperTree: dimension must be 1..3");
    require(factor == 2 || factor == 3, "HyperTree: factor must be 2 or 3");
    eldest_by_vertex_.push_back(kInvalidIndex);
    depth_by_vertex_.push_back(0);
  }

  int dimension() const { return dimension_; }
  int factor() const { return factor_; }
  int children_per_node() const { return ipow(factor_, dimension_); }

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(eldest_by_vertex_.size()); }
  std::uint32_t strict_node_count() const { return static_cast<std::uint32_t>(eldest_child_.size()); }
  std::uint32_t leaf_count() const { return vertex_count() - strict_node_count(); }
  int depth() const { return max_depth_; }

  bool is_leaf(std::uint32_t v) const { return eldest_by_vertex_[v] == kInvalidIndex; }
  std::uint32_t eldest_child(std::uint32_t v) const { return eldest_by_vertex_[v]; }
  std::uint32_t child(std::uint32_t v, int i) const { return eldest_by_vertex_[v] + static_cast<std::uint32_t>(i); }
  int vertex_depth(std::uint32_t v) const { return depth_by_vertex_[v]; }

  /// Per-strict-ordinal views, in creation order.
  const std::vector<std::uint32_t>& eldest_child_list() const { return eldest_child_; }
  const std::vector<std::uint32_t>& parent_of_eldest_list() const { return parent_of_eldest_; }

  /// Splits leaf `v` into f^d children appended as one contiguous block.
  /// Returns the vertex index of the eldest child.
  std::uint32_t subdivide(std::uint32_t v) {
    require(v < vertex_count(), "subdivide: vertex out of range");
    require(is_leaf(v), "subdivide: vertex is already a strict node");
    const std::uint32_t eldest = vertex_count();
    const int n = children_per_node();
    const std::uint8_t child_depth = static_cast<std::uint8_t>(depth_by_vertex_[v] + 1);
    eldest_by_vertex_.insert(eldest_by_vertex_.end(), static_cast<std::size_t>(n), kInvalidIndex);
    depth_by_vertex_.insert(depth_by_vertex_.end(), static_cast<std::size_t>(n), child_depth);
    eldest_by_vertex_[v] = eldest;
    eldest_child_.push_back(eldest);
    parent_of_eldest_.push_back(v == 0 ? kInvalidIndex : v);
    if (child_depth > max_depth_) max_depth_ = child_depth;
    return eldest;
  }

  /// Canonical topology cost in bytes: 4 bytes per eldest-child index (m
  /// entries) plus 4 bytes per parent back-reference (m-1 entries, the root
  /// block's sentinel is not materialized).
  std::uint64_t topology_model_bytes() const {
    const std::uint64_t m = strict_node_count();
    return m == 0 ? 0 : 4 * (m + (m - 1));
  }

 private:
  int dimension_;
  int factor_;
  int max_depth_ = 0;
  std::vector<std::uint32_t> eldest_child_;
  std::vector<std::uint32_t> parent_of_eldest_;
  // Traversal acceleration; not part of the canonical cost model.
  std::vector<std::uint32_t> eldest_by_vertex_;
  std::vector<std::uint8_t> depth_by_vertex_;
};

using HyperTreePtr = std::shared_ptr<HyperTree>;

}  // namespace htg
