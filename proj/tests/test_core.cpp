#include "htg/grid.hpp"

#include <gtest/gtest.h>

using htg::HyperTreeGrid;
using htg::TreeCoords;
using htg::Vec3;

namespace {

HyperTreeGrid unit_grid(int d, int f, std::array<int, 3> extent) {
  std::array<std::vector<double>, 3> coords;
  for (int k = 0; k < 3; ++k) {
    if (k < d) {
      for (int i = 0; i <= extent[k]; ++i) coords[static_cast<std::size_t>(k)].push_back(i);
    }
  }
  return HyperTreeGrid(d, f, extent, coords, d == 3 ? 0 : 2);
}

}  // namespace

TEST(NewGrid, SingleLeafTreesWithCumulativeStarts) {
  auto g = HyperTreeGrid(2, 2, {3, 2, 1}, {{{0, 1, 2, 3}, {0, 1, 2}, {}}}, 2);
  EXPECT_EQ(g.slot_count(), 6u);
  g.finalize();
  std::vector<std::uint64_t> starts;
  for (std::size_t s = 0; s < g.slot_count(); ++s) starts.push_back(g.start_at_slot(s));
  EXPECT_EQ(starts, (std::vector<std::uint64_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(g.vertex_count(), 6u);
  EXPECT_EQ(g.leaf_count(), 6u);
  EXPECT_EQ(g.max_depth(), 0);
}

TEST(NewGrid, OneDimensionalTernary) {
  auto g = unit_grid(1, 3, {4, 1, 1});
  EXPECT_EQ(g.slot_count(), 4u);
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(g.tree_at_slot(s)->depth(), 0);
}

TEST(NewGrid, TernaryThreeDimensionalLayout) {
  auto g = unit_grid(3, 3, {3, 3, 2});
  EXPECT_EQ(g.slot_count(), 18u);
}

TEST(NewGrid, RejectsBadInput) {
  EXPECT_THROW(HyperTreeGrid(2, 2, {2, 2, 2}, {{{0, 1, 2}, {0, 1, 2}, {}}}, 2), htg::Error);
  EXPECT_THROW(HyperTreeGrid(2, 2, {2, 2, 1}, {{{0, 1}, {0, 1, 2}, {}}}, 2), htg::Error);
  EXPECT_THROW(HyperTreeGrid(2, 2, {2, 2, 1}, {{{0, 2, 1}, {0, 1, 2}, {}}}, 2), htg::Error);
  EXPECT_THROW(HyperTreeGrid(2, 4, {2, 2, 1}, {{{0, 1, 2}, {0, 1, 2}, {}}}, 2), htg::Error);
}

TEST(Subdivide, QuadtreeRoot) {
  auto g = unit_grid(2, 2, {1, 1, 1});
  const auto eldest = g.subdivide({0, 0, 0}, 0);
  EXPECT_EQ(eldest, 1u);
  EXPECT_EQ(g.tree_at({0, 0, 0})->vertex_count(), 5u);
}

TEST(Subdivide, TernaryOctreeRoot) {
  auto g = unit_grid(3, 3, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  EXPECT_EQ(g.tree_at({0, 0, 0})->vertex_count(), 28u);
}

TEST(Subdivide, RootThenChildBintree) {
  auto g = unit_grid(1, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  g.subdivide({0, 0, 0}, 1);
  const auto& t = *g.tree_at({0, 0, 0});
  EXPECT_EQ(t.vertex_count(), 5u);
  EXPECT_EQ(t.strict_node_count(), 2u);
  EXPECT_FALSE(t.is_leaf(0));
  EXPECT_FALSE(t.is_leaf(1));
  EXPECT_TRUE(t.is_leaf(2));
  EXPECT_TRUE(t.is_leaf(3));
  EXPECT_TRUE(t.is_leaf(4));
  EXPECT_EQ(t.depth(), 2);
}

TEST(Subdivide, RejectsStrictAndOutOfRange) {
  auto g = unit_grid(2, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  EXPECT_THROW(g.subdivide({0, 0, 0}, 0), htg::Error);
  EXPECT_THROW(g.subdivide({0, 0, 0}, 99), htg::Error);
}

TEST(GlobalIndex, DirectSubstitution) {
  auto g = unit_grid(1, 2, {2, 1, 1});
  g.finalize();
  EXPECT_EQ(g.global_index({0, 0, 0}, 0), 0u);
  EXPECT_EQ(g.global_index({1, 0, 0}, 0), 1u);
  EXPECT_THROW(g.global_index({1, 0, 0}, 1), htg::Error);
}

TEST(GlobalIndex, CumulativeStartsPartitionWithoutGaps) {
  auto g = unit_grid(2, 2, {2, 2, 1});
  g.subdivide({0, 0, 0}, 0);
  g.subdivide({0, 0, 0}, 2);
  g.subdivide({1, 1, 0}, 0);
  g.finalize();
  std::uint64_t expected = 0;
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    EXPECT_EQ(g.start_at_slot(s), expected);
    expected += g.tree_at_slot(s)->vertex_count();
  }
  EXPECT_EQ(expected, g.vertex_count());
  EXPECT_EQ(g.array_length(), g.vertex_count());
}

TEST(GlobalIndex, ExplicitStartsValidated) {
  auto g = unit_grid(1, 2, {2, 1, 1});
  EXPECT_NO_THROW(g.finalize(std::vector<std::uint64_t>{100, 5}));
  EXPECT_EQ(g.global_index({0, 0, 0}, 0), 100u);
  EXPECT_EQ(g.global_index({1, 0, 0}, 0), 5u);

  auto h = unit_grid(1, 2, {2, 1, 1});
  h.subdivide({0, 0, 0}, 0);
  EXPECT_THROW(h.finalize(std::vector<std::uint64_t>{0, 1}), htg::Error);
}

TEST(TreeEmbedding, ReadsCoordinateLists) {
  auto g = HyperTreeGrid(2, 2, {3, 2, 1}, {{{0, 1, 2, 3}, {0, 2, 4}, {}}}, 2);
  const auto e = g.tree_embedding({2, 1, 0});
  EXPECT_EQ(e.origin, (Vec3{2, 2, 0}));
  EXPECT_EQ(e.size, (Vec3{1, 2, 0}));
  const auto first = g.tree_embedding({0, 0, 0});
  EXPECT_EQ(first.origin, (Vec3{0, 0, 0}));
  EXPECT_THROW(g.tree_embedding({3, 0, 0}), htg::Error);
}

TEST(TreeEmbedding, UnitGrid) {
  auto g = unit_grid(3, 2, {1, 1, 1});
  const auto e = g.tree_embedding({0, 0, 0});
  EXPECT_EQ(e.origin, (Vec3{0, 0, 0}));
  EXPECT_EQ(e.size, (Vec3{1, 1, 1}));
}

TEST(GridBounds, ComponentwiseSpan) {
  auto g = HyperTreeGrid(2, 2, {3, 2, 1}, {{{0, 1, 2, 3}, {0, 2, 4}, {}}}, 2);
  const auto [origin, size] = g.grid_bounds();
  EXPECT_EQ(origin, (Vec3{0, 0, 0}));
  EXPECT_EQ(size, (Vec3{3, 4, 0}));
}

TEST(GridBounds, MatchesTreeEmbeddingHull) {
  auto g = HyperTreeGrid(2, 3, {2, 3, 1}, {{{5, 6, 8}, {-1, 0, 2, 7}, {}}}, 2);
  Vec3 lo{1e300, 1e300, 0}, hi{-1e300, -1e300, 0};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto e = g.tree_embedding({i, j, 0});
      for (int k = 0; k < 2; ++k) {
        lo[k] = std::min(lo[k], e.origin[k]);
        hi[k] = std::max(hi[k], e.origin[k] + e.size[k]);
      }
    }
  const auto [origin, size] = g.grid_bounds();
  for (int k = 0; k < 2; ++k) {
    EXPECT_DOUBLE_EQ(origin[k], lo[k]);
    EXPECT_DOUBLE_EQ(origin[k] + size[k], hi[k]);
  }
  EXPECT_EQ(g.grid_bounds().first[0], 5);
}

TEST(MemoryReport, TopologyModel) {
  auto g = unit_grid(1, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);  // m = 1
  g.finalize();
  EXPECT_EQ(g.memory_report().topology_bytes, 4u);  // 4(2m-1)

  auto h = unit_grid(2, 2, {3, 1, 1});
  h.finalize();
  EXPECT_EQ(h.memory_report().topology_bytes, 0u);  // m = 0 everywhere
}

TEST(MemoryReport, BfsTreeWithinModelBounds) {
  // d=3, f=2, m=10 strict nodes: expected in [4(2m-1), 4(1+(m-1)(1+f^d))] = [76, 328].
  auto g = unit_grid(3, 2, {1, 1, 1});
  std::uint32_t next = 0;
  for (int m = 0; m < 10; ++m) next = g.subdivide({0, 0, 0}, m == 0 ? 0 : next + static_cast<std::uint32_t>(m % 8));
  g.finalize();
  const auto topo = g.memory_report().topology_bytes;
  EXPECT_GE(topo, 76u);
  EXPECT_LE(topo, 328u);
  EXPECT_EQ(topo, 4u * (2 * 10 - 1));
}

TEST(MemoryReport, TotalsAddUp) {
  auto g = unit_grid(2, 2, {2, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  g.attach_field("Depth");
  g.finalize();
  g.attach_mask();
  const auto r = g.memory_report();
  EXPECT_EQ(r.total_bytes, r.topology_bytes + r.coordinates_bytes + r.mask_bytes + r.attribute_bytes);
  EXPECT_EQ(r.coordinates_bytes, 8u * (3 + 2 + 2));
  EXPECT_EQ(r.attribute_bytes, 8u * g.vertex_count());
  EXPECT_EQ(r.mask_bytes, (g.vertex_count() + 7) / 8);
}

TEST(StrictRatio, WithinBandForAllStrictCounts) {
  // strict/total = m / (1 + m f^d) is increasing in m, equals the lower
  // band edge at m=1 and approaches 1/f^d from below.
  for (int d = 1; d <= 3; ++d)
    for (int f = 2; f <= 3; ++f) {
      const double fd = htg::ipow(f, d);
      for (int m = 1; m < 4000; m += 7) {
        const double ratio = m / (1.0 + m * fd);
        EXPECT_GE(ratio, 1.0 / (1.0 + fd) - 1e-15);
        EXPECT_LE(ratio, 1.0 / fd + 1e-15);
      }
    }
}

TEST(Mask, DefaultsToVisible) {
  auto g = unit_grid(2, 2, {1, 1, 1});
  g.finalize();
  EXPECT_FALSE(g.has_mask());
  EXPECT_FALSE(g.mask_get(0));
  g.mask_set(0, true);
  EXPECT_TRUE(g.has_mask());
  EXPECT_TRUE(g.mask_get(0));
  EXPECT_THROW(g.mask_set(99, true), htg::Error);
}

TEST(Fields, GrowWithSubdivisionAndConcatenate) {
  auto g = unit_grid(1, 2, {2, 1, 1});
  const auto f = g.attach_field("Value");
  g.set_local_value(f, {0, 0, 0}, 0, 7.0);
  g.subdivide({1, 0, 0}, 0);
  g.set_local_value(f, {1, 0, 0}, 2, 3.5);
  g.finalize();
  EXPECT_DOUBLE_EQ(g.value(f, 0), 7.0);
  EXPECT_DOUBLE_EQ(g.value(f, g.global_index({1, 0, 0}, 0)), 0.0);
  EXPECT_DOUBLE_EQ(g.value(f, g.global_index({1, 0, 0}, 2)), 3.5);
  EXPECT_THROW(g.attach_field("Value"), htg::Error);
}

TEST(Copies, ShareTopologyAndFieldStorage) {
  auto g = unit_grid(2, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  const auto f = g.attach_field("Value");
  g.finalize();
  HyperTreeGrid copy = g;
  EXPECT_EQ(copy.tree_at_slot(0).get(), g.tree_at_slot(0).get());
  EXPECT_EQ(copy.field_data(f).get(), g.field_data(f).get());
  copy.ensure_unique_field(f);
  EXPECT_NE(copy.field_data(f).get(), g.field_data(f).get());
}

TEST(TreeInvariants, VertexCountFormulaAndContiguousBlocks) {
  // v = 1 + m f^d, child blocks disjoint, eldest strictly increasing under
  // breadth-first construction.
  for (int d = 1; d <= 3; ++d)
    for (int f = 2; f <= 3; ++f) {
      auto g = unit_grid(d, f, {1, 1, 1});
      std::vector<std::pair<std::uint32_t, int>> queue{{0u, 0}};
      std::uint64_t hash = 12345;
      for (std::size_t q = 0; q < queue.size(); ++q) {
        const auto [v, depth] = queue[q];
        hash = hash * 6364136223846793005ull + 1442695040888963407ull;
        if (depth >= 3 || hash % 3 == 0) continue;
        const auto eldest = g.subdivide({0, 0, 0}, v);
        for (int i = 0; i < htg::ipow(f, d); ++i)
          queue.emplace_back(eldest + static_cast<std::uint32_t>(i), depth + 1);
      }
      const auto& t = *g.tree_at({0, 0, 0});
      EXPECT_EQ(t.vertex_count(), 1u + t.strict_node_count() * htg::ipow(f, d));
      EXPECT_EQ(t.leaf_count(), t.vertex_count() - t.strict_node_count());
      const auto& eldest = t.eldest_child_list();
      for (std::size_t i = 0; i + 1 < eldest.size(); ++i) {
        EXPECT_LT(eldest[i], eldest[i + 1]);
        EXPECT_LE(eldest[i] + static_cast<std::uint32_t>(htg::ipow(f, d)), eldest[i + 1]);
      }
    }
}

TEST(TreeInvariants, ParentOfEldestPointsBackToStrictNode) {
  auto g = unit_grid(2, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  g.subdivide({0, 0, 0}, 3);
  const auto& t = *g.tree_at({0, 0, 0});
  ASSERT_EQ(t.parent_of_eldest_list().size(), 2u);
  EXPECT_EQ(t.parent_of_eldest_list()[0], htg::kInvalidIndex);  // root sentinel
  EXPECT_EQ(t.parent_of_eldest_list()[1], 3u);
  EXPECT_EQ(t.eldest_child(3), 5u);
}
