#include "htg/filters.hpp"

#include <gtest/gtest.h>

#include <set>

#include "htg/generators.hpp"
#include "mesh_checks.hpp"

using htg::HyperTreeGrid;
using htg::Vec3;
using htg::operator+;
using htg::operator-;
using htg::operator*;

namespace {

std::multiset<std::array<long long, 3>> quantized_points(const std::vector<Vec3>& pts) {
  std::multiset<std::array<long long, 3>> out;
  for (const auto& p : pts)
    out.insert({std::llround(p[0] * 1e9), std::llround(p[1] * 1e9), std::llround(p[2] * 1e9)});
  return out;
}

std::uint64_t effective_leaf_count(const HyperTreeGrid& g) {
  std::uint64_t n = 0;
  htg::detail::for_each_leaf(g, [&](const htg::GeometricCursor&) { ++n; });
  return n;
}

}  // namespace

TEST(DepthLimiter, IdentityAboveTreeDepth) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 3, 0.5, 5);
  const auto out = htg::depth_limiter(g, 10);
  EXPECT_EQ(out.vertex_count(), g.vertex_count());
  EXPECT_EQ(out.leaf_count(), g.leaf_count());
  EXPECT_EQ(out.max_depth(), g.max_depth());
}

TEST(DepthLimiter, ZeroDepthCollapsesToRoots) {
  auto g = htg::generate_random(2, 2, {3, 2, 1}, 3, 0.8, 5);
  const auto out = htg::depth_limiter(g, 0);
  EXPECT_EQ(out.vertex_count(), out.slot_count());
  EXPECT_EQ(out.max_depth(), 0);
  EXPECT_FALSE(out.has_mask());  // input had none
}

TEST(DepthLimiter, LimitLeafSurvivesWithOneVisibleDescendant) {
  // Root subdivided twice; three of four depth-1 subtrees fully masked.
  auto g = checks::unit_grid(2, 2, {1, 1, 1});
  const auto e1 = g.subdivide({0, 0, 0}, 0);
  const auto e2 = g.subdivide({0, 0, 0}, e1);  // child 0 gets grandchildren
  g.finalize();
  g.attach_mask();
  // Mask everything except one grandchild of child 0.
  for (std::uint32_t v = e1 + 1; v < e1 + 4; ++v) g.mask_set(v, true);
  for (std::uint32_t v = e2; v < e2 + 3; ++v) g.mask_set(v, true);

  const auto out = htg::depth_limiter(g, 1);
  ASSERT_TRUE(out.has_mask());
  // Child 0 (cut at the limit) must be present: one grandchild is visible.
  EXPECT_FALSE(out.mask_get(out.global_index({0, 0, 0}, 1)));
  EXPECT_TRUE(out.mask_get(out.global_index({0, 0, 0}, 2)));
  EXPECT_EQ(out.max_depth(), 1);
}

TEST(DepthLimiter, FullyMaskedDescentIsDropped) {
  auto g = checks::unit_grid(1, 2, {1, 1, 1});
  const auto e1 = g.subdivide({0, 0, 0}, 0);
  const auto e2 = g.subdivide({0, 0, 0}, e1);
  g.finalize();
  g.attach_mask();
  g.mask_set(e2, true);
  g.mask_set(e2 + 1, true);  // child 0's whole descent masked
  const auto out = htg::depth_limiter(g, 1);
  EXPECT_TRUE(out.mask_get(out.global_index({0, 0, 0}, 1)));
  EXPECT_FALSE(out.mask_get(out.global_index({0, 0, 0}, 2)));
}

TEST(Threshold, FullRangeMasksNothing) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 3, 0.5, 9);
  const auto out = htg::threshold(g, "Depth", -1e300, 1e300);
  ASSERT_TRUE(out.has_mask());
  EXPECT_EQ(effective_leaf_count(out), effective_leaf_count(g));
}

TEST(Threshold, DepthBandMasksRootsAndDeepCells) {
  auto g = htg::generate_random(2, 2, {3, 2, 1}, 4, 0.7, 12);
  const auto out = htg::threshold(g, "Depth", 1, 3);
  ASSERT_TRUE(out.has_mask());
  htg::detail::for_each_leaf(out, [&](const htg::GeometricCursor& c) {
    const double depth = c.value(out.field_index("Depth").value());
    EXPECT_GE(c.depth(), 1);
    EXPECT_GE(depth, 1.0);
    EXPECT_LE(depth, 3.0);
  });
  // Depth-0 leaves of the input must be masked in the output.
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    if (g.tree_at_slot(s)->vertex_count() == 1) {
      EXPECT_TRUE(out.mask_get(out.start_at_slot(s)));
    }
  }
}

TEST(Threshold, EmptyRangeMasksEverything) {
  auto g = htg::generate_random(2, 3, {2, 1, 1}, 2, 0.5, 19);
  const auto out = htg::threshold(g, "Depth", 2, 1);
  EXPECT_EQ(effective_leaf_count(out), 0u);
  EXPECT_THROW(htg::threshold(g, "none", 0, 1), htg::Error);
}

TEST(Threshold, MaskPropagatesThroughContour) {
  // threshold-then-contour equals contouring with the threshold mask.
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 4, 0.6, 23);
  const auto masked = htg::threshold(g, "Depth", 1, 3);
  const auto from_masked = htg::contour(masked, "Depth", {1.5, 2.5});
  auto manual = g;
  manual.ensure_unique_mask();
  for (std::uint64_t i = 0; i < manual.array_length(); ++i)
    if (masked.mask_get(i)) manual.mask_set(i, true);
  const auto reference = htg::contour(manual, "Depth", {1.5, 2.5});
  EXPECT_TRUE(from_masked == reference);
}

TEST(AxisReflection, InvolutionOnDyadicCoordinates) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 3, 0.6, 31);
  const auto once = htg::axis_reflection(g, 0, 0.5);
  const auto twice = htg::axis_reflection(once, 0, 0.5);
  EXPECT_EQ(twice.coordinates(0), g.coordinates(0));
  const auto a = htg::cell_centers(g);
  const auto b = htg::cell_centers(twice);
  EXPECT_EQ(quantized_points(a.points), quantized_points(b.points));
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    EXPECT_EQ(twice.parity_at_slot(s), g.parity_at_slot(s));
    EXPECT_EQ(twice.tree_at_slot(s).get(), g.tree_at_slot(s).get());
  }
}

TEST(AxisReflection, MirrorsCellCenters) {
  auto g = htg::generate_random(2, 2, {2, 1, 1}, 3, 0.7, 37);
  const double omega = 1.0;
  const auto r = htg::axis_reflection(g, 0, omega);
  auto mirrored = htg::cell_centers(g);
  for (auto& p : mirrored.points) p[0] = 2 * omega - p[0];
  const auto reflected = htg::cell_centers(r);
  EXPECT_EQ(quantized_points(mirrored.points), quantized_points(reflected.points));
  EXPECT_EQ(r.vertex_count(), g.vertex_count());
  EXPECT_EQ(r.leaf_count(), g.leaf_count());
}

TEST(AxisReflection, SharesTopologyAndAttributes) {
  auto g = htg::generate_random(3, 2, {2, 2, 2}, 2, 0.5, 41);
  const auto r = htg::axis_reflection(g, 1, 0.0);
  std::set<const htg::HyperTree*> original, reflected;
  for (std::size_t s = 0; s < g.slot_count(); ++s) {
    original.insert(g.tree_at_slot(s).get());
    reflected.insert(r.tree_at_slot(s).get());
  }
  EXPECT_EQ(original, reflected);
  EXPECT_EQ(g.field_data(0).get(), r.field_data(0).get());
}

TEST(AxisCut, UnrefinedGridCrossSection) {
  auto g = htg::generate_random(3, 2, {2, 2, 1}, 0, 0.0, 1);
  const auto cut = htg::axis_cut(g, 0, 0.5);
  EXPECT_EQ(cut.dimension(), 2);
  EXPECT_EQ(cut.orientation(), 0);
  EXPECT_EQ(cut.extent()[0], 2);  // remaining axes y,z
  EXPECT_EQ(cut.extent()[1], 1);
  EXPECT_EQ(cut.slot_count(), 2u);
  EXPECT_EQ(cut.vertex_count(), 2u);
  EXPECT_DOUBLE_EQ(cut.coordinates(2)[0], 0.5);  // plane position recorded
}

TEST(AxisCut, RefinementMirrorsCutSlab) {
  // Refine cells along x in tree (0,0,0); cut at x=0.25 passes through
  // child layer 0 of the root.
  auto g = checks::unit_grid(3, 2, {2, 1, 1});
  const auto e = g.subdivide({0, 0, 0}, 0);
  g.subdivide({0, 0, 0}, e);  // child (0,0,0) refined again
  g.finalize();
  const auto cut = htg::axis_cut(g, 0, 0.1);
  EXPECT_EQ(cut.dimension(), 2);
  ASSERT_EQ(cut.slot_count(), 1u);
  // The slab crosses the refined octant twice: root subdivided (4
  // children), the (0,0) child subdivided again.
  EXPECT_EQ(cut.tree_at_slot(0)->vertex_count(), 1u + 4u + 4u);

  // Cutting at x=0.6 stays in the unrefined half of the root's children.
  const auto cut2 = htg::axis_cut(g, 0, 0.6);
  EXPECT_EQ(cut2.tree_at_slot(0)->vertex_count(), 1u + 4u);
}

TEST(AxisCut, HalfOpenRuleOnInterface) {
  auto g = checks::unit_grid(2, 2, {2, 1, 1});
  g.finalize();
  const auto cut = htg::axis_cut(g, 0, 1.0);  // exactly between the trees
  EXPECT_EQ(cut.dimension(), 1);
  EXPECT_EQ(cut.vertex_count(), 1u);  // one cell: the upper tree's column
  EXPECT_THROW(htg::axis_cut(g, 0, 2.0), htg::Error);
  EXPECT_THROW(htg::axis_cut(g, 0, -0.5), htg::Error);
}

TEST(AxisCut, ValuesAndMaskFollowSourceCells) {
  auto g = htg::generate_random(3, 2, {2, 1, 1}, 2, 0.7, 55);
  g.attach_mask();
  g.mask_set(0, false);
  const auto cut = htg::axis_cut(g, 2, 0.5);
  ASSERT_TRUE(cut.has_mask());
  const auto depth_idx = cut.field_index("Depth");
  ASSERT_TRUE(depth_idx.has_value());
  htg::detail::for_each_leaf(cut, [&](const htg::GeometricCursor& c) {
    EXPECT_DOUBLE_EQ(c.value(*depth_idx), c.depth());
  });
}

TEST(AxisClip, KeepAllModes) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 3, 0.5, 61);
  const auto half = htg::axis_clip(g, htg::ClipHalfspace{0, -10.0, +1});
  EXPECT_EQ(effective_leaf_count(half), effective_leaf_count(g));
  const auto [origin, size] = g.grid_bounds();
  const auto box = htg::axis_clip(g, htg::ClipBox{origin, size});
  EXPECT_EQ(effective_leaf_count(box), effective_leaf_count(g));
  ASSERT_TRUE(box.has_mask());
}

TEST(AxisClip, HalfspaceKeepsIntersectedCells) {
  auto g = checks::unit_grid(1, 2, {4, 1, 1});
  g.finalize();
  const auto out = htg::axis_clip(g, htg::ClipHalfspace{0, 1.5, +1});
  // Cells [0,1) masked; [1,2) intersected (kept); others inside.
  EXPECT_TRUE(out.mask_get(0));
  EXPECT_FALSE(out.mask_get(1));
  EXPECT_FALSE(out.mask_get(2));
  EXPECT_FALSE(out.mask_get(3));
  const auto neg = htg::axis_clip(g, htg::ClipHalfspace{0, 1.5, -1});
  EXPECT_FALSE(neg.mask_get(0));
  EXPECT_FALSE(neg.mask_get(1));
  EXPECT_TRUE(neg.mask_get(2));
}

TEST(AxisClip, QuadricKeepsAllCornersNonNegative) {
  // Unit-disc quadric over a 4x4 grid of quarter cells: a cell survives
  // only when 1 - x^2 - y^2 >= 0 at all four of its corners.
  auto g = htg::HyperTreeGrid(2, 2, {4, 4, 1},
                              {{{0, 0.25, 0.5, 0.75, 1}, {0, 0.25, 0.5, 0.75, 1}, {}}}, 2);
  g.finalize();
  htg::ClipQuadric q{};
  q.c[0] = 1;
  q.c[4] = -1;
  q.c[5] = -1;
  const auto out = htg::axis_clip(g, q);
  EXPECT_FALSE(out.mask_get(out.global_index({0, 0, 0}, 0)));  // all corners inside
  EXPECT_FALSE(out.mask_get(out.global_index({2, 0, 0}, 0)));
  EXPECT_TRUE(out.mask_get(out.global_index({3, 3, 0}, 0)));   // (1,1) corner: q = -1
  EXPECT_TRUE(out.mask_get(out.global_index({3, 2, 0}, 0)));   // straddles the circle
  htg::ClipQuadric zero{};
  EXPECT_THROW(htg::axis_clip(g, zero), htg::Error);
}

TEST(CellCenters, CentersAndScalars) {
  auto g = checks::unit_grid(2, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  g.finalize();
  htg::detail::attach_depth_field(g);
  const auto out = htg::cell_centers(g, true);
  ASSERT_EQ(out.points.size(), 4u);
  EXPECT_EQ(out.verts.size(), 4u);
  const auto expected = quantized_points({{0.25, 0.25, 0}, {0.75, 0.25, 0}, {0.25, 0.75, 0}, {0.75, 0.75, 0}});
  EXPECT_EQ(quantized_points(out.points), expected);
  for (double s : out.point_scalars) EXPECT_DOUBLE_EQ(s, 1.0);
}

TEST(CellCenters, SingleLeafAndMaskedGrid) {
  auto g = checks::unit_grid(3, 2, {1, 1, 1});
  g.finalize();
  const auto out = htg::cell_centers(g);
  ASSERT_EQ(out.points.size(), 1u);
  EXPECT_EQ(out.points[0], (Vec3{0.5, 0.5, 0.5}));
  EXPECT_TRUE(out.verts.empty());

  auto h = checks::unit_grid(2, 2, {1, 1, 1});
  h.finalize();
  h.mask_set(0, true);
  EXPECT_TRUE(htg::cell_centers(h).points.empty());
}

TEST(Geometry, SingleCubeHasSixQuads) {
  auto g = checks::unit_grid(3, 2, {1, 1, 1});
  g.finalize();
  const auto out = htg::geometry(g);
  EXPECT_EQ(out.polys.size(), 6u);
  EXPECT_EQ(out.points.size(), 8u);
}

TEST(Geometry, SharedFaceSuppressed) {
  auto g = checks::unit_grid(3, 2, {2, 1, 1});
  g.finalize();
  EXPECT_EQ(htg::geometry(g).polys.size(), 10u);
}

TEST(Geometry, MaskExposesInterface) {
  auto g = checks::unit_grid(3, 2, {2, 1, 1});
  g.finalize();
  g.mask_set(1, true);
  EXPECT_EQ(htg::geometry(g).polys.size(), 6u);
}

TEST(Geometry, TwoDimensionalQuadsPerLeaf) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 3, 0.5, 71);
  const auto out = htg::geometry(g);
  EXPECT_EQ(out.polys.size(), effective_leaf_count(g));
}

TEST(Geometry, FaceCountMatchesBruteForceOracle) {
  for (std::uint64_t seed : {3u, 14u, 15u}) {
    auto g = htg::generate_random(3, 2, {2, 2, 1}, 3, 0.5, seed);
    // Oracle: collect unmasked leaf boxes; a face is on the surface iff
    // the region just across it is not covered by an unmasked leaf.
    struct Box {
      Vec3 lo, hi;
    };
    std::vector<Box> boxes;
    htg::detail::for_each_leaf(g, [&](const htg::GeometricCursor& c) {
      boxes.push_back({c.origin(), c.origin() + c.size()});
    });
    std::size_t expected = 0;
    for (const auto& b : boxes)
      for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
          Vec3 probe = (b.lo + b.hi) * 0.5;
          const double eps = (b.hi[axis] - b.lo[axis]) * 1e-3;
          probe[axis] = side ? b.hi[axis] + eps : b.lo[axis] - eps;
          bool covered = false;
          for (const auto& o : boxes) {
            bool inside = true;
            for (int k = 0; k < 3; ++k)
              inside = inside && probe[k] > o.lo[k] - 1e-12 && probe[k] < o.hi[k] + 1e-12;
            if (inside) {
              covered = true;
              break;
            }
          }
          if (!covered) ++expected;
        }
    EXPECT_EQ(htg::geometry(g).polys.size(), expected) << "seed " << seed;
  }
}

TEST(PlaneCutter, AxisAlignedMatchesAxisCutSections) {
  auto g = htg::generate_random(3, 2, {2, 2, 1}, 2, 0.6, 77);
  const double w = 0.3;  // never on a dyadic cell interface
  const auto poly = htg::plane_cutter(g, {1, 0, 0}, w);
  const auto cut = htg::axis_cut(g, 0, w);
  EXPECT_EQ(poly.polys.size(), effective_leaf_count(cut));
}

TEST(PlaneCutter, MissingPlaneAndDegenerateNormal) {
  auto g = htg::generate_random(3, 2, {1, 1, 1}, 1, 1.0, 2);
  const auto out = htg::plane_cutter(g, {1, 0, 0}, 99.0);
  EXPECT_TRUE(out.polys.empty());
  EXPECT_THROW(htg::plane_cutter(g, {0, 0, 0}, 0.0), htg::Error);
}

TEST(PlaneCutter, ObliquePlaneThroughCube) {
  auto g = checks::unit_grid(3, 2, {1, 1, 1});
  g.finalize();
  const auto out = htg::plane_cutter(g, {1, 1, 1}, 1.5);
  ASSERT_EQ(out.polys.size(), 1u);
  const auto& poly = out.polys[0];
  EXPECT_GE(poly.size(), 3u);
  EXPECT_LE(poly.size(), 6u);
  for (auto id : poly) {
    const auto& p = out.points[id];
    EXPECT_NEAR(p[0] + p[1] + p[2], 1.5, 1e-12);
  }
}

TEST(PlaneCutter, DualModeIsConformingAndPlanar) {
  auto g = htg::generate_random(3, 2, {2, 2, 1}, 3, 0.5, 83);
  const auto out = htg::plane_cutter(g, {1, 0.3, 0.2}, 0.7, /*dual_mode=*/true);
  ASSERT_FALSE(out.polys.empty());
  // Every triangle edge interior to the section is shared by exactly two
  // triangles (conforming output).
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_count;
  for (const auto& tri : out.polys)
    for (std::size_t e = 0; e < tri.size(); ++e) {
      auto a = tri[e], b = tri[(e + 1) % tri.size()];
      if (a > b) std::swap(a, b);
      ++edge_count[{a, b}];
    }
  for (const auto& [edge, n] : edge_count) EXPECT_LE(n, 2);
}

TEST(ToUnstructured, ReplicatedCorners) {
  auto g = checks::unit_grid(3, 2, {1, 1, 1});
  g.finalize();
  const auto single = htg::to_unstructured(g);
  EXPECT_EQ(single.points.size(), 8u);
  EXPECT_EQ(single.cell_count(), 1u);

  auto h = checks::unit_grid(3, 2, {1, 1, 1});
  h.subdivide({0, 0, 0}, 0);
  h.finalize();
  const auto out = htg::to_unstructured(h);
  EXPECT_EQ(out.points.size(), 64u);
  EXPECT_EQ(out.cell_count(), 8u);

  auto q = checks::unit_grid(2, 2, {1, 1, 1});
  q.finalize();
  const auto quad = htg::to_unstructured(q);
  EXPECT_EQ(quad.points.size(), 4u);
  EXPECT_EQ(quad.cell_count(), 1u);
}

TEST(FootprintModel, FixedCostsDiluteWithDepth) {
  // Bytes per cell shrink as refinement deepens, and track cell count
  // roughly linearly once the per-tree fixed costs are diluted.
  double previous = 1e300;
  for (int depth = 1; depth <= 3; ++depth) {
    const auto g = htg::generate_random(3, 2, {10, 1, 1}, depth, 1.0, 1);
    const double per_cell =
        static_cast<double>(g.memory_report().total_bytes) / static_cast<double>(g.vertex_count());
    EXPECT_LT(per_cell, previous);
    previous = per_cell;
  }
}

TEST(ResourceGuard, EnvironmentLimitIsHonored) {
  setenv("HTG_MAX_CELLS", "10", 1);
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 2, 1.0, 3);
  EXPECT_THROW(htg::to_unstructured(g), htg::Error);
  EXPECT_THROW(htg::build_full_dual(g), htg::Error);
  unsetenv("HTG_MAX_CELLS");
  EXPECT_NO_THROW(htg::to_unstructured(g));
}

TEST(AbsentTrees, ReadAsFullyMaskedRegions) {
  auto g = checks::unit_grid(3, 2, {2, 1, 1});
  g.clear_tree({1, 0, 0});
  g.finalize();
  // The interface against the absent tree counts as exposed boundary.
  EXPECT_EQ(htg::geometry(g).polys.size(), 6u);
  const auto s = htg::MooreSupercursor::at_root(g, {0, 0, 0});
  const int right = htg::cursor_index_of_offset(htg::Neighborhood::moore, 3, {1, 0, 0});
  EXPECT_FALSE(s.state(right).valid());
  EXPECT_TRUE(s.is_masked(right));
  EXPECT_THROW(g.global_index({1, 0, 0}, 0), htg::Error);
  EXPECT_EQ(htg::cell_centers(g).points.size(), 1u);
}
