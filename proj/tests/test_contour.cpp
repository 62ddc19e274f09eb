#include "htg/contour.hpp"

#include <gtest/gtest.h>

#include "htg/generators.hpp"
#include "mesh_checks.hpp"

using htg::GridCursor;
using htg::HyperTreeGrid;

namespace {

// Attaches a field filled per leaf (and per strict vertex) by a callback.
std::size_t attach_center_field(HyperTreeGrid& g, const std::string& name,
                                double (*fn)(const htg::Vec3&)) {
  const auto idx = g.attach_field(name);
  std::function<void(const htg::GeometricCursor&)> walk = [&](const htg::GeometricCursor& c) {
    g.set_value(idx, c.global_index(), fn(c.cell_center()));
    if (c.state().tree->is_leaf(c.vertex())) return;
    for (int i = 0; i < htg::ipow(g.factor(), g.dimension()); ++i) {
      auto child = c;
      child.to_child(i);
      walk(child);
    }
  };
  for (std::size_t s = 0; s < g.slot_count(); ++s)
    walk(htg::GeometricCursor::at_root(g, g.coords_of_slot(s)));
  return idx;
}

}  // namespace

TEST(SignArrays, UniformFieldHasNoTruth) {
  auto g = checks::unit_grid(2, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  const auto f = g.attach_field("V");
  g.finalize();
  for (std::uint64_t i = 0; i < g.vertex_count(); ++i) g.set_value(f, i, 5.0);
  const auto pre = htg::contour_preprocess(g, f, {3.0});
  for (std::uint64_t i = 0; i < g.vertex_count(); ++i) {
    EXPECT_TRUE(pre.signs[0].get(i));
    EXPECT_FALSE(pre.truth.get(i));
  }
}

TEST(SignArrays, DisagreeingChildrenRaiseTruth) {
  auto g = checks::unit_grid(1, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  const auto f = g.attach_field("V");
  g.finalize();
  g.set_value(f, 1, 1.0);
  g.set_value(f, 2, 9.0);
  const auto pre = htg::contour_preprocess(g, f, {5.0});
  EXPECT_TRUE(pre.truth.get(0));
  EXPECT_FALSE(pre.truth.get(1));
  EXPECT_FALSE(pre.signs[0].get(1));
  EXPECT_TRUE(pre.signs[0].get(2));
}

TEST(SignArrays, IsoTieFallsBelow) {
  auto g = checks::unit_grid(1, 2, {1, 1, 1});
  const auto f = g.attach_field("V");
  g.finalize();
  g.set_value(f, 0, 5.0);
  const auto pre = htg::contour_preprocess(g, f, {5.0});
  EXPECT_FALSE(pre.signs[0].get(0));  // strict comparison: equal is "below"
}

TEST(SignArrays, AgreeingChildrenInheritSign) {
  auto g = checks::unit_grid(1, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  const auto f = g.attach_field("V");
  g.finalize();
  g.set_value(f, 1, 7.0);
  g.set_value(f, 2, 8.0);
  const auto pre = htg::contour_preprocess(g, f, {5.0});
  EXPECT_FALSE(pre.truth.get(0));
  EXPECT_TRUE(pre.signs[0].get(0));
}

TEST(Contour, IsoOutsideRangeIsEmpty) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 3, 0.5, 7);
  const auto out = htg::contour(g, "Depth", {99.0});
  EXPECT_TRUE(out.points.empty());
  EXPECT_TRUE(out.lines.empty());
}

TEST(Contour, HorizontalSegmentAcrossDualQuad) {
  auto g = checks::unit_grid(2, 2, {1, 1, 1});
  g.subdivide({0, 0, 0}, 0);
  const auto f = g.attach_field("V");
  g.finalize();
  g.set_value(f, 1, 0.0);
  g.set_value(f, 2, 0.0);
  g.set_value(f, 3, 10.0);
  g.set_value(f, 4, 10.0);
  const auto out = htg::contour(g, f, {5.0});
  ASSERT_EQ(out.lines.size(), 1u);
  ASSERT_EQ(out.points.size(), 2u);
  for (const auto& p : out.points) EXPECT_DOUBLE_EQ(p[1], 0.5);
  const double x0 = out.points[out.lines[0][0]][0];
  const double x1 = out.points[out.lines[0][1]][0];
  EXPECT_DOUBLE_EQ(std::min(x0, x1), 0.25);
  EXPECT_DOUBLE_EQ(std::max(x0, x1), 0.75);
}

TEST(Contour, OneDimensionalEmitsCrossingPoint) {
  auto g = checks::unit_grid(1, 2, {2, 1, 1});
  const auto f = g.attach_field("V");
  g.finalize();
  g.set_value(f, 0, 0.0);
  g.set_value(f, 1, 10.0);
  const auto out = htg::contour(g, f, {5.0});
  ASSERT_EQ(out.verts.size(), 1u);
  EXPECT_DOUBLE_EQ(out.points[out.verts[0]][0], 1.0);
}

TEST(Contour, RejectsBadArguments) {
  auto g = htg::generate_random(2, 2, {1, 1, 1}, 1, 1.0, 3);
  EXPECT_THROW(htg::contour(g, "nope", {1.0}), htg::Error);
  EXPECT_THROW(htg::contour(g, "Depth", {}), htg::Error);
}

TEST(Contour, TwoStageMatchesUnconditional) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto g2 = htg::generate_random(2, seed % 2 ? 2 : 3, {2, 2, 1}, 3, 0.5, seed);
    const auto a2 = htg::contour(g2, "Depth", {0.5, 1.5, 2.5}, true);
    const auto b2 = htg::contour(g2, "Depth", {0.5, 1.5, 2.5}, false);
    EXPECT_TRUE(a2 == b2) << "d=2 seed " << seed;

    auto g3 = htg::generate_random(3, 2, {2, 1, 1}, 3, 0.4, seed);
    const auto a3 = htg::contour(g3, "Depth", {0.5, 1.5}, true);
    const auto b3 = htg::contour(g3, "Depth", {0.5, 1.5}, false);
    EXPECT_TRUE(a3 == b3) << "d=3 seed " << seed;
  }
}

TEST(Contour, LinearFieldStaysOnPlane) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 4, 0.6, 42);
  auto h = g;
  const auto f = attach_center_field(h, "X", [](const htg::Vec3& p) { return p[0]; });
  const double iso = 0.8125;
  const auto out = htg::contour(h, f, {iso});
  ASSERT_FALSE(out.points.empty());
  for (const auto& p : out.points) EXPECT_NEAR(p[0], iso, 1e-12);
}

TEST(Contour, SegmentsFormValenceTwoPolylines) {
  auto g = htg::generate_random(2, 2, {2, 2, 1}, 4, 0.6, 11);
  auto h = g;
  const auto f = attach_center_field(h, "X", [](const htg::Vec3& p) { return p[0]; });
  const auto out = htg::contour(h, f, {0.9});
  ASSERT_FALSE(out.lines.empty());
  std::vector<int> valence(out.points.size(), 0);
  for (const auto& l : out.lines) {
    ++valence[l[0]];
    ++valence[l[1]];
  }
  for (int v : valence) EXPECT_LE(v, 2);
}

TEST(Contour, NestedDepthContours) {
  // Refine one corner chain to depth 4 so all three families appear.
  auto g = checks::unit_grid(2, 2, {2, 3, 1});
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v = g.subdivide({0, 0, 0}, v);
  g.subdivide({1, 1, 0}, 0);
  g.finalize();
  htg::detail::attach_depth_field(g);
  const auto out = htg::contour(g, "Depth", {1.25, 2.5, 3.75});
  EXPECT_FALSE(out.lines.empty());
  // Each iso level must contribute: count segments per iso by rebuilding
  // single-iso outputs.
  for (double iso : {1.25, 2.5, 3.75})
    EXPECT_FALSE(htg::contour(g, "Depth", {iso}).lines.empty()) << iso;
}

TEST(Contour, MaskedRegionSuppressesDualCells) {
  auto g = checks::unit_grid(2, 2, {2, 1, 1});
  const auto f = g.attach_field("V");
  g.finalize();
  g.set_value(f, 0, 0.0);
  g.set_value(f, 1, 10.0);
  const auto with = htg::contour(g, f, {5.0});
  EXPECT_EQ(with.lines.size(), 0u);  // single dual cell at the shared corner
  EXPECT_EQ(with.verts.size(), 0u);

  // d=2: 2x2 roots, one carries the high value; masking it removes the
  // crossing entirely.
  auto h = checks::unit_grid(2, 2, {2, 2, 1});
  const auto fh = h.attach_field("V");
  h.finalize();
  h.set_value(fh, h.global_index({1, 1, 0}, 0), 10.0);
  const auto before = htg::contour(h, fh, {5.0});
  EXPECT_FALSE(before.lines.empty());
  h.mask_set(h.global_index({1, 1, 0}, 0), true);
  const auto after = htg::contour(h, fh, {5.0});
  EXPECT_TRUE(after.lines.empty());
}

TEST(Contour, ThreadedMergeMatchesSequential) {
  auto g = htg::generate_random(3, 2, {3, 2, 1}, 3, 0.5, 123);
  const auto idx = g.field_index("Depth").value();
  const std::vector<double> isos{0.5, 1.5, 2.5};
  const auto sequential = htg::contour(g, idx, isos);
  for (int threads : {2, 4}) {
    const auto parallel = htg::contour_threaded(g, idx, isos, threads);
    EXPECT_TRUE(parallel == sequential) << threads << " threads";
  }
}
