// Prints the modeled byte cost of complete binary octree grids against
// their explicit unstructured equivalent, one row per refinement depth.

#include <cstdio>

#include "htg/htg.hpp"

int main() {
  std::printf("%5s %12s %14s %16s %8s\n", "depth", "cells", "compact_bytes", "explicit_bytes",
              "ratio");
  for (int depth = 1; depth <= 4; ++depth) {
    const auto g = htg::generate_random(3, 2, {8, 1, 1}, depth, 1.0, 1);
    std::uint64_t leaves = 0;
    htg::detail::for_each_leaf(g, [&](const htg::GeometricCursor&) { ++leaves; });
    const auto compact = g.memory_report().total_bytes;
    const auto explicit_bytes = htg::to_unstructured_model_bytes(g, leaves);
    std::printf("%5d %12llu %14llu %16llu %8.1f\n", depth,
                static_cast<unsigned long long>(g.vertex_count()),
                static_cast<unsigned long long>(compact),
                static_cast<unsigned long long>(explicit_bytes),
                static_cast<double>(explicit_bytes) / static_cast<double>(compact));
  }
  return 0;
}
