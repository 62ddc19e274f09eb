// Command line front end: generate, inspect, filter, contour, export and
// benchmark hypertree grids.  Output is line-oriented key=value for
// scripting; `info --pretty` prints a table instead.

#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "htg/htg.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::array<int, 3> parse_extent(const std::string& csv) {
  std::array<int, 3> e{1, 1, 1};
  std::stringstream ss(csv);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',') && i < 3) e[i++] = std::stoi(item);
  return e;
}

void print_summary(const htg::HyperTreeGrid& g) {
  const auto r = g.memory_report();
  std::cout << "dimension=" << g.dimension() << "\n"
            << "factor=" << g.factor() << "\n"
            << "extent=" << g.extent()[0] << "," << g.extent()[1] << "," << g.extent()[2] << "\n"
            << "orientation=" << g.orientation() << "\n"
            << "trees=" << g.slot_count() << "\n"
            << "vertices=" << g.vertex_count() << "\n"
            << "leaves=" << g.leaf_count() << "\n"
            << "depth=" << g.max_depth() << "\n"
            << "mask=" << (g.has_mask() ? 1 : 0) << "\n"
            << "fields=" << g.field_count() << "\n"
            << "topology_bytes=" << r.topology_bytes << "\n"
            << "coordinates_bytes=" << r.coordinates_bytes << "\n"
            << "mask_bytes=" << r.mask_bytes << "\n"
            << "attribute_bytes=" << r.attribute_bytes << "\n"
            << "total_bytes=" << r.total_bytes << "\n";
}

void print_pretty(const htg::HyperTreeGrid& g) {
  const auto r = g.memory_report();
  std::cout << "hypertree grid  d=" << g.dimension() << " f=" << g.factor() << "  extent "
            << g.extent()[0] << "x" << g.extent()[1] << "x" << g.extent()[2] << "\n"
            << "  trees      " << g.slot_count() << "\n"
            << "  vertices   " << g.vertex_count() << "  (leaves " << g.leaf_count() << ")\n"
            << "  depth      " << g.max_depth() << "\n"
            << "  mask       " << (g.has_mask() ? "yes" : "no") << "\n";
  std::cout << "  fields     ";
  for (std::size_t f = 0; f < g.field_count(); ++f)
    std::cout << (f ? ", " : "") << g.field_name(f);
  std::cout << (g.field_count() ? "\n" : "none\n");
  std::cout << "  modeled bytes  total " << r.total_bytes << " = topology " << r.topology_bytes
            << " + coordinates " << r.coordinates_bytes << " + mask " << r.mask_bytes
            << " + attributes " << r.attribute_bytes << "\n";
}

htg::PolygonalOutput unstructured_as_polydata(const htg::UnstructuredMesh& mesh) {
  htg::PolygonalOutput out;
  out.points = mesh.points;
  const auto cells = mesh.cell_count();
  for (std::size_t c = 0; c < cells; ++c) {
    const auto* v = mesh.connectivity.data() + c * static_cast<std::size_t>(mesh.corners);
    switch (mesh.corners) {
      case 2:
        out.lines.push_back({v[0], v[1]});
        break;
      case 4:
        out.polys.push_back({v[0], v[1], v[3], v[2]});
        break;
      default:
        // Binary-plane faces of the voxel, explicit and non-conforming.
        out.polys.push_back({v[0], v[2], v[6], v[4]});
        out.polys.push_back({v[1], v[3], v[7], v[5]});
        out.polys.push_back({v[0], v[1], v[5], v[4]});
        out.polys.push_back({v[2], v[3], v[7], v[6]});
        out.polys.push_back({v[0], v[1], v[3], v[2]});
        out.polys.push_back({v[4], v[5], v[7], v[6]});
        break;
    }
  }
  return out;
}

void write_polydata(const htg::PolygonalOutput& poly, const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv")
    htg::export_csv_points(poly, path);
  else
    htg::export_obj(poly, path);
}

int run(int argc, char** argv) {
  CLI::App app{"hypertree grid toolkit"};
  app.require_subcommand(1);

  // --- generate -------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "create a grid and write it to a file");
  bool gen_random = false, gen_octant = false;
  int gd = 2, gf = 2, gdepth = 3, glevels = 5;
  double gprob = 0.5;
  std::uint64_t gseed = 0;
  std::string gextent = "2,2,1", gresolution = "5,5,6", gout;
  generate->add_flag("--random", gen_random, "seeded random refinement");
  generate->add_flag("--octant", gen_octant, "truncated unit-ball octant workload");
  generate->add_option("-d,--dimension", gd);
  auto* gen_factor_opt = generate->add_option("-f,--factor", gf);
  generate->add_option("-E,--extent", gextent, "root layout, e.g. 3,3,2");
  generate->add_option("--depth", gdepth, "maximum refinement depth");
  generate->add_option("--prob", gprob, "split probability");
  generate->add_option("--seed", gseed);
  generate->add_option("--resolution", gresolution, "octant root layout");
  generate->add_option("--levels", glevels, "octant refinement cap");
  generate->add_option("-o,--output", gout)->required();

  // --- info -----------------------------------------------------------------
  auto* info = app.add_subcommand("info", "summarize a grid file");
  std::string info_in;
  bool info_pretty = false, info_dump = false;
  info->add_option("-i,--input", info_in)->required();
  info->add_flag("--pretty", info_pretty, "human-readable table");
  info->add_flag("--dump", info_dump, "per-tree structure dump");

  // --- filter ----------------------------------------------------------------
  auto* filter = app.add_subcommand("filter", "apply a grid-to-grid filter");
  std::string filter_name, filter_in, filter_out, filter_field = "Depth";
  int fl_axis = 0, fl_depth = 0, fl_side = 1;
  double fl_omega = 0, fl_w = 0, fl_lo = 0, fl_hi = 0;
  std::string fl_box, fl_quadric;
  filter->add_option("name", filter_name,
                     "depth-limiter | threshold | axis-reflection | axis-cut | axis-clip")
      ->required();
  filter->add_option("-i,--input", filter_in)->required();
  filter->add_option("-o,--output", filter_out)->required();
  filter->add_option("--field", filter_field);
  filter->add_option("--depth", fl_depth);
  filter->add_option("--axis", fl_axis);
  filter->add_option("--omega", fl_omega);
  filter->add_option("--w", fl_w);
  filter->add_option("--lo", fl_lo);
  filter->add_option("--hi", fl_hi);
  filter->add_option("--side", fl_side, "+1 keeps the upper half-space, -1 the lower");
  filter->add_option("--box", fl_box, "ox,oy,oz,sx,sy,sz");
  filter->add_option("--quadric", fl_quadric, "c0,...,c9");

  // --- contour ----------------------------------------------------------------
  auto* contour_cmd = app.add_subcommand("contour", "dual-based iso-contouring");
  std::string ct_in, ct_out, ct_csv, ct_field = "Depth", ct_isos = "0.5";
  bool ct_single_stage = false;
  int ct_threads = 1;
  contour_cmd->add_option("-i,--input", ct_in)->required();
  contour_cmd->add_option("-o,--output", ct_out)->required();
  contour_cmd->add_option("--csv", ct_csv, "also export points as CSV");
  contour_cmd->add_option("--field", ct_field);
  contour_cmd->add_option("--isovalues", ct_isos)->required();
  contour_cmd->add_flag("--single-stage", ct_single_stage, "skip the pre-selection pass");
  contour_cmd->add_option("--threads", ct_threads, "per-tree parallelism (default 1)");

  // --- export -----------------------------------------------------------------
  auto* export_cmd = app.add_subcommand("export", "polygonal extraction from a grid");
  std::string ex_in, ex_out, ex_what = "geometry", ex_normal = "1,0,0";
  double ex_offset = 0;
  bool ex_dual_mode = false;
  export_cmd->add_option("-i,--input", ex_in)->required();
  export_cmd->add_option("-o,--output", ex_out)->required();
  export_cmd
      ->add_option("--what", ex_what,
                   "geometry | centers | dual | dual-adjusted | unstructured | plane-cut")
      ->required();
  export_cmd->add_option("--normal", ex_normal, "plane normal for plane-cut");
  export_cmd->add_option("--offset", ex_offset, "plane offset for plane-cut");
  export_cmd->add_flag("--dual", ex_dual_mode, "conforming dual mode for plane-cut");

  // --- bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "scaling study over complete refinements");
  bool bench_scaling = false;
  std::string bench_depths = "1..4";
  int bench_trees = 150, bench_d = 3, bench_f = 2;
  bench->add_flag("--scaling", bench_scaling);
  bench->add_option("--depths", bench_depths, "inclusive range, e.g. 1..6");
  bench->add_option("-E,--trees", bench_trees, "number of root cells");
  bench->add_option("-d,--dimension", bench_d);
  bench->add_option("-f,--factor", bench_f);

  // --- tables -----------------------------------------------------------------
  auto* tables = app.add_subcommand("tables", "traversal table census, checks and dumps");
  bool tb_check = false;
  std::string tb_dump, tb_table = "parent";
  int tb_d = 2, tb_f = 2, tb_corner_d = 0;
  tables->add_flag("--check", tb_check, "verify census and golden rows");
  tables->add_option("--dump", tb_dump, "von-neumann | moore");
  tables->add_option("-d,--dimension", tb_d);
  tables->add_option("-f,--factor", tb_f);
  tables->add_option("--table", tb_table, "parent | child");
  tables->add_option("--corner", tb_corner_d, "dump the corner-neighbor table for dimension");

  CLI11_PARSE(app, argc, argv);

  if (*generate) {
    htg::require(gen_random != gen_octant, "generate: pick exactly one of --random / --octant");
    if (gen_octant && gen_factor_opt->count() == 0) gf = 3;  // ternary workload by default
    const auto start = Clock::now();
    auto g = gen_random ? htg::generate_random(gd, gf, parse_extent(gextent), gdepth, gprob, gseed)
                        : htg::generate_octant(parse_extent(gresolution), gf, glevels);
    const double built = seconds_since(start);
    htg::write_grid(g, gout);
    std::cout << "mode=" << (gen_random ? "random" : "octant") << "\n";
    print_summary(g);
    std::cout << "build_seconds=" << built << "\noutput=" << gout << "\n";
    return 0;
  }

  if (*info) {
    const auto g = htg::read_grid(info_in);
    if (info_dump) htg::dump_grid_text(g, std::cout);
    if (info_pretty)
      print_pretty(g);
    else if (!info_dump)
      print_summary(g);
    return 0;
  }

  if (*filter) {
    const auto g = htg::read_grid(filter_in);
    const auto start = Clock::now();
    htg::HyperTreeGrid out = [&]() -> htg::HyperTreeGrid {
      if (filter_name == "depth-limiter") return htg::depth_limiter(g, fl_depth);
      if (filter_name == "threshold") return htg::threshold(g, filter_field, fl_lo, fl_hi);
      if (filter_name == "axis-reflection") return htg::axis_reflection(g, fl_axis, fl_omega);
      if (filter_name == "axis-cut") return htg::axis_cut(g, fl_axis, fl_w);
      if (filter_name == "axis-clip") {
        if (!fl_box.empty()) {
          const auto v = parse_doubles(fl_box);
          htg::require(v.size() == 6, "axis-clip: --box needs 6 numbers");
          return htg::axis_clip(g, htg::ClipBox{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
        }
        if (!fl_quadric.empty()) {
          const auto v = parse_doubles(fl_quadric);
          htg::require(v.size() == 10, "axis-clip: --quadric needs 10 coefficients");
          htg::ClipQuadric q;
          std::copy(v.begin(), v.end(), q.c.begin());
          return htg::axis_clip(g, q);
        }
        return htg::axis_clip(g, htg::ClipHalfspace{fl_axis, fl_omega, fl_side});
      }
      throw htg::Error("filter: unknown filter '" + filter_name + "'");
    }();
    const double elapsed = seconds_since(start);
    htg::write_grid(out, filter_out);
    std::cout << "filter=" << filter_name << "\n";
    print_summary(out);
    std::cout << "filter_seconds=" << elapsed << "\noutput=" << filter_out << "\n";
    return 0;
  }

  if (*contour_cmd) {
    const auto g = htg::read_grid(ct_in);
    const auto idx = g.field_index(ct_field);
    htg::require(idx.has_value(), "contour: unknown field '" + ct_field + "'");
    const auto isos = parse_doubles(ct_isos);
    const auto start = Clock::now();
    const auto poly = htg::contour_threaded(g, *idx, isos, ct_threads, !ct_single_stage);
    const double elapsed = seconds_since(start);
    write_polydata(poly, ct_out);
    if (!ct_csv.empty()) htg::export_csv_points(poly, ct_csv);
    std::cout << "points=" << poly.points.size() << "\ncells=" << poly.cell_count()
              << "\ncontour_seconds=" << elapsed << "\noutput=" << ct_out << "\n";
    return 0;
  }

  if (*export_cmd) {
    const auto g = htg::read_grid(ex_in);
    htg::PolygonalOutput poly;
    if (ex_what == "geometry") {
      poly = htg::geometry(g);
    } else if (ex_what == "centers") {
      poly = htg::cell_centers(g, true);
    } else if (ex_what == "dual" || ex_what == "dual-adjusted") {
      poly = unstructured_as_polydata(htg::build_full_dual(g, ex_what == "dual-adjusted"));
    } else if (ex_what == "unstructured") {
      const auto mesh = htg::to_unstructured(g);
      std::cout << "unstructured_points=" << mesh.points.size()
                << "\nunstructured_cells=" << mesh.cell_count()
                << "\nunstructured_model_bytes=" << mesh.model_bytes()
                << "\ncompact_model_bytes=" << g.memory_report().total_bytes << "\n";
      poly = unstructured_as_polydata(mesh);
    } else if (ex_what == "plane-cut") {
      const auto n = parse_doubles(ex_normal);
      htg::require(n.size() == 3, "plane-cut: --normal needs 3 numbers");
      poly = htg::plane_cutter(g, {n[0], n[1], n[2]}, ex_offset, ex_dual_mode);
    } else {
      throw htg::Error("export: unknown extraction '" + ex_what + "'");
    }
    write_polydata(poly, ex_out);
    std::cout << "points=" << poly.points.size() << "\ncells=" << poly.cell_count()
              << "\noutput=" << ex_out << "\n";
    return 0;
  }

  if (*bench) {
    htg::require(bench_scaling, "bench: only --scaling is available");
    const auto sep = bench_depths.find("..");
    htg::require(sep != std::string::npos, "bench: --depths expects A..B");
    const int lo = std::stoi(bench_depths.substr(0, sep));
    const int hi = std::stoi(bench_depths.substr(sep + 2));
    std::cout << "depth,cells,leaves,compact_bytes,unstructured_model_bytes,ratio,"
                 "build_seconds,traverse_seconds\n";
    for (int depth = lo; depth <= hi; ++depth) {
      const auto fd = static_cast<std::uint64_t>(htg::ipow(bench_f, bench_d));
      std::uint64_t per_tree = 0, power = 1;
      for (int k = 0; k <= depth; ++k) {
        per_tree += power;
        power *= fd;
      }
      htg::require(per_tree * static_cast<std::uint64_t>(bench_trees) <=
                       htg::detail::max_cells_guard(),
                   "bench: grid exceeds HTG_MAX_CELLS guard");
      const auto start = Clock::now();
      std::array<std::vector<double>, 3> coords;
      for (int k = 0; k < bench_d; ++k)
        for (int i = 0; i <= (k == 0 ? bench_trees : 1); ++i)
          coords[static_cast<std::size_t>(k)].push_back(i);
      htg::HyperTreeGrid g(bench_d, bench_f, {bench_trees, 1, 1}, coords,
                           bench_d == 3 ? 0 : 2);
      for (int t = 0; t < bench_trees; ++t) {
        std::vector<std::pair<std::uint32_t, int>> queue{{0u, 0}};
        for (std::size_t q = 0; q < queue.size(); ++q) {
          const auto [v, dep] = queue[q];
          if (dep >= depth) continue;
          const auto eldest = g.subdivide({t, 0, 0}, v);
          for (std::uint64_t i = 0; i < fd; ++i)
            queue.emplace_back(eldest + static_cast<std::uint32_t>(i), dep + 1);
        }
      }
      g.finalize();
      const double build = seconds_since(start);

      const auto t0 = Clock::now();
      std::uint64_t leaves = 0;
      htg::detail::for_each_leaf(g, [&](const htg::GeometricCursor&) { ++leaves; });
      const double traverse = seconds_since(t0);

      const auto compact = g.memory_report().total_bytes;
      const auto explicit_bytes = htg::to_unstructured_model_bytes(g, leaves);
      std::cout << depth << "," << g.vertex_count() << "," << leaves << "," << compact << ","
                << explicit_bytes << "," << static_cast<double>(explicit_bytes) / compact << ","
                << build << "," << traverse << "\n";
    }
    return 0;
  }

  if (*tables) {
    if (tb_check) {
      const auto [count, entries] = htg::table_census();
      bool ok = count == 24 && entries == 2804;
      const auto& t = htg::traversal_tables(htg::Neighborhood::moore, 1, 3);
      const std::vector<std::uint8_t> parent{0, 1, 1, 1, 1, 1, 1, 1, 2};
      const std::vector<std::uint8_t> child{2, 0, 1, 0, 1, 2, 1, 2, 0};
      ok = ok && t.to_parent_cursor == parent && t.to_child_index == child;
      std::cout << "table_count=" << count << "\nentry_count=" << entries
                << "\ncheck=" << (ok ? "ok" : "FAILED") << "\n";
      return ok ? 0 : 1;
    }
    if (tb_corner_d > 0) {
      std::cout << "corner,cursors\n";
      for (int corner = 0; corner < htg::ipow(2, tb_corner_d); ++corner) {
        std::cout << corner << ",";
        const auto row = htg::corner_neighbor_cursors(tb_corner_d, corner);
        for (std::size_t j = 0; j < row.size(); ++j) std::cout << (j ? ";" : "") << row[j];
        std::cout << "\n";
      }
      return 0;
    }
    if (!tb_dump.empty()) {
      const auto kind =
          tb_dump == "moore" ? htg::Neighborhood::moore : htg::Neighborhood::von_neumann;
      const auto& t = htg::traversal_tables(kind, tb_d, tb_f);
      std::cout << "child,cursor,value\n";
      for (int c = 0; c < t.child_count; ++c)
        for (int j = 0; j < t.cursors; ++j)
          std::cout << c << "," << j << ","
                    << (tb_table == "child" ? t.child_index_entry(c, j) : t.parent_cursor(c, j))
                    << "\n";
      return 0;
    }
    const auto [count, entries] = htg::table_census();
    std::cout << "table_count=" << count << "\nentry_count=" << entries << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
