// Command-line front end. Exit status: 0 no collision, 1 collision, 2 error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyccd/polyccd.hpp"

using namespace polyccd;

namespace {

constexpr int kExitError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out);
  f << text;
}

SceneFile load_scene(const std::string& path, const std::optional<double>& margin) {
  SceneFile s = parse_scene(read_file(path));
  if (margin) {
    if (!(*margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "--margin must be non-negative");
    s.margin = *margin;
  }
  return s;
}

std::optional<int> threads_opt(int threads) { return threads < 0 ? std::nullopt : std::optional<int>(threads); }

std::vector<ObstacleClass> parse_classes(const std::string& s) {
  if (s == "all") {
    return {ObstacleClass::Ellipsoid, ObstacleClass::Sphere, ObstacleClass::Cylinder, ObstacleClass::Polyhedron};
  }
  for (auto c : {ObstacleClass::Ellipsoid, ObstacleClass::Sphere, ObstacleClass::Cylinder, ObstacleClass::Polyhedron}) {
    if (s == to_string(c)) return {c};
  }
  throw Error(ErrorCode::InvalidArgument, "unknown obstacle class " + s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact continuous collision detection for polynomial robot trajectories"};
  app.require_subcommand(1);

  std::string scene_path, out_path;
  std::optional<double> margin;
  int threads = -1;
  std::vector<double> dts;
  bool highest_first = false;
  bool table = false;
  std::string mode_name = "exact";

  auto* check = app.add_subcommand("check", "Exact collision intervals for a scene file");
  check->add_option("--scene", scene_path, "Scene JSON")->required();
  check->add_option("--out", out_path, "Report JSON path (default stdout)");
  check->add_option("--margin", margin, "Override the scene margin");
  check->add_option("--threads", threads, "Worker threads (0 = hardware)");
  check->add_flag("--table", table, "Also print the collision table to stderr");

  auto* compare = app.add_subcommand("compare", "Sampled baseline ladder against CCD, as CSV");
  compare->add_option("--scene", scene_path, "Scene JSON")->required();
  compare->add_option("--out", out_path, "CSV path (default stdout)");
  compare->add_option("--dt", dts, "Sampling steps (default 0.1 0.01 0.001)");
  compare->add_option("--margin", margin, "Override the scene margin");
  compare->add_option("--threads", threads, "CCD worker threads");
  compare->add_option("--mode", mode_name, "Sampled test: exact (edge distances) or gjk (convex hull)")
      ->check(CLI::IsMember({"exact", "gjk"}));

  std::vector<double> start, goal, window{0.0, 1.0};
  auto* gen = app.add_subcommand("gen-minsnap", "Minimum-snap degree-7 segment between two states");
  gen->add_option("--start", start, "x y z vx vy vz ax ay az")->required()->expected(9);
  gen->add_option("--goal", goal, "x y z vx vy vz ax ay az")->required()->expected(9);
  gen->add_option("--window", window, "t_s t_e")->expected(2);
  gen->add_option("--out", out_path, "Trajectory JSON path (default stdout)");
  gen->add_flag("--print-paper-order", highest_first, "Write coefficients highest power first");

  auto* fit = app.add_subcommand("fit-orientation", "Orientation fit degrees and errors of a scene trajectory");
  fit->add_option("--scene", scene_path, "Scene JSON")->required();
  fit->add_option("--out", out_path, "JSON path (default stdout)");
  fit->add_flag("--print-paper-order", highest_first, "Write coefficients highest power first");

  std::uint64_t seed = 1;
  int count = 10;
  double sweep_dt = 1e-4;
  std::string classes = "all";
  auto* sweep = app.add_subcommand("oracle-sweep", "CCD against dense exact-distance sampling on random scenes");
  sweep->add_option("--seed", seed, "First scene seed");
  sweep->add_option("--count", count, "Scenes per obstacle class")->check(CLI::PositiveNumber);
  sweep->add_option("--dt", sweep_dt, "Sampling step")->check(CLI::PositiveNumber);
  sweep->add_option("--class", classes, "ellipsoid, sphere, cylinder, polyhedron or all");
  sweep->add_option("--threads", threads, "CCD worker threads");
  sweep->add_option("--out", out_path, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*check) {
      const CheckReport r = run_check(load_scene(scene_path, margin), threads_opt(threads));
      emit(report_to_json(r).dump(2) + "\n", out_path);
      if (table) std::cerr << render_table(r);
      return exit_status(r);
    }
    if (*compare) {
      if (dts.empty()) dts = default_dt_ladder();
      const auto mode = mode_name == "gjk" ? SampleMode::GjkHull : SampleMode::ExactEdges;
      const auto rows = run_compare(load_scene(scene_path, margin), dts, mode, threads_opt(threads));
      emit(compare_csv(rows), out_path);
      return rows.back().intervals.empty() ? 0 : 1;
    }
    if (*gen) {
      const auto order = highest_first ? CoefficientOrder::HighestFirst : CoefficientOrder::ConstantFirst;
      const Json j = run_gen(read_flat_state(Json(start), "--start"), read_flat_state(Json(goal), "--goal"),
                             TimeWindow(window[0], window[1]), order);
      emit(j.dump(2) + "\n", out_path);
      return 0;
    }
    if (*fit) {
      const auto order = highest_first ? CoefficientOrder::HighestFirst : CoefficientOrder::ConstantFirst;
      const SceneFile s = load_scene(scene_path, std::nullopt);
      const TrajectoryBundle traj = s.build_trajectory();
      Json j;
      j["coefficient_order"] = to_string(order);
      j["variable"] = "unit";
      j["window"] = Json::array({traj.window().start(), traj.window().end()});
      const char* names[] = {"phi", "theta", "psi"};
      for (int i = 0; i < 3; ++i) {
        const AngleFit& f = traj.angle_fit(i);
        std::vector<double> sc = f.sin.coeff_vector(), cc = f.cos.coeff_vector();
        if (highest_first) {
          std::reverse(sc.begin(), sc.end());
          std::reverse(cc.begin(), cc.end());
        }
        j[names[i]] = {{"degree", f.degree}, {"max_error_deg", f.max_error / kDegree}, {"sin", sc}, {"cos", cc}};
      }
      emit(j.dump(2) + "\n", out_path);
      return 0;
    }
    if (*sweep) {
      std::ostringstream os;
      os << "class,seed,ccd_intervals,matched,missed,spurious,below_resolution,worst_boundary_error_s\n";
      os << std::setprecision(9);
      bool clean = true;
      CcdOptions opts;
      if (threads >= 0) opts.threads = threads;
      for (auto cls : parse_classes(classes)) {
        for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(count); ++k) {
          const Scenario sc = random_scene(seed + k, cls);
          const CcdReport ccd = check_scene(sc.robot, sc.trajectory, sc.obstacles, sc.margin, opts);
          const SampledVerdict v = sampled_check(sc.robot, sc.trajectory, sc.obstacles, sweep_dt,
                                                 SampleMode::ExactEdges, sc.margin, PoseSource::Fitted);
          const EventMatch m = match_events(ccd.overall, v.intervals, sweep_dt);
          clean = clean && m.clean();
          os << to_string(cls) << ',' << seed + k << ",\"" << format_interval_set(ccd.overall, 6) << "\","
             << m.matched << ',' << m.missed << ',' << m.spurious << ',' << m.below_resolution << ','
             << m.worst_boundary_error << '\n';
        }
      }
      emit(os.str(), out_path);
      return clean ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
