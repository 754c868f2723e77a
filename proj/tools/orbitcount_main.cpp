// orbitcount: enumerate packing curvatures and group orbits, fit the
// growth exponents, and run the invariant suites.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "orbitcount/csv.hpp"
#include "orbitcount/descartes.hpp"
#include "orbitcount/generator_file.hpp"
#include "orbitcount/orbit.hpp"
#include "orbitcount/powerfit.hpp"
#include "orbitcount/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace orbitcount;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitIoError = 3;

std::vector<double> geometric_grid(double tmin, double tmax, int points) {
  if (!(tmin > 0.0) || !(tmax > tmin))
    throw std::invalid_argument("need 0 < tmin < tmax");
  if (points < 8) throw std::invalid_argument("grid needs at least 8 points");
  std::vector<double> grid(points);
  const double step = std::log(tmax / tmin) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = tmin * std::exp(step * i);
  grid.back() = tmax;
  return grid;
}

void emit_json(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << j.dump(2) << "\n";
  }
}

int cmd_count(const std::string& kind_name, const std::string& root_text,
              double tmin, double tmax, int grid_points, int threads,
              const std::string& out_path) {
  const auto kind = packing_from_name(kind_name);
  if (!kind) {
    std::cerr << "unknown packing kind '" << kind_name << "'\n";
    return kExitBadInput;
  }
  std::array<BigInt, 4> c;
  try {
    c = parse_quadruple(root_text);
  } catch (const std::exception& e) {
    std::cerr << "bad root quadruple: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (descartes_form(c) != packing_target(*kind)) {
    std::cerr << "root " << root_text << " has Q = " << descartes_form(c)
              << " but " << kind_name << " packings require Q = "
              << packing_target(*kind) << "\n";
    return kExitBadInput;
  }
  DescartesQuadruple root(c, *kind);
  if (!is_root_quadruple(root)) {
    const DescartesQuadruple reduced = root_reduce(root);
    std::cerr << "note: root reduced " << root.str() << " -> "
              << reduced.str() << "\n";
    root = reduced;
  }

  const auto grid = geometric_grid(tmin, tmax, grid_points);
  const auto start = std::chrono::steady_clock::now();
  EnumerationStats stats;
  CountSeries series;
  try {
    series = count_packing_series(root, grid, threads, &stats);
  } catch (const PartialResultError& e) {
    std::cerr << "aborted: " << e.what() << " (after " << e.count_so_far
              << " emissions)\n";
    return kExitBadInput;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  write_count_series_csv(out_path, series);
  std::cout << "wrote " << out_path << ": " << series.T.size()
            << " rows, N(" << format_grid_value(grid.back())
            << ") = " << series.N.back() << "\n";
  std::cout << "runtime " << secs << " s, peak frontier " << stats.peak_stack
            << " nodes, " << stats.emitted << " quadruples enumerated\n";
  return kExitOk;
}

int cmd_fit(const std::string& in_path, const std::string& window_text,
            const std::string& out_path) {
  CountSeries series;
  try {
    series = read_count_series_csv(in_path);
  } catch (const std::exception& e) {
    std::cerr << "cannot read " << in_path << ": " << e.what() << "\n";
    return kExitIoError;
  }
  std::optional<std::pair<double, double>> window;
  if (!window_text.empty()) {
    const auto colon = window_text.find(':');
    if (colon == std::string::npos) {
      std::cerr << "--window expects LO:HI\n";
      return kExitBadInput;
    }
    try {
      window = {std::stod(window_text.substr(0, colon)),
                std::stod(window_text.substr(colon + 1))};
    } catch (const std::exception&) {
      std::cerr << "--window expects LO:HI\n";
      return kExitBadInput;
    }
  }
  FitReport report;
  double spread;
  try {
    report = fit_power_law(series, window);
    spread = ratio_spread_last_decade(series, report.alpha);
  } catch (const std::exception& e) {
    std::cerr << "fit failed: " << e.what() << "\n";
    return kExitBadInput;
  }
  json j;
  j["alpha"] = report.alpha;
  j["c"] = report.c;
  j["alpha_stderr"] = report.alpha_stderr;
  j["r_squared"] = report.r_squared;
  j["window"] = {report.window.first, report.window.second};
  j["n_points"] = report.n_points;
  j["ratio_spread_last_decade"] = spread;
  emit_json(j, out_path);
  return kExitOk;
}

int cmd_exponent(const std::string& gens_path, double rmin, double rmax,
                 int grid_points, const std::string& out_path) {
  GeneratorFile file;
  try {
    file = load_generator_file(gens_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad generator file: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitIoError;
  }
  std::unique_ptr<GeneratorSet> gens;
  try {
    gens = std::make_unique<GeneratorSet>(file.form, file.matrices);
  } catch (const std::exception& e) {
    std::cerr << "invalid generators: " << e.what() << "\n";
    return kExitBadInput;
  }
  if (!(rmin > 0.0) || !(rmax > rmin) || grid_points < 4) {
    std::cerr << "need 0 < rmin < rmax and at least 4 grid points\n";
    return kExitBadInput;
  }
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = rmin + (rmax - rmin) * i / (grid_points - 1);

  // Seed: the form's canonical timelike vector, exact.
  RationalVector seed(file.form->dim());
  if (file.form_name == "descartes") {
    seed = {1, 1, 1, 1};
  } else {
    seed.back() = 1;
  }
  const GrowthSample sample = ball_growth_sample(*gens, seed, grid);
  const FitReport report = estimate_delta_from_sample(sample);
  json j;
  j["delta_hat"] = report.alpha;
  j["stderr"] = report.alpha_stderr;
  j["r_squared"] = report.r_squared;
  j["R_grid"] = sample.R;
  j["ball_counts"] = sample.counts;
  emit_json(j, out_path);
  return kExitOk;
}

int cmd_orbit(const std::string& gens_path, const std::string& w0_text,
              double tmin, double tmax, int grid_points,
              const std::string& norm_name, const std::string& cone_axis,
              double cone_angle, const std::string& out_path) {
  GeneratorFile file;
  try {
    file = load_generator_file(gens_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad generator file: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitIoError;
  }
  std::unique_ptr<GeneratorSet> gens;
  RationalVector w0;
  try {
    gens = std::make_unique<GeneratorSet>(file.form, file.matrices);
    std::stringstream ss(w0_text);
    std::string item;
    while (std::getline(ss, item, ',')) w0.push_back(parse_rational(item));
    if (w0.size() != static_cast<std::size_t>(file.form->dim()))
      throw std::invalid_argument("w0 dimension does not match the form");
  } catch (const std::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadInput;
  }
  VectorNorm norm;
  if (norm_name == "max") {
    norm = VectorNorm::Max;
  } else if (norm_name == "euclidean") {
    norm = VectorNorm::Euclidean;
  } else {
    std::cerr << "--norm must be max or euclidean\n";
    return kExitBadInput;
  }
  std::optional<SphericalCap> cone;
  if (!cone_axis.empty()) {
    Eigen::VectorXd axis(file.form->dim());
    std::stringstream ss(cone_axis);
    std::string item;
    long i = 0;
    while (std::getline(ss, item, ',') && i < axis.size())
      axis(i++) = std::stod(item);
    if (i != axis.size() || axis.norm() == 0.0) {
      std::cerr << "bad cone axis\n";
      return kExitBadInput;
    }
    cone = SphericalCap{axis / axis.norm(), cone_angle};
  }
  try {
    if (grid_points > 0) {
      const auto grid = geometric_grid(tmin, tmax, grid_points);
      const CountSeries series =
          count_vector_series(*gens, w0, norm, grid, cone);
      write_count_series_csv(out_path.empty() ? "orbit.csv" : out_path,
                             series);
      std::cout << "wrote " << (out_path.empty() ? "orbit.csv" : out_path)
                << ": N(" << format_grid_value(grid.back())
                << ") = " << series.N.back() << "\n";
    } else {
      OrbitBallQuery query{w0, norm, tmax, cone};
      std::cout << count_vector_orbit(*gens, query) << "\n";
    }
  } catch (const PartialResultError& e) {
    std::cerr << "aborted: " << e.what() << " (after " << e.count_so_far
              << " points)\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  std::vector<SuiteResult> results;
  if (suite.empty()) {
    results = run_all_verify_suites(seed);
  } else {
    const auto names = verify_suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      std::cerr << "unknown suite '" << suite << "'; available:";
      for (const auto& n : names) std::cerr << " " << n;
      std::cerr << "\n";
      return kExitBadInput;
    }
    results.push_back(run_verify_suite(suite, seed));
  }
  bool all_passed = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": "
              << r.detail << "\n";
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbit enumeration and exponent estimation"};
  app.require_subcommand(1);

  // count
  std::string kind = "euclidean", root, count_out = "counts.csv";
  double tmin = 100.0, tmax = 1e6;
  int grid_points = 32, threads = 1;
  auto* count = app.add_subcommand("count", "enumerate packing curvatures");
  count->add_option("--kind", kind, "euclidean|hyperbolic|spherical");
  count->add_option("--root", root, "root quadruple c1,c2,c3,c4")->required();
  count->add_option("--tmin", tmin, "smallest grid bound");
  count->add_option("--tmax", tmax, "largest grid bound");
  count->add_option("--grid", grid_points, "number of grid points (>= 8)");
  count->add_option("--threads", threads, "worker threads");
  count->add_option("--out", count_out, "output CSV path");

  // fit
  std::string fit_in, fit_window, fit_out;
  auto* fit = app.add_subcommand("fit", "fit N(T) ~ c T^alpha from a CSV");
  fit->add_option("--in", fit_in, "input CSV")->required();
  fit->add_option("--window", fit_window, "fit window LO:HI");
  fit->add_option("--out", fit_out, "output JSON path (default stdout)");

  // exponent
  std::string exp_gens, exp_out;
  double rmin = 4.0, rmax = 11.0;
  int exp_grid = 15;
  auto* exponent =
      app.add_subcommand("exponent", "orbit growth rate of a generator set");
  exponent->add_option("--gens", exp_gens, "generator file")->required();
  exponent->add_option("--rmin", rmin, "smallest ball radius");
  exponent->add_option("--rmax", rmax, "largest ball radius");
  exponent->add_option("--grid", exp_grid, "number of radii (>= 4)");
  exponent->add_option("--out", exp_out, "output JSON path (default stdout)");

  // orbit
  std::string orb_gens, orb_w0, orb_norm = "max", orb_axis, orb_out;
  double orb_tmin = 0.0, orb_tmax = 0.0, orb_angle = M_PI;
  int orb_grid = 0;
  auto* orbit = app.add_subcommand("orbit", "count a vector orbit in a ball");
  orbit->add_option("--gens", orb_gens, "generator file")->required();
  orbit->add_option("--w0", orb_w0, "starting row vector")->required();
  orbit->add_option("--tmax", orb_tmax, "norm bound T")->required();
  orbit->add_option("--tmin", orb_tmin, "series start (with --grid)");
  orbit->add_option("--grid", orb_grid, "emit a CSV series with this many points");
  orbit->add_option("--norm", orb_norm, "max|euclidean");
  orbit->add_option("--cone-axis", orb_axis, "cap axis v1,v2,...");
  orbit->add_option("--cone-angle", orb_angle, "cap angular radius");
  orbit->add_option("--out", orb_out, "output CSV path (with --grid)");

  // verify
  std::string suite;
  std::uint64_t seed = 20240901;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--suite", suite, "run one suite only");
  verify->add_option("--seed", seed, "RNG seed for sampled properties");

  CLI11_PARSE(app, argc, argv);

  try {
    if (count->parsed())
      return cmd_count(kind, root, tmin, tmax, grid_points, threads,
                       count_out);
    if (fit->parsed()) return cmd_fit(fit_in, fit_window, fit_out);
    if (exponent->parsed())
      return cmd_exponent(exp_gens, rmin, rmax, exp_grid, exp_out);
    if (orbit->parsed())
      return cmd_orbit(orb_gens, orb_w0, orb_tmin, orb_tmax, orb_grid,
                       orb_norm, orb_axis, orb_angle, orb_out);
    if (verify->parsed()) return cmd_verify(suite, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitOk;
}
