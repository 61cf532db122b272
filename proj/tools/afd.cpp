// Command-line front end: similarity tables, closed-form evaluation, Cauchy
// and profile solves, verification experiments, and report re-rendering.
//
// Exit codes: 0 success, 1 config/validation error, 2 numerical failure,
// 3 verification-criterion failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "afd/closed_forms.hpp"
#include "afd/config.hpp"
#include "afd/experiments.hpp"
#include "afd/report.hpp"
#include "afd/similarity.hpp"
#include "afd/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw afd::ConfigError({"cannot read file: " + path});
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

afd::RunConfig load_config(const std::string& path) {
  if (path.empty()) throw afd::ConfigError({"--config is required for this subcommand"});
  return afd::parse_config(read_file(path));
}

void print_similarity(const afd::MediumExponents& me, const afd::SimilarityExponents& se) {
  nlohmann::json j;
  j["dim"] = me.dim;
  j["m"] = me.m;
  j["mbar"] = me.mbar;
  j["mcrit"] = me.mcrit;
  j["alpha"] = se.alpha;
  j["beta"] = se.beta;
  j["sigma"] = se.sigma;
  j["a"] = se.a;
  j["gamma"] = se.gamma;
  j["mu"] = se.mu;
  j["delta"] = se.delta;
  std::cout << j.dump(2) << "\n\n";

  std::cout << std::setprecision(12);
  std::cout << "alpha = " << se.alpha << "   beta = " << se.beta << "\n";
  std::cout << std::left << std::setw(6) << "axis" << std::setw(16) << "m" << std::setw(16)
            << "sigma" << std::setw(16) << "a" << std::setw(16) << "gamma" << std::setw(16)
            << "mu" << std::setw(16) << "delta" << "\n";
  for (int i = 0; i < me.dim; ++i)
    std::cout << std::left << std::setw(6) << (i + 1) << std::setw(16) << me.m[i] << std::setw(16)
              << se.sigma[i] << std::setw(16) << se.a[i] << std::setw(16) << se.gamma[i]
              << std::setw(16) << se.mu[i] << std::setw(16) << se.delta[i] << "\n";
}

std::vector<afd::Point> parse_points(const std::string& text, int dim) {
  std::vector<afd::Point> pts;
  std::istringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    afd::Point p{};
    std::istringstream coords(group);
    std::string c;
    int i = 0;
    while (std::getline(coords, c, ',')) {
      if (i >= dim) throw afd::ConfigError({"point has more than dim coordinates: " + group});
      p[i++] = std::stod(c);
    }
    if (i != dim) throw afd::ConfigError({"point has fewer than dim coordinates: " + group});
    pts.push_back(p);
  }
  if (pts.empty()) throw afd::ConfigError({"no evaluation points given"});
  return pts;
}

int cmd_verify(const afd::RunConfig& rc, const std::string& out_dir,
               const std::vector<std::string>& formats, std::uint64_t seed) {
  afd::ExperimentReport rep;
  if (rc.experiment == "smoothing") {
    afd::SmoothingOptions opt;
    opt.mass = rc.mass;
    if (rc.grid.dim) opt.grid = rc.grid;
    rep = afd::exp_smoothing_and_spread(rc.me, opt);
  } else if (rc.experiment == "profile") {
    afd::ProfileTailOptions opt;
    opt.ladder = rc.mass_ladder;
    opt.steady_tol = rc.solver.steady_tol;
    opt.compare_closed_form = rc.me.isotropic();
    if (rc.grid.dim) opt.grid = rc.grid;
    rep = afd::exp_profile_and_tail(rc.me, opt);
  } else if (rc.experiment == "ghp" || rc.experiment == "acre") {
    afd::ComparisonOptions opt;
    opt.mass = rc.mass;
    opt.delay = rc.delay;
    opt.T = rc.T;
    opt.steady_tol = rc.solver.steady_tol;
    if (rc.data == "bump") opt.data = afd::ComparisonData::ClippedBump;
    if (rc.data == "slice") opt.data = afd::ComparisonData::ExactSlice;
    if (rc.data == "delayed") opt.data = afd::ComparisonData::Delayed;
    if (rc.grid.dim) opt.grid = rc.grid;
    rep = rc.experiment == "ghp" ? afd::exp_ghp(rc.me, opt) : afd::exp_acre(rc.me, opt);
  } else if (rc.experiment == "semigroup") {
    afd::SemigroupOptions opt;
    opt.mass = rc.mass;
    opt.T = rc.T;
    if (rc.grid.dim) opt.grid = rc.grid;
    rep = afd::exp_rates_and_semigroup(rc.me, seed, opt);
  } else {
    throw afd::ConfigError({"unknown experiment: " + rc.experiment});
  }
  rep.seed = seed;
  auto written = afd::emit_report(rep, rc.raw, out_dir, formats);
  for (const auto& w : written) std::cout << "wrote " << w << "\n";
  for (const auto& v : rep.verdicts)
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.id << "  measured=" << v.measured
              << " expected=" << v.expected << " tol=" << v.tolerance << "\n";
  return rep.passed() ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic fast diffusion laboratory"};
  app.require_subcommand(1);
  app.fallthrough();  // accept the global options after a subcommand name too

  std::string config_path, out_dir = ".", format = "json";
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "path to a JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed for experiments");
  app.add_option("--format", format, "output format: json|csv|svg (json always written)")
      ->check(CLI::IsMember({"json", "csv", "svg"}));
  // thread count env var accepted for interface compatibility; the control
  // flow is single-threaded.
  const char* threads_env = std::getenv("AFD_THREADS");
  (void)threads_env;

  auto* sim = app.add_subcommand("similarity", "print the exponent table");
  int sim_dim = 0;
  std::vector<double> sim_m;
  sim->add_option("--dim", sim_dim, "dimension (when no --config)");
  sim->add_option("--m", sim_m, "exponents m_1..m_N (when no --config)");

  auto* eval = app.add_subcommand("eval", "evaluate closed forms at points");
  std::string eval_form = "barenblatt1d", eval_at;
  double eval_C = 1.0, eval_t = 1.0;
  int eval_dim = 1;
  std::vector<double> eval_m = {0.5};
  eval->add_option("--form", eval_form, "barenblatt1d|vss1d|isotropic|partition")
      ->check(CLI::IsMember({"barenblatt1d", "vss1d", "isotropic", "partition"}));
  eval->add_option("--dim", eval_dim, "dimension");
  eval->add_option("--m", eval_m, "exponents");
  eval->add_option("--C", eval_C, "profile constant");
  eval->add_option("--t", eval_t, "time (vss1d, partition)");
  eval->add_option("--at", eval_at, "points: x1,..,xN;x1,..,xN;...")->required();

  auto* run = app.add_subcommand("run", "solve the Cauchy problem from a config");
  auto* prof = app.add_subcommand("profile", "compute the fundamental profile F_M");
  auto* verify = app.add_subcommand("verify", "run a verification experiment");
  std::string verify_name;
  verify->add_option("experiment", verify_name,
                     "smoothing|profile|ghp|acre|semigroup (default: from config)");

  auto* report = app.add_subcommand("report", "re-render a stored JSON report");
  std::string report_path;
  report->add_option("input", report_path, "stored report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
  }

  std::vector<std::string> formats = {"json"};
  if (format != "json") formats.push_back(format);

  try {
    if (sim->parsed()) {
      afd::MediumExponents me;
      if (!config_path.empty())
        me = load_config(config_path).me;
      else
        me = afd::validate_exponents(sim_dim, sim_m);
      print_similarity(me, afd::derive_similarity(me));
      return kExitOk;
    }

    if (eval->parsed()) {
      auto me = afd::validate_exponents(eval_dim, eval_m);
      auto se = afd::derive_similarity(me);
      auto cal = afd::default_calibration(me, se);
      auto pts = parse_points(eval_at, eval_dim);
      for (int i = 0; i < eval_dim; ++i) std::cout << "x" << (i + 1) << ",";
      std::cout << "value\n";
      for (const auto& p : pts) {
        double v = 0.0;
        if (eval_form == "barenblatt1d")
          v = afd::barenblatt_profile_1d(p[0], me.m[0], eval_C);
        else if (eval_form == "vss1d")
          v = afd::vss_1d(p[0], eval_t, me.m[0]);
        else if (eval_form == "isotropic")
          v = afd::isotropic_profile(p, me.m[0], me.dim, eval_C);
        else
          v = afd::partition_min(p, eval_t, me, se, cal);
        for (int i = 0; i < eval_dim; ++i) std::cout << afd::format17(p[i]) << ",";
        std::cout << afd::format17(v) << "\n";
      }
      return kExitOk;
    }

    if (run->parsed()) {
      auto rc = load_config(config_path);
      if (!rc.grid.dim) throw afd::ConfigError({"run requires a grid block"});
      // documented initial data: centered box of the configured mass with
      // per-axis half-width L_i / 4
      double vol = 1.0;
      for (int i = 0; i < rc.grid.dim; ++i) vol *= rc.grid.half_extent[i] / 2.0;
      const double level = rc.mass / vol;
      afd::ScalarField u0 = afd::sample(
          [&](const afd::Point& p) {
            for (int i = 0; i < rc.grid.dim; ++i)
              if (std::abs(p[i]) > rc.grid.half_extent[i] / 4.0) return 0.0;
            return level;
          },
          rc.grid, 0.0);
      auto tr = afd::solve_cauchy(u0, rc.t_end, rc.me, rc.solver);
      std::filesystem::create_directories(out_dir);
      const std::string stem = out_dir + "/run-" + afd::config_hash(rc.raw);
      nlohmann::json diag;
      diag["schema_version"] = afd::kReportSchemaVersion;
      diag["config"] = rc.raw;
      diag["config_hash"] = afd::config_hash(rc.raw);
      diag["time"] = tr.diag_time;
      diag["mass"] = tr.diag_mass;
      diag["sup"] = tr.diag_sup;
      diag["energy"] = tr.diag_energy;
      diag["dt"] = tr.diag_dt;
      std::ofstream(stem + "-diagnostics.json") << diag.dump(2) << "\n";
      std::cout << "wrote " << stem << "-diagnostics.json\n";
      for (size_t k = 0; k < tr.snapshots.size(); ++k) {
        std::ofstream f(stem + "-snapshot-" + std::to_string(k) + ".csv");
        afd::write_snapshot_csv(tr.snapshots[k].second, f);
      }
      std::cout << "wrote " << tr.snapshots.size() << " snapshots\n";
      return kExitOk;
    }

    if (prof->parsed()) {
      auto rc = load_config(config_path);
      if (!rc.grid.dim) throw afd::ConfigError({"profile requires a grid block"});
      auto se = afd::derive_similarity(rc.me);
      afd::SolverConfig cfg = rc.solver;
      cfg.bc = afd::BoundaryKind::Reflecting;
      auto F = afd::solve_profile(rc.mass, rc.me, se, rc.grid, cfg);
      std::filesystem::create_directories(out_dir);
      const std::string path = out_dir + "/profile-" + afd::config_hash(rc.raw) + ".csv";
      std::ofstream f(path);
      afd::write_snapshot_csv(F, f);
      std::cout << "wrote " << path << "\n";
      return kExitOk;
    }

    if (verify->parsed()) {
      auto rc = load_config(config_path);
      if (!verify_name.empty()) rc.experiment = verify_name;
      if (seed == 0) seed = rc.seed;
      if (out_dir == ".") out_dir = rc.out_dir;
      if (format == "json")
        formats = rc.formats;
      return cmd_verify(rc, out_dir, formats, seed);
    }

    if (report->parsed()) {
      auto j = nlohmann::json::parse(read_file(report_path));
      auto rep = afd::report_from_json(j);
      auto written = afd::emit_report(rep, j.at("config"), out_dir,
                                      format == "json" ? std::vector<std::string>{"csv", "svg"}
                                                       : std::vector<std::string>{format});
      for (const auto& w : written) std::cout << "wrote " << w << "\n";
      for (const auto& v : rep.verdicts)
        std::cout << (v.pass ? "PASS " : "FAIL ") << v.id << "  " << v.description << "\n";
      return kExitOk;
    }
  } catch (const afd::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const afd::ExponentError& e) {
    std::cerr << "invalid exponents: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const afd::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
