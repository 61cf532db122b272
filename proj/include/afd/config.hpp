#pragma once

// Run configuration: strict JSON parsing with duplicate-key detection,
// unknown-key rejection, and an error list naming every bad key/value with
// its path.

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "afd/experiments.hpp"
#include "afd/grid.hpp"
#include "afd/similarity.hpp"
#include "afd/solver.hpp"

namespace afd {

/// Reported as exit code 1 by the CLI. Carries every problem found, each with
/// the config path that caused it.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid config:";
    for (const auto& e : v) s += "\n  - " + e;
    return s;
  }
  std::vector<std::string> errors_;
};

struct RunConfig {
  MediumExponents me;
  TensorGrid grid;  // grid.dim == 0 when the grid block is absent
  SolverConfig solver;
  double t_end = 1.0;

  std::string experiment = "smoothing";  // smoothing|profile|ghp|acre|semigroup
  std::vector<double> mass_ladder = {1.0, 4.0, 16.0, 64.0};
  double mass = 1.0;
  double delay = 0.1;
  double T = 1.0;
  std::string data = "bump";  // bump|slice|delayed (ghp/acre)
  std::uint64_t seed = 0;

  std::string out_dir = ".";
  std::vector<std::string> formats = {"json"};

  nlohmann::json raw;  // canonical echo for hashing and report embedding
};

namespace detail {

// Parse with a callback that tracks object keys per depth, so duplicate keys
// (which nlohmann would silently overwrite) become hard errors with a path.
inline nlohmann::json parse_strict_json(const std::string& text, std::vector<std::string>& errs) {
  std::vector<std::set<std::string>> key_stack;
  std::vector<std::string> last_key;  // most recent key seen at each object depth
  auto cb = [&](int /*depth*/, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    using event_t = nlohmann::json::parse_event_t;
    switch (event) {
      case event_t::object_start:
        key_stack.emplace_back();
        last_key.emplace_back();
        break;
      case event_t::object_end:
        key_stack.pop_back();
        last_key.pop_back();
        break;
      case event_t::key: {
        const std::string k = parsed.get<std::string>();
        if (!key_stack.back().insert(k).second) {
          std::string p;
          for (size_t i = 0; i + 1 < last_key.size(); ++i) p += last_key[i] + ".";
          errs.push_back("duplicate key at " + p + k);
        }
        last_key.back() = k;
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return nlohmann::json::parse(text, cb);
  } catch (const nlohmann::json::parse_error& e) {
    errs.push_back(std::string("syntax error: ") + e.what());
    return nlohmann::json();
  }
}

inline void reject_unknown(const nlohmann::json& obj, const std::string& path,
                           const std::set<std::string>& allowed, std::vector<std::string>& errs) {
  if (!obj.is_object()) return;
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) errs.push_back("unknown key " + path + k);
}

template <class T>
inline T get_or(const nlohmann::json& obj, const std::string& key, const std::string& path, T def,
                std::vector<std::string>& errs) {
  if (!obj.is_object() || !obj.contains(key)) return def;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    errs.push_back("bad value type at " + path + key);
    return def;
  }
}

}  // namespace detail

/// Parses and fully validates a config. Returns the config with documented
/// defaults filled in, or throws ConfigError listing every problem found.
inline RunConfig parse_config(const std::string& text) {
  std::vector<std::string> errs;
  nlohmann::json j = detail::parse_strict_json(text, errs);
  if (!errs.empty()) throw ConfigError(std::move(errs));
  if (!j.is_object()) throw ConfigError({"top level must be an object"});

  detail::reject_unknown(j, "", {"exponents", "grid", "solver", "experiment", "output"}, errs);

  RunConfig rc;
  rc.raw = j;

  // exponent block (required)
  if (!j.contains("exponents")) {
    errs.push_back("missing required block: exponents");
  } else {
    const auto& e = j["exponents"];
    detail::reject_unknown(e, "exponents.", {"dim", "m"}, errs);
    const int dim = detail::get_or<int>(e, "dim", "exponents.", 0, errs);
    const auto m = detail::get_or<std::vector<double>>(e, "m", "exponents.", {}, errs);
    auto bad = check_exponents(dim, m);
    for (auto& b : bad) errs.push_back("exponents: " + b);
    if (bad.empty()) rc.me = validate_exponents(dim, m);
  }

  // grid block (optional; experiments pick defaults when absent)
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    detail::reject_unknown(g, "grid.", {"L", "n"}, errs);
    const auto L = detail::get_or<std::vector<double>>(g, "L", "grid.", {}, errs);
    const auto n = detail::get_or<std::vector<int>>(g, "n", "grid.", {}, errs);
    if (rc.me.dim > 0) {
      if (static_cast<int>(L.size()) != rc.me.dim || static_cast<int>(n.size()) != rc.me.dim) {
        errs.push_back("grid: L and n must each have dim entries");
      } else {
        std::array<double, kMaxDim> La{};
        std::array<int, kMaxDim> na{};
        for (int i = 0; i < rc.me.dim; ++i) {
          La[i] = L[i];
          na[i] = n[i];
        }
        try {
          rc.grid = TensorGrid(rc.me.dim, La, na);
        } catch (const std::invalid_argument& ex) {
          errs.push_back(std::string("grid: ") + ex.what());
        }
      }
    }
  }

  // solver block (optional)
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    detail::reject_unknown(s, "solver.",
                           {"scheme", "bc", "floor_eps", "floor_rel", "adaptive_floor", "theta",
                            "drift_theta", "snapshots", "steady_tol", "max_steps", "t_end",
                            "implicit_dt0", "implicit_dt_factor"},
                           errs);
    const std::string scheme =
        detail::get_or<std::string>(s, "scheme", "solver.", "explicit", errs);
    if (scheme == "explicit")
      rc.solver.scheme = Scheme::Explicit;
    else if (scheme == "implicit")
      rc.solver.scheme = Scheme::LinearlyImplicit;
    else
      errs.push_back("solver.scheme: expected explicit|implicit, got " + scheme);
    const std::string bc = detail::get_or<std::string>(s, "bc", "solver.", "reflecting", errs);
    if (bc == "reflecting")
      rc.solver.bc = BoundaryKind::Reflecting;
    else if (bc == "zero-dirichlet")
      rc.solver.bc = BoundaryKind::ZeroDirichlet;
    else
      errs.push_back("solver.bc: expected reflecting|zero-dirichlet, got " + bc);
    rc.solver.floor_eps = detail::get_or<double>(s, "floor_eps", "solver.", -1.0, errs);
    rc.solver.floor_rel = detail::get_or<double>(s, "floor_rel", "solver.", 1e-8, errs);
    rc.solver.adaptive_floor = detail::get_or<bool>(s, "adaptive_floor", "solver.", false, errs);
    rc.solver.theta = detail::get_or<double>(s, "theta", "solver.", 0.9, errs);
    rc.solver.drift_theta = detail::get_or<double>(s, "drift_theta", "solver.", 0.5, errs);
    rc.solver.snapshot_times =
        detail::get_or<std::vector<double>>(s, "snapshots", "solver.", {}, errs);
    rc.solver.steady_tol = detail::get_or<double>(s, "steady_tol", "solver.", 1e-4, errs);
    rc.solver.max_steps = detail::get_or<long long>(s, "max_steps", "solver.", 200000000, errs);
    rc.t_end = detail::get_or<double>(s, "t_end", "solver.", 1.0, errs);
    rc.solver.implicit_dt0 = detail::get_or<double>(s, "implicit_dt0", "solver.", 1e-4, errs);
    rc.solver.implicit_dt_factor =
        detail::get_or<double>(s, "implicit_dt_factor", "solver.", 0.02, errs);
    try {
      rc.solver.validate();
    } catch (const std::invalid_argument& ex) {
      errs.push_back(std::string("solver: ") + ex.what());
    }
  }

  // experiment block (optional)
  if (j.contains("experiment")) {
    const auto& e = j["experiment"];
    detail::reject_unknown(e, "experiment.",
                           {"name", "ladder", "mass", "delay", "T", "data", "seed"}, errs);
    rc.experiment = detail::get_or<std::string>(e, "name", "experiment.", "smoothing", errs);
    static const std::set<std::string> known = {"smoothing", "profile", "ghp", "acre",
                                                "semigroup"};
    if (!known.count(rc.experiment))
      errs.push_back("experiment.name: unknown experiment " + rc.experiment);
    rc.mass_ladder = detail::get_or<std::vector<double>>(e, "ladder", "experiment.",
                                                         rc.mass_ladder, errs);
    for (size_t i = 0; i < rc.mass_ladder.size(); ++i) {
      if (!(rc.mass_ladder[i] > 0.0)) errs.push_back("experiment.ladder: masses must be positive");
      if (i > 0 && !(rc.mass_ladder[i] > rc.mass_ladder[i - 1]))
        errs.push_back("experiment.ladder: masses must be strictly increasing");
    }
    rc.mass = detail::get_or<double>(e, "mass", "experiment.", 1.0, errs);
    if (!(rc.mass > 0.0)) errs.push_back("experiment.mass: must be positive");
    rc.delay = detail::get_or<double>(e, "delay", "experiment.", 0.1, errs);
    rc.T = detail::get_or<double>(e, "T", "experiment.", 1.0, errs);
    if (!(rc.T > 0.0)) errs.push_back("experiment.T: must be positive");
    rc.data = detail::get_or<std::string>(e, "data", "experiment.", "bump", errs);
    if (rc.data != "bump" && rc.data != "slice" && rc.data != "delayed")
      errs.push_back("experiment.data: expected bump|slice|delayed, got " + rc.data);
    rc.seed = detail::get_or<std::uint64_t>(e, "seed", "experiment.", 0, errs);
  }

  // output block (optional)
  if (j.contains("output")) {
    const auto& o = j["output"];
    detail::reject_unknown(o, "output.", {"directory", "formats"}, errs);
    rc.out_dir = detail::get_or<std::string>(o, "directory", "output.", ".", errs);
    rc.formats = detail::get_or<std::vector<std::string>>(o, "formats", "output.", {"json"}, errs);
    for (const auto& f : rc.formats)
      if (f != "json" && f != "csv" && f != "svg")
        errs.push_back("output.formats: expected json|csv|svg, got " + f);
  }

  if (!errs.empty()) throw ConfigError(std::move(errs));
  return rc;
}

}  // namespace afd
