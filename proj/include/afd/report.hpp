#pragma once

// Report persistence: schema-versioned JSON, CSV series, snapshot CSV in the
// grid format, and static SVG log-log plots. Filenames embed the experiment
// name and the config hash so runs are self-describing.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "afd/experiments.hpp"
#include "afd/grid.hpp"

namespace afd {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

/// FNV-1a 64-bit hash, used for stable config fingerprints.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex16(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << v;
  return os.str();
}

/// Canonical config hash: nlohmann::json orders object keys, so dump() is a
/// canonical serialization.
inline std::string config_hash(const nlohmann::json& config) {
  return hex16(fnv1a64(config.dump()));
}

inline std::string format17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

/// Snapshot CSV: header x1,...,xN,u; one row per cell in lexicographic cell
/// order (the flat index order); 17 significant digits.
inline void write_snapshot_csv(const ScalarField& u, std::ostream& os) {
  for (int i = 0; i < u.grid.dim; ++i) os << "x" << (i + 1) << ",";
  os << "u\n";
  for (std::int64_t c = 0; c < u.grid.size; ++c) {
    const Point p = u.grid.cell_center(c);
    for (int i = 0; i < u.grid.dim; ++i) os << format17(p[i]) << ",";
    os << format17(u[c]) << "\n";
  }
}

inline nlohmann::json to_json(const PowerLawFit& f) {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"residual", f.residual},
          {"points", f.points},     {"x_min", f.x_min},         {"x_max", f.x_max}};
}

inline nlohmann::json to_json(const ExperimentReport& rep, const nlohmann::json& config) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["artifact_version"] = kArtifactVersion;
  j["experiment"] = rep.experiment;
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  j["parameters"] = {{"dim", rep.dim},
                     {"m", rep.m},
                     {"grid_L", std::vector<double>(rep.grid_L.begin(), rep.grid_L.begin() + rep.dim)},
                     {"grid_n", std::vector<int>(rep.grid_n.begin(), rep.grid_n.begin() + rep.dim)},
                     {"seed", rep.seed},
                     {"constants_provenance", rep.constants_provenance}};
  j["series"] = nlohmann::json::array();
  for (const auto& s : rep.series) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : s.points) pts.push_back({x, y});
    j["series"].push_back({{"name", s.name}, {"points", pts}});
  }
  j["fits"] = nlohmann::json::array();
  for (const auto& f : rep.fits) j["fits"].push_back({{"name", f.name}, {"fit", to_json(f.fit)}});
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : rep.verdicts)
    j["verdicts"].push_back({{"id", v.id},
                             {"description", v.description},
                             {"pass", v.pass},
                             {"measured", v.measured},
                             {"expected", v.expected},
                             {"tolerance", v.tolerance}});
  j["passed"] = rep.passed();
  return j;
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport rep;
  rep.experiment = j.at("experiment").get<std::string>();
  const auto& par = j.at("parameters");
  rep.dim = par.at("dim").get<int>();
  rep.m = par.at("m").get<std::vector<double>>();
  auto L = par.at("grid_L").get<std::vector<double>>();
  auto n = par.at("grid_n").get<std::vector<int>>();
  for (int i = 0; i < rep.dim && i < kMaxDim; ++i) {
    rep.grid_L[i] = L[i];
    rep.grid_n[i] = n[i];
  }
  rep.seed = par.at("seed").get<std::uint64_t>();
  rep.constants_provenance = par.at("constants_provenance").get<std::string>();
  for (const auto& s : j.at("series")) {
    Series out{s.at("name").get<std::string>(), {}};
    for (const auto& p : s.at("points")) out.points.push_back({p[0].get<double>(), p[1].get<double>()});
    rep.series.push_back(std::move(out));
  }
  for (const auto& f : j.at("fits")) {
    PowerLawFit fit;
    const auto& ff = f.at("fit");
    fit.exponent = ff.at("exponent").get<double>();
    fit.intercept = ff.at("intercept").get<double>();
    fit.residual = ff.at("residual").get<double>();
    fit.points = ff.at("points").get<std::size_t>();
    fit.x_min = ff.at("x_min").get<double>();
    fit.x_max = ff.at("x_max").get<double>();
    rep.fits.push_back({f.at("name").get<std::string>(), fit});
  }
  for (const auto& v : j.at("verdicts"))
    rep.verdicts.push_back({v.at("id").get<std::string>(), v.at("description").get<std::string>(),
                            v.at("pass").get<bool>(), v.at("measured").get<double>(),
                            v.at("expected").get<double>(), v.at("tolerance").get<double>()});
  return rep;
}

/// CSV rendering of all measured series: name,x,y rows.
inline void write_series_csv(const ExperimentReport& rep, std::ostream& os) {
  os << "series,x,y\n";
  for (const auto& s : rep.series)
    for (const auto& [x, y] : s.points) os << s.name << "," << format17(x) << "," << format17(y) << "\n";
}

namespace detail {

struct SvgMapper {
  double lx0, lx1, ly0, ly1;
  double px0 = 70, px1 = 560, py0 = 360, py1 = 30;
  double x(double v) const { return px0 + (std::log10(v) - lx0) / (lx1 - lx0) * (px1 - px0); }
  double y(double v) const { return py0 + (std::log10(v) - ly0) / (ly1 - ly0) * (py1 - py0); }
};

}  // namespace detail

/// One log-log SVG per report: every positive series as a polyline with
/// markers, fitted lines dashed, slope annotations in the legend.
inline void write_svg(const ExperimentReport& rep, std::ostream& os) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : rep.series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmax > 0.0)) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"400\"/>\n";
    return;
  }
  detail::SvgMapper mp{std::log10(xmin) - 0.05, std::log10(xmax) + 0.05,
                       std::log10(ymin) - 0.1, std::log10(ymax) + 0.1};
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"400\" "
        "font-family=\"monospace\" font-size=\"11\">\n";
  os << "<rect x=\"70\" y=\"30\" width=\"490\" height=\"330\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"70\" y=\"20\">" << rep.experiment << " (log-log)</text>\n";
  int ci = 0;
  double legend_y = 45;
  for (const auto& s : rep.series) {
    const char* col = colors[ci % 6];
    std::ostringstream pl;
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      pl << mp.x(x) << "," << mp.y(y) << " ";
    }
    if (pl.str().empty()) continue;
    os << "<polyline points=\"" << pl.str() << "\" fill=\"none\" stroke=\"" << col
       << "\" stroke-width=\"1.5\"/>\n";
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0) || !(y > 0.0)) continue;
      os << "<circle cx=\"" << mp.x(x) << "\" cy=\"" << mp.y(y) << "\" r=\"2.5\" fill=\"" << col
         << "\"/>\n";
    }
    os << "<text x=\"460\" y=\"" << legend_y << "\" fill=\"" << col << "\">" << s.name;
    for (const auto& f : rep.fits)
      if (f.name == s.name) os << " k=" << std::setprecision(3) << f.fit.exponent;
    os << "</text>\n";
    legend_y += 14;
    ++ci;
  }
  // dashed fitted lines
  ci = 0;
  for (const auto& s : rep.series) {
    const char* col = colors[ci % 6];
    for (const auto& f : rep.fits) {
      if (f.name != s.name) continue;
      const double y0 = std::exp(f.fit.intercept + f.fit.exponent * std::log(f.fit.x_min));
      const double y1 = std::exp(f.fit.intercept + f.fit.exponent * std::log(f.fit.x_max));
      if (y0 > 0 && y1 > 0)
        os << "<line x1=\"" << mp.x(f.fit.x_min) << "\" y1=\"" << mp.y(y0) << "\" x2=\""
           << mp.x(f.fit.x_max) << "\" y2=\"" << mp.y(y1) << "\" stroke=\"" << col
           << "\" stroke-dasharray=\"5,3\"/>\n";
    }
    ++ci;
  }
  os << "</svg>\n";
}

/// Writes <out_dir>/<experiment>-<hash>.{json,csv,svg} per the format list.
/// JSON is always written. Returns the list of created paths.
inline std::vector<std::string> emit_report(const ExperimentReport& rep,
                                            const nlohmann::json& config,
                                            const std::string& out_dir,
                                            const std::vector<std::string>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);  // best effort; open() reports failures
  const std::string stem = out_dir + "/" + rep.experiment + "-" + config_hash(config);
  std::vector<std::string> written;
  auto open = [&](const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("emit_report: cannot write " + path);
    return f;
  };
  {
    auto f = open(stem + ".json");
    f << to_json(rep, config).dump(2) << "\n";
    written.push_back(stem + ".json");
  }
  for (const auto& fmt : formats) {
    if (fmt == "csv") {
      auto f = open(stem + ".csv");
      write_series_csv(rep, f);
      written.push_back(stem + ".csv");
    } else if (fmt == "svg") {
      auto f = open(stem + ".svg");
      write_svg(rep, f);
      written.push_back(stem + ".svg");
    } else if (fmt != "json") {
      throw std::invalid_argument("emit_report: unknown format " + fmt);
    }
  }
  return written;
}

}  // namespace afd
