#include "mpq/cli.hpp"

#include "mpq/error.hpp"
#include "mpq/format.hpp"
#include "mpq/groups.hpp"
#include "mpq/mp.hpp"
#include "mpq/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace mpq::cli {

namespace {

constexpr double kBaseTolerance = 1e-9;
constexpr double kBaseNormalizeTolerance = 1e-6;

GroupSpec resolve_group(const RunConfig& config) {
  const std::string& g = config.group_spec;
  GroupSpec spec;
  if (!g.empty() && g.front() == '{') {
    spec = parse_group_spec(g);
  } else if (g.find('/') != std::string::npos || g.ends_with(".json")) {
    std::ifstream in(g);
    if (!in) throw Error(ErrorKind::BadParameters, "cannot read group spec file '" + g + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    spec = parse_group_spec(buf.str());
  } else {
    spec.family = parse_family(g);
    spec.params = config.params;
  }
  if (config.dim) spec.dim = *config.dim;
  return spec;
}

SpherePoint resolve_base(const RunConfig& config, int n, std::ostream& err) {
  if (config.base_point.empty()) return SpherePoint::basis(n + 1, 0);
  if (static_cast<int>(config.base_point.size()) != n + 1) {
    throw Error(ErrorKind::InvalidPoint, "base point needs " + std::to_string(n + 1) +
                                             " coordinates");
  }
  const Vector v = Eigen::Map<const Vector>(config.base_point.data(),
                                            static_cast<Eigen::Index>(config.base_point.size()));
  const double defect = std::abs(v.norm() - 1.0);
  if (defect <= kBaseTolerance) return SpherePoint::normalized(v);
  if (defect <= kBaseNormalizeTolerance) {
    err << "warning: base point normalized (|p| - 1 = " << format_real(v.norm() - 1.0) << ")\n";
    return SpherePoint::normalized(v);
  }
  throw Error(ErrorKind::InvalidPoint, "base point is not a unit vector");
}

struct Setup {
  std::shared_ptr<const IsometryGroup> group;
  SpherePoint base;
  MPData mp;
};

Setup prepare(const RunConfig& config, std::ostream& err) {
  auto group = std::make_shared<const IsometryGroup>(named_group(resolve_group(config)));
  SpherePoint base = resolve_base(config, group->dim(), err);
  MPData mp = build_mp(group, base);
  return Setup{std::move(group), std::move(base), std::move(mp)};
}

std::string vec_text(const Vector& v) {
  return format_array(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

void write_build(const RunConfig& config, const Setup& s, std::ostream& out) {
  if (config.format.value_or(Format::Json) == Format::Json) {
    out << to_json(s.mp) << '\n';
    return;
  }
  out << "mass";
  for (int i = 1; i <= s.mp.n; ++i) out << ",c" << i;
  out << '\n';
  for (const auto& t : s.mp.terms) {
    out << format_real(t.mass);
    for (double c : t.center.coords) out << ',' << format_real(c);
    out << '\n';
  }
}

bool wants(const RunConfig& config, std::initializer_list<const char*> names) {
  if (config.checks.empty()) return true;
  for (const auto& c : config.checks) {
    for (const char* n : names) {
      if (c == n) return true;
    }
  }
  return false;
}

int write_verify(const RunConfig& config, const Setup& s, std::ostream& out) {
  for (const auto& c : config.checks) {
    static const char* known[] = {"pullback", "harmonic", "deck", "deck_isometry", "mass",
                                  "mass_limit"};
    if (std::find(std::begin(known), std::end(known), c) == std::end(known)) {
      throw Error(ErrorKind::BadParameters, "unknown check '" + c + "'");
    }
  }
  if (config.samples < 1) throw Error(ErrorKind::BadParameters, "--samples must be >= 1");
  std::vector<VerificationReport> reports;
  if (wants(config, {"pullback"})) reports.push_back(check_pullback(s.mp, config.samples, config.seed));
  if (wants(config, {"harmonic"})) reports.push_back(check_harmonic(s.mp, config.samples, config.seed));
  if (wants(config, {"deck", "deck_isometry"})) {
    reports.push_back(check_deck_isometry(s.mp, config.samples, config.seed));
  }
  if (wants(config, {"mass", "mass_limit"})) {
    const auto radii = default_mass_radii();
    reports.push_back(check_mass_limit(*s.group, s.base, radii));
  }

  const bool csv = config.format.value_or(Format::Json) == Format::Csv;
  if (csv) out << "check,samples,max_residual,mean_residual,tolerance,pass,skipped\n";
  bool all_pass = true;
  for (const auto& r : reports) {
    all_pass = all_pass && r.pass;
    if (csv) {
      out << r.check << ',' << r.samples << ',' << format_real(r.max_residual) << ','
          << format_real(r.mean_residual) << ',' << format_real(r.tolerance) << ','
          << (r.pass ? 1 : 0) << ',' << (r.skipped ? 1 : 0) << '\n';
    } else {
      out << to_json(r) << '\n';
    }
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

std::vector<double> per_axis(const std::vector<double>& v, int n, const char* flag) {
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), v.front());
  if (static_cast<int>(v.size()) == n) return v;
  throw Error(ErrorKind::BadParameters,
              std::string(flag) + " takes one value or one per axis (" + std::to_string(n) + ")");
}

void write_sample(const RunConfig& config, const Setup& s, std::ostream& out) {
  const int n = s.mp.n;
  const auto lo = per_axis(config.grid_min, n, "--grid-min");
  const auto hi = per_axis(config.grid_max, n, "--grid-max");
  if (config.grid_steps < 2) throw Error(ErrorKind::BadParameters, "--grid-steps must be >= 2");
  for (int i = 0; i < n; ++i) {
    if (!(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i])) {
      throw Error(ErrorKind::BadParameters, "grid bounds must be finite with min < max");
    }
  }
  const double total = std::pow(static_cast<double>(config.grid_steps), n);
  if (total > 5e7) throw Error(ErrorKind::BadParameters, "grid has too many points");

  const SamplingDomain domain = sampling_domain(s.mp);
  const bool csv = config.format.value_or(Format::Csv) == Format::Csv;
  const double exponent = 4.0 / (n - 2);
  if (csv) {
    for (int i = 1; i <= n; ++i) out << 'x' << i << ',';
    out << "u,metric_scale,excluded\n";
  }
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  ChartPoint x{Vector(n)};
  while (true) {
    for (int i = 0; i < n; ++i) {
      x.coords[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (config.grid_steps - 1);
    }
    const bool excluded = nearest_center_distance(s.mp, x) < domain.exclusion_radius;
    std::string u_text;
    std::string scale_text;
    if (!excluded) {
      const double u = conformal_factor_u(s.mp, x);
      u_text = format_real(u);
      scale_text = format_real(std::pow(u, exponent));
    }
    if (csv) {
      for (int i = 0; i < n; ++i) out << format_real(x.coords[i]) << ',';
      out << u_text << ',' << scale_text << ',' << (excluded ? 1 : 0) << '\n';
    } else {
      out << "{\"x\":" << vec_text(x.coords) << ",\"u\":" << (excluded ? "null" : u_text)
          << ",\"metric_scale\":" << (excluded ? "null" : scale_text)
          << ",\"excluded\":" << (excluded ? "true" : "false") << "}\n";
    }
    // Odometer over the grid, last axis fastest.
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] == config.grid_steps) idx[axis--] = 0;
    if (axis < 0) break;
  }
}

void write_mass(const RunConfig& config, const Setup& s, std::ostream& out) {
  const int n = s.mp.n;
  const double total = total_mass(s.mp);
  const double bound = static_cast<double>(s.group->order() - 1) / std::pow(2.0, n - 2);
  if (config.format.value_or(Format::Json) == Format::Csv) {
    out << "element,mass\n";
    for (const auto& t : s.mp.terms) out << t.element << ',' << format_real(t.mass) << '\n';
    out << "total," << format_real(total) << '\n';
    return;
  }
  std::vector<double> masses;
  for (const auto& t : s.mp.terms) masses.push_back(t.mass);
  out << "{\"n\":" << n << ",\"order\":" << s.group->order()
      << ",\"masses\":" << format_array(masses) << ",\"total_mass\":" << format_real(total)
      << ",\"lower_bound\":" << format_real(bound) << "}\n";
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.output.empty()) {
      file.open(config.output);
      if (!file) throw Error(ErrorKind::BadParameters, "cannot write '" + config.output + "'");
      sink = &file;
    }
    const Setup setup = prepare(config, err);
    switch (config.command) {
      case Command::Build: write_build(config, setup, *sink); return kExitOk;
      case Command::Verify: return write_verify(config, setup, *sink);
      case Command::Sample: write_sample(config, setup, *sink); return kExitOk;
      case Command::Mass: write_mass(config, setup, *sink); return kExitOk;
    }
  } catch (const Error& e) {
    err << e.name() << '\n' << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-center metrics from sphere quotients"};
  app.require_subcommand(1);
  RunConfig config;

  std::string base_text;
  std::string format_text;
  std::map<std::string, Command> commands{{"build", Command::Build},
                                          {"verify", Command::Verify},
                                          {"sample", Command::Sample},
                                          {"mass", Command::Mass}};
  const std::map<std::string, const char*> help{
      {"build", "Write masses and centers as JSON"},
      {"verify", "Run the verification checks, one JSON report per line"},
      {"sample", "Evaluate u and the metric scale on a grid"},
      {"mass", "Report the masses and their total"}};
  std::vector<CLI::App*> subs;
  int dim = 0;
  for (const auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--group", config.group_spec,
                    "trivial | antipodal | lens | product, a JSON file, or inline JSON")
        ->capture_default_str();
    sub->add_option("--dim", dim, "Sphere dimension n");
    sub->add_option("--params", config.params, "Family parameters, e.g. 4,1,1")->delimiter(',');
    sub->add_option("--base", base_text, "Base point (comma separated) or 'default'");
    sub->add_option("--seed", config.seed)->capture_default_str();
    sub->add_option("--samples", config.samples)->capture_default_str();
    sub->add_option("--out", config.output, "Output file (default stdout)");
    sub->add_option("--format", format_text, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--grid-min", config.grid_min)->delimiter(',');
    sub->add_option("--grid-max", config.grid_max)->delimiter(',');
    sub->add_option("--grid-steps", config.grid_steps)->capture_default_str();
    sub->add_option("--check", config.checks, "Subset of pullback,harmonic,deck,mass")
        ->delimiter(',');
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  for (CLI::App* sub : subs) {
    if (sub->parsed()) {
      config.command = commands.at(sub->get_name());
      if (sub->count("--dim") > 0) config.dim = dim;
    }
  }
  if (!format_text.empty()) config.format = format_text == "csv" ? Format::Csv : Format::Json;
  if (!base_text.empty() && base_text != "default") {
    try {
      std::stringstream ss(base_text);
      std::string item;
      while (std::getline(ss, item, ',')) config.base_point.push_back(std::stod(item));
    } catch (const std::exception&) {
      err << "BadParameters\n--base expects comma-separated numbers\n";
      return kExitInvalid;
    }
  }
  return run(config, out, err);
}

}  // namespace mpq::cli
