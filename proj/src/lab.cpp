#include "nslab/lab.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nslab/bounds.hpp"
#include "nslab/errors.hpp"

namespace nslab {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"kind", "seed", "output_dir"}},
      {"grid", {"n", "length"}},
      {"initial", {"type", "amplitude"}},
      {"spectrum", {"gamma", "amplitude", "kmax"}},
      {"solver",
       {"nu", "dt", "cfl", "t_end", "sample_interval", "dealias", "advection", "integrals",
        "energy_balance_tolerance"}},
      {"bounds", {"c"}},
      {"scan", {"kmax_list", "t_small", "energy_spread_tolerance"}},
      {"dimension", {"alpha", "c", "n_max", "j_first", "j_last", "tolerance", "points"}},
      {"roughdata",
       {"kmax_list", "energy_change_tolerance", "enstrophy_ratio", "enstrophy_ratio_tolerance"}},
  };
  return keys;
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

class ConfigReader {
 public:
  explicit ConfigReader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& path) const {
    if (auto v = tree_.get_optional<std::string>(pt::ptree::path_type(path, '.'))) {
      return trimmed(*v);
    }
    return std::nullopt;
  }

  template <typename T>
  void read(const std::string& path, T& target) const {
    if (auto v = get<T>(path)) target = *v;
  }

  template <typename T>
  std::optional<T> get(const std::string& path) const {
    const auto text = raw(path);
    if (!text) return std::nullopt;
    std::istringstream in(*text);
    T value{};
    if constexpr (std::is_same_v<T, bool>) {
      if (*text == "true" || *text == "1" || *text == "on") return true;
      if (*text == "false" || *text == "0" || *text == "off") return false;
      throw ConfigError(path, "expected true or false, got '" + *text + "'");
    } else {
      if (!(in >> value) || !(in >> std::ws).eof()) {
        throw ConfigError(path, "cannot parse '" + *text + "'");
      }
    }
    return value;
  }

  std::optional<std::vector<int>> int_list(const std::string& path) const {
    const auto text = raw(path);
    if (!text) return std::nullopt;
    std::vector<int> values;
    std::istringstream in(*text);
    std::string item;
    while (std::getline(in, item, ',')) {
      std::istringstream cell(trimmed(item));
      int v = 0;
      if (!(cell >> v) || !(cell >> std::ws).eof()) {
        throw ConfigError(path, "cannot parse list entry '" + item + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) throw ConfigError(path, "list is empty");
    return values;
  }

 private:
  const pt::ptree& tree_;
};

ExperimentKind parse_kind(const std::string& text) {
  if (text == "simulate") return ExperimentKind::simulate;
  if (text == "backward-blowup") return ExperimentKind::backward_blowup;
  if (text == "bounds-certify") return ExperimentKind::bounds_certify;
  if (text == "dimension-study") return ExperimentKind::dimension_study;
  if (text == "roughdata-scaling") return ExperimentKind::roughdata_scaling;
  throw ConfigError("experiment.kind", "unknown kind '" + text + "'");
}

InitialKind parse_initial(const std::string& text) {
  if (text == "rough") return InitialKind::rough;
  if (text == "taylor-green") return InitialKind::taylor_green;
  if (text == "shear") return InitialKind::shear;
  if (text == "zero") return InitialKind::zero;
  throw ConfigError("initial.type", "unknown type '" + text + "'");
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  writer(out);
  if (!out) throw Error("write failed for " + path.string());
}

void write_summary(const ExperimentConfig& cfg, const ExperimentResult& result) {
  write_file(cfg.output_dir / "summary.txt", [&](std::ostream& out) {
    out << "kind=" << to_string(cfg.kind) << " seed=" << cfg.seed << '\n';
    for (const auto& check : result.checks) {
      out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
    }
    out << (result.all_passed() ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
  });
}

bool energy_nonincreasing(const Timeseries& ts) {
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (ts[i].energy > ts[i - 1].energy) return false;
  }
  return true;
}

Timeseries simulate_into(const ExperimentConfig& cfg, ExperimentResult& result) {
  const SpectralField u0 = initial_field(cfg);
  SpectralField final_state(cfg.grid);
  const Timeseries ts = NavierStokesSolver(cfg.grid, cfg.solver).run(u0, final_state);
  write_file(cfg.output_dir / "timeseries.csv", [&](std::ostream& out) { write_csv(out, ts); });

  const double residual = energy_balance_residual(ts, cfg.solver.nu, ts.front().energy);
  result.checks.push_back({"energy_balance", residual <= cfg.energy_balance_tolerance,
                           "residual=" + fmt(residual) + " tolerance=" +
                               fmt(cfg.energy_balance_tolerance)});
  result.checks.push_back({"energy_nonincreasing", energy_nonincreasing(ts),
                           "samples=" + std::to_string(ts.size())});
  const InvariantReport inv = check_invariants(final_state);
  result.checks.push_back({"final_state_invariants", inv.ok(1e-10),
                           "hermitian=" + fmt(inv.hermitian_defect) +
                               " divergence=" + fmt(inv.divergence_defect)});
  return ts;
}

void run_bounds(const ExperimentConfig& cfg, ExperimentResult& result) {
  const Timeseries ts = simulate_into(cfg, result);
  const double calibrated = calibrate_c(ts);
  const double c = cfg.c.value_or(calibrated);
  const CertificationReport report = certify_trajectory(ts, c);
  write_file(cfg.output_dir / "certification.csv",
             [&](std::ostream& out) { write_certification_csv(out, report); });
  result.checks.push_back({"certify_trajectory", report.passed,
                           "c=" + fmt(c) + " calibrated=" + fmt(calibrated) +
                               " violations=" + std::to_string(report.violations.size())});
  const L4BoundCheck l4 = l4_log_bound_check(ts, c);
  result.checks.push_back({"l4_log_bound", l4.passed, "worst_margin=" + fmt(l4.worst_margin)});
  result.checks.push_back(
      {"l4_decay_constant", std::isfinite(l4_decay_constant(ts)), "value=" + fmt(l4_decay_constant(ts))});
}

void run_scan(const ExperimentConfig& cfg, ExperimentResult& result) {
  const auto rows = backward_blowup_scan(cfg.spectrum, cfg.scan_kmax, cfg.solver, cfg.t_small,
                                         cfg.grid.length());
  write_file(cfg.output_dir / "scan.csv", [&](std::ostream& out) {
    out.precision(17);
    out << "kmax,n,sup_enstrophy,energy_at_t_small\n";
    for (const auto& r : rows) {
      out << r.kmax << ',' << r.n << ',' << r.sup_enstrophy << ',' << r.energy_at_t_small << '\n';
    }
  });
  for (const auto& r : rows) {
    const auto dir = cfg.output_dir / ("kmax_" + std::to_string(r.kmax));
    std::filesystem::create_directories(dir);
    write_file(dir / "timeseries.csv", [&](std::ostream& out) { write_csv(out, r.series); });
  }
  result.checks.push_back({"sup_enstrophy_strictly_increasing", sup_enstrophy_increasing(rows),
                           "rows=" + std::to_string(rows.size())});
  const double spread = energy_spread(rows);
  result.checks.push_back({"energy_spread", spread < cfg.energy_spread_tolerance,
                           "spread=" + fmt(spread) + " tolerance=" +
                               fmt(cfg.energy_spread_tolerance)});
}

void run_dimension(const ExperimentConfig& cfg, ExperimentResult& result) {
  PointSet1D points;
  std::optional<double> expected;
  if (cfg.points_file) {
    std::ifstream in(*cfg.points_file);
    if (!in) throw ConfigError("dimension.points", "cannot open " + cfg.points_file->string());
    points = read_points(in);
  } else {
    points = power_sequence(cfg.sequence);
    expected = expected_dim(cfg.sequence.alpha);
  }
  const auto radii = dyadic_radii(cfg.j_first, cfg.j_last);
  const PackingCurve curve = packing_curve(points, radii);
  const DimensionFit fit = boxdim_fit(curve, radii.back(), radii.front());
  write_file(cfg.output_dir / "curve.csv", [&](std::ostream& out) { write_packing_csv(out, curve); });
  write_file(cfg.output_dir / "fit.csv", [&](std::ostream& out) { write_fit_csv(out, fit); });
  if (expected) {
    const double error = std::abs(fit.dimension - *expected);
    result.checks.push_back({"dimension", error <= cfg.dimension_tolerance,
                             "fitted=" + fmt(fit.dimension) + " expected=" + fmt(*expected) +
                                 " tolerance=" + fmt(cfg.dimension_tolerance)});
  } else {
    result.checks.push_back({"dimension_fit", std::isfinite(fit.dimension),
                             "fitted=" + fmt(fit.dimension) + " residual=" + fmt(fit.residual)});
  }
}

void run_roughdata(const ExperimentConfig& cfg, ExperimentResult& result) {
  struct Row {
    int kmax, n;
    double energy, enstrophy;
  };
  std::vector<Row> rows;
  for (int kmax : cfg.rough_kmax) {
    SpectrumSpec spec = cfg.spectrum;
    spec.kmax = kmax;
    const Grid grid(grid_size_for(kmax), cfg.grid.length());
    const SpectralField f = rough_field(spec, grid);
    const InvariantReport inv = check_invariants(f);
    result.checks.push_back({"invariants_kmax_" + std::to_string(kmax), inv.ok(),
                             "divergence=" + fmt(inv.divergence_defect)});
    rows.push_back({kmax, grid.n(), energy(f), enstrophy(f)});
  }
  write_file(cfg.output_dir / "scaling.csv", [&](std::ostream& out) {
    out.precision(17);
    out << "kmax,n,energy,enstrophy\n";
    for (const auto& r : rows) out << r.kmax << ',' << r.n << ',' << r.energy << ',' << r.enstrophy << '\n';
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto tag = std::to_string(rows[i - 1].kmax) + "_" + std::to_string(rows[i].kmax);
    const double change = std::abs(rows[i].energy - rows[i - 1].energy) / rows[i - 1].energy;
    result.checks.push_back({"energy_change_" + tag, change < cfg.energy_change_tolerance,
                             "change=" + fmt(change) + " tolerance=" +
                                 fmt(cfg.energy_change_tolerance)});
    const double ratio = rows[i].enstrophy / rows[i - 1].enstrophy;
    result.checks.push_back(
        {"enstrophy_ratio_" + tag,
         std::abs(ratio - cfg.enstrophy_ratio) <= cfg.enstrophy_ratio_tolerance,
         "ratio=" + fmt(ratio) + " target=" + fmt(cfg.enstrophy_ratio) +
             " tolerance=" + fmt(cfg.enstrophy_ratio_tolerance)});
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::simulate: return "simulate";
    case ExperimentKind::backward_blowup: return "backward-blowup";
    case ExperimentKind::bounds_certify: return "bounds-certify";
    case ExperimentKind::dimension_study: return "dimension-study";
    case ExperimentKind::roughdata_scaling: return "roughdata-scaling";
  }
  return "unknown";
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError(section, "keys must live inside a [section]");
    }
    const auto found = known_keys().find(section);
    if (found == known_keys().end()) throw ConfigError(section, "unknown section");
    for (const auto& entry : entries) {
      if (!found->second.contains(entry.first)) {
        throw ConfigError(section + "." + entry.first, "unknown key");
      }
    }
  }

  const ConfigReader r(tree);
  ExperimentConfig cfg;
  if (auto kind = r.raw("experiment.kind")) cfg.kind = parse_kind(*kind);
  r.read("experiment.seed", cfg.seed);
  if (auto dir = r.raw("experiment.output_dir")) cfg.output_dir = *dir;

  int n = cfg.grid.n();
  double length = cfg.grid.length();
  r.read("grid.n", n);
  r.read("grid.length", length);
  require(n >= 4 && n % 2 == 0, "grid.n", "must be even and >= 4");
  require(length > 0.0 && std::isfinite(length), "grid.length", "must be > 0");
  cfg.grid = Grid(n, length);

  if (auto type = r.raw("initial.type")) cfg.initial = parse_initial(*type);
  r.read("initial.amplitude", cfg.initial_amplitude);
  require(std::isfinite(cfg.initial_amplitude), "initial.amplitude", "must be finite");

  r.read("spectrum.gamma", cfg.spectrum.gamma);
  r.read("spectrum.amplitude", cfg.spectrum.amplitude);
  r.read("spectrum.kmax", cfg.spectrum.kmax);
  cfg.spectrum.seed = cfg.seed;
  require(cfg.spectrum.gamma > 0.0, "spectrum.gamma", "must be > 0");
  require(cfg.spectrum.amplitude >= 0.0, "spectrum.amplitude", "must be >= 0");
  require(cfg.spectrum.kmax >= 1, "spectrum.kmax", "must be >= 1");
  if (cfg.initial == InitialKind::rough && cfg.kind != ExperimentKind::backward_blowup &&
      cfg.kind != ExperimentKind::roughdata_scaling) {
    require(3 * cfg.spectrum.kmax <= cfg.grid.n(), "spectrum.kmax", "must be <= grid.n / 3");
  }

  SolverConfig& s = cfg.solver;
  r.read("solver.nu", s.nu);
  if (auto dt = r.get<double>("solver.dt")) s.dt = *dt;
  r.read("solver.cfl", s.cfl);
  r.read("solver.t_end", s.t_end);
  r.read("solver.sample_interval", s.sample_interval);
  r.read("solver.dealias", s.dealias);
  r.read("solver.advection", s.advection);
  if (auto rule = r.raw("solver.integrals")) {
    if (*rule == "stage") {
      s.integrals = IntegralRule::stage;
    } else if (*rule == "trapezoid") {
      s.integrals = IntegralRule::trapezoid;
    } else {
      throw ConfigError("solver.integrals", "expected stage or trapezoid");
    }
  }
  r.read("solver.energy_balance_tolerance", cfg.energy_balance_tolerance);
  require(s.nu > 0.0, "solver.nu", "must be > 0");
  require(s.t_end > 0.0, "solver.t_end", "must be > 0");
  require(s.sample_interval > 0.0, "solver.sample_interval", "must be > 0");
  require(!s.dt || *s.dt > 0.0, "solver.dt", "must be > 0");
  require(!s.dt || s.sample_interval >= *s.dt, "solver.sample_interval", "must be >= solver.dt");
  require(s.cfl > 0.0, "solver.cfl", "must be > 0");

  if (auto c = r.get<double>("bounds.c")) {
    require(*c >= 0.0 && std::isfinite(*c), "bounds.c", "must be finite and >= 0");
    cfg.c = *c;
  }

  if (auto list = r.int_list("scan.kmax_list")) cfg.scan_kmax = *list;
  r.read("scan.t_small", cfg.t_small);
  r.read("scan.energy_spread_tolerance", cfg.energy_spread_tolerance);
  require(cfg.t_small > 0.0, "scan.t_small", "must be > 0");
  for (std::size_t i = 0; i < cfg.scan_kmax.size(); ++i) {
    require(cfg.scan_kmax[i] >= 1, "scan.kmax_list", "entries must be >= 1");
    require(i == 0 || cfg.scan_kmax[i] > cfg.scan_kmax[i - 1], "scan.kmax_list",
            "must be strictly increasing");
  }

  r.read("dimension.alpha", cfg.sequence.alpha);
  r.read("dimension.c", cfg.sequence.c);
  r.read("dimension.n_max", cfg.sequence.n_max);
  r.read("dimension.j_first", cfg.j_first);
  r.read("dimension.j_last", cfg.j_last);
  r.read("dimension.tolerance", cfg.dimension_tolerance);
  if (auto points = r.raw("dimension.points")) cfg.points_file = *points;
  require(cfg.sequence.alpha > 0.0, "dimension.alpha", "must be > 0");
  require(cfg.sequence.c > 0.0, "dimension.c", "must be > 0");
  require(cfg.sequence.n_max >= 1, "dimension.n_max", "must be >= 1");
  require(cfg.j_last - cfg.j_first >= 3, "dimension.j_last", "need at least 4 radii");

  if (auto list = r.int_list("roughdata.kmax_list")) cfg.rough_kmax = *list;
  r.read("roughdata.energy_change_tolerance", cfg.energy_change_tolerance);
  r.read("roughdata.enstrophy_ratio", cfg.enstrophy_ratio);
  r.read("roughdata.enstrophy_ratio_tolerance", cfg.enstrophy_ratio_tolerance);
  for (int k : cfg.rough_kmax) require(k >= 1, "roughdata.kmax_list", "entries must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  return parse_config(in);
}

bool ExperimentResult::all_passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckLine& c) { return c.passed; });
}

SpectralField initial_field(const ExperimentConfig& cfg) {
  switch (cfg.initial) {
    case InitialKind::rough: {
      SpectrumSpec spec = cfg.spectrum;
      spec.seed = cfg.seed;
      return rough_field(spec, cfg.grid);
    }
    case InitialKind::taylor_green: return taylor_green(cfg.grid, cfg.initial_amplitude);
    case InitialKind::shear: return shear_mode(cfg.grid, cfg.initial_amplitude);
    case InitialKind::zero: return SpectralField(cfg.grid);
  }
  return SpectralField(cfg.grid);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  std::filesystem::create_directories(cfg.output_dir);
  ExperimentResult result;
  result.output_dir = cfg.output_dir;
  try {
    switch (cfg.kind) {
      case ExperimentKind::simulate: simulate_into(cfg, result); break;
      case ExperimentKind::bounds_certify: run_bounds(cfg, result); break;
      case ExperimentKind::backward_blowup: run_scan(cfg, result); break;
      case ExperimentKind::dimension_study: run_dimension(cfg, result); break;
      case ExperimentKind::roughdata_scaling: run_roughdata(cfg, result); break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error("stage " + to_string(cfg.kind) + ": " + e.what());
  }
  write_summary(cfg, result);
  return result;
}

int grid_size_for(int kmax) {
  if (kmax < 1) throw InvalidArgument("grid_size_for: kmax must be >= 1");
  int n = 3 * kmax;
  if (n % 2 != 0) ++n;
  return std::max(n, 4);
}

std::vector<ScanRow> backward_blowup_scan(const SpectrumSpec& spec, std::span<const int> kmax_list,
                                          SolverConfig solver, double t_small, double length) {
  if (!(t_small > 0.0)) throw InvalidArgument("backward_blowup_scan: t_small must be > 0");
  for (std::size_t i = 1; i < kmax_list.size(); ++i) {
    if (kmax_list[i] <= kmax_list[i - 1]) {
      throw InvalidArgument("backward_blowup_scan: kmax list must be strictly increasing");
    }
  }
  solver.t_end = t_small;
  solver.sample_interval = std::min(solver.sample_interval, t_small);
  if (solver.dt) solver.dt = std::min(*solver.dt, solver.sample_interval);

  std::vector<ScanRow> rows;
  for (int kmax : kmax_list) {
    SpectrumSpec job = spec;
    job.kmax = kmax;
    const Grid grid(grid_size_for(kmax), length);
    ScanRow row;
    row.kmax = kmax;
    row.n = grid.n();
    row.series = NavierStokesSolver(grid, solver).run(rough_field(job, grid));
    for (const auto& sample : row.series) {
      if (sample.t > 0.0) row.sup_enstrophy = std::max(row.sup_enstrophy, sample.enstrophy);
    }
    row.energy_at_t_small = row.series.back().energy;
    rows.push_back(std::move(row));
  }
  return rows;
}

bool sup_enstrophy_increasing(std::span<const ScanRow> rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].sup_enstrophy > rows[i - 1].sup_enstrophy)) return false;
  }
  return true;
}

double energy_spread(std::span<const ScanRow> rows) {
  if (rows.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.energy_at_t_small < b.energy_at_t_small;
  });
  if (hi->energy_at_t_small == 0.0) return 0.0;
  return (hi->energy_at_t_small - lo->energy_at_t_small) / hi->energy_at_t_small;
}

}  // namespace nslab
