// Command-line front end: simulate, certify bounds, estimate dimensions.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or input error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "nslab/bounds.hpp"
#include "nslab/dimension.hpp"
#include "nslab/errors.hpp"
#include "nslab/field.hpp"
#include "nslab/lab.hpp"
#include "nslab/timeseries.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

int report(const nslab::ExperimentResult& result) {
  for (const auto& check : result.checks) {
    std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
  }
  std::cout << "output: " << result.output_dir.string() << '\n';
  return result.all_passed() ? kPass : kCheckFailed;
}

enum class Mode { solver, scan, any };

int run_config(const std::string& path, Mode mode, const std::string& output_dir) {
  nslab::ExperimentConfig cfg = nslab::load_config(path);
  using nslab::ExperimentKind;
  if (mode == Mode::scan) cfg.kind = ExperimentKind::backward_blowup;
  if (mode == Mode::solver && cfg.kind != ExperimentKind::simulate &&
      cfg.kind != ExperimentKind::bounds_certify) {
    throw nslab::ConfigError("experiment.kind", "simulate runs simulate or bounds-certify; use `lab run`");
  }
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  return report(nslab::run_experiment(cfg));
}

int run_bounds(const std::string& input, std::optional<double> c, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw nslab::ConfigError("--input", "cannot open " + input);
  const nslab::Timeseries ts = nslab::read_timeseries_csv(in);
  if (const auto defect = nslab::validate(ts); !defect.empty()) {
    throw nslab::ConfigError("--input", defect);
  }
  const double calibrated = nslab::calibrate_c(ts);
  const double used = c.value_or(calibrated);
  const auto cert = nslab::certify_trajectory(ts, used);
  const auto l4 = nslab::l4_log_bound_check(ts, used);

  if (output.empty()) {
    nslab::write_certification_csv(std::cout, cert);
  } else {
    std::ofstream out(output);
    if (!out) throw nslab::ConfigError("--output", "cannot open " + output);
    nslab::write_certification_csv(out, cert);
  }
  const bool ok = cert.passed && l4.passed;
  std::cout << (ok ? "PASS" : "FAIL") << " c=" << fmt(used) << " calibrated_c=" << fmt(calibrated)
            << " violations=" << cert.violations.size()
            << " l4_log_bound=" << (l4.passed ? "pass" : "fail")
            << " l4_worst_margin=" << fmt(l4.worst_margin)
            << " decay_constant=" << fmt(nslab::l4_decay_constant(ts)) << '\n';
  return ok ? kPass : kCheckFailed;
}

std::vector<double> halving_radii(double eps_max, double eps_min) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min)) {
    throw nslab::ConfigError("--eps-min", "need 0 < eps-min <= eps-max");
  }
  std::vector<double> radii;
  for (double eps = eps_max; eps >= eps_min * (1.0 - 1e-12); eps *= 0.5) radii.push_back(eps);
  return radii;
}

struct DimensionArgs {
  std::string points;
  std::optional<double> alpha;
  double c = 1.0;
  std::int64_t n_max = 1'000'000;
  std::optional<double> eps_min, eps_max;
  std::optional<double> expect;
  double tolerance = 0.05;
};

int run_dimension(const DimensionArgs& a) {
  nslab::PointSet1D points;
  std::optional<double> expected = a.expect;
  if (!a.points.empty()) {
    std::ifstream in(a.points);
    if (!in) throw nslab::ConfigError("--points", "cannot open " + a.points);
    points = nslab::read_points(in);
  } else if (a.alpha) {
    points = nslab::power_sequence({*a.alpha, a.c, a.n_max});
    if (!expected) expected = nslab::expected_dim(*a.alpha);
  } else {
    throw nslab::ConfigError("--points", "give --points or --alpha");
  }
  const double eps_max = a.eps_max.value_or(std::ldexp(1.0, -6));
  const double eps_min = a.eps_min.value_or(std::ldexp(1.0, -18));
  const auto radii = halving_radii(eps_max, eps_min);
  const auto curve = nslab::packing_curve(points, radii);
  const auto fit = nslab::boxdim_fit(curve, eps_min, eps_max);
  nslab::write_packing_csv(std::cout, curve);
  nslab::write_fit_csv(std::cout, fit);
  if (!expected) return kPass;
  const bool ok = std::abs(fit.dimension - *expected) <= a.tolerance;
  std::cout << (ok ? "PASS" : "FAIL") << " dimension=" << fmt(fit.dimension)
            << " expected=" << fmt(*expected) << " tolerance=" << fmt(a.tolerance) << '\n';
  return ok ? kPass : kCheckFailed;
}

struct RoughArgs {
  double gamma = 2.0;
  int kmax = 8;
  std::uint64_t seed = 0;
  int n = 0;
  double amplitude = 1.0;
  double length = 2.0 * std::numbers::pi;
  std::string snapshot;
};

int run_roughdata(const RoughArgs& a) {
  const int n = a.n > 0 ? a.n : nslab::grid_size_for(a.kmax);
  const nslab::Grid grid(n, a.length);
  const auto field = nslab::rough_field({a.gamma, a.amplitude, a.kmax, a.seed}, grid);
  if (!a.snapshot.empty()) {
    std::ofstream out(a.snapshot);
    if (!out) throw nslab::ConfigError("--snapshot", "cannot open " + a.snapshot);
    nslab::write_snapshot(out, field);
  }
  const auto inv = nslab::check_invariants(field);
  std::cout << "n,kmax,gamma,seed,energy,enstrophy\n"
            << n << ',' << a.kmax << ',' << fmt(a.gamma) << ',' << a.seed << ','
            << fmt(nslab::energy(field)) << ',' << fmt(nslab::enstrophy(field)) << '\n';
  std::cout << (inv.ok() ? "PASS" : "FAIL") << " invariants hermitian=" << fmt(inv.hermitian_defect)
            << " divergence=" << fmt(inv.divergence_defect) << '\n';
  return inv.ok() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Navier-Stokes enstrophy-bound laboratory"};
  app.require_subcommand(1);

  std::string config, output_dir;
  auto* simulate = app.add_subcommand("simulate", "Run a solver experiment from a config file");
  simulate->add_option("--config", config, "Config file")->required();
  simulate->add_option("--output-dir", output_dir, "Override experiment.output_dir");

  auto* scan = app.add_subcommand("blowup-scan", "Resolution-refinement scan near t = 0");
  scan->add_option("--config", config, "Config file")->required();
  scan->add_option("--output-dir", output_dir, "Override experiment.output_dir");

  auto* run = app.add_subcommand("run", "Run the experiment kind named in the config");
  run->add_option("--config", config, "Config file")->required();
  run->add_option("--output-dir", output_dir, "Override experiment.output_dir");

  std::string input, cert_output;
  std::optional<double> c;
  bool calibrate = false;
  auto* bounds = app.add_subcommand("bounds", "Certify a timeseries CSV against the Riccati envelope");
  bounds->add_option("--input", input, "Timeseries CSV")->required();
  auto* c_opt = bounds->add_option("--c", c, "Riccati constant");
  auto* cal_opt = bounds->add_flag("--calibrate", calibrate, "Use the smallest passing c");
  c_opt->excludes(cal_opt);
  bounds->add_option("--output", cert_output, "Write the certification CSV here instead of stdout");

  DimensionArgs dim;
  auto* dimension = app.add_subcommand("dimension", "Box-counting dimension of a point set");
  auto* points_opt = dimension->add_option("--points", dim.points, "File with one float per line");
  auto* alpha_opt = dimension->add_option("--alpha", dim.alpha, "Power-sequence exponent");
  points_opt->excludes(alpha_opt);
  dimension->add_option("--nmax", dim.n_max, "Power-sequence length");
  dimension->add_option("--scale", dim.c, "Power-sequence scale c");
  dimension->add_option("--eps-min", dim.eps_min, "Smallest radius in the fit");
  dimension->add_option("--eps-max", dim.eps_max, "Largest radius in the fit");
  dimension->add_option("--expect", dim.expect, "Expected dimension");
  dimension->add_option("--tolerance", dim.tolerance, "Allowed |fitted - expected|");

  RoughArgs rough;
  auto* roughdata = app.add_subcommand("roughdata", "Synthesize rough divergence-free initial data");
  roughdata->add_option("--gamma", rough.gamma, "Spectral decay exponent")->required();
  roughdata->add_option("--kmax", rough.kmax, "Shell cutoff")->required();
  roughdata->add_option("--seed", rough.seed, "RNG seed")->required();
  roughdata->add_option("--n", rough.n, "Grid size (default: smallest resolving kmax)");
  roughdata->add_option("--amplitude", rough.amplitude, "Spectrum amplitude");
  roughdata->add_option("--length", rough.length, "Box side length");
  roughdata->add_option("--snapshot", rough.snapshot, "Write a text snapshot of the field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*simulate) return run_config(config, Mode::solver, output_dir);
    if (*scan) return run_config(config, Mode::scan, output_dir);
    if (*run) return run_config(config, Mode::any, output_dir);
    if (*bounds) return run_bounds(input, calibrate ? std::nullopt : c, cert_output);
    if (*dimension) return run_dimension(dim);
    if (*roughdata) return run_roughdata(rough);
  } catch (const nslab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nslab::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const nslab::SpecExceedsGrid& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kConfigError;
}
