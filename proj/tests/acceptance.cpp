// Acceptance suite: one check per criterion, each at its stated tolerance and
// runtime budget.  Prints detail lines, then one PASS/FAIL line per criterion.
//
//   acceptance [--criterion N]...     (default: all)

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "nslab/bounds.hpp"
#include "nslab/dimension.hpp"
#include "nslab/field.hpp"
#include "nslab/lab.hpp"
#include "nslab/solver.hpp"
#include "oracles.hpp"

using namespace nslab;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

/// Collects sub-check outcomes and their detail lines.
class Verdict {
 public:
  void check(bool ok, const std::string& what) {
    passed_ = passed_ && ok;
    lines_.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { lines_.push_back("     " + what); }

  bool passed() const { return passed_; }
  const std::vector<std::string>& lines() const { return lines_; }

 private:
  bool passed_ = true;
  std::vector<std::string> lines_;
};

std::string num(double v, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

// ---------------------------------------------------------------- trajectories

struct Trajectory {
  std::string label;
  Timeseries series;
};

SolverConfig solver_config(double nu, std::optional<double> dt, double t_end, double sample) {
  SolverConfig cfg;
  cfg.nu = nu;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.sample_interval = sample;
  return cfg;
}

Trajectory single_mode_run() {
  const Grid g(32, kTwoPi);
  return {"single-mode decay", run(shear_mode(g, 1.0), solver_config(0.1, std::nullopt, 1.0, 0.05))};
}

Trajectory taylor_green_run() {
  const Grid g(32, kTwoPi);
  SolverConfig cfg = solver_config(0.05, std::nullopt, 1.0, 0.05);
  cfg.cfl = 0.4;
  return {"taylor-green cfl 0.4", run(taylor_green(g, 1.0), cfg)};
}

std::vector<double> richardson_steps() { return {0.05, 0.025, 0.0125}; }

std::vector<Trajectory> richardson_runs() {
  const Grid g(32, kTwoPi);
  std::vector<Trajectory> out;
  for (double dt : richardson_steps()) {
    out.push_back({"taylor-green dt " + num(dt), run(taylor_green(g, 1.0), solver_config(0.05, dt, 1.0, 0.05))});
  }
  return out;
}

SpectrumSpec scan_spec() { return {2.0, 1.0, 8, 7}; }

std::vector<ScanRow> scan_rows() {
  SolverConfig cfg = solver_config(0.02, std::nullopt, 0.01, 0.001);
  const std::vector<int> kmax = {8, 16, 32};
  return backward_blowup_scan(scan_spec(), kmax, cfg, 0.01, kTwoPi);
}

// ---------------------------------------------------------------- criteria

void envelope_algebra(Verdict& v) {
  gen::Source src(1001);
  double worst_inverse = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double y = src.log_uniform(1e-3, 1e3);
    const double c = src.log_uniform(1e-3, 1e3);
    const double dt = src.uniform(0.0, 0.999) / (c * y * y);
    const auto f = forward_envelope(y, c, dt);
    if (!f.finite()) {
      worst_inverse = INFINITY;
      break;
    }
    worst_inverse = std::max(worst_inverse, std::abs(backward_envelope(f.value, c, dt) - y) / y);
  }
  v.check(worst_inverse <= 1e-12, "inverse identity on 10^4 triples, worst relative error " + num(worst_inverse));

  double worst_ode = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double y = src.log_uniform(1e-2, 1e2);
    const double c = src.log_uniform(1e-2, 1e2);
    const double dt = src.uniform(0.0, 0.9) / (c * y * y);
    const double exact = forward_envelope(y, c, dt).value;
    worst_ode = std::max(worst_ode, std::abs(exact - oracle::riccati_ode(y, c, dt)) / exact);
  }
  v.check(worst_ode <= 1e-9, "ODE oracle on 10^3 instances, worst relative error " + num(worst_ode));
}

void dimension_recovery(Verdict& v) {
  const auto radii = dyadic_radii(6, 18);
  for (double alpha : {1.0 / 3, 0.5, 1.0, 2.0}) {
    const auto x = power_sequence({alpha, 1.0, 1'000'000});
    const auto fit = boxdim_fit(packing_curve(x, radii), radii.back(), radii.front());
    const double expected = alpha / (1.0 + alpha);
    v.check(std::abs(fit.dimension - expected) <= 0.05,
            "alpha " + num(alpha, 4) + ": fitted " + num(fit.dimension) + ", expected " + num(expected) +
                ", residual " + num(fit.residual));
  }
}

void packing_oracle(Verdict& v) {
  gen::Source src(1003);
  int mismatches = 0;
  int comparisons = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int m = src.integer(0, 12);
    std::vector<double> pts;
    // Half the sets sit on a lattice so exact 2 eps separations occur.
    const bool lattice = trial % 2 == 0;
    for (int i = 0; i < m; ++i) pts.push_back(lattice ? src.integer(0, 32) * 0.0625 : src.uniform(0.0, 2.0));
    const PointSet1D x(pts);
    const std::vector<double> distinct(x.points().begin(), x.points().end());
    for (double eps : {0.03125, 0.0625, 0.125, src.log_uniform(1e-3, 1.0), src.log_uniform(1e-3, 1.0)}) {
      ++comparisons;
      if (packing_count(x, eps) != static_cast<std::size_t>(oracle::brute_force_packing(distinct, eps))) {
        ++mismatches;
      }
    }
  }
  v.check(mismatches == 0, std::to_string(comparisons) + " greedy/brute-force comparisons, " +
                               std::to_string(mismatches) + " mismatches");
}

void shift_gap_mechanics(Verdict& v) {
  gen::Source src(1004);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const double c = src.log_uniform(1e-3, 1e3);
    const double eps = src.log_uniform(1e-8, 1.0);
    const double half = 0.5 * std::sqrt(c * eps);
    const double x = src.uniform(0.0, 1.0) * half;
    if (!(sqrt_shift_gap(x, c, eps) > half)) ++failures;
  }
  v.check(failures == 0, "gap > sqrt(c eps)/2 whenever X < sqrt(c eps)/2 on 10^3 instances, " +
                             std::to_string(failures) + " failures");

  for (double delta : {0.6, 0.75, 1.0}) {
    bool dominated = true;
    double min_ratio = INFINITY;
    for (int j = 10; j <= 20; ++j) {
      const auto r = packing_sum_lower(std::ldexp(1.0, -j), 1.0, delta);
      dominated = dominated && r.sum >= r.bound && r.sum >= r.closed_form;
      if (r.closed_form > 0) min_ratio = std::min(min_ratio, r.sum / r.closed_form);
    }
    v.check(dominated, "delta " + num(delta) + ": sum dominates the closed-form bound for eps = 2^-10..2^-20" +
                           ", min sum/bound " + num(min_ratio));
  }
}

void forn_divergence(Verdict& v) {
  const double s = forn_partial_sum(1'000'000);
  const double oracle = (oracle::harmonic(1'000'001) - 1.0) / std::sqrt(2.0);
  v.check(s >= 9.0, "partial sum at M = 10^6 is " + num(s, 10) + " (>= 9.0)");
  v.check(std::abs(s - oracle) <= 1e-10 * oracle, "harmonic oracle " + num(oracle, 10));
  double prev = 0.0;
  bool monotone = true;
  for (std::int64_t m = 1; m <= 1'000'000; m *= 10) {
    const double value = forn_partial_sum(m);
    monotone = monotone && value > prev;
    prev = value;
  }
  v.check(monotone, "increasing over M = 10^0..10^6");
  bool unbounded = true;
  for (int b = 1; b <= 9; ++b) {
    const auto m = static_cast<std::int64_t>(std::ceil(std::exp(std::sqrt(2.0) * b + 1.0)));
    unbounded = unbounded && forn_partial_sum(m) > b;
  }
  v.check(unbounded, "exceeds B at M = exp(sqrt(2) B + 1) for B = 1..9");
}

void solver_correctness(Verdict& v) {
  const double nu = 0.1;
  {
    const Grid g(32, kTwoPi);
    SpectralField final_state(g);
    const NavierStokesSolver solver(g, solver_config(nu, std::nullopt, 1.0, 0.05));
    const Timeseries ts = solver.run(shear_mode(g, 1.0), final_state);
    const double amp = std::abs(final_state.mode(1, 0, 0)(1));
    const double error = std::abs(amp - std::exp(-nu));
    v.check(error <= 1e-8, "single-mode amplitude at t = 1: error " + num(error) + " vs exp(-nu |k'|^2 t)");
  }
  {
    const Grid g(32, kTwoPi);
    const SpectralField u0 = taylor_green(g, 1.0);
    const Trajectory tg = taylor_green_run();
    const double residual = energy_balance_residual(tg.series, 0.05, energy(u0));
    v.check(residual <= 1e-6, "taylor-green energy balance residual " + num(residual));
  }
  {
    const auto runs = richardson_runs();
    std::vector<double> finals;
    for (const auto& r : runs) finals.push_back(r.series.back().energy);
    const double order = std::log2(std::abs(finals[0] - finals[1]) / std::abs(finals[1] - finals[2]));
    v.check(order >= 3.8, "Richardson order on dt = 0.05, 0.025, 0.0125: " + num(order));
  }
}

void rough_data_scaling(Verdict& v) {
  const std::vector<int> kmax = {16, 32, 64};
  std::vector<double> energies, enstrophies;
  for (int k : kmax) {
    const SpectralField f = rough_field({2.0, 1.0, k, 7}, Grid(grid_size_for(k), kTwoPi));
    energies.push_back(energy(f));
    enstrophies.push_back(enstrophy(f));
  }
  for (std::size_t i = 1; i < kmax.size(); ++i) {
    const std::string tag = std::to_string(kmax[i - 1]) + "->" + std::to_string(kmax[i]);
    const double change = std::abs(energies[i] - energies[i - 1]) / energies[i - 1];
    const double ratio = enstrophies[i] / enstrophies[i - 1];
    const double energy_oracle = oracle::shell_sum(kmax[i], -4.0) / oracle::shell_sum(kmax[i - 1], -4.0);
    const double ens_oracle = oracle::shell_sum(kmax[i], -2.0) / oracle::shell_sum(kmax[i - 1], -2.0);
    v.check(std::abs(energies[i] / energies[i - 1] - energy_oracle) <= 1e-10 * energy_oracle,
            tag + ": energy ratio matches the shell-sum oracle " + num(energy_oracle, 10));
    v.check(std::abs(ratio - ens_oracle) <= 1e-10 * ens_oracle,
            tag + ": enstrophy ratio matches the shell-sum oracle " + num(ens_oracle, 10));
    v.check(change < 0.02, tag + ": energy change " + num(change) + " (< 0.02)");
    v.check(std::abs(ratio - 2.0) <= 0.3, tag + ": enstrophy ratio " + num(ratio) + " (2.0 +- 0.3)");
  }
}

void backward_blowup(Verdict& v) {
  const auto rows = scan_rows();
  for (const auto& r : rows) {
    v.note("kmax " + std::to_string(r.kmax) + " n " + std::to_string(r.n) + ": sup enstrophy " +
           num(r.sup_enstrophy) + ", energy at t_small " + num(r.energy_at_t_small));
  }
  v.check(sup_enstrophy_increasing(rows), "sup-enstrophy column strictly increasing");
  const double spread = energy_spread(rows);
  v.check(spread < 0.10, "energy column spread " + num(spread) + " (< 0.10)");
}

void certify_one(Verdict& v, const Trajectory& t) {
  const double c = calibrate_c(t.series);
  const auto cert = certify_trajectory(t.series, c);
  const auto l4 = l4_log_bound_check(t.series, c);
  v.check(cert.passed && l4.passed, t.label + ": c* = " + num(c) + ", certified " +
                                        (cert.passed ? "yes" : "no") + ", l4 log bound " +
                                        (l4.passed ? "holds" : "fails") + " (worst margin " +
                                        num(l4.worst_margin) + ")");
}

void trajectory_certification(Verdict& v) {
  certify_one(v, single_mode_run());
  certify_one(v, taylor_green_run());
  for (const auto& r : richardson_runs()) certify_one(v, r);
  v.note("rough-data scaling produces no solver trajectories");
  for (const auto& r : scan_rows()) certify_one(v, {"scan kmax " + std::to_string(r.kmax), r.series});

  // Fixed rough initial data resolved on successively finer grids.
  std::vector<double> constants;
  for (int n : {16, 32, 64}) {
    const Grid g(n, kTwoPi);
    const SpectralField u0 = rough_field({2.0, 0.5, 5, 7}, g);
    Trajectory t{"rough n " + std::to_string(n), run(u0, solver_config(0.02, std::nullopt, 0.5, 0.01))};
    certify_one(v, t);
    constants.push_back(calibrate_c(t.series));
  }
  const auto [lo, hi] = std::minmax_element(constants.begin(), constants.end());
  const double spread = *lo > 0 ? *hi / *lo : INFINITY;
  v.check(spread < 2.0, "c* across n = 16, 32, 64 varies by a factor " + num(spread) + " (< 2)");
}

void packing_budget_of_profiles(Verdict& v) {
  const double c = 1.0;
  for (int m : {1, 2, 4, 8}) {
    std::vector<double> times;
    for (int i = 1; i <= m; ++i) times.push_back(static_cast<double>(i) / (m + 1));
    const double budget = oracle::leray_profile_integral(times, c);
    for (double eps : {1e-2, 1e-3}) {
      const auto allowed = packing_budget(budget, c, eps);
      v.check(m <= allowed, "m = " + std::to_string(m) + ", eps = " + num(eps) + ": measured integral " +
                                num(budget) + ", budget " + std::to_string(allowed));
    }
  }
}

struct Criterion {
  std::string title;
  double budget_seconds;  ///< 0: no stated limit
  std::function<void(Verdict&)> body;
};

const std::map<int, Criterion>& criteria() {
  static const std::map<int, Criterion> all = {
      {1, {"envelope algebra", 5.0, envelope_algebra}},
      {2, {"dimension recovery", 60.0, dimension_recovery}},
      {3, {"packing oracle", 10.0, packing_oracle}},
      {4, {"square-root gap and packing sum", 0.0, shift_gap_mechanics}},
      {5, {"harmonic partial sums diverge", 0.0, forn_divergence}},
      {6, {"solver correctness", 120.0, solver_correctness}},
      {7, {"rough data scaling", 60.0, rough_data_scaling}},
      {8, {"backward blow-up scan", 600.0, backward_blowup}},
      {9, {"trajectory certification", 0.0, trajectory_certification}},
      {10, {"packing budget of singular profiles", 0.0, packing_budget_of_profiles}},
  };
  return all;
}

bool run_criterion(int id, const Criterion& crit) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    crit.body(v);
  } catch (const std::exception& e) {
    v.check(false, std::string("threw: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (crit.budget_seconds > 0) {
    v.check(seconds < crit.budget_seconds,
            "runtime " + num(seconds, 3) + " s (< " + num(crit.budget_seconds) + " s)");
  } else {
    v.note("runtime " + num(seconds, 3) + " s");
  }
  for (const auto& line : v.lines()) std::cout << "  [" << id << "] " << line << '\n';
  std::cout << "criterion " << id << ": " << (v.passed() ? "PASS" : "FAIL") << " " << crit.title << std::endl;
  return v.passed();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty()) {
    for (const auto& [id, crit] : criteria()) selected.push_back(id);
  }
  bool all = true;
  for (int id : selected) {
    const auto found = criteria().find(id);
    if (found == criteria().end()) {
      std::cerr << "no criterion " << id << '\n';
      return 2;
    }
    all = run_criterion(id, found->second) && all;
  }
  return all ? 0 : 1;
}
