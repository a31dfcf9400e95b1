#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nslab/dimension.hpp"
#include "nslab/field.hpp"
#include "nslab/solver.hpp"
#include "nslab/timeseries.hpp"

namespace nslab {

enum class ExperimentKind {
  simulate,
  backward_blowup,
  bounds_certify,
  dimension_study,
  roughdata_scaling,
};

enum class InitialKind { rough, taylor_green, shear, zero };

/// Flat key=value configuration, one section per module:
///
///   [experiment]  kind, seed, output_dir
///   [grid]        n, length
///   [initial]     type (rough | taylor-green | shear | zero), amplitude
///   [spectrum]    gamma, amplitude, kmax
///   [solver]      nu, dt, cfl, t_end, sample_interval, dealias, advection,
///                 integrals (stage | trapezoid), energy_balance_tolerance
///   [bounds]      c (omit to calibrate)
///   [scan]        kmax_list, t_small, energy_spread_tolerance
///   [dimension]   alpha, c, n_max, j_first, j_last, tolerance, points
///   [roughdata]   kmax_list, energy_change_tolerance, enstrophy_ratio,
///                 enstrophy_ratio_tolerance
///
/// Keys outside this list are rejected.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::simulate;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "lab-output";

  Grid grid{32, 2.0 * std::numbers::pi};
  InitialKind initial = InitialKind::taylor_green;
  double initial_amplitude = 1.0;
  SpectrumSpec spectrum;
  SolverConfig solver;
  double energy_balance_tolerance = 1e-6;

  std::optional<double> c;

  std::vector<int> scan_kmax = {8, 16, 32};
  double t_small = 0.01;
  double energy_spread_tolerance = 0.10;

  PowerSequenceSpec sequence;
  int j_first = 6;
  int j_last = 18;
  double dimension_tolerance = 0.05;
  std::optional<std::filesystem::path> points_file;

  std::vector<int> rough_kmax = {16, 32, 64};
  double energy_change_tolerance = 0.02;
  double enstrophy_ratio = 2.0;
  double enstrophy_ratio_tolerance = 0.3;
};

/// Throws ConfigError naming the offending `section.key`.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

std::string to_string(ExperimentKind kind);

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentResult {
  std::filesystem::path output_dir;
  std::vector<CheckLine> checks;

  bool all_passed() const noexcept;
};

/// Runs the pipeline named by `cfg.kind`, writing CSVs and `summary.txt`
/// into `cfg.output_dir`.  Output bytes depend only on the configuration.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Initial field described by the [initial] and [spectrum] sections.
SpectralField initial_field(const ExperimentConfig& cfg);

struct ScanRow {
  int kmax = 0;
  int n = 0;
  double sup_enstrophy = 0.0;      ///< max over samples in (0, t_small]
  double energy_at_t_small = 0.0;
  Timeseries series;
};

/// Smallest even n >= 4 with kmax <= n / 3.
int grid_size_for(int kmax);

/// Solves from rough_field(spec with each kmax) to t_small on the smallest grid
/// resolving it; seeds are shared, so lower-kmax data is a truncation of
/// higher-kmax data.  `kmax_list` must be strictly increasing.
std::vector<ScanRow> backward_blowup_scan(const SpectrumSpec& spec, std::span<const int> kmax_list,
                                          SolverConfig solver, double t_small, double length);

/// Column checks on a scan: sup-enstrophy strictly increasing, and
/// (max - min) / max of the energy column.
bool sup_enstrophy_increasing(std::span<const ScanRow> rows);
double energy_spread(std::span<const ScanRow> rows);

}  // namespace nslab
