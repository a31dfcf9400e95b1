#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "nslab/field.hpp"
#include "nslab/spectral_transform.hpp"
#include "nslab/timeseries.hpp"

namespace nslab {

/// How the running integrals of ||Du||^2 and ||Du||^4 are accumulated per step.
enum class IntegralRule {
  /// RK4 weights over the stage states of each step; fourth order, matches the
  /// accuracy of the energy itself.
  stage,
  /// Trapezoid on step endpoints; second order.
  trapezoid,
};

struct SolverConfig {
  double nu = 0.05;
  /// Fixed step. When unset the step comes from `cfl` and the initial field.
  std::optional<double> dt;
  double cfl = 0.4;
  double t_end = 1.0;
  double sample_interval = 0.1;
  bool dealias = true;
  /// Switches the advection term off (pure heat equation); used for testing.
  bool advection = true;
  IntegralRule integrals = IntegralRule::stage;

  /// Throws InvalidArgument on nu <= 0, t_end <= 0, dt <= 0, sample_interval < dt, cfl <= 0.
  void validate() const;
};

struct StepResult {
  SpectralField field;
  double diss_increment = 0.0;  ///< ∫ ||Du||^2 over the step
  double ens4_increment = 0.0;  ///< ∫ ||Du||^4 over the step
};

/// Integrating-factor RK4 pseudo-spectral solver for the unforced
/// incompressible Navier-Stokes equations on a periodic box.
///
/// The viscous semigroup exp(-nu |k'|^2 t) is applied exactly; the advection
/// term is evaluated in rotational form u × ω, dealiased with the two-thirds
/// rule and Leray-projected, which removes the pressure.
class NavierStokesSolver {
 public:
  NavierStokesSolver(const Grid& grid, const SolverConfig& config);

  const Grid& grid() const noexcept { return grid_; }
  const SolverConfig& config() const noexcept { return config_; }

  /// Projected, dealiased spectral representation of -(u·∇)u.
  SpectralField nonlinear_term(const SpectralField& field) const;

  /// One step of size dt. Throws NonFinite if the result is not finite.
  StepResult step(const SpectralField& field, double dt) const;

  /// Largest step allowed by the advective CFL condition
  /// dt * max_x sum_i |u_i(x)| / dx <= cfl.  Infinity for a zero field.
  double cfl_step(const SpectralField& field) const;

  /// Step actually used by `run` for this initial field: the CFL (or fixed)
  /// step shrunk so that every sample interval holds a whole number of steps.
  double planned_step(const SpectralField& u0) const;

  /// Integrates from t = 0 to t_end, sampling every sample_interval.
  Timeseries run(const SpectralField& u0) const;
  /// Same as `run`, also returning the final state.
  Timeseries run(const SpectralField& u0, SpectralField& final_state) const;

 private:
  Grid grid_;
  SolverConfig config_;
  FourierTransform fft_;
  // Per-mode tables over the flattened cube.
  Eigen::ArrayXd kx_, ky_, kz_;  // physical wavevector components
  Eigen::ArrayXd k2_;            // |k'|^2
  Eigen::ArrayXd inv_k2_;        // 1 / |k'|^2, zero at k = 0
  Eigen::ArrayXd retained_;      // 1 inside the two-thirds band, else 0
  std::vector<Eigen::Index> partner_;  // index of -k
};

SpectralField nonlinear_term(const SpectralField& field);
SpectralField step(const SpectralField& field, const SolverConfig& config, double dt);
Timeseries run(const SpectralField& u0, const SolverConfig& config);

/// max_i |E(t_i) + 2 nu D(t_i) - E0| / E0 over samples; 0 for a zero trajectory.
/// Throws EmptySeries when `ts` has no rows.
double energy_balance_residual(const Timeseries& ts, double nu, double initial_energy);

}  // namespace nslab
