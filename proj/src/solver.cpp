#include "nslab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nslab/errors.hpp"

namespace nslab {
namespace {

// Tolerance for deciding how many whole steps fit in a sample interval.
constexpr double kStepSlack = 1e-9;

double stage_enstrophy(const SpectralField& f, const Eigen::ArrayXd& k2) {
  return f.grid().volume() * (f.coeffs().rowwise().squaredNorm().array() * k2).sum();
}

void scale_modes(ModeMatrix& m, const Eigen::ArrayXd& factors) {
  for (int comp = 0; comp < 3; ++comp) m.col(comp).array() *= factors;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("solver: nu must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("solver: t_end must be > 0");
  if (!(sample_interval > 0.0)) throw InvalidArgument("solver: sample_interval must be > 0");
  if (dt) {
    if (!(*dt > 0.0)) throw InvalidArgument("solver: dt must be > 0");
    if (sample_interval < *dt) throw InvalidArgument("solver: sample_interval must be >= dt");
  } else if (!(cfl > 0.0)) {
    throw InvalidArgument("solver: cfl must be > 0");
  }
}

NavierStokesSolver::NavierStokesSolver(const Grid& grid, const SolverConfig& config)
    : grid_(grid), config_(config), fft_(grid.n()) {
  config_.validate();
  const auto size = static_cast<Eigen::Index>(grid.size());
  kx_.resize(size);
  ky_.resize(size);
  kz_.resize(size);
  retained_.resize(size);
  partner_.resize(grid.size());
  const double unit = grid.wavenumber_unit();
  for (Eigen::Index i = 0; i < size; ++i) {
    const Eigen::Vector3i k = grid.wavevector(static_cast<std::size_t>(i));
    kx_(i) = unit * k.x();
    ky_(i) = unit * k.y();
    kz_(i) = unit * k.z();
    retained_(i) = grid.retained(k) ? 1.0 : 0.0;
    partner_[static_cast<std::size_t>(i)] =
        static_cast<Eigen::Index>(grid.index(-k.x(), -k.y(), -k.z()));
  }
  k2_ = kx_.square() + ky_.square() + kz_.square();
  inv_k2_ = (k2_ > 0.0).select(k2_.inverse(), 0.0);
}

SpectralField NavierStokesSolver::nonlinear_term(const SpectralField& field) const {
  SpectralField out(grid_);
  if (!config_.advection) return out;

  const Complex i_unit(0.0, 1.0);
  const auto u_hat = field.coeffs().array();
  const auto ux = u_hat.col(0), uy = u_hat.col(1), uz = u_hat.col(2);
  const auto size = static_cast<Eigen::Index>(grid_.size());

  // Two real fields per complex transform: (ux, uy), (uz, wx), (wy, wz).
  Eigen::ArrayXcd a = ux + i_unit * uy;
  Eigen::ArrayXcd b = uz + i_unit * (i_unit * (ky_ * uz - kz_ * uy));
  Eigen::ArrayXcd c = i_unit * (kz_ * ux - kx_ * uz) + i_unit * (i_unit * (kx_ * uy - ky_ * ux));
  fft_.to_physical(a.data());
  fft_.to_physical(b.data());
  fft_.to_physical(c.data());

  const Eigen::ArrayXd vx = a.real(), vy = a.imag(), vz = b.real();
  const Eigen::ArrayXd wx = b.imag(), wy = c.real(), wz = c.imag();
  a = (vy * wz - vz * wy).cast<Complex>() + i_unit * (vz * wx - vx * wz).cast<Complex>();
  b = (vx * wy - vy * wx).cast<Complex>();
  fft_.to_spectral(a.data());
  fft_.to_spectral(b.data());

  // Unpack the paired transform using Hermitian symmetry of each real field.
  ModeMatrix& n_hat = out.coeffs();
  for (Eigen::Index i = 0; i < size; ++i) {
    const Complex mirror = std::conj(a(partner_[static_cast<std::size_t>(i)]));
    n_hat(i, 0) = 0.5 * (a(i) + mirror);
    n_hat(i, 1) = -0.5 * i_unit * (a(i) - mirror);
  }
  n_hat.col(2) = b.matrix();

  auto n_arr = n_hat.array();
  if (config_.dealias) {
    for (int comp = 0; comp < 3; ++comp) n_arr.col(comp) *= retained_;
  }
  const Eigen::ArrayXcd div_part =
      (kx_ * n_arr.col(0) + ky_ * n_arr.col(1) + kz_ * n_arr.col(2)) * inv_k2_;
  n_arr.col(0) -= kx_ * div_part;
  n_arr.col(1) -= ky_ * div_part;
  n_arr.col(2) -= kz_ * div_part;
  n_hat.row(0).setZero();
  return out;
}

StepResult NavierStokesSolver::step(const SpectralField& field, double dt) const {
  if (!(dt > 0.0)) throw InvalidArgument("step: dt must be > 0");
  const Eigen::ArrayXd half = (-0.5 * config_.nu * dt * k2_).exp();
  const Eigen::ArrayXd full = half.square();

  // Integrating-factor RK4: classical RK4 on v = exp(nu |k'|^2 t) û.
  const SpectralField k1 = nonlinear_term(field);

  SpectralField s2 = field;
  s2.coeffs() += (0.5 * dt) * k1.coeffs();
  scale_modes(s2.coeffs(), half);
  const SpectralField k2 = nonlinear_term(s2);

  SpectralField s3 = field;
  scale_modes(s3.coeffs(), half);
  s3.coeffs() += (0.5 * dt) * k2.coeffs();
  const SpectralField k3 = nonlinear_term(s3);

  SpectralField s4 = field;
  scale_modes(s4.coeffs(), full);
  {
    ModeMatrix tmp = k3.coeffs();
    scale_modes(tmp, half);
    s4.coeffs() += dt * tmp;
  }
  const SpectralField k4 = nonlinear_term(s4);

  ModeMatrix increment = k1.coeffs();
  scale_modes(increment, full);
  {
    ModeMatrix mid = k2.coeffs() + k3.coeffs();
    scale_modes(mid, half);
    increment += 2.0 * mid + k4.coeffs();
  }
  SpectralField next = field;
  scale_modes(next.coeffs(), full);
  next.coeffs() += (dt / 6.0) * increment;

  StepResult result{std::move(next), 0.0, 0.0};
  if (!result.field.coeffs().allFinite()) {
    throw NonFinite("step: non-finite coefficients", 0.0);
  }

  const double z1 = stage_enstrophy(field, k2_);
  const double z4_end = stage_enstrophy(result.field, k2_);
  if (config_.integrals == IntegralRule::trapezoid) {
    result.diss_increment = 0.5 * dt * (z1 + z4_end);
    result.ens4_increment = 0.5 * dt * (z1 * z1 + z4_end * z4_end);
  } else {
    const double z2 = stage_enstrophy(s2, k2_);
    const double z3 = stage_enstrophy(s3, k2_);
    const double z4 = stage_enstrophy(s4, k2_);
    result.diss_increment = dt / 6.0 * (z1 + 2.0 * z2 + 2.0 * z3 + z4);
    result.ens4_increment = dt / 6.0 * (z1 * z1 + 2.0 * z2 * z2 + 2.0 * z3 * z3 + z4 * z4);
  }
  return result;
}

double NavierStokesSolver::cfl_step(const SpectralField& field) const {
  const PointMatrix u = to_physical(field);
  const double speed = u.cwiseAbs().rowwise().sum().maxCoeff() / grid_.spacing();
  if (!(speed > 0.0)) return std::numeric_limits<double>::infinity();
  return config_.cfl / speed;
}

double NavierStokesSolver::planned_step(const SpectralField& u0) const {
  const double target = config_.dt ? *config_.dt : cfl_step(u0);
  const double interval = std::min(config_.sample_interval, config_.t_end);
  const double steps = std::max(1.0, std::ceil(interval / target - kStepSlack));
  return interval / steps;
}

Timeseries NavierStokesSolver::run(const SpectralField& u0) const {
  SpectralField final_state(grid_);
  return run(u0, final_state);
}

Timeseries NavierStokesSolver::run(const SpectralField& u0, SpectralField& final_state) const {
  if (!(u0.grid() == grid_)) throw InvalidArgument("run: initial field grid mismatch");
  const double dt_target = planned_step(u0);

  Timeseries ts;
  SpectralField u = u0;
  double diss = 0.0, ens4 = 0.0;
  ts.push_back({0.0, energy(u), enstrophy(u), 0.0, 0.0});

  const double interval = config_.sample_interval;
  const auto samples =
      static_cast<long>(std::max(1.0, std::ceil(config_.t_end / interval - kStepSlack)));
  double t = 0.0;
  for (long i = 1; i <= samples; ++i) {
    const double t_next = i == samples ? config_.t_end : static_cast<double>(i) * interval;
    const double span = t_next - t;
    const double steps = std::max(1.0, std::ceil(span / dt_target - kStepSlack));
    const double dt = span / steps;
    for (long s = 0; s < static_cast<long>(steps); ++s) {
      const double failure_time = t + static_cast<double>(s + 1) * dt;
      StepResult r = [&] {
        try {
          return step(u, dt);
        } catch (const NonFinite&) {
          throw NonFinite("run: non-finite state at t = " + std::to_string(failure_time),
                          failure_time);
        }
      }();
      u = std::move(r.field);
      diss += r.diss_increment;
      ens4 += r.ens4_increment;
    }
    t = t_next;
    ts.push_back({t, energy(u), enstrophy(u), diss, ens4});
  }
  final_state = std::move(u);
  return ts;
}

SpectralField nonlinear_term(const SpectralField& field) {
  return NavierStokesSolver(field.grid(), SolverConfig{}).nonlinear_term(field);
}

SpectralField step(const SpectralField& field, const SolverConfig& config, double dt) {
  return NavierStokesSolver(field.grid(), config).step(field, dt).field;
}

Timeseries run(const SpectralField& u0, const SolverConfig& config) {
  return NavierStokesSolver(u0.grid(), config).run(u0);
}

double energy_balance_residual(const Timeseries& ts, double nu, double initial_energy) {
  if (ts.empty()) throw EmptySeries("energy_balance_residual: empty timeseries");
  if (initial_energy == 0.0) {
    double worst = 0.0;
    for (const auto& r : ts) worst = std::max(worst, std::abs(r.energy + 2.0 * nu * r.diss_integral));
    return worst;
  }
  double worst = 0.0;
  for (const auto& r : ts) {
    worst = std::max(worst,
                     std::abs(r.energy + 2.0 * nu * r.diss_integral - initial_energy) / initial_energy);
  }
  return worst;
}

}  // namespace nslab
