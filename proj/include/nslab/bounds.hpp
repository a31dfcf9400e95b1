#pragma once

// Riccati envelope algebra for the enstrophy Y = ||Du||^2.
//
// The comparison equation Y' = (c/2) Y^3 bounds enstrophy growth from above
// forward in time and, rearranged, from below backward in time.  The
// constant c is opaque: callers supply it or calibrate it from a trajectory.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "nslab/errors.hpp"
#include "nslab/timeseries.hpp"

namespace nslab {

struct BoundParams {
  double c = 1.0;

  /// Throws InvalidArgument unless 0 < c < inf.
  void validate() const;
};

enum class EnvelopeStatus { finite, horizon_exceeded };

template <std::floating_point Scalar>
struct ForwardEnvelope {
  Scalar value;  ///< +inf when the horizon is exceeded
  EnvelopeStatus status;

  bool finite() const noexcept { return status == EnvelopeStatus::finite; }
};

/// Y_s / sqrt(1 - c dt Y_s^2), the exact solution of Y' = (c/2) Y^3 after dt.
/// Reaching c dt Y_s^2 >= 1 is reported as `horizon_exceeded`, not thrown.
template <std::floating_point Scalar>
ForwardEnvelope<Scalar> forward_envelope(Scalar y_s, Scalar c, Scalar dt) {
  if (!(y_s >= 0) || !std::isfinite(y_s)) throw InvalidArgument("forward_envelope: Y_s must be finite and >= 0");
  if (!(c >= 0) || !std::isfinite(c)) throw InvalidArgument("forward_envelope: c must be finite and >= 0");
  if (!(dt >= 0) || !std::isfinite(dt)) throw InvalidArgument("forward_envelope: dt must be finite and >= 0");
  if (dt == 0) return {y_s, EnvelopeStatus::finite};
  const Scalar x = c * dt * y_s * y_s;
  if (x >= 1) return {std::numeric_limits<Scalar>::infinity(), EnvelopeStatus::horizon_exceeded};
  return {y_s / std::sqrt(1 - x), EnvelopeStatus::finite};
}

/// 1 / (c Y_0^2); infinite when Y_0 = 0.
template <std::floating_point Scalar>
Scalar regularity_horizon(Scalar y_0, Scalar c) {
  if (!(y_0 >= 0) || !std::isfinite(y_0)) throw InvalidArgument("regularity_horizon: Y_0 must be finite and >= 0");
  if (!(c > 0) || !std::isfinite(c)) throw InvalidArgument("regularity_horizon: c must be finite and > 0");
  if (y_0 == 0) return std::numeric_limits<Scalar>::infinity();
  return 1 / (c * y_0 * y_0);
}

/// 1 / sqrt(Y_t^-2 + c dt): the smallest enstrophy at time t - dt compatible
/// with Y_t at time t.  Y_t = +inf is admissible (a singular time).
template <std::floating_point Scalar>
Scalar backward_envelope(Scalar y_t, Scalar c, Scalar dt) {
  if (!(y_t > 0)) throw InvalidArgument("backward_envelope: Y_t must be > 0 or +inf");
  if (!(c >= 0) || !std::isfinite(c)) throw InvalidArgument("backward_envelope: c must be finite and >= 0");
  if (!(dt >= 0) || !std::isfinite(dt)) throw InvalidArgument("backward_envelope: dt must be finite and >= 0");
  if (dt == 0) return y_t;
  const Scalar inv2 = std::isinf(y_t) ? Scalar(0) : 1 / (y_t * y_t);
  return 1 / std::sqrt(inv2 + c * dt);
}

/// Leray's bound 1 / sqrt(c (T - s)) before a blowup at T.
template <std::floating_point Scalar>
Scalar leray_lower(Scalar blowup_time, Scalar s, Scalar c) {
  if (!(c > 0) || !std::isfinite(c)) throw InvalidArgument("leray_lower: c must be finite and > 0");
  if (!(s < blowup_time) || !(s >= 0)) throw InvalidInterval("leray_lower: need 0 <= s < T");
  return 1 / std::sqrt(c * (blowup_time - s));
}

struct CertificationRow {
  double t = 0.0;
  double w = 0.0;       ///< Y(t)^-2 + c t
  double margin = 0.0;  ///< W(t_i) - W(t_{i-1}); negative means a violation
  bool violated = false;
};

struct CertificationReport {
  bool passed = true;
  double c = 0.0;
  double worst_margin = 0.0;
  std::vector<CertificationRow> rows;
  /// Index pairs (i - 1, i) of consecutive samples breaking the lower bound.
  std::vector<std::pair<std::size_t, std::size_t>> violations;
};

/// Checks Y(s) >= (Y(t)^-2 + c (t - s))^-1/2 for all sampled s < t, via
/// monotonicity of W(t) = Y(t)^-2 + c t over consecutive samples.  A pair
/// violates when W drops by more than `tolerance` relative to |W|.
/// Throws ZeroEnstrophySample if any Y = 0.
CertificationReport certify_trajectory(const Timeseries& ts, double c, double tolerance = 1e-12);

/// Smallest c >= 0 for which `certify_trajectory` passes on these samples.
double calibrate_c(const Timeseries& ts);

struct L4BoundCheck {
  bool passed = true;
  /// min over samples with rhs > 0 of (lhs - rhs) / rhs, where lhs = ∫ Y^2 and
  /// rhs = log(1 + c t Y^2) / c.  Zero when no sample has rhs > 0.
  double worst_margin = 0.0;
  std::size_t worst_index = 0;
};

/// Checks ∫_0^t Y^2 >= (1/c) log(1 + c t Y(t)^2) at every sample (c = 0 uses the
/// limit t Y^2).  Passes when every shortfall is within `tolerance` relative.
L4BoundCheck l4_log_bound_check(const Timeseries& ts, double c, double tolerance = 1e-9);

/// sup over samples of sqrt(t) Y(t).
double l4_decay_constant(const Timeseries& ts);

/// sum_n (t_n - t_{n+1})^1/2 for t_1 > t_2 > ...; throws Unsorted otherwise.
double gap_sqrt_sum(std::span<const double> descending);

/// floor(2 sqrt(c) E / sqrt(eps)): how many disjoint eps-balls centred on
/// Leray-saturating singular times a dissipation budget E can pay for.
std::int64_t packing_budget(double dissipation, double c, double eps);

/// CSV `t,W,violation_margin`.
void write_certification_csv(std::ostream& out, const CertificationReport& report);

}  // namespace nslab
