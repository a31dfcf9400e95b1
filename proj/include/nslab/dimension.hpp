#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace nslab {

/// Finite set of non-negative reals, kept sorted ascending without duplicates.
class PointSet1D {
 public:
  PointSet1D() = default;
  /// Sorts and collapses duplicates; throws InvalidArgument on NaN, inf or negatives.
  explicit PointSet1D(std::vector<double> points);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  double diameter() const noexcept {
    return points_.empty() ? 0.0 : points_.back() - points_.front();
  }

 private:
  std::vector<double> points_;
};

/// Largest number of points whose open eps-balls are pairwise disjoint, i.e.
/// pairwise separation >= 2 eps.  A left-to-right greedy sweep is optimal in 1D.
std::size_t packing_count(const PointSet1D& x, double eps);

struct PackingRow {
  double eps = 0.0;
  std::size_t count = 0;
};

struct PackingCurve {
  std::vector<PackingRow> rows;  ///< eps strictly decreasing
};

/// `eps_list` must be positive and strictly decreasing.
PackingCurve packing_curve(const PointSet1D& x, std::span<const double> eps_list);

/// {2^-j : j = j_first, ..., j_last}, decreasing.
std::vector<double> dyadic_radii(int j_first, int j_last);

struct DimensionFit {
  double dimension = 0.0;  ///< slope of log N against -log eps
  double residual = 0.0;   ///< RMS deviation of log N from the fitted line
  double eps_min = 0.0;
  double eps_max = 0.0;
  std::size_t rows_used = 0;
};

/// Least-squares slope over rows with eps in [eps_min, eps_max].  Throws
/// InsufficientRange with fewer than 4 rows in the window or any count < 2.
DimensionFit boxdim_fit(const PackingCurve& curve, double eps_min, double eps_max);

struct PowerSequenceSpec {
  double alpha = 1.0;
  double c = 1.0;
  std::int64_t n_max = 1'000'000;
};

/// {(n / c)^(-1/alpha) : 1 <= n <= n_max}: the times where Y = c t^-alpha equals n.
PointSet1D power_sequence(const PowerSequenceSpec& spec);

/// alpha / (1 + alpha), the box-counting dimension of the power sequence.
double expected_dim(double alpha);

/// sum_{n=1}^{M} 1 / (sqrt(2) (n + 1)).
double forn_partial_sum(std::int64_t terms);

/// sqrt(X^2 + c eps) - X, evaluated without cancellation.  Decreasing in X.
double sqrt_shift_gap(double x, double c, double eps);

struct PackingSumLower {
  std::int64_t first = 0;  ///< ceil(2 (c eps)^-1/2)
  std::int64_t last = 0;   ///< floor(eps^-delta)
  std::int64_t terms = 0;
  double sum = 0.0;          ///< sum_{n=first}^{last} sqrt_shift_gap(1/n, c, eps)
  double bound = 0.0;        ///< (1/2) sqrt(c eps) * terms
  double closed_form = 0.0;  ///< (1/2) sqrt(c eps) (eps^-delta - 2 (c eps)^-1/2 - 1)
};

/// Throws EmptyRange when first > last.
PackingSumLower packing_sum_lower(double eps, double c, double delta);

/// (1/(2c)) sum_{n=1}^{count} sqrt_shift_gap(1/n, c, eps): the lower bound on
/// ∫ ||Du||^2 forced by `count` disjoint eps-balls centred where ||Du||^2 >= n.
double dissipation_lower_bound(std::int64_t count, double c, double eps);

/// One float per line.
PointSet1D read_points(std::istream& in);
void write_points(std::ostream& out, const PointSet1D& x);
/// CSV `eps,count`.
void write_packing_csv(std::ostream& out, const PackingCurve& curve);
/// CSV `dimension,residual,eps_min,eps_max` with one data row.
void write_fit_csv(std::ostream& out, const DimensionFit& fit);

}  // namespace nslab
