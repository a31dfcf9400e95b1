#include "nslab/dimension.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "nslab/errors.hpp"

namespace nslab {

PointSet1D::PointSet1D(std::vector<double> points) : points_(std::move(points)) {
  for (double p : points_) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidArgument("PointSet1D: points must be finite and non-negative");
    }
  }
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

std::size_t packing_count(const PointSet1D& x, double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("packing_count: eps must be > 0");
  const auto pts = x.points();
  if (pts.empty()) return 0;
  const double separation = 2.0 * eps;
  std::size_t count = 1;
  double last = pts.front();
  for (double p : pts.subspan(1)) {
    if (p - last >= separation) {
      ++count;
      last = p;
    }
  }
  return count;
}

PackingCurve packing_curve(const PointSet1D& x, std::span<const double> eps_list) {
  PackingCurve curve;
  curve.rows.reserve(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw InvalidArgument("packing_curve: radii must be > 0");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) {
      throw InvalidArgument("packing_curve: radii must be strictly decreasing");
    }
    curve.rows.push_back({eps_list[i], packing_count(x, eps_list[i])});
  }
  return curve;
}

std::vector<double> dyadic_radii(int j_first, int j_last) {
  std::vector<double> radii;
  for (int j = j_first; j <= j_last; ++j) radii.push_back(std::ldexp(1.0, -j));
  return radii;
}

DimensionFit boxdim_fit(const PackingCurve& curve, double eps_min, double eps_max) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min)) {
    throw InsufficientRange("boxdim_fit: need 0 < eps_min <= eps_max");
  }
  // Dyadic endpoints should match exactly; the slack absorbs decimal input.
  const double lo = eps_min * (1.0 - 1e-12);
  const double hi = eps_max * (1.0 + 1e-12);
  std::vector<const PackingRow*> used;
  for (const auto& row : curve.rows) {
    if (row.eps >= lo && row.eps <= hi) used.push_back(&row);
  }
  if (used.size() < 4) {
    throw InsufficientRange("boxdim_fit: " + std::to_string(used.size()) +
                            " rows in the window, need at least 4");
  }
  const auto m = static_cast<Eigen::Index>(used.size());
  Eigen::MatrixXd design(m, 2);
  Eigen::VectorXd logs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = *used[static_cast<std::size_t>(i)];
    if (row.count < 2) throw InsufficientRange("boxdim_fit: counts must be >= 2 in the window");
    design(i, 0) = 1.0;
    design(i, 1) = -std::log(row.eps);
    logs(i) = std::log(static_cast<double>(row.count));
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(logs);
  const Eigen::VectorXd deviation = design * coef - logs;

  DimensionFit fit;
  fit.dimension = coef(1);
  fit.residual = std::sqrt(deviation.squaredNorm() / static_cast<double>(m));
  fit.eps_min = used.back()->eps;
  fit.eps_max = used.front()->eps;
  fit.rows_used = used.size();
  return fit;
}

PointSet1D power_sequence(const PowerSequenceSpec& spec) {
  if (!(spec.alpha > 0.0) || !(spec.c > 0.0) || spec.n_max < 1) {
    throw InvalidArgument("power_sequence: need alpha > 0, c > 0, n_max >= 1");
  }
  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(spec.n_max));
  const double exponent = -1.0 / spec.alpha;
  for (std::int64_t n = spec.n_max; n >= 1; --n) {
    points.push_back(std::pow(static_cast<double>(n) / spec.c, exponent));
  }
  return PointSet1D(std::move(points));
}

double expected_dim(double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("expected_dim: alpha must be >= 0");
  return alpha / (1.0 + alpha);
}

double forn_partial_sum(std::int64_t terms) {
  if (terms < 1) throw InvalidArgument("forn_partial_sum: M must be >= 1");
  // Smallest terms first keeps the rounding error at the level of the last term.
  double sum = 0.0;
  for (std::int64_t n = terms; n >= 1; --n) sum += 1.0 / static_cast<double>(n + 1);
  return sum / std::sqrt(2.0);
}

double sqrt_shift_gap(double x, double c, double eps) {
  if (!(x >= 0.0)) throw InvalidArgument("sqrt_shift_gap: X must be >= 0");
  if (!(c > 0.0) || !(eps > 0.0)) throw InvalidArgument("sqrt_shift_gap: c and eps must be > 0");
  const double ce = c * eps;
  return ce / (std::sqrt(x * x + ce) + x);
}

namespace {

// Index bounds such as (2^-10)^-0.6 = 64 are integers in exact arithmetic but
// land a few ulps off after pow; snap them before floor/ceil.
double snap_to_integer(double v) {
  const double r = std::round(v);
  return std::abs(v - r) <= 1e-12 * std::max(1.0, std::abs(r)) ? r : v;
}

}  // namespace

PackingSumLower packing_sum_lower(double eps, double c, double delta) {
  if (!(eps > 0.0) || !(c > 0.0)) throw InvalidArgument("packing_sum_lower: eps and c must be > 0");
  PackingSumLower out;
  const double lower = 2.0 / std::sqrt(c * eps);
  const double upper = std::pow(eps, -delta);
  out.first = static_cast<std::int64_t>(std::ceil(snap_to_integer(lower)));
  out.last = static_cast<std::int64_t>(std::floor(snap_to_integer(upper)));
  if (out.first > out.last) {
    throw EmptyRange("packing_sum_lower: empty index range [" + std::to_string(out.first) + ", " +
                     std::to_string(out.last) + "]");
  }
  out.terms = out.last - out.first + 1;
  for (std::int64_t n = out.last; n >= out.first; --n) {
    out.sum += sqrt_shift_gap(1.0 / static_cast<double>(n), c, eps);
  }
  const double half_root = 0.5 * std::sqrt(c * eps);
  out.bound = half_root * static_cast<double>(out.terms);
  out.closed_form = half_root * (upper - lower - 1.0);
  return out;
}

double dissipation_lower_bound(std::int64_t count, double c, double eps) {
  if (count < 0) throw InvalidArgument("dissipation_lower_bound: count must be >= 0");
  double sum = 0.0;
  for (std::int64_t n = count; n >= 1; --n) {
    sum += sqrt_shift_gap(1.0 / static_cast<double>(n), c, eps);
  }
  return sum / (2.0 * c);
}

PointSet1D read_points(std::istream& in) {
  std::vector<double> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      points.push_back(std::stod(line.substr(first)));
    } catch (const std::exception&) {
      throw InvalidArgument("read_points: bad number on line " + std::to_string(line_no));
    }
  }
  return PointSet1D(std::move(points));
}

void write_points(std::ostream& out, const PointSet1D& x) {
  const auto old_precision = out.precision(17);
  for (double p : x.points()) out << p << '\n';
  out.precision(old_precision);
}

void write_packing_csv(std::ostream& out, const PackingCurve& curve) {
  const auto old_precision = out.precision(17);
  out << "eps,count\n";
  for (const auto& row : curve.rows) out << row.eps << ',' << row.count << '\n';
  out.precision(old_precision);
}

void write_fit_csv(std::ostream& out, const DimensionFit& fit) {
  const auto old_precision = out.precision(17);
  out << "dimension,residual,eps_min,eps_max\n"
      << fit.dimension << ',' << fit.residual << ',' << fit.eps_min << ',' << fit.eps_max << '\n';
  out.precision(old_precision);
}

}  // namespace nslab
