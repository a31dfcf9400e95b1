#include "nslab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace nslab {
namespace {

void require_positive_enstrophy(const Timeseries& ts, const char* who) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i].enstrophy > 0.0)) {
      throw ZeroEnstrophySample(std::string(who) + ": zero enstrophy at sample " +
                                std::to_string(i));
    }
  }
}

double inverse_square(double y) { return 1.0 / (y * y); }

}  // namespace

void BoundParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("bounds: c must be finite and > 0");
}

CertificationReport certify_trajectory(const Timeseries& ts, double c, double tolerance) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("certify_trajectory: c must be finite and >= 0");
  require_positive_enstrophy(ts, "certify_trajectory");

  CertificationReport report;
  report.c = c;
  report.rows.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CertificationRow row;
    row.t = ts[i].t;
    row.w = inverse_square(ts[i].enstrophy) + c * ts[i].t;
    if (i > 0) {
      const double prev = report.rows.back().w;
      row.margin = row.w - prev;
      const double scale = std::max(std::abs(row.w), std::abs(prev));
      row.violated = row.margin < -tolerance * scale;
      if (row.violated) {
        report.passed = false;
        report.violations.emplace_back(i - 1, i);
      }
      report.worst_margin = i == 1 ? row.margin : std::min(report.worst_margin, row.margin);
    }
    report.rows.push_back(row);
  }
  return report;
}

double calibrate_c(const Timeseries& ts) {
  require_positive_enstrophy(ts, "calibrate_c");
  double c = 0.0;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double drop = inverse_square(ts[i - 1].enstrophy) - inverse_square(ts[i].enstrophy);
    c = std::max(c, drop / (ts[i].t - ts[i - 1].t));
  }
  return c;
}

L4BoundCheck l4_log_bound_check(const Timeseries& ts, double c, double tolerance) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("l4_log_bound_check: c must be finite and >= 0");
  L4BoundCheck check;
  bool first = true;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& r = ts[i];
    const double ty2 = r.t * r.enstrophy * r.enstrophy;
    const double x = c * ty2;
    // log1p(x) / c, with its c -> 0 limit t Y^2.
    const double rhs = x == 0.0 ? ty2 : std::log1p(x) / c;
    if (r.ens4_integral < rhs - tolerance * rhs) check.passed = false;
    // Rows with rhs = 0 (t = 0 or Y = 0) hold trivially and carry no margin.
    if (rhs == 0.0) continue;
    const double margin = (r.ens4_integral - rhs) / rhs;
    if (first || margin < check.worst_margin) {
      check.worst_margin = margin;
      check.worst_index = i;
      first = false;
    }
  }
  return check;
}

double l4_decay_constant(const Timeseries& ts) {
  double sup = 0.0;
  for (const auto& r : ts) sup = std::max(sup, std::sqrt(r.t) * r.enstrophy);
  return sup;
}

double gap_sqrt_sum(std::span<const double> descending) {
  double sum = 0.0;
  for (std::size_t i = 1; i < descending.size(); ++i) {
    const double gap = descending[i - 1] - descending[i];
    if (!(gap > 0.0)) {
      throw Unsorted("gap_sqrt_sum: points must be strictly decreasing (index " +
                     std::to_string(i) + ")");
    }
    sum += std::sqrt(gap);
  }
  return sum;
}

std::int64_t packing_budget(double dissipation, double c, double eps) {
  if (!(dissipation >= 0.0)) throw InvalidArgument("packing_budget: E must be >= 0");
  if (!(c > 0.0)) throw InvalidArgument("packing_budget: c must be > 0");
  if (!(eps > 0.0)) throw InvalidArgument("packing_budget: eps must be > 0");
  return static_cast<std::int64_t>(std::floor(2.0 * std::sqrt(c) * dissipation / std::sqrt(eps)));
}

void write_certification_csv(std::ostream& out, const CertificationReport& report) {
  const auto old_precision = out.precision(17);
  out << "t,W,violation_margin\n";
  for (const auto& row : report.rows) out << row.t << ',' << row.w << ',' << row.margin << '\n';
  out.precision(old_precision);
}

}  // namespace nslab
