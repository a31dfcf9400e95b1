#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nslab {

struct TimeseriesRow {
  double t = 0.0;
  double energy = 0.0;         ///< ||u(t)||^2
  double enstrophy = 0.0;      ///< ||Du(t)||^2
  double diss_integral = 0.0;  ///< running integral of ||Du||^2
  double ens4_integral = 0.0;  ///< running integral of ||Du||^4
};

/// Sampled diagnostics along one trajectory, t strictly increasing.
class Timeseries {
 public:
  Timeseries() = default;
  explicit Timeseries(std::vector<TimeseriesRow> rows);

  const std::vector<TimeseriesRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const TimeseriesRow& operator[](std::size_t i) const { return rows_[i]; }
  const TimeseriesRow& front() const { return rows_.front(); }
  const TimeseriesRow& back() const { return rows_.back(); }

  /// Appends a row; throws InvalidArgument if t does not increase.
  void push_back(const TimeseriesRow& row);

  auto begin() const noexcept { return rows_.begin(); }
  auto end() const noexcept { return rows_.end(); }

 private:
  std::vector<TimeseriesRow> rows_;
};

/// Checks ordering, finiteness, non-negativity and monotone integrals.
/// Returns an empty string when valid, else a description of the first defect.
std::string validate(const Timeseries& ts);

/// CSV with header `t,energy,enstrophy,diss_integral,ens4_integral`, 17 significant digits.
void write_csv(std::ostream& out, const Timeseries& ts);
Timeseries read_timeseries_csv(std::istream& in);

}  // namespace nslab
