#include "nslab/timeseries.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "nslab/errors.hpp"

namespace nslab {

Timeseries::Timeseries(std::vector<TimeseriesRow> rows) {
  rows_.reserve(rows.size());
  for (const auto& row : rows) push_back(row);
}

void Timeseries::push_back(const TimeseriesRow& row) {
  if (!rows_.empty() && !(row.t > rows_.back().t)) {
    throw InvalidArgument("Timeseries: sample times must be strictly increasing");
  }
  rows_.push_back(row);
}

std::string validate(const Timeseries& ts) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto& r = ts[i];
    for (double v : {r.t, r.energy, r.enstrophy, r.diss_integral, r.ens4_integral}) {
      if (!std::isfinite(v) || v < 0.0) {
        return "row " + std::to_string(i) + ": non-finite or negative value";
      }
    }
    if (i > 0) {
      const auto& prev = ts[i - 1];
      if (r.diss_integral < prev.diss_integral || r.ens4_integral < prev.ens4_integral) {
        return "row " + std::to_string(i) + ": running integral decreased";
      }
    }
  }
  return {};
}

void write_csv(std::ostream& out, const Timeseries& ts) {
  const auto old_precision = out.precision(17);
  out << "t,energy,enstrophy,diss_integral,ens4_integral\n";
  for (const auto& r : ts) {
    out << r.t << ',' << r.energy << ',' << r.enstrophy << ',' << r.diss_integral << ','
        << r.ens4_integral << '\n';
  }
  out.precision(old_precision);
}

Timeseries read_timeseries_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("timeseries CSV: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,energy,enstrophy,diss_integral,ens4_integral") {
    throw InvalidArgument("timeseries CSV: unexpected header '" + line + "'");
  }
  Timeseries ts;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::istringstream fields(line);
    std::string cell;
    double values[5];
    int count = 0;
    while (std::getline(fields, cell, ',')) {
      if (count == 5) break;
      try {
        values[count] = std::stod(cell);
      } catch (const std::exception&) {
        throw InvalidArgument("timeseries CSV: bad number on line " + std::to_string(line_no));
      }
      ++count;
    }
    if (count != 5) {
      throw InvalidArgument("timeseries CSV: expected 5 columns on line " +
                            std::to_string(line_no));
    }
    ts.push_back({values[0], values[1], values[2], values[3], values[4]});
  }
  return ts;
}

}  // namespace nslab
