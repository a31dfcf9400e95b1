#include "nslab/field.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "nslab/errors.hpp"
#include "nslab/rng.hpp"
#include "nslab/spectral_transform.hpp"

namespace nslab {
namespace {

const Complex kI{0.0, 1.0};

template <typename Fn>
void for_each_mode(const Grid& grid, Fn&& fn) {
  const int n = grid.n();
  std::size_t idx = 0;
  for (int a = 0; a < n; ++a) {
    const int kx = grid.wavenumber(a);
    for (int b = 0; b < n; ++b) {
      const int ky = grid.wavenumber(b);
      for (int c = 0; c < n; ++c, ++idx) {
        fn(idx, Eigen::Vector3i(kx, ky, grid.wavenumber(c)));
      }
    }
  }
}

std::size_t partner_index(const Grid& grid, const Eigen::Vector3i& k) {
  return grid.index(-k.x(), -k.y(), -k.z());
}

// Upper half-space used to enumerate one member of each ±k pair.
bool in_half_space(const Eigen::Vector3i& k) {
  if (k.z() != 0) return k.z() > 0;
  if (k.y() != 0) return k.y() > 0;
  return k.x() > 0;
}

// Packs a wavevector (components in (-2^20, 2^20)) into a stable RNG key.
std::uint64_t mode_key(const Eigen::Vector3i& k) {
  constexpr std::int64_t bias = 1 << 20;
  const auto part = [](int v) { return static_cast<std::uint64_t>(v + bias); };
  return (part(k.x()) << 42) | (part(k.y()) << 21) | part(k.z());
}

void symmetrize(SpectralField& field) {
  const Grid& grid = field.grid();
  ModeMatrix& c = field.coeffs();
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    const std::size_t p = partner_index(grid, k);
    if (p < idx) return;
    if (p == idx) {
      c.row(idx) = c.row(idx).real().cast<Complex>();
      return;
    }
    const Eigen::RowVector3cd avg = 0.5 * (c.row(idx) + c.row(p).conjugate());
    c.row(idx) = avg;
    c.row(p) = avg.conjugate();
  });
}

}  // namespace

Grid::Grid(int n, double length) : n_(n), length_(length) {
  if (n < 4 || n % 2 != 0) throw InvalidArgument("Grid: n must be even and >= 4");
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("Grid: L must be positive");
}

double Grid::wavenumber_unit() const noexcept { return 2.0 * std::numbers::pi / length_; }

Eigen::Vector3i Grid::wavevector(std::size_t index) const noexcept {
  const auto nn = static_cast<std::size_t>(n_);
  const int c = static_cast<int>(index % nn);
  const int b = static_cast<int>((index / nn) % nn);
  const int a = static_cast<int>(index / (nn * nn));
  return {wavenumber(a), wavenumber(b), wavenumber(c)};
}

SpectralField::SpectralField(const Grid& grid)
    : grid_(grid), coeffs_(ModeMatrix::Zero(static_cast<Eigen::Index>(grid.size()), 3)) {}

SpectralField::SpectralField(const Grid& grid, ModeMatrix coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != static_cast<Eigen::Index>(grid.size())) {
    throw InvalidArgument("SpectralField: coefficient count does not match grid");
  }
}

ModeVector SpectralField::mode(int kx, int ky, int kz) const {
  return coeffs_.row(static_cast<Eigen::Index>(grid_.index(kx, ky, kz))).transpose();
}

void SpectralField::set_mode(const Eigen::Vector3i& k, const ModeVector& value) {
  coeffs_.row(static_cast<Eigen::Index>(grid_.index(k.x(), k.y(), k.z()))) = value.transpose();
  coeffs_.row(static_cast<Eigen::Index>(grid_.index(-k.x(), -k.y(), -k.z()))) =
      value.conjugate().transpose();
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  coeffs_ += other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  coeffs_ -= other.coeffs_;
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  coeffs_ *= scale;
  return *this;
}

SpectralField operator+(SpectralField lhs, const SpectralField& rhs) { return lhs += rhs; }
SpectralField operator-(SpectralField lhs, const SpectralField& rhs) { return lhs -= rhs; }
SpectralField operator*(double scale, SpectralField field) { return field *= scale; }

bool InvariantReport::ok(double tolerance) const noexcept {
  return finite && hermitian_defect <= tolerance && divergence_defect <= tolerance &&
         mean_magnitude <= tolerance;
}

double energy(const SpectralField& field) {
  return field.grid().volume() * field.coeffs().squaredNorm();
}

double enstrophy(const SpectralField& field) {
  const Grid& grid = field.grid();
  double sum = 0.0;
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    sum += static_cast<double>(k.squaredNorm()) *
           field.coeffs().row(static_cast<Eigen::Index>(idx)).squaredNorm();
  });
  const double unit = grid.wavenumber_unit();
  return grid.volume() * unit * unit * sum;
}

SpectralField vorticity(const SpectralField& field) {
  const Grid& grid = field.grid();
  SpectralField out(grid);
  const double unit = grid.wavenumber_unit();
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    const auto row = static_cast<Eigen::Index>(idx);
    const Eigen::Vector3cd kc = (unit * k.cast<double>()).cast<Complex>();
    const Eigen::Vector3cd u = field.coeffs().row(row).transpose();
    out.coeffs().row(row) = (kI * kc.cross(u)).transpose();
  });
  return out;
}

SpectralField leray_project(const SpectralField& raw) {
  const Grid& grid = raw.grid();
  SpectralField out(grid);
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    const auto row = static_cast<Eigen::Index>(idx);
    const int k2 = k.squaredNorm();
    if (k2 == 0) return;
    const Eigen::Vector3d kd = k.cast<double>();
    const Eigen::Vector3cd v = raw.coeffs().row(row).transpose();
    const Complex parallel = kd.cast<Complex>().dot(v);  // dot conjugates lhs; kd is real
    out.coeffs().row(row) = (v - kd.cast<Complex>() * (parallel / static_cast<double>(k2))).transpose();
  });
  return out;
}

void dealias(SpectralField& field) {
  const Grid& grid = field.grid();
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    if (!grid.retained(k)) field.coeffs().row(static_cast<Eigen::Index>(idx)).setZero();
  });
}

InvariantReport check_invariants(const SpectralField& field) {
  const Grid& grid = field.grid();
  const ModeMatrix& c = field.coeffs();
  InvariantReport report;
  report.finite = c.allFinite();
  // Defects are relative to the largest mode so roundoff-level modes cannot dominate.
  const double scale = c.rowwise().norm().maxCoeff();
  if (scale == 0.0) return report;
  report.mean_magnitude = c.row(0).norm() / scale;
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    const auto row = static_cast<Eigen::Index>(idx);
    const auto p = static_cast<Eigen::Index>(partner_index(grid, k));
    report.hermitian_defect =
        std::max(report.hermitian_defect, (c.row(p) - c.row(row).conjugate()).norm() / scale);
    if (k.squaredNorm() == 0) return;
    const double div = std::abs(c.row(row).dot(k.cast<double>().cast<Complex>().transpose()));
    report.divergence_max = std::max(report.divergence_max, div);
    report.divergence_defect =
        std::max(report.divergence_defect, div / (k.cast<double>().norm() * scale));
  });
  return report;
}

SpectralField rough_field(const SpectrumSpec& spec, const Grid& grid) {
  if (3 * spec.kmax > grid.n()) {
    throw SpecExceedsGrid("rough_field: kmax " + std::to_string(spec.kmax) +
                          " exceeds n/3 for n = " + std::to_string(grid.n()));
  }
  if (!(spec.gamma > 0.0)) throw InvalidArgument("rough_field: gamma must be positive");
  if (!(spec.amplitude >= 0.0)) throw InvalidArgument("rough_field: amplitude must be >= 0");

  SpectralField field(grid);
  if (spec.amplitude == 0.0 || spec.kmax < 1) return field;

  const CounterRng rng(spec.seed);
  const int kmax = spec.kmax;
  const int kmax2 = kmax * kmax;
  for (int kx = -kmax; kx <= kmax; ++kx) {
    for (int ky = -kmax; ky <= kmax; ++ky) {
      for (int kz = 0; kz <= kmax; ++kz) {
        const Eigen::Vector3i k(kx, ky, kz);
        const int k2 = k.squaredNorm();
        if (k2 == 0 || k2 > kmax2 || !in_half_space(k)) continue;

        const std::uint64_t base = mode_key(k) * 8;
        Eigen::Vector3cd d;
        for (int j = 0; j < 3; ++j) {
          d(j) = Complex(rng.normal(base + 2 * j), rng.normal(base + 2 * j + 1));
        }
        const Eigen::Vector3cd kc = k.cast<double>().cast<Complex>();
        d -= kc * (kc.dot(d) / static_cast<double>(k2));
        const double norm = d.norm();
        if (norm == 0.0) continue;
        const double magnitude =
            spec.amplitude * std::pow(static_cast<double>(k2), -0.5 * spec.gamma);
        field.set_mode(k, (magnitude / norm) * d);
      }
    }
  }
  return field;
}

SpectralField taylor_green(const Grid& grid, double amplitude) {
  const int n = grid.n();
  PointMatrix values(static_cast<Eigen::Index>(grid.size()), 3);
  const double h = 2.0 * std::numbers::pi / n;
  Eigen::Index row = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c, ++row) {
        const double x = a * h, y = b * h, z = c * h;
        values(row, 0) = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
        values(row, 1) = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
        values(row, 2) = 0.0;
      }
    }
  }
  SpectralField field = from_physical(grid, values);
  // Transform roundoff leaves ~1e-17 on other modes; keep only the exact support.
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    if (k.cwiseAbs() != Eigen::Vector3i(1, 1, 1)) {
      field.coeffs().row(static_cast<Eigen::Index>(idx)).setZero();
    }
  });
  return field;
}

SpectralField shear_mode(const Grid& grid, double amplitude) {
  SpectralField field(grid);
  field.set_mode(Eigen::Vector3i(1, 0, 0), ModeVector(0.0, amplitude, 0.0));
  return field;
}

PointMatrix to_physical(const SpectralField& field) {
  const Grid& grid = field.grid();
  const FourierTransform fft(grid.n());
  PointMatrix out(static_cast<Eigen::Index>(grid.size()), 3);
  Eigen::VectorXcd work;
  for (int comp = 0; comp < 3; ++comp) {
    work = field.coeffs().col(comp);
    fft.to_physical(work.data());
    out.col(comp) = work.real();
  }
  return out;
}

SpectralField from_physical(const Grid& grid, const PointMatrix& values) {
  if (values.rows() != static_cast<Eigen::Index>(grid.size())) {
    throw InvalidArgument("from_physical: point count does not match grid");
  }
  const FourierTransform fft(grid.n());
  SpectralField field(grid);
  for (int comp = 0; comp < 3; ++comp) {
    field.coeffs().col(comp) = values.col(comp).cast<Complex>();
    fft.to_spectral(field.coeffs().col(comp).data());
  }
  symmetrize(field);
  return field;
}

void write_snapshot(std::ostream& out, const SpectralField& field) {
  const Grid& grid = field.grid();
  const auto old_precision = out.precision(17);
  out << grid.n() << ' ' << grid.length() << '\n';
  for_each_mode(grid, [&](std::size_t idx, const Eigen::Vector3i& k) {
    const auto row = field.coeffs().row(static_cast<Eigen::Index>(idx));
    if (row.squaredNorm() == 0.0) return;
    out << k.x() << ' ' << k.y() << ' ' << k.z();
    for (int comp = 0; comp < 3; ++comp) {
      out << ' ' << row(comp).real() << ' ' << row(comp).imag();
    }
    out << '\n';
  });
  out.precision(old_precision);
}

SpectralField read_snapshot(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("read_snapshot: missing header");
  std::istringstream header(line);
  int n = 0;
  double length = 0.0;
  if (!(header >> n >> length)) throw InvalidArgument("read_snapshot: malformed header");
  const Grid grid(n, length);
  SpectralField field(grid);
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    int kx = 0, ky = 0, kz = 0;
    double v[6];
    if (!(row >> kx >> ky >> kz >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5])) {
      throw InvalidArgument("read_snapshot: malformed line " + std::to_string(line_no));
    }
    const int half = n / 2;
    for (int k : {kx, ky, kz}) {
      if (k < -half || k >= half) {
        throw InvalidArgument("read_snapshot: wavevector out of range on line " +
                              std::to_string(line_no));
      }
    }
    field.coeffs().row(static_cast<Eigen::Index>(grid.index(kx, ky, kz))) =
        Eigen::RowVector3cd(Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]));
  }
  return field;
}

}  // namespace nslab
