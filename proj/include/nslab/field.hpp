#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <iosfwd>

namespace nslab {

using Complex = std::complex<double>;
using ModeVector = Eigen::Vector3cd;
/// One row per Fourier mode (flattened cube index), one column per component.
using ModeMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, 3>;
/// One row per collocation point, one column per component.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Periodic box [0, L]^3 resolved by n modes per dimension.
///
/// Integer wavevectors have components in [-n/2, n/2); the physical
/// wavevector is (2π/L) k.  Flattened index is (ix * n + iy) * n + iz.
class Grid {
 public:
  Grid(int n, double length);

  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double volume() const noexcept { return length_ * length_ * length_; }
  double spacing() const noexcept { return length_ / n_; }
  /// 2π / L
  double wavenumber_unit() const noexcept;
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  /// Array offset along one axis -> signed integer wavenumber.
  int wavenumber(int offset) const noexcept { return offset < n_ / 2 ? offset : offset - n_; }
  /// Signed integer wavenumber -> array offset (any k, reduced mod n).
  int offset(int k) const noexcept { return ((k % n_) + n_) % n_; }

  std::size_t index(int kx, int ky, int kz) const noexcept {
    return (static_cast<std::size_t>(offset(kx)) * n_ + offset(ky)) * n_ + offset(kz);
  }
  Eigen::Vector3i wavevector(std::size_t index) const noexcept;

  /// Two-thirds rule: true when every |k_i| <= n/3.
  bool retained(const Eigen::Vector3i& k) const noexcept {
    return 3 * std::abs(k.x()) <= n_ && 3 * std::abs(k.y()) <= n_ && 3 * std::abs(k.z()) <= n_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int n_;
  double length_;
};

/// Velocity field stored as Fourier coefficients over the full cube.
///
/// The physical field is u(x) = sum_k û(k) exp(i (2π/L) k·x).  Hermitian
/// symmetry, zero mean and k·û(k) = 0 are properties of valid fields; they
/// are checked by `check_invariants` rather than enforced on every write.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);
  SpectralField(const Grid& grid, ModeMatrix coeffs);

  const Grid& grid() const noexcept { return grid_; }
  const ModeMatrix& coeffs() const noexcept { return coeffs_; }
  ModeMatrix& coeffs() noexcept { return coeffs_; }

  ModeVector mode(int kx, int ky, int kz) const;
  /// Writes û(k) and its Hermitian partner û(-k) = conj(û(k)).
  void set_mode(const Eigen::Vector3i& k, const ModeVector& value);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);

 private:
  Grid grid_;
  ModeMatrix coeffs_;
};

SpectralField operator+(SpectralField lhs, const SpectralField& rhs);
SpectralField operator-(SpectralField lhs, const SpectralField& rhs);
SpectralField operator*(double scale, SpectralField field);

/// Rough initial data with |û(k)| = amplitude |k|^-gamma on 1 <= |k| <= kmax.
struct SpectrumSpec {
  double gamma = 2.0;
  double amplitude = 1.0;
  int kmax = 8;
  std::uint64_t seed = 0;
};

/// Defects are relative to s = max_k |û(k)|; all zero for the zero field.
struct InvariantReport {
  double hermitian_defect = 0.0;   ///< max |û(-k) - conj û(k)| / s
  double divergence_defect = 0.0;  ///< max |k·û(k)| / (|k| s)
  double divergence_max = 0.0;     ///< max |k·û(k)|, integer k, absolute
  double mean_magnitude = 0.0;     ///< |û(0)| / s
  bool finite = true;

  bool ok(double tolerance = 1e-12) const noexcept;
};

/// L^3 sum |û(k)|^2, i.e. the integral of |u|^2 over the box.
double energy(const SpectralField& field);
/// L^3 sum |(2π/L) k|^2 |û(k)|^2, the integral of |curl u|^2 for divergence-free u.
double enstrophy(const SpectralField& field);

/// ω̂(k) = i (2π/L) k × û(k).
SpectralField vorticity(const SpectralField& field);

/// Removes the component of each mode parallel to k; zeroes the mean.
SpectralField leray_project(const SpectralField& raw);

/// Zeroes every mode outside the two-thirds band.
void dealias(SpectralField& field);

InvariantReport check_invariants(const SpectralField& field);

SpectralField rough_field(const SpectrumSpec& spec, const Grid& grid);

/// u = A (sin x cos y cos z, -cos x sin y cos z, 0) scaled to the box.
SpectralField taylor_green(const Grid& grid, double amplitude);

/// Single shear wave: û(±(1,0,0)) = (0, a, 0).
SpectralField shear_mode(const Grid& grid, double amplitude);

/// Velocity at the n^3 collocation points x_j = j L / n.
PointMatrix to_physical(const SpectralField& field);
SpectralField from_physical(const Grid& grid, const PointMatrix& values);

/// Text snapshot: header "n L", then "kx ky kz re_x im_x re_y im_y re_z im_z"
/// for every nonzero mode.
void write_snapshot(std::ostream& out, const SpectralField& field);
SpectralField read_snapshot(std::istream& in);

}  // namespace nslab
