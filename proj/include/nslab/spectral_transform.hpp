#pragma once

#include <complex>

namespace nslab {

/// Complex 3D discrete Fourier transform on an n^3 cube (row-major, x slowest).
///
/// Convention: u(x_j) = sum_k û(k) exp(+i 2π k·j / n), so `to_physical` is the
/// unnormalized synthesis and `to_spectral` carries the 1/n^3 factor.
class FourierTransform {
 public:
  explicit FourierTransform(int n);
  ~FourierTransform();

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  FourierTransform(FourierTransform&& other) noexcept;
  FourierTransform& operator=(FourierTransform&& other) noexcept;

  int n() const noexcept { return n_; }

  /// In place; `data` holds n^3 values.
  void to_physical(std::complex<double>* data) const;
  void to_spectral(std::complex<double>* data) const;

 private:
  void release() noexcept;

  int n_ = 0;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

}  // namespace nslab
