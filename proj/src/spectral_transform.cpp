#include "nslab/spectral_transform.hpp"

#include <fftw3.h>

#include <mutex>
#include <utility>

#include "nslab/errors.hpp"

namespace nslab {
namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

FourierTransform::FourierTransform(int n) : n_(n) {
  if (n < 1) throw InvalidArgument("FourierTransform: n must be positive");
  const std::size_t count = static_cast<std::size_t>(n) * n * n;
  std::lock_guard lock(planner_mutex());
  auto* scratch = fftw_alloc_complex(count);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_ = fftw_plan_dft_3d(n, n, n, scratch, scratch, FFTW_FORWARD, flags);
  backward_ = fftw_plan_dft_3d(n, n, n, scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  if (forward_ == nullptr || backward_ == nullptr) {
    release();
    throw Error("FourierTransform: FFTW planning failed");
  }
}

FourierTransform::~FourierTransform() { release(); }

FourierTransform::FourierTransform(FourierTransform&& other) noexcept
    : n_(other.n_),
      forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)) {}

FourierTransform& FourierTransform::operator=(FourierTransform&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    forward_ = std::exchange(other.forward_, nullptr);
    backward_ = std::exchange(other.backward_, nullptr);
  }
  return *this;
}

void FourierTransform::release() noexcept {
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
  forward_ = backward_ = nullptr;
}

void FourierTransform::to_physical(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_), as_fftw(data), as_fftw(data));
}

void FourierTransform::to_spectral(std::complex<double>* data) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_), as_fftw(data), as_fftw(data));
  const double scale = 1.0 / (static_cast<double>(n_) * n_ * n_);
  const std::size_t count = static_cast<std::size_t>(n_) * n_ * n_;
  for (std::size_t i = 0; i < count; ++i) data[i] *= scale;
}

}  // namespace nslab
