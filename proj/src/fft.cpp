#include "capspec/fft.hpp"

#include <mutex>
#include <stdexcept>
#include <utility>

namespace capspec {
namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftWorkspace::FftWorkspace(int n, int rank) : n_(n), rank_(rank) {
  if (rank != 1 && rank != 2) throw std::invalid_argument("FFT rank must be 1 or 2");
  const std::size_t count = rank == 1 ? std::size_t(n) : std::size_t(n) * n;
  std::lock_guard lock(planner_mutex());
  data_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(Complex) * count));
  if (data_ == nullptr) throw std::bad_alloc();
  auto* raw = reinterpret_cast<fftw_complex*>(data_);
  if (rank == 1) {
    forward_ = fftw_plan_dft_1d(n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  } else {
    forward_ = fftw_plan_dft_2d(n, n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(n, n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < count; ++i) data_[i] = Complex(0.0, 0.0);
}

FftWorkspace::~FftWorkspace() { release(); }

FftWorkspace::FftWorkspace(FftWorkspace&& other) noexcept
    : n_(other.n_),
      rank_(other.rank_),
      data_(std::exchange(other.data_, nullptr)),
      forward_(std::exchange(other.forward_, nullptr)),
      backward_(std::exchange(other.backward_, nullptr)) {}

FftWorkspace& FftWorkspace::operator=(FftWorkspace&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    rank_ = other.rank_;
    data_ = std::exchange(other.data_, nullptr);
    forward_ = std::exchange(other.forward_, nullptr);
    backward_ = std::exchange(other.backward_, nullptr);
  }
  return *this;
}

void FftWorkspace::release() {
  if (data_ == nullptr && forward_ == nullptr && backward_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(forward_);
  if (backward_ != nullptr) fftw_destroy_plan(backward_);
  if (data_ != nullptr) fftw_free(data_);
  forward_ = backward_ = nullptr;
  data_ = nullptr;
}

Eigen::Map<ComplexMatrix, Eigen::Aligned16> FftWorkspace::matrix() {
  if (rank_ != 2) throw std::logic_error("matrix() on a rank-1 workspace");
  return {data_, n_, n_};
}

Eigen::Map<ComplexVector, Eigen::Aligned16> FftWorkspace::vector() {
  if (rank_ != 1) throw std::logic_error("vector() on a rank-2 workspace");
  return {data_, n_};
}

void FftWorkspace::forward() { fftw_execute(forward_); }
void FftWorkspace::backward() { fftw_execute(backward_); }

}  // namespace capspec
