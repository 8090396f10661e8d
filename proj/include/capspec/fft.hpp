#pragma once

#include "capspec/grid.hpp"

#include <fftw3.h>

namespace capspec {

/// In-place unnormalized DFT over an owned, FFTW-aligned buffer.
///
/// Rank 1 transforms a length-n vector, rank 2 an n x n matrix along both
/// axes. Plans are made with FFTW_ESTIMATE so results do not depend on
/// planner timing.
class FftWorkspace {
 public:
  FftWorkspace(int n, int rank);
  ~FftWorkspace();

  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;
  FftWorkspace(FftWorkspace&& other) noexcept;
  FftWorkspace& operator=(FftWorkspace&& other) noexcept;

  int size() const { return n_; }

  Eigen::Map<ComplexMatrix, Eigen::Aligned16> matrix();
  Eigen::Map<ComplexVector, Eigen::Aligned16> vector();

  void forward();
  void backward();

 private:
  void release();

  int n_ = 0;
  int rank_ = 0;
  Complex* data_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace capspec
