#pragma once

#include "capspec/eigenbasis.hpp"
#include "capspec/grid.hpp"

#include <vector>

namespace capspec {

/// One diagnostic sample taken during propagation.
struct NormSample {
  double t = 0.0;
  double norm2_psi = 0.0;
  double trace_rho1 = 0.0;
  double p0 = 0.0;
  double residual = 0.0;
};

/// Running time integrals of the propagation.
///
/// phi accumulates h tau Psi2 Psi2^dagger (the effective one-particle density
/// matrix of the first absorption) and rho_integral accumulates tau rho1.
/// Only the lower triangle of phi is updated during the run; phi() returns the
/// full Hermitian matrix.
class SpectralAccumulator {
 public:
  SpectralAccumulator() = default;
  SpectralAccumulator(int n, double h);

  int size() const { return static_cast<int>(phi_lower_.rows()); }
  double h() const { return h_; }

  /// phi += h * weight * psi psi^dagger
  void add_two_body(const ComplexMatrix& psi, double weight);
  /// R += weight * rho
  void add_one_body(const ComplexMatrix& rho, double weight);

  /// Tail profile: mass of Psi2 with max(|x1|, |x2|) > r_m for radii r_m = m h.
  void record_tail(const ComplexMatrix& psi, const Grid1D& grid);
  void record_sample(const NormSample& sample) { samples_.push_back(sample); }

  ComplexMatrix phi() const;
  const ComplexMatrix& rho_integral() const { return rho_integral_; }
  const std::vector<NormSample>& samples() const { return samples_; }
  /// Running maximum over recorded samples of the tail profile.
  const RealVector& max_tail() const { return max_tail_; }

 private:
  double h_ = 0.0;
  ComplexMatrix phi_lower_;
  ComplexMatrix rho_integral_;
  RealVector max_tail_;
  std::vector<NormSample> samples_;
};

/// Discrete absorption probabilities per eigenstate,
///   first:  c_k = 2 h^2 phi_k^dagger (D Phi + Phi D) phi_k
///   second: c_k =   h^2 phi_k^dagger (D R + R D) phi_k
/// for every state in the basis (bound states included).
RealVector project_first(const ComplexMatrix& phi, const RealVector& cap,
                         const EigenBasis& basis);
RealVector project_second(const ComplexMatrix& rho_integral, const RealVector& cap,
                          const EigenBasis& basis);

/// Energy density on the merged positive-energy grid.
struct SpectrumCurve {
  RealVector energies;
  RealVector density;
};

/// Converts per-state probabilities into a density: within each parity family
/// c_k w_k, linearly interpolated onto the merged grid of all positive
/// energies (clamped at family ends) and summed over the families.
SpectrumCurve to_density(const EigenBasis& basis, const RealVector& weights,
                         const RealVector& discrete);

SpectrumCurve spectrum_first(const SpectralAccumulator& acc, const RealVector& cap,
                             const EigenBasis& basis, const RealVector& weights);
SpectrumCurve spectrum_second(const SpectralAccumulator& acc, const RealVector& cap,
                              const EigenBasis& basis, const RealVector& weights);

/// Trapezoidal integral of the curve.
double integrate(const SpectrumCurve& curve);

/// -integral of the negative part of the curve (same quadrature).
double negative_content(const SpectrumCurve& curve);

/// Integral over [lo, hi) by the trapezoid rule restricted to that window.
double integrate_window(const SpectrumCurve& curve, double lo, double hi);

/// int |a - b| d eps on a's grid, with b linearly interpolated onto it.
double l1_distance(const SpectrumCurve& a, const SpectrumCurve& b);

struct ExtentDuration {
  double extent = 0.0;
  double duration = 0.0;
  bool extent_resolved = true;    ///< false if the tail never fell below threshold
  bool duration_reached = true;   ///< false if |Psi2|^2 never fell below threshold
};

/// extent: smallest grid radius a with mass beyond |x| = a below `threshold`
/// at every sample; duration: first sampled time with |Psi2|^2 < threshold.
ExtentDuration extent_duration(const SpectralAccumulator& acc, double h, double t_max,
                               double threshold = 0.01);

struct SpectrumResult {
  RealVector energies;
  RealVector dP2_dE;
  RealVector dP1_dE;
  double P2 = 0.0;
  double P1 = 0.0;
  double neg_content = 0.0;
  double extent = 0.0;
  double duration = 0.0;
  bool duration_reached = true;
};

struct Totals {
  double P2 = 0.0;
  double P1 = 0.0;
};

Totals totals(const SpectrumResult& result);

/// Local maxima of the curve whose value exceeds `relative_floor` times the
/// global maximum; returns their energies refined by a parabola through the
/// three neighbouring samples.
std::vector<double> find_peaks(const SpectrumCurve& curve, double relative_floor = 1e-3);

}  // namespace capspec
