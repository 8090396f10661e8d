#pragma once

#include "capspec/fft.hpp"
#include "capspec/twobody.hpp"

#include <vector>

namespace capspec {

/// One-particle density matrix rho(i, j) ~ rho1(x_i, x_j); probability is h * tr(rho).
struct OneBodyDensity {
  ComplexMatrix rho;
  double t = 0.0;
  double h = 0.0;
};

double trace_probability(const OneBodyDensity& density);

/// Probability bookkeeping for the 2 -> 1 -> 0 particle chain.
struct TraceLedger {
  double t = 0.0;
  double p0 = 0.0;
  double norm2_psi = 1.0;
  double trace_rho1 = 0.0;
  double residual = 0.0;
  double vacuum_rate = 0.0;  ///< dp0/dt at t, kept for the trapezoidal update

  void refresh_residual() { residual = 1.0 - (norm2_psi + trace_rho1 + p0); }
};

/// S = 4h Psi2 D Psi2^dagger with D = diag(gamma). Hermitian PSD by construction.
ComplexMatrix source_matrix(const ComplexMatrix& psi, const RealVector& cap, double h);

/// dp0/dt = 2h sum_i gamma_i rho_ii.
double vacuum_rate(const ComplexMatrix& rho, const RealVector& cap, double h);

/// Advance p0 by the trapezoidal rule from the ledger's stored rate to the
/// rate of the current rho, then refresh the stored rate.
void update_p0(TraceLedger& ledger, const ComplexMatrix& rho, const RealVector& cap, double h,
               double tau);

/// Second-order propagator for rho1:
///   rho(t+tau) = U rho U^dagger + tau/2 (S(t) + S(t+tau))
///                - i tau^2/2 (h_eff(t) S(t) - S(t) h_eff(t)^dagger),
/// U = exp(-i tau h_eff(t + tau/2)) applied with the same Strang split as the
/// two-body propagator, acting on the row index with U and on the column
/// index with conj(U).
class DensityPropagator {
 public:
  DensityPropagator(const SystemOperators& ops, double tau);

  double tau() const { return tau_; }

  /// Congruence rho -> U rho U^dagger only (no source).
  void evolve(OneBodyDensity& density);

  /// Full step. `source_now` is S at density.t, `source_next` at t + tau.
  void step(OneBodyDensity& density, const ComplexMatrix& source_now,
            const ComplexMatrix& source_next);

  /// h_eff(t) M - M h_eff(t)^dagger.
  ComplexMatrix commutator_term(const ComplexMatrix& m, double t);

 private:
  Grid1D grid_;
  RealVector potential_;
  RealVector cap_;
  PulseSpec pulse_;
  double tau_;
  ComplexMatrix position_factor_;
  ComplexVector kinetic_;
  FftWorkspace fft_;
};

}  // namespace capspec
