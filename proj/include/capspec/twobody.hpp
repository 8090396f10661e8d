#pragma once

#include "capspec/eigenbasis.hpp"
#include "capspec/fft.hpp"
#include "capspec/grid.hpp"

#include <optional>

namespace capspec {

/// Pointwise operator data shared by the one- and two-particle propagators.
struct SystemOperators {
  Grid1D grid;
  RealVector potential;  ///< V(x_i)
  RealVector cap;        ///< gamma(x_i)
  RealMatrix interaction;  ///< W(|x_i - x_j|); may be empty for one-body use
  PulseSpec pulse;       ///< n_cycles == 0 means field-free

  double field(double t) const { return vector_potential(pulse, t); }
};

SystemOperators make_operators(const Grid1D& grid, const PotentialSpec& pot,
                               const InteractionSpec& w, const CapSpec& cap,
                               const PulseSpec& pulse = {});

/// Two-particle wave function psi(i, j) ~ Psi2(x_i, x_j).
struct TwoBodyState {
  ComplexMatrix psi;
  double t = 0.0;
  double h = 0.0;
};

/// h^2 * sum |psi_ij|^2.
double norm2(const TwoBodyState& state);

/// Minimum-uncertainty Gaussian projectile; position width 1/(2 sigma_p).
struct WavePacketSpec {
  double center = 0.0;
  double momentum = 0.0;
  double momentum_width = 0.1;

  double position_width() const { return 1.0 / (2.0 * momentum_width); }
};

ComplexVector gaussian_packet(const Grid1D& grid, const WavePacketSpec& packet);

/// Symmetrized product of the projectile packet and the bound ground state
/// of `basis`, normalized to one. Throws if more than 1% of the packet's norm
/// lies at |x| >= cap_onset or if the basis has no bound state.
TwoBodyState init_scattering_state(const Grid1D& grid, const WavePacketSpec& packet,
                                   const EigenBasis& basis, double cap_onset);

/// Fraction of the two-body norm with max(|x1|, |x2|) >= onset.
double cap_region_fraction(const TwoBodyState& state, const Grid1D& grid, double onset);

/// Expectation of the Hermitian two-body Hamiltonian (CAP excluded),
/// including the velocity-gauge A(t) p term. Normalized by norm2.
double energy_expectation(const TwoBodyState& state, const SystemOperators& ops,
                          double field = 0.0);

/// Second-order Strang propagator for Psi2 under H_eff = h1 + h2 + W - i Gamma.
///
/// Factor order: exp(-i tau W/2) exp(-i tau (V - i gamma)/2) exp(-i tau T(t + tau/2))
/// exp(-i tau (V - i gamma)/2) exp(-i tau W/2); the position factors are fused.
class TwoBodyPropagator {
 public:
  TwoBodyPropagator(const SystemOperators& ops, double tau);

  double tau() const { return tau_; }
  void step(TwoBodyState& state);

 private:
  RealVector k_;
  PulseSpec pulse_;
  double tau_;
  ComplexMatrix position_factor_;
  ComplexVector kinetic_;
  FftWorkspace fft_;
};

struct OneBodyGroundState {
  ComplexVector phi;  ///< box normalized
  double energy = 0.0;
  int iterations = 0;
};

struct TwoBodyGroundState {
  TwoBodyState state;
  double energy = 0.0;
  int iterations = 0;
};

struct RelaxOptions {
  double tau = 0.05;
  double tolerance = 1e-10;  ///< |E_k - E_{k-1}| between successive steps
  int max_iterations = 200000;
};

/// Imaginary-time split-operator relaxation with renormalization every step.
/// Throws std::runtime_error carrying the last energy on non-convergence.
OneBodyGroundState relax_one_body(const Grid1D& grid, const RealVector& potential,
                                  const RelaxOptions& options = {},
                                  std::optional<ComplexVector> initial = std::nullopt);

TwoBodyGroundState relax_two_body(const SystemOperators& ops, const RelaxOptions& options = {},
                                  std::optional<ComplexMatrix> initial = std::nullopt);

}  // namespace capspec
