#pragma once

#include "capspec/grid.hpp"

#include <vector>

namespace capspec {

enum class Parity { even, odd };

/// Dense spectral (Fourier) representation of -1/2 d^2/dx^2 on the grid.
RealMatrix kinetic_matrix(const Grid1D& grid);

/// h0 = T + diag(V), symmetrized.
RealMatrix build_h0_dense(const Grid1D& grid, const RealVector& potential);
RealMatrix build_h0_dense(const Grid1D& grid, const PotentialSpec& pot);

/// Eigenpairs of h0, box normalized so that h * |phi_k|^2 = 1.
struct EigenBasis {
  double h = 0.0;
  RealVector energies;  ///< ascending
  RealMatrix states;    ///< column k is phi_k sampled on the grid
  std::vector<Parity> parity;
  std::vector<double> reflection_overlap;  ///< <phi_k|R phi_k> in box norm
  int bound_count = 0;
  int ambiguous_parity_count = 0;  ///< states with |<phi|R phi>| < 0.99

  int size() const { return static_cast<int>(energies.size()); }
};

inline constexpr double kParityThreshold = 0.99;

/// Energies within this distance of zero count as neither bound nor continuum.
inline constexpr double kThresholdEnergy = 1e-10;

inline bool is_bound(double energy) { return energy < -kThresholdEnergy; }
inline bool is_continuum(double energy) { return energy > kThresholdEnergy; }

/// Full diagonalization. Reflection-symmetric h0 is diagonalized in the
/// even and odd subspaces separately so near-degenerate pairs cannot mix;
/// otherwise the full matrix is used and parity is only classified.
EigenBasis eigendecompose(const RealMatrix& h0, const Grid1D& grid);

/// Eigenpairs of h0 on a wider box with the same spacing, every state sampled
/// only on the points of `grid`. Box normalization refers to the wide box, so
/// continuum levels are denser and continuum_weights() scales accordingly.
/// A half-extent not larger than the grid's gives the plain grid basis.
EigenBasis projection_basis(const Grid1D& grid, const PotentialSpec& pot, double half_extent);

/// Density-of-states weights 1/d(eps) per parity family for eps > 0.
/// Central difference 2/(e_{k+1} - e_{k-1}) in the interior of each family,
/// one-sided at the ends; zero for bound states.
RealVector continuum_weights(const EigenBasis& basis);

}  // namespace capspec
