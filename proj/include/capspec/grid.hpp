#pragma once

#include <Eigen/Dense>

#include <string>

namespace capspec {

using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Uniform periodic grid on [-L, L) with its FFT-ordered conjugate momenta.
///
/// x_i = -L + i*h. Reflection x -> -x maps index i to (n - i) mod n, using
/// the periodic identification of -L with L.
struct Grid1D {
  int n = 0;
  double half_extent = 0.0;
  double h = 0.0;
  RealVector x;
  RealVector k;

  /// Index of the mirror point of grid index i.
  int mirror(int i) const { return (n - i) % n; }
  /// Index of the momentum -k_j (the Nyquist mode maps to itself).
  int negated_mode(int j) const { return (n - j) % n; }
};

Grid1D build_grid(double half_extent, int n);

/// Square CAP: gamma0 (|x| - x0)^2 beyond the onset x0, zero inside.
struct CapSpec {
  double gamma0 = 0.0;
  double onset = 0.0;
};

RealVector cap_values(const Grid1D& grid, const CapSpec& cap);

enum class PotentialKind { none, gaussian_well, soft_coulomb };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// Attractive confining potential.
///   gaussian_well: -V0 exp(-x^2 / (2 width^2))
///   soft_coulomb:  -V0 / sqrt(x^2 + width^2)
struct PotentialSpec {
  PotentialKind kind = PotentialKind::none;
  double strength = 0.0;
  double width = 1.0;
};

RealVector potential_values(const Grid1D& grid, const PotentialSpec& pot);

/// Soft-core pair interaction W0 / sqrt(x12^2 + s^2).
struct InteractionSpec {
  double strength = 0.0;
  double smoothness = 1.0;
};

double interaction_value(const InteractionSpec& w, double separation);
RealMatrix interaction_matrix(const Grid1D& grid, const InteractionSpec& w);

/// sin^2-enveloped vector potential lasting n_cycles optical cycles.
struct PulseSpec {
  double peak_field = 0.0;
  double omega = 1.0;
  int n_cycles = 0;

  double duration() const;
};

double vector_potential(const PulseSpec& pulse, double t);

}  // namespace capspec
