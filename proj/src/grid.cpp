#include "capspec/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace capspec {

Grid1D build_grid(double half_extent, int n) {
  if (n < 8 || n % 2 != 0) {
    throw std::invalid_argument("grid point count must be even and >= 8, got " +
                                std::to_string(n));
  }
  if (!(half_extent > 0.0)) {
    throw std::invalid_argument("grid half-extent must be positive");
  }
  Grid1D grid;
  grid.n = n;
  grid.half_extent = half_extent;
  grid.h = 2.0 * half_extent / n;
  grid.x.resize(n);
  grid.k.resize(n);
  const double dk = 2.0 * std::numbers::pi / (n * grid.h);
  for (int i = 0; i < n; ++i) {
    grid.x[i] = -half_extent + i * grid.h;
    const int m = i < n / 2 ? i : i - n;
    grid.k[i] = dk * m;
  }
  return grid;
}

RealVector cap_values(const Grid1D& grid, const CapSpec& cap) {
  if (!(cap.onset > 0.0) || cap.onset >= grid.half_extent) {
    throw std::invalid_argument("CAP onset must lie in (0, L)");
  }
  if (cap.gamma0 < 0.0) {
    throw std::invalid_argument("CAP strength must be non-negative");
  }
  RealVector gamma(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double d = std::abs(grid.x[i]) - cap.onset;
    gamma[i] = d >= 0.0 ? cap.gamma0 * d * d : 0.0;
  }
  return gamma;
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::none:
      return "none";
    case PotentialKind::gaussian_well:
      return "gaussian-well";
    case PotentialKind::soft_coulomb:
      return "soft-coulomb";
  }
  return "none";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "none") return PotentialKind::none;
  if (name == "gaussian-well") return PotentialKind::gaussian_well;
  if (name == "soft-coulomb") return PotentialKind::soft_coulomb;
  throw std::invalid_argument("unknown potential kind '" + name + "'");
}

RealVector potential_values(const Grid1D& grid, const PotentialSpec& pot) {
  if (pot.kind != PotentialKind::none && !(pot.width > 0.0)) {
    throw std::invalid_argument("potential width must be positive");
  }
  RealVector v = RealVector::Zero(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x[i];
    switch (pot.kind) {
      case PotentialKind::none:
        break;
      case PotentialKind::gaussian_well:
        v[i] = -pot.strength * std::exp(-x * x / (2.0 * pot.width * pot.width));
        break;
      case PotentialKind::soft_coulomb:
        v[i] = -pot.strength / std::sqrt(x * x + pot.width * pot.width);
        break;
    }
  }
  return v;
}

double interaction_value(const InteractionSpec& w, double separation) {
  return w.strength / std::sqrt(separation * separation + w.smoothness * w.smoothness);
}

RealMatrix interaction_matrix(const Grid1D& grid, const InteractionSpec& w) {
  if (!(w.smoothness > 0.0)) {
    throw std::invalid_argument("interaction smoothness must be positive");
  }
  RealMatrix m(grid.n, grid.n);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 0; i < grid.n; ++i) {
      m(i, j) = interaction_value(w, grid.x[i] - grid.x[j]);
    }
  }
  return m;
}

double PulseSpec::duration() const {
  return 2.0 * std::numbers::pi * n_cycles / omega;
}

double vector_potential(const PulseSpec& pulse, double t) {
  if (pulse.n_cycles <= 0 || pulse.peak_field == 0.0) return 0.0;
  const double t_end = pulse.duration();
  if (t < 0.0 || t > t_end) return 0.0;
  const double envelope = std::sin(std::numbers::pi * t / t_end);
  return pulse.peak_field / pulse.omega * envelope * envelope * std::sin(pulse.omega * t);
}

}  // namespace capspec
