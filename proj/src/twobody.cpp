#include "capspec/twobody.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace capspec {
namespace {

constexpr Complex kI(0.0, 1.0);

// Multiplier for the kinetic plus velocity-gauge term, t(k) = k^2/2 + A k.
double kinetic_symbol(double k, double field) { return 0.5 * k * k + field * k; }

}  // namespace

SystemOperators make_operators(const Grid1D& grid, const PotentialSpec& pot,
                               const InteractionSpec& w, const CapSpec& cap,
                               const PulseSpec& pulse) {
  SystemOperators ops;
  ops.grid = grid;
  ops.potential = potential_values(grid, pot);
  ops.cap = cap_values(grid, cap);
  ops.interaction = interaction_matrix(grid, w);
  ops.pulse = pulse;
  return ops;
}

double norm2(const TwoBodyState& state) {
  return state.h * state.h * state.psi.squaredNorm();
}

ComplexVector gaussian_packet(const Grid1D& grid, const WavePacketSpec& packet) {
  if (!(packet.momentum_width > 0.0)) {
    throw std::invalid_argument("packet momentum width must be positive");
  }
  const double sx = packet.position_width();
  ComplexVector chi(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    const double dx = grid.x[i] - packet.center;
    chi[i] = std::exp(-dx * dx / (4.0 * sx * sx)) * std::exp(kI * packet.momentum * grid.x[i]);
  }
  chi /= std::sqrt(grid.h * chi.squaredNorm());
  return chi;
}

TwoBodyState init_scattering_state(const Grid1D& grid, const WavePacketSpec& packet,
                                   const EigenBasis& basis, double cap_onset) {
  if (basis.bound_count < 1) {
    throw std::invalid_argument("target potential has no bound state");
  }
  const ComplexVector chi = gaussian_packet(grid, packet);
  double outside = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    if (std::abs(grid.x[i]) >= cap_onset) outside += grid.h * std::norm(chi[i]);
  }
  if (outside > 0.01) {
    std::ostringstream msg;
    msg << "projectile packet has " << outside << " of its norm inside the CAP region";
    throw std::invalid_argument(msg.str());
  }
  const ComplexVector target = basis.states.col(0).cast<Complex>();
  TwoBodyState state;
  state.h = grid.h;
  state.psi = chi * target.transpose() + target * chi.transpose();
  state.psi /= std::sqrt(norm2(state));
  return state;
}

double cap_region_fraction(const TwoBodyState& state, const Grid1D& grid, double onset) {
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const bool outer_j = std::abs(grid.x[j]) >= onset;
    for (int i = 0; i < grid.n; ++i) {
      if (outer_j || std::abs(grid.x[i]) >= onset) sum += std::norm(state.psi(i, j));
    }
  }
  return state.h * state.h * sum;
}

double energy_expectation(const TwoBodyState& state, const SystemOperators& ops, double field) {
  const Grid1D& g = ops.grid;
  const int n = g.n;
  FftWorkspace fft(n, 2);
  auto buf = fft.matrix();
  buf = state.psi;
  fft.forward();
  for (int j = 0; j < n; ++j) {
    const double tj = kinetic_symbol(g.k[j], field);
    for (int i = 0; i < n; ++i) {
      buf(i, j) *= (kinetic_symbol(g.k[i], field) + tj) / (double(n) * n);
    }
  }
  fft.backward();
  Complex sum(0.0, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double local = ops.potential[i] + ops.potential[j];
      if (ops.interaction.size() != 0) local += ops.interaction(i, j);
      sum += std::conj(state.psi(i, j)) * (buf(i, j) + local * state.psi(i, j));
    }
  }
  return sum.real() / state.psi.squaredNorm();
}

TwoBodyPropagator::TwoBodyPropagator(const SystemOperators& ops, double tau)
    : k_(ops.grid.k), pulse_(ops.pulse), tau_(tau), fft_(ops.grid.n, 2) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  const int n = ops.grid.n;
  ComplexVector half(n);
  for (int i = 0; i < n; ++i) {
    half[i] = std::exp(-kI * 0.5 * tau * ops.potential[i] - 0.5 * tau * ops.cap[i]);
  }
  position_factor_ = half * half.transpose();
  if (ops.interaction.size() != 0) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        position_factor_(i, j) *= std::exp(-kI * 0.5 * tau * ops.interaction(i, j));
      }
    }
  }
  kinetic_.resize(n);
}

void TwoBodyPropagator::step(TwoBodyState& state) {
  const int n = static_cast<int>(k_.size());
  const double field = vector_potential(pulse_, state.t + 0.5 * tau_);
  const double scale = 1.0 / (double(n) * n);
  for (int i = 0; i < n; ++i) {
    kinetic_[i] = std::exp(-kI * tau_ * kinetic_symbol(k_[i], field));
  }
  auto buf = fft_.matrix();
  buf = position_factor_.cwiseProduct(state.psi);
  fft_.forward();
  for (int j = 0; j < n; ++j) {
    const Complex kj = kinetic_[j] * scale;
    for (int i = 0; i < n; ++i) buf(i, j) *= kinetic_[i] * kj;
  }
  fft_.backward();
  state.psi = position_factor_.cwiseProduct(buf);
  state.t += tau_;
}

OneBodyGroundState relax_one_body(const Grid1D& grid, const RealVector& potential,
                                  const RelaxOptions& options,
                                  std::optional<ComplexVector> initial) {
  if (!(options.tau > 0.0)) throw std::invalid_argument("imaginary time step must be positive");
  const int n = grid.n;
  FftWorkspace fft(n, 1);
  auto buf = fft.vector();

  RealVector half(n), kin(n), kin_symbol(n);
  for (int i = 0; i < n; ++i) {
    half[i] = std::exp(-0.5 * options.tau * potential[i]);
    kin_symbol[i] = 0.5 * grid.k[i] * grid.k[i];
    kin[i] = std::exp(-options.tau * kin_symbol[i]) / n;
  }

  ComplexVector phi(n);
  if (initial) {
    phi = *initial;
  } else {
    for (int i = 0; i < n; ++i) phi[i] = std::exp(-0.5 * grid.x[i] * grid.x[i]);
  }
  phi /= std::sqrt(grid.h * phi.squaredNorm());

  const auto energy = [&](const ComplexVector& v) {
    buf = v;
    fft.forward();
    buf.array() *= kin_symbol.array().cast<Complex>() / double(n);
    fft.backward();
    const Complex e = v.dot(ComplexVector(buf + potential.cast<Complex>().cwiseProduct(v)));
    return e.real() / v.squaredNorm();
  };

  double last = energy(phi);
  for (int it = 1; it <= options.max_iterations; ++it) {
    buf = half.cast<Complex>().cwiseProduct(phi);
    fft.forward();
    buf.array() *= kin.array().cast<Complex>();
    fft.backward();
    phi = half.cast<Complex>().cwiseProduct(buf);
    phi /= std::sqrt(grid.h * phi.squaredNorm());
    const double e = energy(phi);
    if (std::abs(e - last) < options.tolerance) return {phi, e, it};
    last = e;
  }
  std::ostringstream msg;
  msg << "one-body imaginary-time relaxation did not converge; last energy " << last;
  throw std::runtime_error(msg.str());
}

TwoBodyGroundState relax_two_body(const SystemOperators& ops, const RelaxOptions& options,
                                  std::optional<ComplexMatrix> initial) {
  if (!(options.tau > 0.0)) throw std::invalid_argument("imaginary time step must be positive");
  const Grid1D& g = ops.grid;
  const int n = g.n;
  FftWorkspace fft(n, 2);
  auto buf = fft.matrix();

  RealMatrix pos(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      double local = ops.potential[i] + ops.potential[j];
      if (ops.interaction.size() != 0) local += ops.interaction(i, j);
      pos(i, j) = std::exp(-0.5 * options.tau * local);
    }
  }
  RealVector kin(n);
  for (int i = 0; i < n; ++i) kin[i] = std::exp(-0.5 * options.tau * g.k[i] * g.k[i]);
  RealMatrix kin2 = kin * kin.transpose() / (double(n) * n);

  TwoBodyState state;
  state.h = g.h;
  if (initial) {
    state.psi = *initial;
  } else {
    ComplexVector seed(n);
    for (int i = 0; i < n; ++i) seed[i] = std::exp(-0.5 * g.x[i] * g.x[i]);
    state.psi = seed * seed.transpose();
  }
  state.psi /= std::sqrt(norm2(state));

  double last = energy_expectation(state, ops);
  for (int it = 1; it <= options.max_iterations; ++it) {
    buf = pos.cast<Complex>().cwiseProduct(state.psi);
    fft.forward();
    buf.array() *= kin2.array().cast<Complex>();
    fft.backward();
    state.psi = pos.cast<Complex>().cwiseProduct(buf);
    state.psi /= std::sqrt(norm2(state));
    const double e = energy_expectation(state, ops);
    if (std::abs(e - last) < options.tolerance) return {state, e, it};
    last = e;
  }
  std::ostringstream msg;
  msg << "two-body imaginary-time relaxation did not converge; last energy " << last;
  throw std::runtime_error(msg.str());
}

}  // namespace capspec
