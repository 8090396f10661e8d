#include "capspec/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace capspec {
namespace {

constexpr Complex kI(0.0, 1.0);

double kinetic_symbol(double k, double field) { return 0.5 * k * k + field * k; }

}  // namespace

double trace_probability(const OneBodyDensity& density) {
  return density.h * density.rho.trace().real();
}

ComplexMatrix source_matrix(const ComplexMatrix& psi, const RealVector& cap, double h) {
  const int n = static_cast<int>(psi.rows());
  std::vector<int> active;
  for (int j = 0; j < n; ++j) {
    if (cap[j] > 0.0) active.push_back(j);
  }
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  if (active.empty()) return s;
  ComplexMatrix weighted(n, static_cast<int>(active.size()));
  for (std::size_t c = 0; c < active.size(); ++c) {
    weighted.col(static_cast<int>(c)) = psi.col(active[c]) * std::sqrt(cap[active[c]]);
  }
  s.selfadjointView<Eigen::Lower>().rankUpdate(weighted, 4.0 * h);
  s.triangularView<Eigen::StrictlyUpper>() = s.adjoint();
  return s;
}

double vacuum_rate(const ComplexMatrix& rho, const RealVector& cap, double h) {
  double sum = 0.0;
  for (int i = 0; i < cap.size(); ++i) sum += cap[i] * rho(i, i).real();
  return 2.0 * h * sum;
}

void update_p0(TraceLedger& ledger, const ComplexMatrix& rho, const RealVector& cap, double h,
               double tau) {
  const double rate = vacuum_rate(rho, cap, h);
  ledger.p0 += 0.5 * tau * (ledger.vacuum_rate + rate);
  ledger.vacuum_rate = rate;
}

DensityPropagator::DensityPropagator(const SystemOperators& ops, double tau)
    : grid_(ops.grid),
      potential_(ops.potential),
      cap_(ops.cap),
      pulse_(ops.pulse),
      tau_(tau),
      fft_(ops.grid.n, 2) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  const int n = grid_.n;
  ComplexVector left(n);
  for (int i = 0; i < n; ++i) {
    left[i] = std::exp(-kI * 0.5 * tau * potential_[i] - 0.5 * tau * cap_[i]);
  }
  position_factor_ = left * left.adjoint();
  kinetic_.resize(n);
}

void DensityPropagator::evolve(OneBodyDensity& density) {
  const int n = grid_.n;
  const double field = vector_potential(pulse_, density.t + 0.5 * tau_);
  const double scale = 1.0 / (double(n) * n);
  for (int i = 0; i < n; ++i) {
    kinetic_[i] = std::exp(-kI * tau_ * kinetic_symbol(grid_.k[i], field));
  }
  auto buf = fft_.matrix();
  buf = position_factor_.cwiseProduct(density.rho);
  fft_.forward();
  for (int j = 0; j < n; ++j) {
    const Complex kj = std::conj(kinetic_[grid_.negated_mode(j)]) * scale;
    for (int i = 0; i < n; ++i) buf(i, j) *= kinetic_[i] * kj;
  }
  fft_.backward();
  density.rho = position_factor_.cwiseProduct(buf);
  density.t += tau_;
}

ComplexMatrix DensityPropagator::commutator_term(const ComplexMatrix& m, double t) {
  const int n = grid_.n;
  const double field = vector_potential(pulse_, t);
  const double scale = 1.0 / (double(n) * n);
  auto buf = fft_.matrix();
  buf = m;
  fft_.forward();
  for (int j = 0; j < n; ++j) {
    const double tj = kinetic_symbol(grid_.k[grid_.negated_mode(j)], field);
    for (int i = 0; i < n; ++i) {
      buf(i, j) *= (kinetic_symbol(grid_.k[i], field) - tj) * scale;
    }
  }
  fft_.backward();
  ComplexMatrix out = buf;
  for (int j = 0; j < n; ++j) {
    const Complex right(potential_[j], cap_[j]);
    for (int i = 0; i < n; ++i) {
      const Complex left(potential_[i], -cap_[i]);
      out(i, j) += (left - right) * m(i, j);
    }
  }
  return out;
}

void DensityPropagator::step(OneBodyDensity& density, const ComplexMatrix& source_now,
                             const ComplexMatrix& source_next) {
  const double t = density.t;
  const ComplexMatrix cross = commutator_term(source_now, t);
  evolve(density);
  density.rho += 0.5 * tau_ * (source_now + source_next);
  density.rho -= kI * (0.5 * tau_ * tau_) * cross;
}

}  // namespace capspec
