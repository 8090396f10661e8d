#include "capspec/twobody.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace capspec;

namespace {

const PotentialSpec kWell{PotentialKind::gaussian_well, 4.0, 3.0 / (2.0 * std::sqrt(2.0))};

// n = 8 toy system with every term of H_eff switched on.
SystemOperators toy_operators(bool with_field) {
  const Grid1D g = build_grid(4.0, 8);
  PulseSpec pulse;
  if (with_field) pulse = {0.8, 1.3, 2};
  return make_operators(g, {PotentialKind::gaussian_well, 1.5, 1.2}, {0.7, 0.6}, {0.4, 2.0},
                        pulse);
}

ComplexMatrix toy_psi(int n) {
  ComplexMatrix psi(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      psi(i, j) = Complex(std::cos(0.7 * i + 0.3 * j) + std::cos(0.7 * j + 0.3 * i),
                          std::sin(0.2 * i * j));
  return psi;
}

ComplexMatrix reference_step(const SystemOperators& ops, const ComplexMatrix& psi, double t0,
                             double tau) {
  const int n = ops.grid.n;
  const ComplexVector y = oracle::rk4(oracle::vec(psi), t0, tau, 400, [&](double t, const ComplexVector& v) {
    const ComplexMatrix h = oracle::two_body_hamiltonian(ops.grid, ops.potential, ops.cap,
                                                         ops.interaction, ops.field(t));
    return ComplexVector(-oracle::I * (h * v));
  });
  return oracle::unvec(y, n);
}

double split_defect(const SystemOperators& ops, double tau, double t0) {
  TwoBodyState s{toy_psi(ops.grid.n), t0, ops.grid.h};
  const ComplexMatrix ref = reference_step(ops, s.psi, t0, tau);
  TwoBodyPropagator prop(ops, tau);
  prop.step(s);
  return (s.psi - ref).norm();
}

}  // namespace

TEST_CASE("scattering initial state") {
  const Grid1D g = build_grid(50.0, 400);
  const EigenBasis basis = eigendecompose(build_h0_dense(g, kWell), g);
  const WavePacketSpec packet{-20.0, 2.0, 0.1};
  const TwoBodyState s = init_scattering_state(g, packet, basis, 35.0);
  CHECK(norm2(s) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((s.psi - s.psi.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // oracle: target energy + projectile kinetic energy + mean pair interaction
  const SystemOperators ops = make_operators(g, kWell, {1.0, 0.1925}, {0.0, 35.0});
  const ComplexVector chi = gaussian_packet(g, packet);
  const RealVector target = basis.states.col(0);
  double pair = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      pair += g.h * g.h * std::norm(chi[i]) * target[j] * target[j] * ops.interaction(i, j);
  const double expected = basis.energies[0] + 0.5 * (4.0 + 0.01) + pair;
  CHECK(energy_expectation(s, ops) == doctest::Approx(expected).epsilon(1e-3));
  CHECK(cap_region_fraction(s, g, 35.0) < 0.01);

  CHECK_THROWS_AS(init_scattering_state(g, {-34.0, 2.0, 0.1}, basis, 35.0), std::invalid_argument);
  const EigenBasis free = eigendecompose(build_h0_dense(g, RealVector::Zero(g.n)), g);
  CHECK_THROWS_AS(init_scattering_state(g, packet, free, 35.0), std::invalid_argument);
}

TEST_CASE("imaginary-time relaxation") {
  SUBCASE("harmonic oscillator") {
    const Grid1D g = build_grid(10.0, 128);
    RealVector v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = 0.5 * g.x[i] * g.x[i];
    const OneBodyGroundState gs = relax_one_body(g, v, {0.02, 1e-12, 100000});
    CHECK(gs.energy == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(g.h * gs.phi.squaredNorm() == doctest::Approx(1.0));
  }
  SUBCASE("gaussian well") {
    const Grid1D g = build_grid(40.0, 640);
    const OneBodyGroundState gs = relax_one_body(g, potential_values(g, kWell), {0.02, 1e-12, 100000});
    CHECK(std::abs(gs.energy + 3.141) < 5e-3);
  }
  SUBCASE("non-convergence is reported") {
    const Grid1D g = build_grid(10.0, 64);
    CHECK_THROWS_AS(relax_one_body(g, RealVector::Zero(g.n), {0.01, 1e-15, 5}), std::runtime_error);
  }
}

TEST_CASE("field-free propagation conserves norm and exchange symmetry") {
  const Grid1D g = build_grid(30.0, 96);
  const SystemOperators ops = make_operators(g, kWell, {1.0, 0.1925}, {0.0, 25.0});
  const EigenBasis basis = eigendecompose(build_h0_dense(g, kWell), g);
  TwoBodyState s = init_scattering_state(g, {-10.0, 2.0, 0.3}, basis, 25.0);
  TwoBodyPropagator prop(ops, 0.05);
  for (int step = 0; step < 200; ++step) {
    const double before = norm2(s);
    prop.step(s);
    CHECK(std::abs(norm2(s) - before) < 1e-12);
  }
  CHECK((s.psi - s.psi.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(s.t == doctest::Approx(10.0));
}

TEST_CASE("CAP makes the norm non-increasing") {
  const Grid1D g = build_grid(30.0, 96);
  const SystemOperators ops = make_operators(g, kWell, {1.0, 0.1925}, {0.5, 20.0});
  const EigenBasis basis = eigendecompose(build_h0_dense(g, kWell), g);
  TwoBodyState s = init_scattering_state(g, {-8.0, 2.0, 0.3}, basis, 20.0);
  TwoBodyPropagator prop(ops, 0.05);
  double last = norm2(s);
  for (int step = 0; step < 400; ++step) {
    prop.step(s);
    CHECK(norm2(s) <= last + 1e-15);
    last = norm2(s);
  }
  CHECK(last < 0.9);
}

TEST_CASE("free gaussian spreads at the analytic rate") {
  const Grid1D g = build_grid(40.0, 256);
  const SystemOperators ops = make_operators(g, {}, {0.0, 1.0}, {0.0, 39.0});
  const WavePacketSpec packet{0.0, 0.0, 0.5};  // sigma_x = 1
  const ComplexVector chi = gaussian_packet(g, packet);
  TwoBodyState s{chi * chi.transpose(), 0.0, g.h};
  TwoBodyPropagator prop(ops, 0.05);
  for (int step = 0; step < 100; ++step) prop.step(s);
  // marginal of particle 1
  double mean = 0.0, second = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double p = g.h * g.h * s.psi.row(i).squaredNorm();
    mean += p * g.x[i];
    second += p * g.x[i] * g.x[i];
  }
  const double width2 = second - mean * mean;
  const double t = 5.0;
  CHECK(width2 == doctest::Approx(1.0 + std::pow(t / 2.0, 2)).epsilon(1e-6));
}

TEST_CASE("one split step has third-order local error") {
  for (const bool with_field : {false, true}) {
    const SystemOperators ops = toy_operators(with_field);
    const double t0 = with_field ? 1.1 : 0.0;
    const double d1 = split_defect(ops, 0.04, t0);
    const double d2 = split_defect(ops, 0.02, t0);
    const double d3 = split_defect(ops, 0.01, t0);
    CAPTURE(with_field);
    CHECK(d1 / d2 == doctest::Approx(8.0).epsilon(0.12));
    CHECK(d2 / d3 == doctest::Approx(8.0).epsilon(0.12));
  }
}

TEST_CASE("global error is second order") {
  const SystemOperators ops = toy_operators(true);
  const double t_end = 1.0;
  const ComplexMatrix start = toy_psi(ops.grid.n);
  const ComplexMatrix ref = reference_step(ops, start, 0.0, t_end);
  const auto error = [&](int steps) {
    TwoBodyState s{start, 0.0, ops.grid.h};
    TwoBodyPropagator prop(ops, t_end / steps);
    for (int i = 0; i < steps; ++i) prop.step(s);
    return (s.psi - ref).norm();
  };
  const double e1 = error(20), e2 = error(40), e3 = error(80);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.125));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("energy is conserved without CAP or field") {
  const Grid1D g = build_grid(30.0, 128);
  const SystemOperators ops = make_operators(g, kWell, {1.0, 0.1925}, {0.0, 25.0});
  const EigenBasis basis = eigendecompose(build_h0_dense(g, kWell), g);
  const TwoBodyState start = init_scattering_state(g, {-10.0, 2.0, 0.3}, basis, 25.0);
  const double e0 = energy_expectation(start, ops);
  // worst excursion of <H> through the collision (t in [0, 10])
  const auto excursion = [&](double tau) {
    TwoBodyState s = start;
    TwoBodyPropagator prop(ops, tau);
    const int steps = static_cast<int>(std::lround(10.0 / tau));
    double worst = 0.0;
    for (int step = 1; step <= steps; ++step) {
      prop.step(s);
      if (step % (steps / 50) == 0) worst = std::max(worst, std::abs(energy_expectation(s, ops) - e0));
    }
    return worst / std::abs(e0);
  };
  const double coarse = excursion(0.004);
  const double fine = excursion(0.002);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
  CHECK(excursion(0.0008) < 1e-6);
}
