#include "capspec/spectra.hpp"
#include "capspec/twobody.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace capspec;

namespace {

ComplexMatrix sample_psi(int n, double t) {
  ComplexMatrix psi(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      psi(i, j) = Complex(std::cos(0.4 * i * j + t), std::sin(0.3 * (i + j) - 2.0 * t)) / double(n);
  return psi + psi.transpose().eval();
}

}  // namespace

TEST_CASE("phi accumulation of an outer product") {
  const int n = 6;
  const double h = 0.5, tau = 0.1;
  ComplexVector u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = Complex(1.0 + i, -0.5 * i);
    v[i] = Complex(std::sin(i), 0.2);
  }
  SpectralAccumulator acc(n, h);
  acc.add_two_body(u * v.adjoint(), tau);
  const ComplexMatrix expected = h * tau * v.squaredNorm() * u * u.adjoint();
  CHECK((acc.phi() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phi stays Hermitian positive semi-definite") {
  const int n = 10;
  SpectralAccumulator acc(n, 0.3);
  for (int s = 0; s < 25; ++s) acc.add_two_body(sample_psi(n, 0.37 * s), 0.05);
  const ComplexMatrix phi = acc.phi();
  CHECK((phi - phi.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(phi);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10 * phi.trace().real());
}

TEST_CASE("matrix-form spectrum equals the direct double integral") {
  const Grid1D g = build_grid(4.0, 8);
  const RealVector gamma = cap_values(g, {0.7, 1.5});
  const EigenBasis basis =
      eigendecompose(build_h0_dense(g, {PotentialKind::gaussian_well, 2.0, 1.0}), g);
  const double tau = 0.1;
  std::vector<ComplexMatrix> history;
  SpectralAccumulator acc(g.n, g.h);
  for (int s = 0; s < 15; ++s) {
    history.push_back(sample_psi(g.n, 0.21 * s));
    acc.add_two_body(history.back(), tau);
  }
  const RealVector raw = project_first(acc.phi(), gamma, basis);
  for (int k = 0; k < basis.size(); ++k) {
    const double direct =
        oracle::first_absorption_direct(history, tau, g.h, gamma, basis.states.col(k));
    CHECK(std::abs(raw[k] - direct) < 1e-12);
  }
}

TEST_CASE("projections are linear in the CAP and vanish without it") {
  const Grid1D g = build_grid(4.0, 8);
  const EigenBasis basis = eigendecompose(build_h0_dense(g, RealVector::Zero(g.n)), g);
  SpectralAccumulator acc(g.n, g.h);
  acc.add_two_body(sample_psi(g.n, 0.0), 0.1);
  acc.add_one_body(sample_psi(g.n, 0.5) * sample_psi(g.n, 0.5).adjoint(), 0.1);
  const RealVector gamma = cap_values(g, {0.3, 1.0});
  const RealVector a = project_first(acc.phi(), gamma, basis);
  const RealVector b = project_first(acc.phi(), 2.0 * gamma, basis);
  CHECK((b - 2.0 * a).cwiseAbs().maxCoeff() < 1e-14);
  const RealVector c = project_second(acc.rho_integral(), gamma, basis);
  const RealVector d = project_second(acc.rho_integral(), 2.0 * gamma, basis);
  CHECK((d - 2.0 * c).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(project_first(acc.phi(), RealVector::Zero(g.n), basis).isZero(0.0));
}

TEST_CASE("sum over all states equals total absorbed probability") {
  // 2 h^2 sum_k phi_k^T (D Phi + Phi D) phi_k = 4 h tr(D Phi)
  const Grid1D g = build_grid(4.0, 8);
  const RealVector gamma = cap_values(g, {0.7, 1.5});
  const EigenBasis basis = eigendecompose(build_h0_dense(g, RealVector::Zero(g.n)), g);
  SpectralAccumulator acc(g.n, g.h);
  for (int s = 0; s < 5; ++s) acc.add_two_body(sample_psi(g.n, 0.4 * s), 0.1);
  const double total = project_first(acc.phi(), gamma, basis).sum();
  const double expected = 4.0 * g.h * (gamma.asDiagonal() * acc.phi()).trace().real();
  CHECK(total == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("density conversion integrates back to the discrete sum") {
  const Grid1D g = build_grid(60.0, 512);
  const EigenBasis basis =
      eigendecompose(build_h0_dense(g, {PotentialKind::gaussian_well, 4.0, 1.06}), g);
  const RealVector w = continuum_weights(basis);
  RealVector discrete = RealVector::Zero(basis.size());
  double expected = 0.0;
  for (int k = 0; k < basis.size(); ++k) {
    const double e = basis.energies[k];
    if (e <= 0.0) continue;
    discrete[k] = std::exp(-std::pow(e - 2.0, 2) / 0.5) / w[k];
    expected += discrete[k];
  }
  const SpectrumCurve curve = to_density(basis, w, discrete);
  CHECK(integrate(curve) == doctest::Approx(expected).epsilon(0.01));
  CHECK(curve.energies.size() == basis.size() - basis.bound_count);
}

TEST_CASE("negative content and windows") {
  SpectrumCurve c;
  c.energies = RealVector::LinSpaced(5, 0.0, 4.0);
  c.density = RealVector::Constant(5, 1.0);
  CHECK(negative_content(c) == 0.0);
  CHECK(integrate(c) == doctest::Approx(4.0));
  CHECK(integrate_window(c, 0.5, 2.0) == doctest::Approx(1.5));
  c.density << 1.0, -1.0, 1.0, 1.0, 1.0;
  // trapezoid of min(f, 0): two half-intervals of -0.5
  CHECK(negative_content(c) == doctest::Approx(1.0));
  SpectrumCurve d = c;
  d.density.array() += 0.5;
  CHECK(l1_distance(c, d) == doctest::Approx(2.0));
}

TEST_CASE("peak finder refines parabolic maxima") {
  SpectrumCurve c;
  c.energies = RealVector::LinSpaced(101, 0.0, 2.0);
  c.density.resize(101);
  for (int i = 0; i < 101; ++i) {
    const double e = c.energies[i];
    c.density[i] = std::exp(-std::pow(e - 0.513, 2) / 0.01) + 0.5 * std::exp(-std::pow(e - 1.37, 2) / 0.01);
  }
  const auto peaks = find_peaks(c);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0] == doctest::Approx(0.513).epsilon(2e-3));
  CHECK(peaks[1] == doctest::Approx(1.37).epsilon(2e-3));
}

TEST_CASE("extent and duration") {
  const Grid1D g = build_grid(10.0, 40);
  SpectralAccumulator acc(g.n, g.h);
  // a packet confined to |x| <= 2 in both coordinates
  ComplexMatrix psi = ComplexMatrix::Zero(g.n, g.n);
  for (int j = 0; j < g.n; ++j)
    for (int i = 0; i < g.n; ++i)
      if (std::abs(g.x[i]) <= 2.0 && std::abs(g.x[j]) <= 2.0) psi(i, j) = 1.0;
  psi /= std::sqrt(g.h * g.h * psi.squaredNorm());
  acc.record_tail(psi, g);
  acc.record_sample({0.0, 1.0, 0.0, 0.0, 0.0});
  acc.record_sample({3.0, 0.5, 0.0, 0.0, 0.0});
  acc.record_sample({7.5, 0.005, 0.0, 0.0, 0.0});
  const ExtentDuration ed = extent_duration(acc, g.h, 20.0);
  CHECK(ed.extent == doctest::Approx(2.0));
  CHECK(ed.duration == doctest::Approx(7.5));
  CHECK(ed.duration_reached);

  SpectralAccumulator never(g.n, g.h);
  never.record_sample({0.0, 1.0, 0.0, 0.0, 0.0});
  const ExtentDuration open = extent_duration(never, g.h, 20.0);
  CHECK_FALSE(open.duration_reached);
  CHECK(open.duration == 20.0);
}
