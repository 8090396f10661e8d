#include "capspec/eigenbasis.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace capspec;

TEST_CASE("free particle spectrum equals periodic-box kinetic energies") {
  const Grid1D g = build_grid(10.0, 64);
  const EigenBasis basis = eigendecompose(build_h0_dense(g, RealVector::Zero(g.n)), g);
  std::vector<double> expected;
  for (int i = 0; i < g.n; ++i) expected.push_back(0.5 * g.k[i] * g.k[i]);
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < g.n; ++i) CHECK(basis.energies[i] == doctest::Approx(expected[i]).epsilon(1e-10));
  CHECK(basis.ambiguous_parity_count == 0);
  CHECK(basis.bound_count == 0);
}

TEST_CASE("gaussian well ground energy") {
  const Grid1D g = build_grid(40.0, 640);
  const PotentialSpec well{PotentialKind::gaussian_well, 4.0, 3.0 / (2.0 * std::sqrt(2.0))};
  const EigenBasis basis = eigendecompose(build_h0_dense(g, well), g);
  CHECK(std::abs(basis.energies[0] + 3.141) < 5e-3);
  CHECK(basis.parity[0] == Parity::even);
  CHECK(basis.parity[1] == Parity::odd);
  CHECK(basis.ambiguous_parity_count == 0);
}

TEST_CASE("soft-Coulomb ground energy") {
  const Grid1D g = build_grid(40.0, 320);
  const PotentialSpec coul{PotentialKind::soft_coulomb, 0.5, 0.5};
  const EigenBasis basis = eigendecompose(build_h0_dense(g, coul), g);
  CHECK(std::abs(basis.energies[0] + 0.5) < 5e-3);
  CHECK(basis.parity[0] == Parity::even);
  CHECK(basis.parity[1] == Parity::odd);
}

TEST_CASE("eigenbasis is box-orthonormal and complete") {
  const Grid1D g = build_grid(20.0, 128);
  const PotentialSpec well{PotentialKind::gaussian_well, 4.0, 1.0};
  const EigenBasis basis = eigendecompose(build_h0_dense(g, well), g);
  const RealMatrix gram = g.h * basis.states.transpose() * basis.states;
  CHECK((gram - RealMatrix::Identity(g.n, g.n)).cwiseAbs().maxCoeff() < 1e-8);
  const RealMatrix completeness = g.h * basis.states * basis.states.transpose();
  CHECK((completeness - RealMatrix::Identity(g.n, g.n)).cwiseAbs().maxCoeff() < 1e-8);
  for (int k = 1; k < basis.size(); ++k) CHECK(basis.energies[k] >= basis.energies[k - 1]);
  for (int k = 0; k < basis.size(); ++k) CHECK(std::abs(basis.reflection_overlap[k]) > 0.99);

  // reconstruction of an arbitrary vector
  ComplexVector psi(g.n);
  for (int i = 0; i < g.n; ++i) {
    psi[i] = Complex(std::sin(0.3 * i) + 0.1 * i, std::cos(1.7 * i));
  }
  const ComplexVector proj = g.h * basis.states.transpose().cast<Complex>() * psi;
  // h sum_k |phi_k^T psi|^2 = |psi|^2
  const ComplexVector raw = basis.states.transpose().cast<Complex>() * psi;
  CHECK(g.h * raw.squaredNorm() == doctest::Approx(psi.squaredNorm()).epsilon(1e-10));
  CHECK(proj.squaredNorm() == doctest::Approx(g.h * psi.squaredNorm()).epsilon(1e-10));

  // high continuum alternates parity
  int alternations = 0;
  for (int k = g.n / 2; k + 1 < g.n; ++k) alternations += basis.parity[k] != basis.parity[k + 1];
  CHECK(alternations > g.n / 4);
}

TEST_CASE("asymmetric h0 falls back to full diagonalization and flags parity") {
  const Grid1D g = build_grid(10.0, 32);
  RealVector v = RealVector::Zero(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = 0.3 * g.x[i];
  const EigenBasis basis = eigendecompose(build_h0_dense(g, v), g);
  CHECK(basis.ambiguous_parity_count > 0);
}

namespace {

EigenBasis synthetic_basis(const std::vector<double>& energies, const std::vector<Parity>& parity) {
  EigenBasis b;
  b.h = 1.0;
  b.energies = Eigen::Map<const RealVector>(energies.data(), static_cast<int>(energies.size()));
  b.parity = parity;
  b.states = RealMatrix::Identity(b.size(), b.size());
  for (double e : energies) b.bound_count += e < 0.0;
  return b;
}

}  // namespace

TEST_CASE("continuum weights") {
  SUBCASE("uniform spacing gives 1/delta") {
    std::vector<double> e;
    std::vector<Parity> p;
    for (int k = 0; k < 12; ++k) {
      e.push_back(0.25 * (k + 1));
      p.push_back(k % 2 ? Parity::odd : Parity::even);
    }
    const RealVector w = continuum_weights(synthetic_basis(e, p));
    for (int k = 2; k < 10; ++k) CHECK(w[k] == doctest::Approx(1.0 / 0.5));
  }
  SUBCASE("bound states excluded") {
    const std::vector<double> e{-2.0, -1.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    const std::vector<Parity> p{Parity::even, Parity::odd, Parity::even, Parity::odd,
                                Parity::even, Parity::odd, Parity::even, Parity::odd};
    const RealVector w = continuum_weights(synthetic_basis(e, p));
    CHECK(w[0] == 0.0);
    CHECK(w[1] == 0.0);
    CHECK(w[2] == doctest::Approx(1.0 / 0.2));
  }
  SUBCASE("degenerate spacing rejected") {
    const std::vector<double> e{0.1, 0.1, 0.2, 0.3, 0.4, 0.5};
    const std::vector<Parity> p(6, Parity::even);
    std::vector<Parity> q = p;
    q[3] = q[4] = q[5] = Parity::odd;
    CHECK_THROWS_AS(continuum_weights(synthetic_basis(e, q)), std::invalid_argument);
  }
  SUBCASE("too few states per family rejected") {
    const std::vector<double> e{0.1, 0.2, 0.3, 0.4};
    const std::vector<Parity> p{Parity::even, Parity::even, Parity::even, Parity::odd};
    CHECK_THROWS_AS(continuum_weights(synthetic_basis(e, p)), std::invalid_argument);
  }
}

TEST_CASE("projection basis from a wider box") {
  const Grid1D g = build_grid(20.0, 160);
  const PotentialSpec pot{PotentialKind::soft_coulomb, 1.0, 0.7};
  const EigenBasis narrow = projection_basis(g, pot, 20.0);
  const EigenBasis direct = eigendecompose(build_h0_dense(g, pot), g);
  CHECK((narrow.energies - direct.energies).cwiseAbs().maxCoeff() == 0.0);

  const EigenBasis wide = projection_basis(g, pot, 60.0);
  CHECK(wide.states.rows() == g.n);
  CHECK(wide.size() == 3 * g.n);
  // deeply bound levels do not feel the box
  CHECK(std::abs(wide.energies[0] - direct.energies[0]) < 1e-10);
  CHECK(std::abs(wide.energies[1] - direct.energies[1]) < 1e-8);
  // denser continuum
  int narrow_count = 0, wide_count = 0;
  for (int k = 0; k < narrow.size(); ++k) narrow_count += is_continuum(narrow.energies[k]) && narrow.energies[k] < 1.0;
  for (int k = 0; k < wide.size(); ++k) wide_count += is_continuum(wide.energies[k]) && wide.energies[k] < 1.0;
  CHECK(wide_count > 2 * narrow_count);

  // completeness for functions supported on the inner grid
  RealVector f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = std::exp(-0.1 * g.x[i] * g.x[i]) * (1.0 + 0.3 * g.x[i]);
  const RealVector coeff = g.h * (wide.states.transpose() * f);
  CHECK(coeff.squaredNorm() == doctest::Approx(g.h * f.squaredNorm()).epsilon(1e-10));
}
