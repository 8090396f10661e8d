#include "capspec/eigenbasis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace capspec {

RealMatrix kinetic_matrix(const Grid1D& grid) {
  const int n = grid.n;
  RealVector row(n);
  for (int d = 0; d < n; ++d) {
    double sum = 0.0;
    for (int m = 0; m < n; ++m) {
      sum += 0.5 * grid.k[m] * grid.k[m] * std::cos(grid.k[m] * d * grid.h);
    }
    row[d] = sum / n;
  }
  RealMatrix t(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      t(i, j) = row[(i - j + n) % n];
    }
  }
  return t;
}

RealMatrix build_h0_dense(const Grid1D& grid, const RealVector& potential) {
  if (potential.size() != grid.n) {
    throw std::invalid_argument("potential length does not match grid");
  }
  RealMatrix h0 = kinetic_matrix(grid);
  h0.diagonal() += potential;
  return 0.5 * (h0 + h0.transpose());
}

RealMatrix build_h0_dense(const Grid1D& grid, const PotentialSpec& pot) {
  return build_h0_dense(grid, potential_values(grid, pot));
}

namespace {

// Orthonormal (Euclidean) bases of the even and odd reflection subspaces.
std::pair<RealMatrix, RealMatrix> parity_bases(const Grid1D& grid) {
  const int n = grid.n;
  RealMatrix even = RealMatrix::Zero(n, n / 2 + 1);
  RealMatrix odd = RealMatrix::Zero(n, n / 2 - 1);
  even(0, 0) = 1.0;
  even(n / 2, n / 2) = 1.0;
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 1; i < n / 2; ++i) {
    even(i, i) = s;
    even(n - i, i) = s;
    odd(i, i - 1) = s;
    odd(n - i, i - 1) = -s;
  }
  return {even, odd};
}

bool is_reflection_symmetric(const RealMatrix& h0, const Grid1D& grid) {
  const int n = grid.n;
  const double scale = std::max(1.0, h0.cwiseAbs().maxCoeff());
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(h0(i, j) - h0(grid.mirror(i), grid.mirror(j))) > 1e-12 * scale) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

EigenBasis eigendecompose(const RealMatrix& h0, const Grid1D& grid) {
  const int n = grid.n;
  if (h0.rows() != n || h0.cols() != n) {
    throw std::invalid_argument("h0 dimensions do not match grid");
  }
  if ((h0 - h0.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, h0.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("h0 is not symmetric");
  }

  RealVector values(n);
  RealMatrix vectors(n, n);
  if (is_reflection_symmetric(h0, grid)) {
    const auto [even, odd] = parity_bases(grid);
    Eigen::SelfAdjointEigenSolver<RealMatrix> even_solver(even.transpose() * h0 * even);
    Eigen::SelfAdjointEigenSolver<RealMatrix> odd_solver(odd.transpose() * h0 * odd);
    if (even_solver.info() != Eigen::Success || odd_solver.info() != Eigen::Success) {
      throw std::runtime_error("eigensolver failed");
    }
    const int ne = static_cast<int>(even.cols());
    values.head(ne) = even_solver.eigenvalues();
    values.tail(n - ne) = odd_solver.eigenvalues();
    vectors.leftCols(ne) = even * even_solver.eigenvectors();
    vectors.rightCols(n - ne) = odd * odd_solver.eigenvectors();
  } else {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h0);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    values = solver.eigenvalues();
    vectors = solver.eigenvectors();
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] < values[b]; });

  EigenBasis basis;
  basis.h = grid.h;
  basis.energies.resize(n);
  basis.states.resize(n, n);
  basis.parity.resize(n);
  basis.reflection_overlap.resize(n);
  const double norm = 1.0 / std::sqrt(grid.h);
  for (int k = 0; k < n; ++k) {
    const int src = order[k];
    basis.energies[k] = values[src];
    basis.states.col(k) = vectors.col(src) * norm;
    double overlap = 0.0;
    for (int i = 0; i < n; ++i) {
      overlap += vectors(i, src) * vectors(grid.mirror(i), src);
    }
    basis.reflection_overlap[k] = overlap;
    basis.parity[k] = overlap >= 0.0 ? Parity::even : Parity::odd;
    if (std::abs(overlap) < kParityThreshold) ++basis.ambiguous_parity_count;
    if (is_bound(values[src])) ++basis.bound_count;
  }
  return basis;
}

EigenBasis projection_basis(const Grid1D& grid, const PotentialSpec& pot, double half_extent) {
  const int pad = static_cast<int>(std::ceil((half_extent - grid.half_extent) / grid.h - 1e-9));
  if (pad <= 0) return eigendecompose(build_h0_dense(grid, pot), grid);
  const Grid1D wide = build_grid(grid.half_extent + pad * grid.h, grid.n + 2 * pad);
  EigenBasis basis = eigendecompose(build_h0_dense(wide, pot), wide);
  basis.states = basis.states.middleRows(pad, grid.n).eval();
  return basis;
}

RealVector continuum_weights(const EigenBasis& basis) {
  RealVector weights = RealVector::Zero(basis.size());
  for (const Parity family : {Parity::even, Parity::odd}) {
    std::vector<int> members;
    for (int k = 0; k < basis.size(); ++k) {
      if (basis.parity[k] == family && is_continuum(basis.energies[k])) members.push_back(k);
    }
    if (members.size() < 3) {
      throw std::invalid_argument("fewer than 3 positive-energy states in a parity family");
    }
    const auto e = [&](std::size_t m) { return basis.energies[members[m]]; };
    for (std::size_t m = 0; m + 1 < members.size(); ++m) {
      if (e(m + 1) - e(m) < 1e-12) {
        throw std::invalid_argument("degenerate energy spacing within a parity family");
      }
    }
    const std::size_t last = members.size() - 1;
    for (std::size_t m = 0; m <= last; ++m) {
      double w;
      if (m == 0) {
        w = 1.0 / (e(1) - e(0));
      } else if (m == last) {
        w = 1.0 / (e(last) - e(last - 1));
      } else {
        w = 2.0 / (e(m + 1) - e(m - 1));
      }
      weights[members[m]] = w;
    }
  }
  return weights;
}

}  // namespace capspec
