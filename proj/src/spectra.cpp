#include "capspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace capspec {

SpectralAccumulator::SpectralAccumulator(int n, double h)
    : h_(h),
      phi_lower_(ComplexMatrix::Zero(n, n)),
      rho_integral_(ComplexMatrix::Zero(n, n)),
      max_tail_(RealVector::Zero(n / 2 + 1)) {}

void SpectralAccumulator::add_two_body(const ComplexMatrix& psi, double weight) {
  phi_lower_.selfadjointView<Eigen::Lower>().rankUpdate(psi, h_ * weight);
}

void SpectralAccumulator::add_one_body(const ComplexMatrix& rho, double weight) {
  rho_integral_ += weight * rho;
}

void SpectralAccumulator::record_tail(const ComplexMatrix& psi, const Grid1D& grid) {
  const int n = grid.n;
  const int radii = n / 2 + 1;
  std::vector<int> radius(n);
  for (int i = 0; i < n; ++i) {
    radius[i] = std::min(radii - 1, static_cast<int>(std::lround(std::abs(grid.x[i]) / grid.h)));
  }
  RealVector shell = RealVector::Zero(radii);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      shell[std::max(radius[i], radius[j])] += std::norm(psi(i, j));
    }
  }
  shell *= grid.h * grid.h;
  double beyond = 0.0;
  for (int m = radii - 1; m >= 0; --m) {
    max_tail_[m] = std::max(max_tail_[m], beyond);
    beyond += shell[m];
  }
}

ComplexMatrix SpectralAccumulator::phi() const {
  ComplexMatrix full = phi_lower_;
  full.triangularView<Eigen::StrictlyUpper>() = phi_lower_.adjoint();
  return full;
}

namespace {

// Re(phi_k^dagger D M phi_k) for every column of the (real) basis.
RealVector cap_projection(const ComplexMatrix& m, const RealVector& cap, const EigenBasis& basis) {
  const int n = static_cast<int>(cap.size());
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (cap[i] > 0.0) active.push_back(i);
  }
  RealVector out = RealVector::Zero(basis.size());
  if (active.empty()) return out;
  // rows of D M restricted to the CAP region
  ComplexMatrix dm(static_cast<int>(active.size()), n);
  RealMatrix basis_rows(static_cast<int>(active.size()), basis.size());
  for (std::size_t r = 0; r < active.size(); ++r) {
    dm.row(static_cast<int>(r)) = cap[active[r]] * m.row(active[r]);
    basis_rows.row(static_cast<int>(r)) = basis.states.row(active[r]);
  }
  const ComplexMatrix dm_phi = dm * basis.states.cast<Complex>();
  for (int k = 0; k < basis.size(); ++k) {
    out[k] = (basis_rows.col(k).cast<Complex>().cwiseProduct(dm_phi.col(k))).sum().real();
  }
  return out;
}

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double f = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + f * (ys[hi] - ys[lo]);
}

double trapezoid(const RealVector& x, const RealVector& y) {
  double sum = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return sum;
}

}  // namespace

RealVector project_first(const ComplexMatrix& phi, const RealVector& cap,
                         const EigenBasis& basis) {
  // phi^dagger (D Phi + Phi D) phi = 2 Re(phi^dagger D Phi phi) for Hermitian Phi
  return 4.0 * basis.h * basis.h * cap_projection(phi, cap, basis);
}

RealVector project_second(const ComplexMatrix& rho_integral, const RealVector& cap,
                          const EigenBasis& basis) {
  return 2.0 * basis.h * basis.h * cap_projection(rho_integral, cap, basis);
}

SpectrumCurve to_density(const EigenBasis& basis, const RealVector& weights,
                         const RealVector& discrete) {
  std::vector<double> merged;
  for (int k = 0; k < basis.size(); ++k) {
    if (is_continuum(basis.energies[k])) merged.push_back(basis.energies[k]);
  }
  if (merged.empty()) throw std::invalid_argument("basis has no continuum states");
  SpectrumCurve curve;
  curve.energies = Eigen::Map<RealVector>(merged.data(), static_cast<int>(merged.size()));
  curve.density = RealVector::Zero(curve.energies.size());
  for (const Parity family : {Parity::even, Parity::odd}) {
    std::vector<double> xs, ys;
    for (int k = 0; k < basis.size(); ++k) {
      if (basis.parity[k] == family && is_continuum(basis.energies[k])) {
        xs.push_back(basis.energies[k]);
        ys.push_back(discrete[k] * weights[k]);
      }
    }
    if (xs.empty()) continue;
    for (int m = 0; m < curve.energies.size(); ++m) {
      curve.density[m] += interpolate(xs, ys, curve.energies[m]);
    }
  }
  return curve;
}

SpectrumCurve spectrum_first(const SpectralAccumulator& acc, const RealVector& cap,
                             const EigenBasis& basis, const RealVector& weights) {
  return to_density(basis, weights, project_first(acc.phi(), cap, basis));
}

SpectrumCurve spectrum_second(const SpectralAccumulator& acc, const RealVector& cap,
                              const EigenBasis& basis, const RealVector& weights) {
  return to_density(basis, weights, project_second(acc.rho_integral(), cap, basis));
}

double integrate(const SpectrumCurve& curve) { return trapezoid(curve.energies, curve.density); }

double negative_content(const SpectrumCurve& curve) {
  return -trapezoid(curve.energies, curve.density.cwiseMin(0.0));
}

double integrate_window(const SpectrumCurve& curve, double lo, double hi) {
  double sum = 0.0;
  for (int i = 0; i + 1 < curve.energies.size(); ++i) {
    const double a = std::max(lo, curve.energies[i]);
    const double b = std::min(hi, curve.energies[i + 1]);
    if (b <= a) continue;
    const double span = curve.energies[i + 1] - curve.energies[i];
    const auto value = [&](double e) {
      const double f = (e - curve.energies[i]) / span;
      return curve.density[i] + f * (curve.density[i + 1] - curve.density[i]);
    };
    sum += 0.5 * (b - a) * (value(a) + value(b));
  }
  return sum;
}

double l1_distance(const SpectrumCurve& a, const SpectrumCurve& b) {
  const std::vector<double> xs(b.energies.data(), b.energies.data() + b.energies.size());
  const std::vector<double> ys(b.density.data(), b.density.data() + b.density.size());
  RealVector diff(a.energies.size());
  for (int i = 0; i < a.energies.size(); ++i) {
    diff[i] = std::abs(a.density[i] - interpolate(xs, ys, a.energies[i]));
  }
  return trapezoid(a.energies, diff);
}

ExtentDuration extent_duration(const SpectralAccumulator& acc, double h, double t_max,
                               double threshold) {
  ExtentDuration out;
  const RealVector& tail = acc.max_tail();
  out.extent_resolved = false;
  out.extent = (tail.size() - 1) * h;
  for (int m = 0; m < tail.size(); ++m) {
    if (tail[m] < threshold) {
      out.extent = m * h;
      out.extent_resolved = true;
      break;
    }
  }
  out.duration_reached = false;
  out.duration = t_max;
  for (const NormSample& s : acc.samples()) {
    if (s.norm2_psi < threshold) {
      out.duration = s.t;
      out.duration_reached = true;
      break;
    }
  }
  return out;
}

Totals totals(const SpectrumResult& result) {
  return {trapezoid(result.energies, result.dP2_dE), trapezoid(result.energies, result.dP1_dE)};
}

std::vector<double> find_peaks(const SpectrumCurve& curve, double relative_floor) {
  std::vector<double> peaks;
  const RealVector& e = curve.energies;
  const RealVector& f = curve.density;
  if (f.size() < 3) return peaks;
  const double floor = relative_floor * f.maxCoeff();
  for (int i = 1; i + 1 < f.size(); ++i) {
    if (!(f[i] > f[i - 1] && f[i] >= f[i + 1] && f[i] > floor)) continue;
    // vertex of the parabola through the three samples
    const double x0 = e[i - 1], x1 = e[i], x2 = e[i + 1];
    const double y0 = f[i - 1], y1 = f[i], y2 = f[i + 1];
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curvature = (d1 - d0) / (x2 - x0);
    double vertex = x1;
    if (curvature < 0.0) {
      vertex = 0.5 * (x0 + x1) - d0 / (2.0 * curvature);
      vertex = std::clamp(vertex, x0, x2);
    }
    peaks.push_back(vertex);
  }
  return peaks;
}

}  // namespace capspec
