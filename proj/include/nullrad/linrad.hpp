#pragma once

#include "nullrad/core.hpp"
#include "nullrad/field.hpp"

#include <span>
#include <vector>

namespace nullrad {

/// Source density h(t_n, r_j) on the (t, r) grid of a SolutionField.
struct PlanarSource {
  double h = 0.0;
  std::size_t N = 0;
  std::size_t J = 0;
  std::vector<double> values; // (N + 1) x (J + 1)

  double at(std::size_t n, std::size_t j) const {
    return values[n * (J + 1) + j];
  }
  double T() const noexcept { return static_cast<double>(N) * h; }
  double r_max() const noexcept { return static_cast<double>(J) * h; }

  /// h = f(u) along a computed solution.
  static PlanarSource from_solution(const SolutionField &sol,
                                    const Nonlinearity &nl);
};

/// F(s) = s psi(|s|) / 2 on s in [-r_max, r_max].
RadiationProfile linear_radiation_psi(const RadialProfile &psi);
/// F(s) = d/ds (s phi(|s|)) / 2 by centered differences.
RadiationProfile linear_radiation_phi(const RadialProfile &phi);
/// Forward linear radiation field of radial data.
RadiationProfile linear_radiation(const CauchyData &data);
/// Backward linear radiation field, -s psi(|s|)/2 - d/ds (s phi(|s|))/2.
RadiationProfile linear_radiation_minus(const CauchyData &data);

/// Window of F on the symmetric lattice [-K, K] ds, K covering F's grid.
RadiationProfile symmetric_window(const RadiationProfile &F);

/// Trapezoid value of the even-part integral, int F_e ds.
double even_part_mean(const RadiationProfile &F);

/// Removes the two parity-class sums of the even part of F by rescaling
/// within each class; supports are preserved. Returns F on a symmetric
/// lattice.
RadiationProfile project_zero_mean(const RadiationProfile &F);

struct InverseLinearOptions {
  /// Relative tolerance on the even-part mean, measured against int |F|.
  double mean_tol = 1e-5;
};

/// Exact inverse of linear_radiation on its range. F must have s = 0 as a
/// grid node.
CauchyData inverse_linear_radiation(const RadiationProfile &F,
                                    const InverseLinearOptions &opt = {});

/// w = r u for the linear equation (d_t^2 - Laplacian) u = source by
/// d'Alembert's formula (Simpson on characteristics) plus the discrete
/// Duhamel sum of the source. Same stencils as solve_tr.
SolutionField linear_evolve(const CauchyData &data, const PlanarSource *source,
                            double T);

/// 2 pi int_p int_{r >= |p|} r h(s + p, r) dr dp over 0 <= s + p <= T.
double duhamel_plane_integral(const PlanarSource &source, double s);

/// max over lambda of |F^(lambda) + (i lambda / 4 pi) psi^(lambda)|.
double fourier_diagnostic(const RadiationProfile &F, const RadialProfile &psi,
                          std::span<const double> lambdas);

} // namespace nullrad
