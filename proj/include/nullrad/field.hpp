#pragma once

#include "nullrad/core.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace nullrad {

/// w(t_n, r_j) = r_j u(t_n, r_j) on the characteristic-aligned grid
/// t_n = n h, r_j = j h, 0 <= n <= N, 0 <= j <= J.
struct SolutionField {
  double h = 0.0;
  std::size_t N = 0;
  std::size_t J = 0;
  std::vector<double> w;  // (N + 1) x (J + 1), row-major in time
  std::vector<double> wt; // d/dt w on the same grid
  CauchyData data;
  std::string nl_name;
  double coupling = 0.0;

  double T() const noexcept { return static_cast<double>(N) * h; }
  double r_max() const noexcept { return static_cast<double>(J) * h; }
  std::size_t cols() const noexcept { return J + 1; }

  double w_at(std::size_t n, std::size_t j) const { return w[n * (J + 1) + j]; }
  double wt_at(std::size_t n, std::size_t j) const {
    return wt[n * (J + 1) + j];
  }
  const double *w_row(std::size_t n) const { return w.data() + n * (J + 1); }
  const double *wt_row(std::size_t n) const { return wt.data() + n * (J + 1); }

  /// (u, u_t) at t_n as Cauchy data; the r = 0 values come from even
  /// quadratic extrapolation of w / r.
  CauchyData slice(std::size_t n) const;
};

namespace detail {

/// Rows 0 and 1 of `rows` hold consecutive levels; rows 2 .. n_rows-1 are
/// filled by the Courant-one leapfrog
///   w[n+1]_j = w[n]_{j+1} + w[n]_{j-1} - w[n-1]_j - h^2 (N(r_j, w[n]_j) - q[n]_j)
/// with w_0 = w_{J+1} = 0, N(r, w) = r f(w / r) and q an optional additive
/// source aligned with `rows` (may be null). Throws blowup_detected when a
/// value exceeds `blowup_limit` or is not finite.
void leapfrog_fill(double *rows, std::size_t n_rows, std::size_t J, double h,
                   const Nonlinearity *nl, const double *q,
                   double blowup_limit);

/// Fourth-order centered time derivative of a buffer holding levels
/// -2 .. N+2 (row n of the output uses buffer rows n .. n+4).
std::vector<double> time_derivative(const std::vector<double> &buf,
                                    std::size_t N, std::size_t J, double h);

/// Even quadratic extrapolation of w_j / r_j to r = 0 on a row.
double origin_value(const double *row, double h);

} // namespace detail

} // namespace nullrad
