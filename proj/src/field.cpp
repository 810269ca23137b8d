#include "nullrad/field.hpp"

#include <cmath>
#include <string>

namespace nullrad {

namespace detail {

void leapfrog_fill(double *rows, std::size_t n_rows, std::size_t J, double h,
                   const Nonlinearity *nl, const double *q,
                   double blowup_limit) {
  const std::size_t C = J + 1;
  const double h2 = h * h;
  const bool nonlinear = nl != nullptr && !nl->is_linear();
  for (std::size_t n = 2; n < n_rows; ++n) {
    const double *prev = rows + (n - 2) * C;
    const double *cur = rows + (n - 1) * C;
    const double *src = q ? q + (n - 1) * C : nullptr;
    double *next = rows + n * C;
    next[0] = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
      const double right = j < J ? cur[j + 1] : 0.0;
      double rhs = 0.0;
      if (nonlinear)
        rhs = nl->radial_source(static_cast<double>(j) * h, cur[j]);
      if (src)
        rhs -= src[j];
      next[j] = right + cur[j - 1] - prev[j] - h2 * rhs;
    }
    for (std::size_t j = 1; j <= J; ++j) {
      if (!(std::abs(next[j]) <= blowup_limit))
        throw Error(ErrorKind::blowup_detected,
                    "blowup detected at step " + std::to_string(n) +
                        ", r index " + std::to_string(j));
    }
  }
}

std::vector<double> time_derivative(const std::vector<double> &buf,
                                    std::size_t N, std::size_t J, double h) {
  const std::size_t C = J + 1;
  std::vector<double> wt((N + 1) * C);
  for (std::size_t n = 0; n <= N; ++n) {
    const double *m2 = buf.data() + n * C;
    const double *m1 = m2 + C;
    const double *p1 = m1 + 2 * C;
    const double *p2 = p1 + C;
    double *out = wt.data() + n * C;
    for (std::size_t j = 0; j < C; ++j)
      out[j] = (8.0 * (p1[j] - m1[j]) - (p2[j] - m2[j])) / (12.0 * h);
  }
  return wt;
}

double origin_value(const double *row, double h) {
  const double u1 = row[1] / h;
  const double u2 = row[2] / (2.0 * h);
  return (4.0 * u1 - u2) / 3.0;
}

} // namespace detail

CauchyData SolutionField::slice(std::size_t n) const {
  if (n > N)
    throw Error(ErrorKind::out_of_range, "slice index beyond final time");
  if (J < 2)
    throw Error(ErrorKind::invalid_grid, "field has too few radial points");
  std::vector<double> u(J + 1), ut(J + 1);
  const double *wr = w_row(n);
  const double *wtr = wt_row(n);
  for (std::size_t j = 1; j <= J; ++j) {
    const double r = static_cast<double>(j) * h;
    u[j] = wr[j] / r;
    ut[j] = wtr[j] / r;
  }
  u[0] = detail::origin_value(wr, h);
  ut[0] = detail::origin_value(wtr, h);
  CauchyData d;
  d.phi = RadialProfile(h, std::move(u));
  d.psi = RadialProfile(h, std::move(ut));
  d.support_radius = d.measured_support(0.0) + h;
  return d;
}

} // namespace nullrad
