#pragma once

#include "nullrad/core.hpp"

#include <cmath>
#include <numbers>

namespace testing {

inline constexpr double pi = std::numbers::pi;

inline double bump(double r, int k) {
  return std::abs(r) < 1.0 ? std::pow(1.0 - r * r, k) : 0.0;
}

/// (0, a (1 - r^2)^3) on [0, 1 + 2 dr].
inline nullrad::CauchyData psi_bump(double dr, double a = 1.0, int k = 3) {
  using namespace nullrad;
  const RadialProfile psi = RadialProfile::sample(
      [=](double r) { return a * bump(r, k); }, dr, 1.0 + 2.0 * dr);
  return CauchyData(RadialProfile::zeros(dr, psi.size()), psi, 1.0);
}

/// (a (1 - r^2)^k, 0) on [0, 1 + 2 dr].
inline nullrad::CauchyData phi_bump(double dr, double a = 1.0, int k = 4) {
  using namespace nullrad;
  const RadialProfile phi = RadialProfile::sample(
      [=](double r) { return a * bump(r, k); }, dr, 1.0 + 2.0 * dr);
  return CauchyData(phi, RadialProfile::zeros(dr, phi.size()), 1.0);
}

/// int_0^1 r^2 (1 - r^2)^m dr = B(3/2, m + 1) / 2.
inline double beta_moment(int m) {
  return 0.5 * std::tgamma(1.5) * std::tgamma(m + 1.0) / std::tgamma(m + 2.5);
}

inline double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace testing
