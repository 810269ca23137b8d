#pragma once

#include "nullrad/error.hpp"
#include "nullrad/nonlin.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nullrad {

/// Extension convention of a radial profile across r = 0.
enum class Parity { even, odd };

/// Samples g(r_j), r_j = j dr, of a radial function on [0, r_max].
class RadialProfile {
public:
  RadialProfile() = default;
  RadialProfile(double dr, std::vector<double> values,
                Parity parity = Parity::even);

  static RadialProfile sample(const std::function<double(double)> &g,
                              double dr, double r_max,
                              Parity parity = Parity::even);
  static RadialProfile zeros(double dr, std::size_t n,
                             Parity parity = Parity::even);

  double dr() const noexcept { return dr_; }
  std::size_t size() const noexcept { return values_.size(); }
  double r(std::size_t j) const noexcept { return static_cast<double>(j) * dr_; }
  double r_max() const noexcept { return r(values_.size() - 1); }
  Parity parity() const noexcept { return parity_; }

  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }

  /// Cubic Lagrange interpolation using the parity extension near r = 0.
  /// Zero beyond r_max.
  double at(double r) const;

  /// Zero-extended copy with n samples (n >= size()).
  RadialProfile padded(std::size_t n) const;
  RadialProfile scaled(double a) const;

  /// Largest r_j with |g(r_j)| > rel_tol * max|g|, or 0 for the zero profile.
  double support_radius(double rel_tol = 1e-12) const;
  double max_abs() const;

private:
  double dr_ = 1.0;
  std::vector<double> values_;
  Parity parity_ = Parity::even;
};

/// Initial displacement phi and velocity psi on a shared grid, vanishing for
/// r >= support_radius.
struct CauchyData {
  RadialProfile phi;
  RadialProfile psi;
  double support_radius = 0.0;

  CauchyData() = default;
  /// Validates grid agreement, even parity and the declared support.
  CauchyData(RadialProfile phi_, RadialProfile psi_, double support_radius_);

  static CauchyData zero(double dr, std::size_t n);

  double dr() const noexcept { return phi.dr(); }
  std::size_t size() const noexcept { return phi.size(); }
  double r_max() const noexcept { return phi.r_max(); }

  CauchyData padded(std::size_t n) const;
  CauchyData scaled(double a) const;
  /// (phi, -psi): data of t -> u(-t).
  CauchyData time_reversed() const;
  /// Empirical support radius of (phi, psi) at a relative tolerance.
  double measured_support(double rel_tol) const;
};

/// F(s_k), s_k = s_min + k ds, on a uniform retarded-time grid.
class RadiationProfile {
public:
  RadiationProfile() = default;
  RadiationProfile(double s_min, double ds, std::vector<double> values);

  static RadiationProfile sample(const std::function<double(double)> &F,
                                 double s_min, double ds, std::size_t n);

  double s_min() const noexcept { return s_min_; }
  double ds() const noexcept { return ds_; }
  std::size_t size() const noexcept { return values_.size(); }
  double s(std::size_t k) const noexcept {
    return s_min_ + static_cast<double>(k) * ds_;
  }
  double s_max() const noexcept { return s(values_.size() - 1); }

  std::span<const double> values() const noexcept { return values_; }
  std::vector<double> &mutable_values() noexcept { return values_; }
  double operator[](std::size_t k) const noexcept { return values_[k]; }

  /// Cubic interpolation; zero outside [s_min, s_max].
  double at(double s) const;

  /// Array index of the sample at s = 0, i.e. -s_min / ds. Throws when
  /// s = 0 is not a node.
  long long zero_index() const;
  /// Lattice index of the first sample, s_min / ds.
  long long first_index() const { return -zero_index(); }
  long long last_index() const {
    return first_index() + static_cast<long long>(values_.size()) - 1;
  }
  /// Values on the grid {k ds : k_lo <= k <= k_hi} (same ds, s = 0 a node),
  /// zero outside the stored range.
  RadiationProfile resampled_on_lattice(long long k_lo, long long k_hi) const;

  double max_abs() const;
  /// inf { s : |F(s)| > rel_tol max|F| }, +inf for the zero profile.
  double support_min(double rel_tol) const;

private:
  double s_min_ = 0.0;
  double ds_ = 1.0;
  std::vector<double> values_;
};

/// Energy decomposition of a slice. Norm diagnostics are filled by the
/// evolution diagnostics and are zero for plain Cauchy data.
struct EnergyReport {
  double kinetic = 0.0;
  double gradient = 0.0;
  double potential = 0.0;
  double total = 0.0;
  double l6_norm = 0.0;
  double l5l10_partial = 0.0;
  double decay_constant = 0.0;
};

/// Composite Simpson rule on a uniform grid. An odd number of intervals is
/// closed with the 3/8 rule on the last three. Needs at least 3 samples.
double simpson(std::span<const double> f, double h);

/// Radial derivative by second-order centered differences; the parity
/// extension is used at r = 0 and a one-sided stencil at r_max.
std::vector<double> radial_derivative(const RadialProfile &g);

/// sqrt(4 pi int g^2 r^2 dr).
double l2_norm_r3(const RadialProfile &g);
/// sqrt(4 pi int F^2 ds).
double l2_norm_cylinder(const RadiationProfile &F);

/// Nonlinear energy with the 1/2 convention:
/// 1/2 int (|grad phi|^2 + psi^2) + int P(phi).
EnergyReport energy(const CauchyData &data, const Nonlinearity &nl);

/// Unnormalized linear energy norm E, E^2 = int (|grad phi|^2 + psi^2).
double linear_energy_norm(const CauchyData &data);
/// E(a - b); the shorter grid is zero-extended.
double linear_energy_distance(const CauchyData &a, const CauchyData &b);

} // namespace nullrad
