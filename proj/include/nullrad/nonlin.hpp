#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nullrad {

/// Defocusing nonlinearity f(u) = u f0(u^2) on real fields.
///
/// The quintic member f(u) = c u^5 (f0(s) = c s^2) is the reference case; a
/// custom f0 must come with its derivative f0'. c = 0 gives the linear wave
/// equation and is used throughout as an oracle limit.
class Nonlinearity {
public:
  enum class Kind { quintic, custom };
  using ScalarMap = std::function<double(double)>;

  static Nonlinearity quintic(double c = 1.0);
  static Nonlinearity linear() { return quintic(0.0); }
  static Nonlinearity custom(std::string name, ScalarMap f0, ScalarMap f0_prime);

  Kind kind() const noexcept { return kind_; }
  double coupling() const noexcept { return c_; }
  const std::string &name() const noexcept { return name_; }

  /// True when f vanishes identically (quintic with c = 0).
  bool is_linear() const noexcept { return kind_ == Kind::quintic && c_ == 0.0; }

  double f0(double s) const;
  double f0_prime(double s) const;

  double f(double u) const;
  double fprime(double u) const;
  /// Antiderivative of f with P(0) = 0.
  double P(double u) const;

  /// x^-5 f(x v); the x -> 0 limit is taken for custom maps.
  double f_tilde(double x, double v) const;
  /// x^-6 P(x v), so that d/dv P_tilde = f_tilde.
  double P_tilde(double x, double v) const;

  /// r f(w / r), the source of the equation for w = r u; 0 at r = 0.
  double radial_source(double r, double w) const;
  /// d/dw of radial_source, i.e. f'(w / r).
  double radial_source_dw(double r, double w) const;

private:
  Nonlinearity() = default;

  Kind kind_ = Kind::quintic;
  double c_ = 1.0;
  std::string name_ = "quintic";
  ScalarMap f0_;
  ScalarMap f0p_;
};

struct AssumptionCheck {
  bool pass = true;
  double witness = 0.0; // offending sample, meaningful when !pass
  std::string note;
};

/// Numerical check of the admissibility hypotheses on a sample set.
struct AssumptionReport {
  AssumptionCheck nonneg_f0;     // f0(s) >= 0
  AssumptionCheck quintic_bound; // c1 |u|^5 <= |f(u)| <= c2 |u|^5
  AssumptionCheck convex_potential;
  double c1 = 0.0;
  double c2 = 0.0;
  // Range of u f'(u) / f(u) over samples with f(u) != 0; reported only.
  double derivative_ratio_min = 0.0;
  double derivative_ratio_max = 0.0;
  bool linear_mode = false;

  bool all_pass() const {
    return nonneg_f0.pass && quintic_bound.pass && convex_potential.pass;
  }
};

AssumptionReport validate_assumptions(const Nonlinearity &nl,
                                      std::span<const double> u_samples);

} // namespace nullrad
