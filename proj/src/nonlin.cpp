#include "nullrad/nonlin.hpp"

#include "nullrad/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace nullrad {

namespace {

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
    0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};

// Small-argument probe used for the x -> 0 limit of custom rescalings.
constexpr double kLimitProbe = 1e-6;

} // namespace

Nonlinearity Nonlinearity::quintic(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    throw Error(ErrorKind::configuration,
                "quintic coupling must be finite and non-negative");
  Nonlinearity nl;
  nl.kind_ = Kind::quintic;
  nl.c_ = c;
  nl.name_ = "quintic";
  return nl;
}

Nonlinearity Nonlinearity::custom(std::string name, ScalarMap f0,
                                  ScalarMap f0_prime) {
  if (!f0 || !f0_prime)
    throw Error(ErrorKind::configuration,
                "custom nonlinearity needs both f0 and its derivative");
  Nonlinearity nl;
  nl.kind_ = Kind::custom;
  nl.c_ = std::numeric_limits<double>::quiet_NaN();
  nl.name_ = std::move(name);
  nl.f0_ = std::move(f0);
  nl.f0p_ = std::move(f0_prime);
  return nl;
}

double Nonlinearity::f0(double s) const {
  return kind_ == Kind::quintic ? c_ * s * s : f0_(s);
}

double Nonlinearity::f0_prime(double s) const {
  return kind_ == Kind::quintic ? 2.0 * c_ * s : f0p_(s);
}

double Nonlinearity::f(double u) const {
  if (kind_ == Kind::quintic) {
    const double u2 = u * u;
    return c_ * u2 * u2 * u;
  }
  return u * f0_(u * u);
}

double Nonlinearity::fprime(double u) const {
  if (kind_ == Kind::quintic) {
    const double u2 = u * u;
    return 5.0 * c_ * u2 * u2;
  }
  const double s = u * u;
  return f0_(s) + 2.0 * s * f0p_(s);
}

double Nonlinearity::P(double u) const {
  if (kind_ == Kind::quintic) {
    const double u2 = u * u;
    return c_ * u2 * u2 * u2 / 6.0;
  }
  if (u == 0.0)
    return 0.0;
  // Two-panel Gauss-Legendre on [0, u]; f is smooth by assumption.
  double acc = 0.0;
  const double half = 0.5 * u;
  for (int panel = 0; panel < 2; ++panel) {
    const double a = panel * half;
    const double mid = a + 0.5 * half;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      const double dx = 0.5 * half * kGlNodes[k];
      acc += kGlWeights[k] * (f(mid - dx) + f(mid + dx));
    }
  }
  return acc * 0.5 * half;
}

double Nonlinearity::f_tilde(double x, double v) const {
  if (kind_ == Kind::quintic) {
    const double v2 = v * v;
    return c_ * v2 * v2 * v;
  }
  // x^-5 f(x v) = v x^-4 f0(x^2 v^2)
  const double xe = std::max(std::abs(x), kLimitProbe);
  const double x2 = xe * xe;
  return v * f0_(x2 * v * v) / (x2 * x2);
}

double Nonlinearity::P_tilde(double x, double v) const {
  if (kind_ == Kind::quintic) {
    const double v2 = v * v;
    return c_ * v2 * v2 * v2 / 6.0;
  }
  const double xe = std::max(std::abs(x), kLimitProbe);
  const double x3 = xe * xe * xe;
  return P(xe * v) / (x3 * x3);
}

double Nonlinearity::radial_source(double r, double w) const {
  if (r == 0.0)
    return 0.0;
  if (kind_ == Kind::quintic) {
    const double w2 = w * w;
    const double r2 = r * r;
    return c_ * w2 * w2 * w / (r2 * r2);
  }
  return r * f(w / r);
}

double Nonlinearity::radial_source_dw(double r, double w) const {
  if (r == 0.0)
    return 0.0;
  return fprime(w / r);
}

AssumptionReport validate_assumptions(const Nonlinearity &nl,
                                      std::span<const double> u_samples) {
  if (u_samples.empty())
    throw Error(ErrorKind::configuration, "assumption check needs samples");

  AssumptionReport rep;
  rep.linear_mode = nl.is_linear();

  double c1 = std::numeric_limits<double>::infinity();
  double c2 = 0.0;
  double ratio_min = std::numeric_limits<double>::infinity();
  double ratio_max = -std::numeric_limits<double>::infinity();
  bool any_ratio = false;
  double c1_witness = 0.0;

  for (double u : u_samples) {
    const double s = u * u;
    if (rep.nonneg_f0.pass && nl.f0(s) < 0.0) {
      rep.nonneg_f0.pass = false;
      rep.nonneg_f0.witness = u;
      rep.nonneg_f0.note = "f0(u^2) < 0";
    }
    if (u != 0.0) {
      const double fu = nl.f(u);
      const double ratio = std::abs(fu) / std::pow(std::abs(u), 5);
      if (ratio < c1) {
        c1 = ratio;
        c1_witness = u;
      }
      c2 = std::max(c2, ratio);
      if (fu != 0.0) {
        const double q = u * nl.fprime(u) / fu;
        ratio_min = std::min(ratio_min, q);
        ratio_max = std::max(ratio_max, q);
        any_ratio = true;
      }
    }
    // P'' = f' >= 0 via second differences of P.
    const double h = 1e-3 * std::max(1.0, std::abs(u));
    const double d2 = (nl.P(u + h) - 2.0 * nl.P(u) + nl.P(u - h)) / (h * h);
    const double scale = std::abs(nl.fprime(u)) + 1e-12;
    if (rep.convex_potential.pass && d2 < -1e-6 * scale) {
      rep.convex_potential.pass = false;
      rep.convex_potential.witness = u;
      rep.convex_potential.note = "second difference of P is negative";
    }
  }

  if (!std::isfinite(c1)) {
    // Only u = 0 sampled; nothing to bound.
    c1 = 0.0;
  }
  rep.c1 = c1;
  rep.c2 = c2;
  if (!(c1 > 0.0) || !std::isfinite(c2)) {
    rep.quintic_bound.pass = false;
    rep.quintic_bound.witness = c1_witness;
    rep.quintic_bound.note = rep.linear_mode ? "linear mode (c1 = 0)"
                                             : "no positive lower constant";
  }
  if (any_ratio) {
    rep.derivative_ratio_min = ratio_min;
    rep.derivative_ratio_max = ratio_max;
  }
  return rep;
}

} // namespace nullrad
