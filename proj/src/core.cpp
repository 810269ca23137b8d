#include "nullrad/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nullrad {

const char *to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::invalid_grid: return "invalid_grid";
  case ErrorKind::grid_mismatch: return "grid_mismatch";
  case ErrorKind::configuration: return "configuration";
  case ErrorKind::domain_too_small: return "domain_too_small";
  case ErrorKind::blowup_detected: return "blowup_detected";
  case ErrorKind::resolution: return "resolution";
  case ErrorKind::stiffness: return "stiffness";
  case ErrorKind::out_of_range: return "out_of_range";
  case ErrorKind::out_of_chart: return "out_of_chart";
  case ErrorKind::non_invertible: return "non_invertible";
  case ErrorKind::divergence: return "divergence";
  case ErrorKind::io: return "io";
  }
  return "unknown";
}

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kZeroTol = 1e-12;

// Cubic Lagrange through nodes x0..x0+3 (unit spacing) at offset t from x0.
double lagrange4(const double y[4], double t) {
  const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
  return -y[0] * t1 * t2 * t3 / 6.0 + y[1] * t0 * t2 * t3 / 2.0 -
         y[2] * t0 * t1 * t3 / 2.0 + y[3] * t0 * t1 * t2 / 6.0;
}

bool same_dr(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

} // namespace

// ---------------------------------------------------------------------------
// RadialProfile

RadialProfile::RadialProfile(double dr, std::vector<double> values,
                             Parity parity)
    : dr_(dr), values_(std::move(values)), parity_(parity) {
  if (!(dr_ > 0.0) || !std::isfinite(dr_))
    throw Error(ErrorKind::invalid_grid, "radial grid needs dr > 0");
  if (values_.empty())
    throw Error(ErrorKind::invalid_grid, "radial profile has no samples");
  if (parity_ == Parity::odd && values_[0] != 0.0)
    throw Error(ErrorKind::invalid_grid, "odd profile must vanish at r = 0");
}

RadialProfile RadialProfile::sample(const std::function<double(double)> &g,
                                    double dr, double r_max, Parity parity) {
  if (!(dr > 0.0) || !(r_max >= 0.0))
    throw Error(ErrorKind::invalid_grid, "bad sampling grid");
  const auto n = static_cast<std::size_t>(std::llround(r_max / dr)) + 1;
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j)
    v[j] = g(static_cast<double>(j) * dr);
  if (parity == Parity::odd)
    v[0] = 0.0;
  return RadialProfile(dr, std::move(v), parity);
}

RadialProfile RadialProfile::zeros(double dr, std::size_t n, Parity parity) {
  return RadialProfile(dr, std::vector<double>(std::max<std::size_t>(n, 1), 0.0),
                       parity);
}

double RadialProfile::at(double r) const {
  double sign = 1.0;
  if (r < 0.0) {
    r = -r;
    if (parity_ == Parity::odd)
      sign = -1.0;
  }
  const double x = r / dr_;
  const auto n = static_cast<long long>(values_.size());
  if (x > static_cast<double>(n - 1) + 1e-9)
    return 0.0;
  auto val = [&](long long j) {
    if (j < 0)
      return parity_ == Parity::odd ? -values_[-j] : values_[-j];
    return j < n ? values_[j] : 0.0;
  };
  long long j0 = static_cast<long long>(std::floor(x)) - 1;
  j0 = std::min(j0, n - 3);
  const double y[4] = {val(j0), val(j0 + 1), val(j0 + 2), val(j0 + 3)};
  return sign * lagrange4(y, x - static_cast<double>(j0));
}

RadialProfile RadialProfile::padded(std::size_t n) const {
  if (n < values_.size())
    throw Error(ErrorKind::invalid_grid, "padding cannot shrink a profile");
  std::vector<double> v(values_);
  v.resize(n, 0.0);
  return RadialProfile(dr_, std::move(v), parity_);
}

RadialProfile RadialProfile::scaled(double a) const {
  std::vector<double> v(values_);
  for (double &x : v)
    x *= a;
  return RadialProfile(dr_, std::move(v), parity_);
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double x : values_)
    m = std::max(m, std::abs(x));
  return m;
}

double RadialProfile::support_radius(double rel_tol) const {
  const double thr = rel_tol * max_abs();
  for (std::size_t j = values_.size(); j-- > 0;)
    if (std::abs(values_[j]) > thr)
      return r(j);
  return 0.0;
}

// ---------------------------------------------------------------------------
// CauchyData

CauchyData::CauchyData(RadialProfile phi_, RadialProfile psi_,
                       double support_radius_)
    : phi(std::move(phi_)), psi(std::move(psi_)),
      support_radius(support_radius_) {
  if (!same_dr(phi.dr(), psi.dr()) || phi.size() != psi.size())
    throw Error(ErrorKind::grid_mismatch, "phi and psi grids differ");
  if (phi.parity() != Parity::even || psi.parity() != Parity::even)
    throw Error(ErrorKind::configuration, "Cauchy data must be even");
  if (!(support_radius >= 0.0))
    throw Error(ErrorKind::configuration, "support radius must be >= 0");
  const double scale = std::max(phi.max_abs(), psi.max_abs());
  const double thr = kZeroTol * scale;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (phi.r(j) < support_radius * (1.0 - 1e-12))
      continue;
    if (std::abs(phi[j]) > thr || std::abs(psi[j]) > thr)
      throw Error(ErrorKind::configuration,
                  "data does not vanish beyond the declared support radius");
  }
}

CauchyData CauchyData::zero(double dr, std::size_t n) {
  return CauchyData(RadialProfile::zeros(dr, n), RadialProfile::zeros(dr, n),
                    0.0);
}

CauchyData CauchyData::padded(std::size_t n) const {
  CauchyData d;
  d.phi = phi.padded(n);
  d.psi = psi.padded(n);
  d.support_radius = support_radius;
  return d;
}

CauchyData CauchyData::scaled(double a) const {
  CauchyData d;
  d.phi = phi.scaled(a);
  d.psi = psi.scaled(a);
  d.support_radius = support_radius;
  return d;
}

CauchyData CauchyData::time_reversed() const {
  CauchyData d;
  d.phi = phi;
  d.psi = psi.scaled(-1.0);
  d.support_radius = support_radius;
  return d;
}

double CauchyData::measured_support(double rel_tol) const {
  const double thr = rel_tol * std::max(phi.max_abs(), psi.max_abs());
  for (std::size_t j = size(); j-- > 0;)
    if (std::abs(phi[j]) > thr || std::abs(psi[j]) > thr)
      return phi.r(j);
  return 0.0;
}

// ---------------------------------------------------------------------------
// RadiationProfile

RadiationProfile::RadiationProfile(double s_min, double ds,
                                   std::vector<double> values)
    : s_min_(s_min), ds_(ds), values_(std::move(values)) {
  if (!(ds_ > 0.0) || !std::isfinite(ds_) || !std::isfinite(s_min_))
    throw Error(ErrorKind::invalid_grid, "radiation grid needs ds > 0");
  if (values_.empty())
    throw Error(ErrorKind::invalid_grid, "radiation profile has no samples");
}

RadiationProfile RadiationProfile::sample(const std::function<double(double)> &F,
                                          double s_min, double ds,
                                          std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = F(s_min + static_cast<double>(k) * ds);
  return RadiationProfile(s_min, ds, std::move(v));
}

double RadiationProfile::at(double s) const {
  const double x = (s - s_min_) / ds_;
  const auto n = static_cast<long long>(values_.size());
  if (x < -1e-9 || x > static_cast<double>(n - 1) + 1e-9)
    return 0.0;
  if (n < 4) {
    const long long j = std::clamp<long long>(std::llround(x), 0, n - 1);
    return values_[j];
  }
  long long j0 = static_cast<long long>(std::floor(x)) - 1;
  j0 = std::clamp<long long>(j0, 0, n - 4);
  const double y[4] = {values_[j0], values_[j0 + 1], values_[j0 + 2],
                       values_[j0 + 3]};
  return lagrange4(y, x - static_cast<double>(j0));
}

long long RadiationProfile::zero_index() const {
  const double x = -s_min_ / ds_;
  const long long k = std::llround(x);
  if (std::abs(x - static_cast<double>(k)) > 1e-6)
    throw Error(ErrorKind::invalid_grid, "s = 0 is not a grid node");
  return k;
}

RadiationProfile RadiationProfile::resampled_on_lattice(long long k_lo,
                                                        long long k_hi) const {
  if (k_hi < k_lo)
    throw Error(ErrorKind::invalid_grid, "empty lattice window");
  const long long k0 = zero_index();
  const auto n = static_cast<long long>(values_.size());
  std::vector<double> v(static_cast<std::size_t>(k_hi - k_lo + 1), 0.0);
  for (long long k = k_lo; k <= k_hi; ++k) {
    const long long i = k + k0;
    if (i >= 0 && i < n)
      v[static_cast<std::size_t>(k - k_lo)] = values_[i];
  }
  return RadiationProfile(static_cast<double>(k_lo) * ds_, ds_, std::move(v));
}

double RadiationProfile::max_abs() const {
  double m = 0.0;
  for (double x : values_)
    m = std::max(m, std::abs(x));
  return m;
}

double RadiationProfile::support_min(double rel_tol) const {
  const double thr = rel_tol * max_abs();
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (std::abs(values_[k]) > thr)
      return s(k);
  return std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// quadrature, norms, energies

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3)
    throw Error(ErrorKind::invalid_grid, "Simpson rule needs >= 3 samples");
  std::size_t m = n - 1; // intervals
  double acc = 0.0;
  std::size_t simpson_end = m;
  if (m % 2 == 1) {
    simpson_end = m - 3;
    acc += 3.0 * h / 8.0 *
           (f[m - 3] + 3.0 * f[m - 2] + 3.0 * f[m - 1] + f[m]);
  }
  if (simpson_end > 0) {
    double s = f[0] + f[simpson_end];
    for (std::size_t j = 1; j < simpson_end; ++j)
      s += (j % 2 == 1 ? 4.0 : 2.0) * f[j];
    acc += s * h / 3.0;
  }
  return acc;
}

std::vector<double> radial_derivative(const RadialProfile &g) {
  const std::size_t n = g.size();
  const double h = g.dr();
  std::vector<double> d(n, 0.0);
  if (n < 3)
    throw Error(ErrorKind::invalid_grid, "derivative needs >= 3 samples");
  d[0] = g.parity() == Parity::even ? 0.0 : g[1] / h;
  for (std::size_t j = 1; j + 1 < n; ++j)
    d[j] = (g[j + 1] - g[j - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h);
  return d;
}

double l2_norm_r3(const RadialProfile &g) {
  std::vector<double> f(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double r = g.r(j);
    f[j] = g[j] * g[j] * r * r;
  }
  return std::sqrt(kFourPi * simpson(f, g.dr()));
}

double l2_norm_cylinder(const RadiationProfile &F) {
  std::vector<double> f(F.size());
  for (std::size_t k = 0; k < F.size(); ++k)
    f[k] = F[k] * F[k];
  return std::sqrt(kFourPi * simpson(f, F.ds()));
}

namespace {

void check_grid(const CauchyData &d) {
  if (!same_dr(d.phi.dr(), d.psi.dr()) || d.phi.size() != d.psi.size())
    throw Error(ErrorKind::grid_mismatch, "phi and psi grids differ");
}

// int (phi'^2 + psi^2) r^2 dr, split into the two pieces.
std::pair<double, double> quadratic_parts(const CauchyData &d) {
  check_grid(d);
  const auto dphi = radial_derivative(d.phi);
  std::vector<double> kin(d.size()), grad(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    const double r = d.phi.r(j);
    kin[j] = d.psi[j] * d.psi[j] * r * r;
    grad[j] = dphi[j] * dphi[j] * r * r;
  }
  return {simpson(kin, d.dr()), simpson(grad, d.dr())};
}

} // namespace

EnergyReport energy(const CauchyData &data, const Nonlinearity &nl) {
  const auto [kin, grad] = quadratic_parts(data);
  std::vector<double> pot(data.size());
  for (std::size_t j = 0; j < data.size(); ++j) {
    const double r = data.phi.r(j);
    pot[j] = nl.P(data.phi[j]) * r * r;
  }
  EnergyReport rep;
  rep.kinetic = 0.5 * kFourPi * kin;
  rep.gradient = 0.5 * kFourPi * grad;
  rep.potential = kFourPi * simpson(pot, data.dr());
  rep.total = rep.kinetic + rep.gradient + rep.potential;
  return rep;
}

double linear_energy_norm(const CauchyData &data) {
  const auto [kin, grad] = quadratic_parts(data);
  return std::sqrt(kFourPi * (kin + grad));
}

double linear_energy_distance(const CauchyData &a, const CauchyData &b) {
  check_grid(a);
  check_grid(b);
  if (!same_dr(a.dr(), b.dr()))
    throw Error(ErrorKind::grid_mismatch, "data on different grids");
  const std::size_t n = std::max(a.size(), b.size());
  const CauchyData pa = a.padded(n), pb = b.padded(n);
  std::vector<double> phi(n), psi(n);
  for (std::size_t j = 0; j < n; ++j) {
    phi[j] = pa.phi[j] - pb.phi[j];
    psi[j] = pa.psi[j] - pb.psi[j];
  }
  CauchyData diff;
  diff.phi = RadialProfile(a.dr(), std::move(phi));
  diff.psi = RadialProfile(a.dr(), std::move(psi));
  return linear_energy_norm(diff);
}

} // namespace nullrad
