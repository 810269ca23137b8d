#include "nullrad/radfield.hpp"

#include "nullrad/linrad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace nullrad {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

struct Window {
  long long k_lo, k_hi;
};

Window extraction_window(const SolutionField &sol, const ExtractionOptions &opt) {
  const double h = sol.h;
  const double R = sol.data.support_radius;
  const double buffer = opt.buffer > 0.0 ? opt.buffer : std::max(3.0 * R, 3.0);
  const long long k_lo = -static_cast<long long>(std::ceil(R / h - 1e-9)) - 4;
  const long long k_hi = static_cast<long long>(sol.N) -
                         static_cast<long long>(std::ceil(buffer / h - 1e-9));
  if (k_hi <= k_lo + 4)
    throw Error(ErrorKind::configuration,
                "final time too short for the extraction buffer");
  return {k_lo, k_hi};
}

// Solves the 3x3 system for y = c0 + c1 x^3 + c2 x^4 and returns c0.
double fit_tail(const std::array<double, 3> &x, const std::array<double, 3> &y) {
  double A[3][4];
  for (int i = 0; i < 3; ++i) {
    const double x3 = x[i] * x[i] * x[i];
    A[i][0] = 1.0;
    A[i][1] = x3;
    A[i][2] = x3 * x[i];
    A[i][3] = y[i];
  }
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int i = c + 1; i < 3; ++i)
      if (std::abs(A[i][c]) > std::abs(A[p][c]))
        p = i;
    for (int k = 0; k < 4; ++k)
      std::swap(A[c][k], A[p][k]);
    for (int i = 0; i < 3; ++i) {
      if (i == c)
        continue;
      const double m = A[i][c] / A[c][c];
      for (int k = c; k < 4; ++k)
        A[i][k] -= m * A[c][k];
    }
  }
  return A[0][3] / A[0][0];
}

double wt_or_zero(const SolutionField &sol, long long n, long long j) {
  if (n < 0 || j < 0 || n > static_cast<long long>(sol.N) ||
      j > static_cast<long long>(sol.J))
    return 0.0;
  return sol.wt_at(static_cast<std::size_t>(n), static_cast<std::size_t>(j));
}

} // namespace

ExtractedRadiation forward_radiation_tr(const SolutionField &sol,
                                        const ExtractionOptions &opt) {
  const Window win = extraction_window(sol, opt);
  const auto n_out = static_cast<std::size_t>(win.k_hi - win.k_lo + 1);
  std::vector<double> F(n_out), raw(n_out), cross(n_out);
  const long long N = static_cast<long long>(sol.N);
  for (long long k = win.k_lo; k <= win.k_hi; ++k) {
    const long long m = N - k;
    std::array<long long, 3> js = {m, m / 2, m / 3};
    for (auto &j : js)
      j = std::max(j, std::max(-k, 1LL));
    std::array<double, 3> x{}, y{};
    for (int i = 0; i < 3; ++i) {
      x[i] = static_cast<double>(m) / static_cast<double>(js[i]);
      y[i] = -wt_or_zero(sol, js[i] + k, js[i]);
    }
    const std::size_t idx = static_cast<std::size_t>(k - win.k_lo);
    raw[idx] = y[0];
    if (js[0] == js[1] || js[1] == js[2]) {
      F[idx] = y[0];
      cross[idx] = 0.0;
      continue;
    }
    F[idx] = fit_tail(x, y);
    const double x3a = x[0] * x[0] * x[0], x3b = x[1] * x[1] * x[1];
    const double two_term = (y[0] * x3b - y[1] * x3a) / (x3b - x3a);
    cross[idx] = std::abs(F[idx] - two_term);
  }
  ExtractedRadiation out;
  double scale = 0.0;
  for (double v : raw)
    scale = std::max(scale, std::abs(v));
  const double floor = 1e-6 * scale;
  out.not_converged.assign(n_out, 0);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double corr = std::abs(F[i] - raw[i]);
    out.max_correction = std::max(out.max_correction, corr);
    out.max_crosscheck = std::max(out.max_crosscheck, cross[i]);
    if (corr > opt.flag_fraction * std::abs(F[i]) + floor) {
      out.not_converged[i] = 1;
      ++out.flagged;
    }
  }
  out.F = RadiationProfile(static_cast<double>(win.k_lo) * sol.h, sol.h,
                           std::move(F));
  return out;
}

namespace {

double trace_node(const CharGrid &g, std::size_t i) {
  const double h = g.dmu;
  const std::size_t M = g.M;
  const double mu = g.mu(i);
  const bool in_zero = g.R > 0.0 && mu <= 1.0 / g.R;
  double d;
  if (in_zero || i == M) {
    if (i < 2)
      return 0.0;
    d = (3.0 * g.at(i, 0) - 4.0 * g.at(i - 1, 0) + g.at(i - 2, 0)) / (2.0 * h);
  } else if (i == 0) {
    d = (-3.0 * g.at(0, 0) + 4.0 * g.at(1, 0) - g.at(2, 0)) / (2.0 * h);
  } else {
    d = (g.at(i + 1, 0) - g.at(i - 1, 0)) / (2.0 * h);
  }
  return -mu * mu * d;
}

} // namespace

double goursat_trace_at(const CharGrid &g, double s) {
  if (s >= 0.0)
    throw Error(ErrorKind::out_of_chart,
                "the compactified chart covers s < 0 only");
  const double mu = -1.0 / s;
  if (mu > g.T_c * (1.0 + 1e-12))
    throw Error(ErrorKind::out_of_range,
                "s lies between -1/T_c and 0; increase T_c");
  const double x = mu / g.dmu;
  const long long M = static_cast<long long>(g.M);
  long long i0 = static_cast<long long>(std::floor(x)) - 1;
  if (g.R > 0.0 && mu <= 1.0 / g.R) {
    // keep the stencil inside the zero region
    const long long iR = static_cast<long long>(std::floor(1.0 / (g.R * g.dmu) + 1e-12));
    i0 = std::min(i0, iR - 3);
    if (i0 < 0)
      return 0.0;
  }
  i0 = std::clamp<long long>(i0, 0, M - 3);
  double y[4];
  for (int k = 0; k < 4; ++k)
    y[k] = trace_node(g, static_cast<std::size_t>(i0 + k));
  const double t = x - static_cast<double>(i0);
  return -y[0] * (t - 1) * (t - 2) * (t - 3) / 6.0 +
         y[1] * t * (t - 2) * (t - 3) / 2.0 - y[2] * t * (t - 1) * (t - 3) / 2.0 +
         y[3] * t * (t - 1) * (t - 2) / 6.0;
}

RadiationProfile forward_radiation_goursat(const CharGrid &g, double ds) {
  if (!(ds > 0.0))
    throw Error(ErrorKind::configuration, "ds must be positive");
  const double R = g.R > 0.0 ? g.R : 1.0 / g.T_c;
  const long long k_lo = -static_cast<long long>(std::ceil(R / ds - 1e-9)) - 2;
  const long long k_hi =
      static_cast<long long>(std::floor(-1.0 / (g.T_c * ds) + 1e-9));
  if (k_hi < k_lo)
    throw Error(ErrorKind::out_of_range, "empty Goursat trace window");
  std::vector<double> F(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (long long k = k_lo; k <= k_hi; ++k)
    F[static_cast<std::size_t>(k - k_lo)] =
        goursat_trace_at(g, static_cast<double>(k) * ds);
  return RadiationProfile(static_cast<double>(k_lo) * ds, ds, std::move(F));
}

DuhamelRadiation forward_radiation_duhamel(const CauchyData &data,
                                           const SolutionField &sol,
                                           const Nonlinearity &nl,
                                           const ExtractionOptions &opt,
                                           double tail_tol) {
  if (std::abs(data.dr() - sol.h) > 1e-12 * sol.h)
    throw Error(ErrorKind::grid_mismatch, "data and solution grids differ");
  const Window win = extraction_window(sol, opt);
  const RadiationProfile lin =
      linear_radiation(data).resampled_on_lattice(win.k_lo, win.k_hi);
  const double h = sol.h;
  const long long N = static_cast<long long>(sol.N);
  const long long J = static_cast<long long>(sol.J);
  auto q_odd = [&](long long n, long long x) {
    const long long a = x < 0 ? -x : x;
    if (a == 0 || a > J)
      return 0.0;
    const double q = nl.radial_source(static_cast<double>(a) * h,
                                      sol.w_at(static_cast<std::size_t>(n),
                                               static_cast<std::size_t>(a)));
    return x < 0 ? -q : q;
  };
  DuhamelRadiation out;
  std::vector<double> F(lin.values().begin(), lin.values().end());
  double scale = 0.0;
  if (!nl.is_linear()) {
    std::vector<double> integrand(sol.N + 1);
    for (long long k = win.k_lo; k <= win.k_hi; ++k) {
      for (long long n = 0; n <= N; ++n)
        integrand[static_cast<std::size_t>(n)] = q_odd(n, n - k);
      const double I = sol.N >= 2 ? simpson(integrand, h) : 0.0;
      const double r_T = static_cast<double>(N - k) * h;
      const double tail = 0.5 * q_odd(N, N - k) * r_T / 3.0;
      const std::size_t idx = static_cast<std::size_t>(k - win.k_lo);
      F[idx] += 0.5 * I + tail;
      out.tail_bound = std::max(out.tail_bound, std::abs(tail));
    }
  }
  for (double v : F)
    scale = std::max(scale, std::abs(v));
  out.truncation_warning = out.tail_bound > tail_tol * scale;
  out.F = RadiationProfile(lin.s_min(), h, std::move(F));
  return out;
}

RadiationProfile reflect(const RadiationProfile &G) {
  const std::size_t n = G.size();
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k)
    v[k] = -G[n - 1 - k];
  return RadiationProfile(-G.s_max(), G.ds(), std::move(v));
}

ExtractedRadiation forward_radiation(const CauchyData &data,
                                     const Nonlinearity &nl, double T,
                                     const ExtractionOptions &opt) {
  const SolutionField sol = solve_tr(prepare_domain(data, T), nl, T);
  return forward_radiation_tr(sol, opt);
}

ExtractedRadiation backward_radiation(const CauchyData &data,
                                      const Nonlinearity &nl, double T,
                                      const ExtractionOptions &opt) {
  ExtractedRadiation e = forward_radiation(data.time_reversed(), nl, T, opt);
  e.F = reflect(e.F);
  std::reverse(e.not_converged.begin(), e.not_converged.end());
  return e;
}

RadiationProfile restrict_window(const RadiationProfile &F, double s_lo,
                                 double s_hi) {
  const long long lo = static_cast<long long>(std::ceil(s_lo / F.ds() - 1e-9));
  const long long hi = static_cast<long long>(std::floor(s_hi / F.ds() + 1e-9));
  return F.resampled_on_lattice(lo, hi);
}

double l2_distance(const RadiationProfile &F, const RadiationProfile &G) {
  if (std::abs(F.ds() - G.ds()) > 1e-12 * F.ds())
    throw Error(ErrorKind::grid_mismatch, "profiles on different s-grids");
  const double lo = std::max(F.s_min(), G.s_min());
  const double hi = std::min(F.s_max(), G.s_max());
  if (hi < lo)
    throw Error(ErrorKind::out_of_range, "profiles do not overlap");
  const RadiationProfile a = restrict_window(F, lo, hi);
  const RadiationProfile b = restrict_window(G, lo, hi);
  std::vector<double> d(a.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    d[k] = (a[k] - b[k]) * (a[k] - b[k]);
  if (d.size() < 3) {
    double s = 0.0;
    for (double x : d)
      s += x;
    return std::sqrt(kFourPi * s * F.ds());
  }
  return std::sqrt(kFourPi * simpson(d, F.ds()));
}

} // namespace nullrad
