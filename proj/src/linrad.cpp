#include "nullrad/linrad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace nullrad {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Integral of a uniformly sampled segment: Simpson when possible.
double segment_integral(const double *f, std::size_t n, double h) {
  if (n < 2)
    return 0.0;
  if (n == 2)
    return 0.5 * h * (f[0] + f[1]);
  return simpson(std::span<const double>(f, n), h);
}

std::size_t steps_for(double T, double h) {
  if (!(T >= 0.0) || !std::isfinite(T))
    throw Error(ErrorKind::configuration, "final time must be >= 0");
  const double x = T / h;
  const auto N = static_cast<std::size_t>(std::llround(x));
  if (std::abs(x - static_cast<double>(N)) > 1e-9 * std::max(1.0, x))
    throw Error(ErrorKind::configuration,
                "final time must be a multiple of the grid spacing");
  return N;
}

} // namespace

PlanarSource PlanarSource::from_solution(const SolutionField &sol,
                                         const Nonlinearity &nl) {
  PlanarSource src;
  src.h = sol.h;
  src.N = sol.N;
  src.J = sol.J;
  src.values.assign((sol.N + 1) * (sol.J + 1), 0.0);
  if (nl.is_linear())
    return src;
  for (std::size_t n = 0; n <= sol.N; ++n) {
    const double *row = sol.w_row(n);
    double *out = src.values.data() + n * (sol.J + 1);
    out[0] = nl.f(detail::origin_value(row, sol.h));
    for (std::size_t j = 1; j <= sol.J; ++j)
      out[j] = nl.f(row[j] / (static_cast<double>(j) * sol.h));
  }
  return src;
}

RadiationProfile linear_radiation_psi(const RadialProfile &psi) {
  const std::size_t n = psi.size();
  const double h = psi.dr();
  std::vector<double> F(2 * n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double v = 0.5 * psi.r(j) * psi[j];
    F[n - 1 + j] = v;
    F[n - 1 - j] = -v;
  }
  F[n - 1] = 0.0;
  return RadiationProfile(-psi.r_max(), h, std::move(F));
}

RadiationProfile linear_radiation_phi(const RadialProfile &phi) {
  const std::size_t n = phi.size();
  const double h = phi.dr();
  // g(s) = s phi(|s|) on k = -(n-1) .. n-1, zero beyond.
  auto g = [&](long long k) {
    const long long a = k < 0 ? -k : k;
    if (a >= static_cast<long long>(n))
      return 0.0;
    const double v = phi.r(static_cast<std::size_t>(a)) * phi[a];
    return k < 0 ? -v : v;
  };
  std::vector<double> F(2 * n - 1);
  const long long K = static_cast<long long>(n) - 1;
  for (long long k = -K; k <= K; ++k)
    F[k + K] = (g(k + 1) - g(k - 1)) / (4.0 * h);
  return RadiationProfile(-phi.r_max(), h, std::move(F));
}

RadiationProfile linear_radiation(const CauchyData &data) {
  if (data.phi.size() != data.psi.size() ||
      std::abs(data.phi.dr() - data.psi.dr()) > 1e-12 * data.phi.dr())
    throw Error(ErrorKind::grid_mismatch, "phi and psi grids differ");
  RadiationProfile a = linear_radiation_psi(data.psi);
  const RadiationProfile b = linear_radiation_phi(data.phi);
  auto &v = a.mutable_values();
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] += b[k];
  return a;
}

RadiationProfile linear_radiation_minus(const CauchyData &data) {
  if (data.phi.size() != data.psi.size())
    throw Error(ErrorKind::grid_mismatch, "phi and psi grids differ");
  const std::size_t n = data.size();
  const double h = data.dr();
  const long long K = static_cast<long long>(n) - 1;
  auto g = [&](long long k) {
    const long long a = k < 0 ? -k : k;
    if (a > K)
      return 0.0;
    const double v = data.phi.r(static_cast<std::size_t>(a)) * data.phi[a];
    return k < 0 ? -v : v;
  };
  std::vector<double> F(2 * n - 1);
  for (long long k = -K; k <= K; ++k) {
    const long long a = k < 0 ? -k : k;
    const double s = static_cast<double>(k) * h;
    F[k + K] = -0.5 * s * data.psi[a] - (g(k + 1) - g(k - 1)) / (4.0 * h);
  }
  return RadiationProfile(-data.r_max(), h, std::move(F));
}

RadiationProfile symmetric_window(const RadiationProfile &F) {
  const long long k0 = F.zero_index();
  const long long lo = -k0;
  const long long hi = static_cast<long long>(F.size()) - 1 - k0;
  const long long K = std::max({-lo, hi, 2LL});
  return F.resampled_on_lattice(-K, K);
}

double even_part_mean(const RadiationProfile &F) {
  // The even part integrates to the plain integral of F.
  double acc = 0.0;
  for (double v : F.values())
    acc += v;
  return acc * F.ds();
}

namespace {

struct ParitySums {
  double even = 0.0, odd = 0.0;       // signed sums over s-index classes
  double even_abs = 0.0, odd_abs = 0.0;
};

ParitySums parity_sums(const RadiationProfile &S) {
  // S symmetric, index k - K is the lattice index.
  const long long K = static_cast<long long>(S.size() - 1) / 2;
  ParitySums p;
  for (long long i = 0; i < static_cast<long long>(S.size()); ++i) {
    const long long k = i - K;
    const double fe = 0.5 * (S[i] + S[2 * K - i]);
    if ((k % 2 + 2) % 2 == 0) {
      p.even += fe;
      p.even_abs += std::abs(fe);
    } else {
      p.odd += fe;
      p.odd_abs += std::abs(fe);
    }
  }
  return p;
}

} // namespace

RadiationProfile project_zero_mean(const RadiationProfile &F) {
  RadiationProfile S = symmetric_window(F);
  const ParitySums p = parity_sums(S);
  const double ce = p.even_abs > 0.0 ? p.even / p.even_abs : 0.0;
  const double co = p.odd_abs > 0.0 ? p.odd / p.odd_abs : 0.0;
  const long long K = static_cast<long long>(S.size() - 1) / 2;
  std::vector<double> v(S.values().begin(), S.values().end());
  for (long long i = 0; i < static_cast<long long>(v.size()); ++i) {
    const long long k = i - K;
    const double fe = 0.5 * (S[i] + S[2 * K - i]);
    const double c = (k % 2 + 2) % 2 == 0 ? ce : co;
    v[i] -= c * std::abs(fe);
  }
  return RadiationProfile(S.s_min(), S.ds(), std::move(v));
}

CauchyData inverse_linear_radiation(const RadiationProfile &F,
                                    const InverseLinearOptions &opt) {
  const RadiationProfile S0 = symmetric_window(F);
  const double h = S0.ds();
  const ParitySums p = parity_sums(S0);
  double scale = 0.0;
  for (double v : S0.values())
    scale += std::abs(v);
  scale *= h;
  const double resid = 2.0 * h * std::max(std::abs(p.even), std::abs(p.odd));
  if (scale > 0.0 && resid > opt.mean_tol * scale)
    throw Error(ErrorKind::non_invertible,
                "even part of F does not integrate to zero (residual mean " +
                    std::to_string(h * (p.even + p.odd)) + ")");
  const RadiationProfile S = project_zero_mean(S0);
  const long long K = static_cast<long long>(S.size() - 1) / 2;
  auto Fe = [&](long long k) { return 0.5 * (S[K + k] + S[K - k]); };
  auto Fo = [&](long long k) { return 0.5 * (S[K + k] - S[K - k]); };

  const std::size_t n = static_cast<std::size_t>(K) + 1;
  std::vector<double> g(n + 1, 0.0);
  g[1] = 2.0 * h * Fe(0);
  for (long long k = 1; k < K; ++k)
    g[k + 1] = g[k - 1] + 4.0 * h * Fe(k);

  std::vector<double> phi(n, 0.0), psi(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double r = static_cast<double>(j) * h;
    phi[j] = g[j] / r;
    psi[j] = 2.0 * Fo(static_cast<long long>(j)) / r;
  }
  if (n > 2) {
    phi[0] = (4.0 * phi[1] - phi[2]) / 3.0;
    psi[0] = (4.0 * psi[1] - psi[2]) / 3.0;
  }
  CauchyData d;
  d.phi = RadialProfile(h, std::move(phi));
  d.psi = RadialProfile(h, std::move(psi));
  const double R = d.measured_support(1e-12);
  d.support_radius = d.phi.max_abs() + d.psi.max_abs() > 0.0 ? R + h : 0.0;
  return d;
}

SolutionField linear_evolve(const CauchyData &data, const PlanarSource *source,
                            double T) {
  const double h = data.dr();
  const std::size_t N = steps_for(T, h);
  const std::size_t J = data.size() - 1;
  if (data.r_max() < data.support_radius + T + 2.0 * h - 1e-9 * h)
    throw Error(ErrorKind::domain_too_small,
                "r_max must be at least support radius + T + 2 dr");
  if (source && (source->N != N || source->J != J ||
                 std::abs(source->h - h) > 1e-12 * h))
    throw Error(ErrorKind::grid_mismatch, "source grid differs from the field");

  const std::size_t C = J + 1;
  const std::size_t rows = N + 5; // levels -2 .. N+2
  std::vector<double> buf(rows * C, 0.0);

  // Odd extensions a = r phi, b = r psi on m in [-M, M].
  const long long M = static_cast<long long>(J + N) + 4;
  std::vector<double> a(2 * M + 1, 0.0), b(2 * M + 1, 0.0);
  for (std::size_t j = 1; j <= J; ++j) {
    const double r = static_cast<double>(j) * h;
    const long long m = static_cast<long long>(j);
    a[M + m] = r * data.phi[j];
    a[M - m] = -a[M + m];
    b[M + m] = r * data.psi[j];
    b[M - m] = -b[M + m];
  }
  // P[m] = sum of c over m, m-2, ... with c_m = h/6 (b_{m-1} + 4 b_m + b_{m+1}).
  std::vector<double> P(2 * M + 1, 0.0);
  for (long long m = -M + 1; m <= M - 1; ++m) {
    const double c = h / 6.0 * (b[M + m - 1] + 4.0 * b[M + m] + b[M + m + 1]);
    P[M + m] = c + (m - 2 >= -M ? P[M + m - 2] : 0.0);
  }
  for (long long lvl = -2; lvl <= static_cast<long long>(N) + 2; ++lvl) {
    double *row = buf.data() + static_cast<std::size_t>(lvl + 2) * C;
    for (std::size_t j = 1; j <= J; ++j) {
      const long long jj = static_cast<long long>(j);
      row[j] = 0.5 * (a[M + jj + lvl] + a[M + jj - lvl]) +
               (P[M + jj + lvl - 1] - P[M + jj - lvl - 1]);
    }
  }

  if (source) {
    // Discrete Duhamel: leapfrog from zero data, source held constant
    // outside [0, T].
    std::vector<double> q(rows * C, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      const long long lvl = static_cast<long long>(i) - 2;
      const std::size_t n = static_cast<std::size_t>(
          std::clamp<long long>(lvl, 0, static_cast<long long>(N)));
      for (std::size_t j = 1; j <= J; ++j)
        q[i * C + j] = static_cast<double>(j) * h * source->at(n, j);
    }
    std::vector<double> z(rows * C, 0.0);
    const double h2 = h * h;
    for (std::size_t j = 1; j <= J; ++j) {
      z[1 * C + j] = 0.5 * h2 * q[2 * C + j]; // level -1
      z[3 * C + j] = 0.5 * h2 * q[2 * C + j]; // level 1
    }
    // level -2 from levels 0, -1 run backwards
    for (std::size_t j = 1; j <= J; ++j) {
      const double right = j < J ? z[1 * C + j + 1] : 0.0;
      z[j] = right + z[1 * C + j - 1] - z[2 * C + j] + h2 * q[1 * C + j];
    }
    detail::leapfrog_fill(z.data() + 2 * C, rows - 2, J, h, nullptr,
                          q.data() + 2 * C, 1e300);
    for (std::size_t i = 0; i < buf.size(); ++i)
      buf[i] += z[i];
  }

  SolutionField sol;
  sol.h = h;
  sol.N = N;
  sol.J = J;
  sol.wt = detail::time_derivative(buf, N, J, h);
  for (std::size_t j = 0; j <= J; ++j)
    sol.wt[j] = static_cast<double>(j) * h * data.psi[j];
  sol.w.assign(buf.begin() + 2 * C, buf.begin() + (N + 3) * C);
  sol.data = data;
  sol.nl_name = source ? "linear+source" : "linear";
  sol.coupling = 0.0;
  return sol;
}

double duhamel_plane_integral(const PlanarSource &source, double s) {
  const double h = source.h;
  const double T = source.T();
  if (s > T + 1e-12 * std::max(1.0, T))
    throw Error(ErrorKind::out_of_range,
                "plane apex lies beyond the stored time range");
  if (s < -source.r_max() - h * 1e-9)
    return 0.0;

  const std::size_t C = source.J + 1;
  // Tail integrals K(n, j) = int_{r_j}^{r_max} r h dr, fourth-order
  // cumulative rule on each time row.
  auto tail_row = [&](std::size_t n, std::vector<double> &K) {
    K.assign(C + 1, 0.0);
    auto y = [&](long long j) {
      if (j < 0) // r h is odd in r
        return -static_cast<double>(-j) * h * source.at(n, -j);
      if (j > static_cast<long long>(source.J))
        return 0.0;
      return static_cast<double>(j) * h * source.at(n, j);
    };
    const auto J = static_cast<long long>(source.J);
    // last interval closed one-sided so an edge value is not read as a jump
    if (J >= 2)
      K[J - 1] = h / 12.0 * (-y(J - 2) + 8.0 * y(J - 1) + 5.0 * y(J));
    for (long long j = J - 2; j >= 0; --j)
      K[j] = K[j + 1] +
             h / 24.0 * (-y(j - 1) + 13.0 * y(j) + 13.0 * y(j + 1) - y(j + 2));
  };

  auto I_at_node = [&](long long k) {
    std::vector<double> integrand(source.N + 1, 0.0), K;
    for (std::size_t n = 0; n <= source.N; ++n) {
      const long long rho = std::llabs(static_cast<long long>(n) - k);
      if (rho > static_cast<long long>(source.J))
        continue;
      tail_row(n, K);
      integrand[n] = K[rho];
    }
    // Split at the kink t = s when it lies inside.
    double acc;
    if (k > 0 && k < static_cast<long long>(source.N)) {
      acc = segment_integral(integrand.data(), static_cast<std::size_t>(k) + 1,
                             h) +
            segment_integral(integrand.data() + k, source.N + 1 - k, h);
    } else {
      acc = segment_integral(integrand.data(), source.N + 1, h);
    }
    return 2.0 * std::numbers::pi * acc;
  };

  const double x = s / h;
  const long long k = std::llround(x);
  if (std::abs(x - static_cast<double>(k)) < 1e-9)
    return I_at_node(k);
  const long long k0 = static_cast<long long>(std::floor(x)) - 1;
  double y[4];
  for (int i = 0; i < 4; ++i) {
    const long long kk = k0 + i;
    y[i] = static_cast<double>(kk) * h <= T ? I_at_node(kk) : 0.0;
  }
  const double t = x - static_cast<double>(k0);
  return -y[0] * (t - 1) * (t - 2) * (t - 3) / 6.0 +
         y[1] * t * (t - 2) * (t - 3) / 2.0 -
         y[2] * t * (t - 1) * (t - 3) / 2.0 + y[3] * t * (t - 1) * (t - 2) / 6.0;
}

double fourier_diagnostic(const RadiationProfile &F, const RadialProfile &psi,
                          std::span<const double> lambdas) {
  double worst = 0.0;
  std::vector<double> re(F.size()), im(F.size()), rad(psi.size());
  for (double lam : lambdas) {
    for (std::size_t k = 0; k < F.size(); ++k) {
      const double s = F.s(k);
      re[k] = F[k] * std::cos(lam * s);
      im[k] = -F[k] * std::sin(lam * s);
    }
    const std::complex<double> Fhat(simpson(re, F.ds()), simpson(im, F.ds()));
    for (std::size_t j = 0; j < psi.size(); ++j) {
      const double r = psi.r(j);
      const double x = lam * r;
      const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      rad[j] = r * r * psi[j] * sinc;
    }
    const double psihat = kFourPi * simpson(rad, psi.dr());
    const std::complex<double> rhs(0.0, -lam / kFourPi * psihat);
    worst = std::max(worst, std::abs(Fhat - rhs));
  }
  return worst;
}

} // namespace nullrad
