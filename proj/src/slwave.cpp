#include "nullrad/slwave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nullrad {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

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

double trapezoid(const std::vector<double> &f, double h) {
  if (f.size() < 2)
    return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i)
    s += f[i];
  return s * h;
}

} // namespace

CauchyData prepare_domain(const CauchyData &data, double T, double extra) {
  const double h = data.dr();
  const double need = data.support_radius + T + 2.0 * h + extra;
  const auto n = static_cast<std::size_t>(std::ceil(need / h - 1e-9)) + 1;
  if (n <= data.size())
    return data;
  return data.padded(n);
}

SolutionField solve_tr(const CauchyData &data, const Nonlinearity &nl,
                       double T, const TrOptions &opt) {
  const double h = data.dr();
  if (opt.dt != 0.0 && std::abs(opt.dt - h) > 1e-12 * h)
    throw Error(ErrorKind::configuration,
                "time step must equal the radial spacing (Courant number 1)");
  const std::size_t N = steps_for(T, h);
  if (data.size() < 3)
    throw Error(ErrorKind::invalid_grid, "data grid needs >= 3 points");
  if (data.r_max() < data.support_radius + T + 2.0 * h - 1e-9 * h)
    throw Error(ErrorKind::domain_too_small,
                "r_max must be at least support radius + T + 2 dr");

  const std::size_t J = data.size() - 1;
  const std::size_t C = J + 1;
  const std::size_t rows = N + 5; // levels -2 .. N+2
  std::vector<double> buf(rows * C, 0.0);
  double *lm2 = buf.data();
  double *lm1 = lm2 + C;
  double *l0 = lm1 + C;
  double *l1 = l0 + C;

  auto a = [&](long long j) -> double {
    if (j <= 0 || j > static_cast<long long>(J))
      return j < 0 && -j <= static_cast<long long>(J)
                 ? -static_cast<double>(-j) * h * data.phi[-j]
                 : 0.0;
    return static_cast<double>(j) * h * data.phi[j];
  };
  auto b = [&](long long j) -> double {
    if (j <= 0 || j > static_cast<long long>(J))
      return j < 0 && -j <= static_cast<long long>(J)
                 ? -static_cast<double>(-j) * h * data.psi[-j]
                 : 0.0;
    return static_cast<double>(j) * h * data.psi[j];
  };

  const double h2 = h * h;
  for (std::size_t j = 1; j <= J; ++j) {
    const long long jj = static_cast<long long>(j);
    const double r = static_cast<double>(j) * h;
    l0[j] = a(jj);
    double w1 = 0.5 * (a(jj + 1) + a(jj - 1)) +
                h / 6.0 * (b(jj - 1) + 4.0 * b(jj) + b(jj + 1));
    if (!nl.is_linear())
      w1 -= 0.5 * h2 * nl.radial_source(r, a(jj)) +
            h2 * h / 6.0 * nl.fprime(data.phi[j]) * b(jj);
    l1[j] = w1;
  }
  // Levels -1 and -2 by running the scheme backwards.
  auto back = [&](const double *next, const double *cur, double *prev) {
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
      const double right = j < J ? cur[j + 1] : 0.0;
      const double src = nl.is_linear()
                             ? 0.0
                             : nl.radial_source(static_cast<double>(j) * h,
                                                cur[j]);
      prev[j] = right + cur[j - 1] - next[j] - h2 * src;
    }
  };
  back(l1, l0, lm1);
  back(l0, lm1, lm2);
  detail::leapfrog_fill(l0, rows - 2, J, h, &nl, nullptr, opt.blowup_limit);

  SolutionField sol;
  sol.h = h;
  sol.N = N;
  sol.J = J;
  sol.wt = detail::time_derivative(buf, N, J, h);
  for (std::size_t j = 0; j <= J; ++j)
    sol.wt[j] = b(static_cast<long long>(j));
  buf.erase(buf.begin(), buf.begin() + 2 * C);
  buf.resize((N + 1) * C);
  buf.shrink_to_fit();
  sol.w = std::move(buf);
  sol.data = data;
  sol.nl_name = nl.name();
  sol.coupling = nl.coupling();
  return sol;
}

std::vector<double> march_levels(const std::vector<double> &w_prev,
                                 const std::vector<double> &w_cur,
                                 std::size_t steps, double h,
                                 const Nonlinearity &nl, double blowup_limit) {
  if (w_prev.size() != w_cur.size() || w_cur.size() < 3)
    throw Error(ErrorKind::grid_mismatch, "level rows differ in length");
  const std::size_t C = w_cur.size();
  std::vector<double> rows((steps + 2) * C, 0.0);
  std::copy(w_prev.begin(), w_prev.end(), rows.begin());
  std::copy(w_cur.begin(), w_cur.end(), rows.begin() + C);
  detail::leapfrog_fill(rows.data(), steps + 2, C - 1, h, &nl, nullptr,
                        blowup_limit);
  return rows;
}

// ---------------------------------------------------------------------------
// Goursat engine

CharGrid solve_goursat(const CauchyData &data, const Nonlinearity &nl,
                       double T_c, double dmu, const GoursatOptions &opt) {
  const double R = data.support_radius;
  if (!(dmu > 0.0) || !(T_c > 0.0))
    throw Error(ErrorKind::configuration, "T_c and dmu must be positive");
  const auto M = static_cast<std::size_t>(std::llround(T_c / dmu));
  if (std::abs(static_cast<double>(M) * dmu - T_c) > 1e-9 * T_c)
    throw Error(ErrorKind::configuration, "T_c must be a multiple of dmu");
  if (R > 0.0 && !(1.0 / R < T_c))
    throw Error(ErrorKind::configuration, "need 1/R < T_c");
  if (R > 0.0 && (T_c - 1.0 / R) / dmu < 8.0)
    throw Error(ErrorKind::resolution, "grid too coarse to resolve 1/R");

  CharGrid g;
  g.T_c = T_c;
  g.dmu = dmu;
  g.M = M;
  g.R = R;
  g.v.assign(CharGrid::index(M, M) + 1, 0.0);
  g.vmu_d.assign(M + 1, 0.0);
  g.vnu_d.assign(M + 1, 0.0);

  const std::vector<double> dphi_v = radial_derivative(data.phi);
  const RadialProfile dphi(data.dr(), dphi_v, Parity::odd);
  // Diagonal data at mu: value, d_mu v, d_nu v.
  struct Diag {
    double v, vmu, vnu;
  };
  auto diag = [&](double mu) -> Diag {
    if (mu <= 0.0)
      return {0.0, 0.0, 0.0};
    const double r = 1.0 / mu;
    if (r >= R)
      return {0.0, 0.0, 0.0};
    const double phi = data.phi.at(r);
    const double psi = data.psi.at(r);
    const double drw = phi + r * dphi.at(r); // (r phi)'
    const double c = 0.5 / (mu * mu);
    return {r * phi, c * (r * psi - drw), -c * (r * psi + drw)};
  };

  const bool linear = nl.is_linear();
  auto G = [&](std::size_t i, std::size_t j, double v) {
    if (linear || v == 0.0)
      return 0.0;
    const double mu = g.mu(i), nu = g.mu(j);
    const double s = mu + nu;
    if (s == 0.0)
      return 0.0;
    const double k = 4.0 * mu * mu * nu * nu / (s * s * s * s);
    const double x = 2.0 * mu * nu / s;
    return k * nl.f_tilde(x, v);
  };

  const double h = dmu;
  const double q = 0.25 * h * h;
  std::size_t worst = 0;
  std::vector<double> Gprev(M + 1, 0.0), Gcur(M + 1, 0.0);
  for (std::size_t i = 0; i <= M; ++i) {
    const Diag d = diag(g.mu(i));
    g.v[CharGrid::index(i, i)] = d.v;
    g.vmu_d[i] = d.vmu;
    g.vnu_d[i] = d.vnu;
  }
  for (std::size_t i = 1; i <= M; ++i) {
    if (R > 0.0 && g.mu(i) <= 1.0 / R) {
      std::fill(Gcur.begin(), Gcur.end(), 0.0);
      std::swap(Gprev, Gcur);
      continue; // corner region stays exactly zero
    }
    double *row = g.v.data() + CharGrid::index(i, 0);
    const double *prow = g.v.data() + CharGrid::index(i - 1, 0);
    Gcur[i] = G(i, i, row[i]);
    // Half cell below the diagonal: integrate d_nu v along the diagonal data
    // (Simpson with the data midpoint) plus the triangle of v_mu nu.
    {
      const double nu_hi = g.mu(i), nu_lo = g.mu(i - 1);
      const Diag mid = diag(0.5 * (nu_lo + nu_hi));
      const double int_vnu =
          h / 6.0 * (g.vnu_d[i - 1] + 4.0 * mid.vnu + g.vnu_d[i]);
      const double base = row[i] - int_vnu;
      const double g_known = Gcur[i] + Gprev[i - 1];
      double v = base - h * h / 6.0 * (g_known + G(i, i - 1, base));
      int it = 0;
      for (; it < opt.fp_max_iter; ++it) {
        const double vn = base - h * h / 6.0 * (g_known + G(i, i - 1, v));
        const double delta = std::abs(vn - v);
        v = vn;
        if (delta <= opt.fp_tol * std::max(1.0, std::abs(v)))
          break;
      }
      if (it == opt.fp_max_iter)
        throw Error(ErrorKind::stiffness, "corner update did not converge");
      worst = std::max<std::size_t>(worst, static_cast<std::size_t>(it) + 1);
      row[i - 1] = v;
      Gcur[i - 1] = G(i, i - 1, v);
    }
    for (std::size_t j = i - 1; j >= 1; --j) {
      const double base = row[j] - prow[j] + prow[j - 1];
      const double g_known = Gcur[j] + Gprev[j] + Gprev[j - 1];
      double v = base - q * (g_known + G(i, j - 1, base));
      int it = 0;
      for (; it < opt.fp_max_iter; ++it) {
        const double vn = base - q * (g_known + G(i, j - 1, v));
        const double delta = std::abs(vn - v);
        v = vn;
        if (delta <= opt.fp_tol * std::max(1.0, std::abs(v)))
          break;
      }
      if (it == opt.fp_max_iter)
        throw Error(ErrorKind::stiffness, "corner update did not converge");
      worst = std::max<std::size_t>(worst, static_cast<std::size_t>(it) + 1);
      row[j - 1] = v;
      Gcur[j - 1] = G(i, j - 1, v);
      if (!(std::abs(v) <= 1e8))
        throw Error(ErrorKind::blowup_detected, "Goursat solution blew up");
    }
    std::swap(Gprev, Gcur);
  }
  g.iterations_max = worst;
  return g;
}

// ---------------------------------------------------------------------------
// diagnostics

DiagnosticSeries diagnostics(const SolutionField &sol, const Nonlinearity &nl) {
  DiagnosticSeries out;
  const double h = sol.h;
  const std::size_t C = sol.cols();
  out.t.resize(sol.N + 1);
  out.slices.resize(sol.N + 1);
  double l5l10_acc = 0.0;
  double prev_q = 0.0;
  double decay = 0.0;
  std::vector<double> f10(C), f6(C);
  for (std::size_t n = 0; n <= sol.N; ++n) {
    const double t = static_cast<double>(n) * h;
    out.t[n] = t;
    const CauchyData d = sol.slice(n);
    EnergyReport rep = energy(d, nl);
    for (std::size_t j = 0; j < C; ++j) {
      const double r = static_cast<double>(j) * h;
      const double u = std::abs(d.phi[j]);
      const double u2 = u * u;
      f6[j] = u2 * u2 * u2 * r * r;
      f10[j] = f6[j] * u2 * u2;
      decay = std::max(decay, std::abs(t * t - r * r) * u);
    }
    rep.l6_norm = std::pow(kFourPi * simpson(f6, h), 1.0 / 6.0);
    const double l10 = std::pow(kFourPi * simpson(f10, h), 0.1);
    const double q = std::pow(l10, 5.0);
    if (n > 0)
      l5l10_acc += 0.5 * h * (q + prev_q);
    prev_q = q;
    rep.l5l10_partial = std::pow(l5l10_acc, 0.2);
    rep.decay_constant = decay;
    out.slices[n] = rep;
  }
  // Discrete energy conserved by the Courant-one leapfrog.
  auto pot = [&](const double *row) {
    if (nl.is_linear())
      return 0.0;
    std::vector<double> p(C);
    for (std::size_t j = 1; j < C; ++j) {
      const double r = static_cast<double>(j) * h;
      p[j] = nl.P(row[j] / r) * r * r;
    }
    p[0] = 0.0;
    return kFourPi * simpson(p, h);
  };
  out.scheme_energy.resize(sol.N);
  for (std::size_t n = 0; n < sol.N; ++n) {
    const double *a = sol.w_row(n);
    const double *b = sol.w_row(n + 1);
    double e = 0.0;
    for (std::size_t j = 0; j < C; ++j) {
      const double dt = (b[j] - a[j]) / h;
      const double da = (j + 1 < C ? a[j + 1] : 0.0) - a[j];
      const double db = (j + 1 < C ? b[j + 1] : 0.0) - b[j];
      e += dt * dt + da * db / (h * h);
    }
    out.scheme_energy[n] = 0.5 * kFourPi * h * e + 0.5 * (pot(a) + pot(b));
  }
  return out;
}

FluxCheck char_energy_flux_check(const CharGrid &grid, const Nonlinearity &nl,
                                 std::size_t j0, std::size_t i1) {
  FluxCheck fc;
  const std::size_t M = grid.M;
  if (i1 == 0 || i1 > M)
    i1 = M;
  if (j0 + 2 > i1)
    throw Error(ErrorKind::configuration, "flux triangle too small");
  const double h = grid.dmu;
  auto k_of = [](double mu, double nu) {
    const double s = mu + nu;
    return s == 0.0 ? 0.0 : 4.0 * mu * mu * nu * nu / (s * s * s * s);
  };
  auto x_of = [](double mu, double nu) {
    const double s = mu + nu;
    return s == 0.0 ? 0.0 : 2.0 * mu * nu / s;
  };
  auto Q = [&](std::size_t i, std::size_t j) {
    const double mu = grid.mu(i), nu = grid.mu(j);
    return k_of(mu, nu) * nl.P_tilde(x_of(mu, nu), grid.at(i, j));
  };
  // d_mu v at (i, j): centered inside the triangle, one-sided at edges.
  auto vmu = [&](std::size_t i, std::size_t j) {
    if (i == j)
      return grid.vmu_d[i];
    if (i + 1 <= M && i - 1 >= j)
      return (grid.at(i + 1, j) - grid.at(i - 1, j)) / (2.0 * h);
    if (i + 1 > M)
      return (3.0 * grid.at(i, j) - 4.0 * grid.at(i - 1, j) +
              grid.at(i - 2, j)) / (2.0 * h);
    return (-3.0 * grid.at(i, j) + 4.0 * grid.at(i + 1, j) -
            grid.at(i + 2, j)) / (2.0 * h);
  };
  auto vnu = [&](std::size_t i, std::size_t j) {
    if (i == j)
      return grid.vnu_d[i];
    if (j >= 1 && j + 1 <= i)
      return (grid.at(i, j + 1) - grid.at(i, j - 1)) / (2.0 * h);
    return (-3.0 * grid.at(i, j) + 4.0 * grid.at(i, j + 1) -
            grid.at(i, j + 2)) / (2.0 * h);
  };

  std::vector<double> f;
  f.clear();
  for (std::size_t i = j0; i <= i1; ++i) {
    const double a = vmu(i, j0);
    f.push_back(0.5 * a * a - Q(i, j0));
  }
  fc.bottom = trapezoid(f, h);
  f.clear();
  for (std::size_t j = j0; j <= i1; ++j) {
    const double b = vnu(i1, j);
    f.push_back(0.5 * b * b - Q(i1, j));
  }
  fc.right = trapezoid(f, h);
  f.clear();
  for (std::size_t i = j0; i <= i1; ++i)
    f.push_back(0.5 * (grid.vmu_d[i] * grid.vmu_d[i] -
                       grid.vnu_d[i] * grid.vnu_d[i]));
  fc.diagonal = trapezoid(f, h);

  // S = explicit d_mu Q + explicit d_nu Q >= 0.
  const bool quintic = nl.kind() == Nonlinearity::Kind::quintic;
  auto S = [&](std::size_t i, std::size_t j) {
    if (nl.is_linear())
      return 0.0;
    const double mu = grid.mu(i), nu = grid.mu(j);
    const double s = mu + nu;
    if (s == 0.0)
      return 0.0;
    const double v = grid.at(i, j);
    const double x = x_of(mu, nu);
    const double dk = 8.0 * mu * nu * (mu - nu) * (mu - nu) / (s * s * s * s * s);
    double val = dk * nl.P_tilde(x, v);
    if (!quintic) {
      const double dx = 2.0 * (mu * mu + nu * nu) / (s * s);
      const double e = 1e-6 * std::max(1e-3, x);
      const double dP = (nl.P_tilde(x + e, v) - nl.P_tilde(std::max(x - e, 0.0), v)) /
                        (x + e - std::max(x - e, 0.0));
      val += k_of(mu, nu) * dP * dx;
    }
    return val;
  };
  std::vector<double> outer;
  for (std::size_t j = j0; j <= i1; ++j) {
    f.clear();
    for (std::size_t i = j; i <= i1; ++i)
      f.push_back(S(i, j));
    outer.push_back(trapezoid(f, h));
  }
  fc.interior = trapezoid(outer, h);

  const double lhs = fc.bottom - fc.right - fc.interior;
  const double scale = std::abs(fc.bottom) + std::abs(fc.right) +
                       std::abs(fc.interior) + std::abs(fc.diagonal);
  fc.residual = scale > 0.0 ? std::abs(lhs - fc.diagonal) / scale : 0.0;
  return fc;
}

double engine_agreement(const SolutionField &sol, const CharGrid &grid) {
  double worst = 0.0;
  const double h = sol.h;
  for (std::size_t i = 1; i <= grid.M; ++i) {
    for (std::size_t j = 1; j < i; ++j) {
      const double mu = grid.mu(i), nu = grid.mu(j);
      const double sp = -1.0 / mu, sm = 1.0 / nu;
      const double t = 0.5 * (sp + sm), r = 0.5 * (sm - sp);
      if (t > sol.T() - h || r > sol.r_max() - h || r <= 0.0)
        continue;
      const double x = t / h, y = r / h;
      const auto n = static_cast<std::size_t>(x);
      const auto jj = static_cast<std::size_t>(y);
      const double ax = x - static_cast<double>(n);
      const double ay = y - static_cast<double>(jj);
      const double w = (1 - ax) * (1 - ay) * sol.w_at(n, jj) +
                       ax * (1 - ay) * sol.w_at(n + 1, jj) +
                       (1 - ax) * ay * sol.w_at(n, jj + 1) +
                       ax * ay * sol.w_at(n + 1, jj + 1);
      worst = std::max(worst, std::abs(w - grid.at(i, j)) / r);
    }
  }
  return worst;
}

} // namespace nullrad
