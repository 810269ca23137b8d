#include "nullrad/scatter.hpp"

#include "nullrad/linrad.hpp"
#include "nullrad/slwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace nullrad {

void ScatterConfig::validate() const {
  if (delta < 0.0 || fp_tol < 0.0 || T < 0.0)
    throw Error(ErrorKind::configuration, "delta, fp_tol and T must be >= 0");
  if (!(T0_max >= 0.0) || !(buffer > 0.0) || !(T_A > buffer))
    throw Error(ErrorKind::configuration,
                "need T0_max >= 0, buffer > 0 and T_A > buffer");
  if (max_outer < 1 || inner_duhamel_iters < 0)
    throw Error(ErrorKind::configuration, "iteration counts out of range");
  if (!(mean_tol > 0.0))
    throw Error(ErrorKind::configuration, "mean_tol must be positive");
}

namespace {

long long lattice_floor(double s, double h) {
  return static_cast<long long>(std::floor(s / h + 1e-9));
}

long long lattice_ceil(double s, double h) {
  return static_cast<long long>(std::ceil(s / h - 1e-9));
}

double round_up(double T, double h) {
  return static_cast<double>(lattice_ceil(T, h)) * h;
}

// Drops trailing samples beyond the measured support and resets it.
CauchyData trimmed(const CauchyData &d, double rel) {
  const double h = d.dr();
  const double scale = std::max(d.phi.max_abs(), d.psi.max_abs());
  if (scale == 0.0)
    return CauchyData::zero(h, 3);
  const double R = d.measured_support(rel);
  const std::size_t n =
      std::min(d.size(), static_cast<std::size_t>(std::llround(R / h)) + 3);
  std::vector<double> phi(d.phi.values().begin(), d.phi.values().begin() + n);
  std::vector<double> psi(d.psi.values().begin(), d.psi.values().begin() + n);
  for (std::size_t j = static_cast<std::size_t>(std::llround(R / h)) + 1; j < n;
       ++j)
    phi[j] = psi[j] = 0.0;
  return CauchyData(RadialProfile(h, std::move(phi)),
                    RadialProfile(h, std::move(psi)), R + h);
}

CauchyData sum(const CauchyData &a, const CauchyData &b) {
  const std::size_t n = std::max(a.size(), b.size());
  const CauchyData A = a.padded(n), B = b.padded(n);
  std::vector<double> phi(n), psi(n);
  for (std::size_t j = 0; j < n; ++j) {
    phi[j] = A.phi[j] + B.phi[j];
    psi[j] = A.psi[j] + B.psi[j];
  }
  return CauchyData(RadialProfile(a.dr(), std::move(phi)),
                    RadialProfile(a.dr(), std::move(psi)),
                    std::max(a.support_radius, b.support_radius));
}

// Restriction to r <= S h, trimmed. The last quarter unit (at most a fifth
// of the window) is tapered with a C^2 step so that a slowly decaying tail is
// not turned into a jump, which the forward map would see as a spike.
CauchyData cut(const CauchyData &d, long long S) {
  const auto n = static_cast<std::size_t>(S) + 1;
  if (d.size() <= n)
    return trimmed(d, 1e-14);
  const double h = d.dr();
  const double R = static_cast<double>(S) * h;
  const double w = std::min(0.25, 0.2 * R);
  std::vector<double> phi(d.phi.values().begin(), d.phi.values().begin() + n);
  std::vector<double> psi(d.psi.values().begin(), d.psi.values().begin() + n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = (R - static_cast<double>(j) * h) / w;
    if (x >= 1.0)
      continue;
    const double c = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    phi[j] *= c;
    psi[j] *= c;
  }
  return trimmed(CauchyData(RadialProfile(h, std::move(phi)),
                            RadialProfile(h, std::move(psi)), R),
                 1e-14);
}

long long lower_index(const CauchyData &d) {
  return -lattice_ceil(d.support_radius, d.dr()) - 4;
}

RadiationProfile difference(const RadiationProfile &a,
                            const RadiationProfile &b) {
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = a[k] - b[k];
  return RadiationProfile(a.s_min(), a.ds(), std::move(v));
}

// Data at t = 0 reached by the nonlinear backward evolution of the
// asymptotic state v (the linear solution of data0): u = v + z on [T0, T1],
// z solving the backward Duhamel problem with z(T1) = 0, iterated a few
// times, then the full equation marched from T0 down to t = 0.
CauchyData backward_seed(const CauchyData &data0, const Nonlinearity &nl,
                         double T1, const ScatterConfig &cfg, double delta,
                         double &T0_out, bool &capped) {
  const double h = data0.dr();
  const SolutionField lin = linear_evolve(prepare_domain(data0, T1), nullptr, T1);
  const std::size_t N = lin.N, J = lin.J, C = J + 1;

  // tail of ||v||_{L^5_t L^10_x}^5 from t_n to infinity
  std::vector<double> q(N + 1, 0.0);
  for (std::size_t n = 0; n <= N; ++n) {
    const double *row = lin.w_row(n);
    double s = 0.0;
    for (std::size_t j = 1; j <= J; ++j) {
      const double r = static_cast<double>(j) * h;
      const double u = row[j] / r;
      const double u2 = u * u;
      s += u2 * u2 * u2 * u2 * u2 * r * r;
    }
    q[n] = std::sqrt(4.0 * std::numbers::pi * s * h);
  }
  std::vector<double> tail(N + 1, 0.0);
  tail[N] = q[N] * lin.T() / 3.0;
  for (std::size_t n = N; n-- > 0;)
    tail[n] = tail[n + 1] + 0.5 * h * (q[n] + q[n + 1]);
  const double target = std::pow(delta, 5.0);
  std::size_t n0 = 0;
  while (n0 < N - 1 && tail[n0] > target)
    ++n0;
  const auto n_cap = static_cast<std::size_t>(std::floor(cfg.T0_max / h + 1e-9));
  capped = n0 > n_cap;
  n0 = std::min(n0, std::min(n_cap, N - 1));
  T0_out = static_cast<double>(n0) * h;

  // z on levels N, N-1, ..., n0 (row m is level N - m)
  const std::size_t M = N - n0 + 1;
  std::vector<double> z(M * C, 0.0), src(M * C, 0.0);
  auto u_at = [&](std::size_t m, std::size_t j) {
    return lin.w_at(N - m, j) + z[m * C + j];
  };
  for (int it = 0; it < cfg.inner_duhamel_iters; ++it) {
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t j = 1; j <= J; ++j)
        src[m * C + j] = -nl.radial_source(static_cast<double>(j) * h, u_at(m, j));
    std::vector<double> next(M * C, 0.0);
    if (M > 1)
      for (std::size_t j = 1; j <= J; ++j)
        next[C + j] = 0.5 * h * h * src[j];
    if (M > 2)
      detail::leapfrog_fill(next.data(), M, J, h, nullptr, src.data(), 1e8);
    z.swap(next);
  }

  std::vector<double> w_prev(C), w_cur(C);
  for (std::size_t j = 0; j < C; ++j) {
    w_prev[j] = u_at(M - 2, j); // level n0 + 1
    w_cur[j] = u_at(M - 1, j);  // level n0
  }
  const std::vector<double> lv = march_levels(w_prev, w_cur, n0 + 2, h, nl);
  // row i of lv holds level n0 + 1 - i
  auto level = [&](long long L) {
    return lv.data() + static_cast<std::size_t>(static_cast<long long>(n0) + 1 - L) * C;
  };
  const double *w0 = level(0);
  const double *p1 = level(1), *m1 = level(-1), *p2 = level(2), *m2 = level(-2);
  std::vector<double> phi(C, 0.0), psi(C, 0.0);
  for (std::size_t j = 1; j < C - 1; ++j) {
    const double r = static_cast<double>(j) * h;
    phi[j] = w0[j] / r;
    psi[j] = (8.0 * (p1[j] - m1[j]) - (p2[j] - m2[j])) / (12.0 * h) / r;
  }
  phi[0] = (4.0 * phi[1] - phi[2]) / 3.0;
  psi[0] = (4.0 * psi[1] - psi[2]) / 3.0;
  CauchyData out;
  out.phi = RadialProfile(h, std::move(phi));
  out.psi = RadialProfile(h, std::move(psi));
  out.support_radius = out.r_max();
  return trimmed(out, 1e-12);
}

} // namespace

RadiationProfile plus_map(const CauchyData &data, const Nonlinearity &nl,
                          double T, double buffer, long long k_lo,
                          long long k_hi) {
  if (nl.is_linear())
    return linear_radiation(data).resampled_on_lattice(k_lo, k_hi);
  ExtractionOptions opt;
  opt.buffer = buffer;
  return forward_radiation(data, nl, T, opt).F.resampled_on_lattice(k_lo, k_hi);
}

InverseResult inverse_radiation(const RadiationProfile &F,
                                const Nonlinearity &nl,
                                const ScatterConfig &cfg) {
  cfg.validate();
  const double h = F.ds();
  const long long kF_lo = F.first_index();
  const long long kF_hi = F.last_index();
  const double normF = l2_norm_cylinder(F);

  InverseResult res;
  InverseLinearOptions lin_opt;
  lin_opt.mean_tol = cfg.mean_tol;
  const CauchyData data0 = trimmed(inverse_linear_radiation(F, lin_opt), 1e-14);
  if (normF == 0.0 || nl.is_linear()) {
    res.data = data0;
    return res;
  }

  // F is zero beyond its grid; the comparison runs up to s = T - buffer
  const double s_hi = std::max(static_cast<double>(kF_hi) * h, 0.0);
  const double T = cfg.T > 0.0 ? round_up(cfg.T, h)
                               : round_up(std::max(8.0, s_hi + cfg.buffer), h);
  if (static_cast<double>(kF_hi) * h > T - cfg.buffer + 1e-9 * h)
    throw Error(ErrorKind::configuration,
                "T - buffer must cover the support of F");
  const long long S = std::max(lattice_floor(T - cfg.buffer, h), -kF_lo);
  const double tol = cfg.fp_tol > 0.0 ? cfg.fp_tol : 1e-6 * normF;
  const double delta = cfg.delta > 0.0 ? cfg.delta : 0.1 * normF;
  const RadiationProfile target = F.resampled_on_lattice(-S, S);

  // Data on [0, S h] against F on [-S h, S h]. The update can only act on
  // the part of the residual with vanishing parity sums; the rest is
  // reported as mean_defect.
  RadiationProfile r;
  double reach = 0.0;
  auto evaluate = [&](const CauchyData &d) {
    r = difference(target, plus_map(d, nl, T, cfg.buffer, -S, S));
    reach = l2_norm_cylinder(project_zero_mean(r));
    return l2_norm_cylinder(r);
  };

  CauchyData data = data0;
  double rn = evaluate(data);
  res.linear_residual = rn;

  InverseLinearOptions upd_opt;
  upd_opt.mean_tol = std::numeric_limits<double>::infinity();
  // With the seed the update acts on the asymptotic state and the data are
  // rebuilt by backward evolution each pass; without it the update is
  // applied to the data directly. Either way the step is a descent
  // direction only for moderate energy.
  CauchyData asym = data0;
  auto rebuild = [&] {
    return cut(backward_seed(asym, nl, T, cfg, delta, res.T0, res.T0_capped), S);
  };
  if (cfg.seed) {
    data = rebuild();
    rn = evaluate(data);
    res.seed_residual = rn;
    res.seed_used = true;
  }

  res.history.push_back(rn);
  const double reach_start = reach;
  int it = 0;
  while (reach > tol) {
    if (it == cfg.max_outer)
      throw Error(ErrorKind::divergence,
                  "outer iteration did not reach tolerance: residual " +
                      std::to_string(reach) + " after " + std::to_string(it) +
                      " iterations");
    if (!std::isfinite(reach) || reach > 10.0 * reach_start)
      throw Error(ErrorKind::divergence,
                  "outer iteration diverged: residual " + std::to_string(reach));
    // halve the step while the projected residual grows
    const CauchyData step = inverse_linear_radiation(r, upd_opt);
    const CauchyData asym_prev = asym, data_prev = data;
    const double reach_prev = reach;
    double lambda = 1.0;
    for (int k = 0;; ++k) {
      if (cfg.seed) {
        asym = cut(sum(asym_prev, step.scaled(lambda)), S);
        data = rebuild();
      } else {
        data = cut(sum(data_prev, step.scaled(lambda)), S);
      }
      rn = evaluate(data);
      if (reach < reach_prev)
        break;
      if (k == 3)
        throw Error(ErrorKind::divergence,
                    "outer update does not reduce the residual " +
                        std::to_string(reach_prev) + " after " +
                        std::to_string(it) + " iterations");
      lambda *= 0.5;
    }
    res.history.push_back(rn);
    ++it;
  }
  res.mean_defect = l2_norm_cylinder(difference(r, project_zero_mean(r)));
  res.data = data;
  res.residual = rn;
  res.outer_iterations = it;
  return res;
}

WaveOperatorResult wave_operator_plus(const CauchyData &data0,
                                      const Nonlinearity &nl,
                                      const ScatterConfig &cfg) {
  WaveOperatorResult out;
  out.inverse = inverse_radiation(linear_radiation(data0), nl, cfg);
  out.support_radius = out.inverse.data.measured_support(1e-8);
  return out;
}

namespace {

double unitarity(const RadiationProfile &AF, const RadiationProfile &F) {
  const double n = l2_norm_cylinder(F);
  return n > 0.0 ? std::abs(l2_norm_cylinder(AF) - n) / n : 0.0;
}

// L_-^{-1} F = tau L_+^{-1} (Theta F), tau (phi, psi) = (phi, -psi).
CauchyData past_data(const RadiationProfile &F, const Nonlinearity &nl,
                     const ScatterConfig &cfg, double &resid) {
  InverseResult inv = inverse_radiation(reflect(F), nl, cfg);
  resid = inv.residual;
  return inv.data.time_reversed();
}

} // namespace

ScatteringResult scattering_A(const RadiationProfile &F, const Nonlinearity &nl,
                              const ScatterConfig &cfg) {
  cfg.validate();
  ScatteringResult out;
  out.past_data = past_data(F, nl, cfg, out.inverse_residual);
  const double h = F.ds();
  const double T = round_up(cfg.T_A, h);
  const long long lo = std::min(F.first_index(), lower_index(out.past_data));
  const long long hi = lattice_floor(T - cfg.buffer, h);
  out.AF = plus_map(out.past_data, nl, T, cfg.buffer, lo, hi);
  out.unitarity_defect = unitarity(out.AF, F);
  return out;
}

ScatteringResult scattering_A_formula(const RadiationProfile &F,
                                      const Nonlinearity &nl,
                                      const ScatterConfig &cfg) {
  cfg.validate();
  ScatteringResult out;
  const CauchyData p = past_data(F, nl, cfg, out.inverse_residual);
  out.past_data = p;
  const double h = F.ds();
  const double T = round_up(cfg.T_A, h);
  const long long lo = std::min(F.first_index(), lower_index(p));
  const long long hi = lattice_floor(T - cfg.buffer, h);

  ExtractionOptions opt;
  opt.buffer = cfg.buffer;
  // Duhamel parts of the forward and time-reversed solutions
  auto duhamel_part = [&](const CauchyData &d, double &bound) {
    const SolutionField sol = solve_tr(prepare_domain(d, T), nl, T);
    const DuhamelRadiation D = forward_radiation_duhamel(d, sol, nl, opt);
    bound = std::max(bound, D.tail_bound);
    out.truncation_warning = out.truncation_warning || D.truncation_warning;
    const RadiationProfile L = linear_radiation(d).resampled_on_lattice(D.F.first_index(),
                                                                       D.F.last_index());
    return difference(D.F, L);
  };
  const RadiationProfile Dp = duhamel_part(p, out.tail_bound);
  const RadiationProfile Dm = reflect(duhamel_part(p.time_reversed(), out.tail_bound));

  const RadiationProfile a = F.resampled_on_lattice(lo, hi);
  const RadiationProfile b = Dp.resampled_on_lattice(lo, hi);
  const RadiationProfile c = Dm.resampled_on_lattice(lo, hi);
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = -a[k] + b[k] + c[k];
  out.AF = RadiationProfile(a.s_min(), h, std::move(v));
  out.unitarity_defect = unitarity(out.AF, F);
  return out;
}

ScatteringSResult scattering_S(const CauchyData &data, const Nonlinearity &nl,
                               const ScatterConfig &cfg) {
  const CauchyData d = trimmed(data, 1e-14);
  const RadiationProfile Fm = linear_radiation_minus(d);
  const ScatteringResult A = scattering_A(Fm, nl, cfg);
  InverseLinearOptions opt;
  opt.mean_tol = std::numeric_limits<double>::infinity();
  ScatteringSResult out;
  out.data = inverse_linear_radiation(A.AF, opt);
  const double E0 = linear_energy_norm(d);
  out.energy_norm_defect =
      E0 > 0.0 ? std::abs(linear_energy_norm(out.data) - E0) / E0 : 0.0;
  out.unitarity_defect = A.unitarity_defect;
  return out;
}

} // namespace nullrad
