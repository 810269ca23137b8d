#include "nullrad/verify.hpp"

#include "nullrad/linrad.hpp"
#include "nullrad/radfield.hpp"
#include "nullrad/slwave.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

namespace nullrad {

double BumpSpec::operator()(double r) const {
  const double x = r / R;
  if (std::abs(x) >= 1.0)
    return 0.0;
  const double b = amp * std::pow(1.0 - x * x, k);
  if (kind == Kind::poly)
    return b;
  return b * std::exp(-x * x / (2.0 * sigma * sigma));
}

double BumpSpec::derivative(double r) const {
  const double x = r / R;
  if (std::abs(x) >= 1.0)
    return 0.0;
  const double q = 1.0 - x * x;
  // d/dx of (1 - x^2)^k
  const double dp = -2.0 * k * x * std::pow(q, k - 1);
  if (kind == Kind::poly)
    return amp * dp / R;
  const double g = std::exp(-x * x / (2.0 * sigma * sigma));
  const double dg = -x / (sigma * sigma) * g;
  return amp * (dp * g + std::pow(q, k) * dg) / R;
}

std::string BumpSpec::label() const {
  std::string s = kind == Kind::poly ? "poly" : "gauss";
  s += "_k" + std::to_string(k);
  char buf[64];
  std::snprintf(buf, sizeof buf, "_R%g_a%g", R, amp);
  s += buf;
  if (kind == Kind::gauss) {
    std::snprintf(buf, sizeof buf, "_s%.4f", sigma);
    s += buf;
  }
  return s;
}

std::vector<BumpSpec> test_family(std::uint64_t seed,
                                  const std::vector<double> &amplitudes) {
  std::mt19937_64 rng(seed);
  auto uniform = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<BumpSpec> out;
  for (double a : amplitudes) {
    out.push_back({BumpSpec::Kind::poly, 3, 1.0, a, 0.5});
    out.push_back({BumpSpec::Kind::poly, 4, 1.0, a, 0.5});
    out.push_back({BumpSpec::Kind::gauss, 3, 1.0, a, 0.35 + 0.3 * uniform()});
  }
  return out;
}

std::uint64_t harness_seed() {
  const char *s = std::getenv("NULLRAD_SEED");
  return s ? std::strtoull(s, nullptr, 10) : 0;
}

unsigned harness_threads() {
  const char *s = std::getenv("NULLRAD_THREADS");
  const long v = s ? std::strtol(s, nullptr, 10) : 1;
  return v < 1 ? 1u : static_cast<unsigned>(v);
}

std::vector<Json> run_cells(std::size_t n,
                            const std::function<Json(std::size_t)> &cell,
                            unsigned threads) {
  std::vector<Json> out(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = cell(i);
      } catch (const Error &e) {
        out[i] = Json{{"passed", false},
                      {"error", to_string(e.kind())},
                      {"message", e.what()}};
      }
    }
  };
  const unsigned w = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (w == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < w; ++i)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  return out;
}

Json Report::to_json() const {
  Json j;
  j["name"] = name;
  j["passed"] = passed;
  j["body"] = body;
  return j;
}

namespace {

CauchyData psi_datum(const BumpSpec &spec, double dr) {
  const RadialProfile psi = RadialProfile::sample(spec, dr, spec.R + 2.0 * dr);
  return CauchyData(RadialProfile::zeros(dr, psi.size()), psi, spec.R);
}

// a x + b y on the longer grid
CauchyData combine(double a, const CauchyData &x, double b, const CauchyData &y) {
  const std::size_t n = std::max(x.size(), y.size());
  const CauchyData X = x.padded(n), Y = y.padded(n);
  std::vector<double> phi(n), psi(n);
  for (std::size_t j = 0; j < n; ++j) {
    phi[j] = a * X.phi[j] + b * Y.phi[j];
    psi[j] = a * X.psi[j] + b * Y.psi[j];
  }
  return CauchyData(RadialProfile(x.dr(), std::move(phi)),
                    RadialProfile(x.dr(), std::move(psi)),
                    std::max(x.support_radius, y.support_radius));
}

RadiationProfile combine(double a, const RadiationProfile &F, double b,
                         const RadiationProfile &G) {
  const long long lo = std::min(F.first_index(), G.first_index());
  const long long hi = std::max(F.last_index(), G.last_index());
  const RadiationProfile A = F.resampled_on_lattice(lo, hi);
  const RadiationProfile B = G.resampled_on_lattice(lo, hi);
  std::vector<double> v(A.size());
  for (std::size_t k = 0; k < v.size(); ++k)
    v[k] = a * A[k] + b * B[k];
  return RadiationProfile(A.s_min(), A.ds(), std::move(v));
}

double max_abs_below(const RadiationProfile &F, double s_max) {
  double m = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k)
    if (F.s(k) <= s_max + 1e-12 * F.ds())
      m = std::max(m, std::abs(F[k]));
  return m;
}

double max_abs_between(const RadiationProfile &F, double lo, double hi) {
  double m = 0.0;
  for (std::size_t k = 0; k < F.size(); ++k)
    if (F.s(k) > lo && F.s(k) < hi)
      m = std::max(m, std::abs(F[k]));
  return m;
}

// F = G' on the lattice covering [-R_G - 2 dr, R_G + 2 dr]
RadiationProfile derivative_profile(const BumpSpec &G, double dr) {
  const long long K = static_cast<long long>(std::ceil(G.R / dr - 1e-9)) + 2;
  return RadiationProfile::sample([&](double s) { return G.derivative(s); },
                                  -static_cast<double>(K) * dr, dr,
                                  static_cast<std::size_t>(2 * K + 1));
}

} // namespace

Report support_forward_check(const std::vector<BumpSpec> &specs,
                             const Nonlinearity &nl,
                             const ForwardSupportOptions &opt) {
  Report rep;
  rep.name = "support_forward";
  auto cell = [&](std::size_t i) {
    const BumpSpec &spec = specs[i];
    const double h = opt.dr;
    const CauchyData d = psi_datum(spec, h);
    Json j;
    j["datum"] = spec.label();
    const CharGrid g = solve_goursat(d, nl, opt.T_c, h);
    const RadiationProfile Fg = forward_radiation_goursat(g, h);
    const double gmax = max_abs_below(Fg, -spec.R);
    const ExtractedRadiation ex = forward_radiation(d, nl, opt.T);
    const double tmax = max_abs_below(ex.F, -spec.R - 2.0 * h);
    j["goursat_sup_below_minus_R"] = gmax;
    j["tr_sup_below_minus_R_2dr"] = tmax;
    j["goursat_exact_zero"] = gmax == 0.0;
    j["tr_below_1e-10"] = tmax < 1e-10;
    j["passed"] = gmax == 0.0 && tmax < 1e-10;
    return j;
  };
  const std::vector<Json> cells = run_cells(specs.size(), cell, harness_threads());
  rep.body["nonlinearity"] = nl.name();
  rep.body["coupling"] = nl.coupling();
  rep.body["dr"] = opt.dr;
  rep.body["cells"] = cells;
  for (const Json &c : cells)
    rep.passed = rep.passed && c.value("passed", false);
  return rep;
}

Report support_inverse_check(const std::vector<BumpSpec> &specs,
                             const Nonlinearity &nl,
                             const InverseSupportOptions &opt) {
  Report rep;
  rep.name = "support_inverse";
  auto cell = [&](std::size_t i) {
    BumpSpec G = specs[i];
    G.R = opt.G_radius;
    const double h = opt.dr;
    Json j;
    j["G"] = G.label();
    RadiationProfile F = derivative_profile(G, h);
    if (opt.match_family_energy) {
      const double target = l2_norm_cylinder(linear_radiation(psi_datum(specs[i], h)));
      const double n = l2_norm_cylinder(F);
      if (n > 0.0)
        for (double &x : F.mutable_values())
          x *= target / n;
    }
    const InverseResult inv = inverse_radiation(F, nl, opt.cfg);
    const double rho = inv.data.measured_support(opt.rel_tol);
    const ScatteringResult A = scattering_A(F, nl, opt.cfg);
    const double infF = F.support_min(opt.rel_tol);
    const double infA = A.AF.support_min(opt.rel_tol);
    const double bound = -std::min(infF, infA) + 2.0 * h;
    const double strict = std::min(-infF, -infA) + 2.0 * h;
    j["norm_F"] = l2_norm_cylinder(F);
    j["energy_F"] = std::pow(l2_norm_cylinder(F), 2);
    j["inverse_residual"] = inv.residual;
    j["inverse_mean_defect"] = inv.mean_defect;
    j["outer_iterations"] = inv.outer_iterations;
    j["rho"] = rho;
    j["inf_supp_F"] = infF;
    j["inf_supp_AF"] = infA;
    j["AF_window_min"] = A.AF.s_min();
    j["AF_vanishes_left"] = infA > A.AF.s_min();
    j["bound"] = bound;
    j["strict_bound"] = strict;
    j["strict_bound_holds"] = rho <= strict + 1e-12;
    j["unitarity_defect"] = A.unitarity_defect;

    // contrapositive probe: psi supported beyond G_radius radiates on
    // (-rho0, -G_radius)
    BumpSpec P = specs[i];
    P.R = opt.G_radius + 0.25;
    const ExtractedRadiation pr = forward_radiation(psi_datum(P, h), nl, 4.0);
    const double probe = max_abs_between(pr.F, -P.R, -opt.G_radius);
    j["probe_sup"] = probe;
    j["probe_above_noise"] = probe > 1e-10 * std::max(pr.F.max_abs(), 1e-300);
    j["passed"] = rho <= bound + 1e-12;
    return j;
  };
  const std::vector<Json> cells = run_cells(specs.size(), cell, harness_threads());
  rep.body["nonlinearity"] = nl.name();
  rep.body["coupling"] = nl.coupling();
  rep.body["dr"] = opt.dr;
  rep.body["rel_tol"] = opt.rel_tol;
  rep.body["match_family_energy"] = opt.match_family_energy;
  rep.body["cells"] = cells;
  for (const Json &c : cells)
    rep.passed = rep.passed && c.value("passed", false);
  return rep;
}

Report support_roundtrip_check(const CauchyData &datum, const Nonlinearity &nl,
                               const ScatterConfig &cfg, double rel_tol) {
  Report rep;
  rep.name = "support_roundtrip";
  const double h = datum.dr();
  const double T = cfg.T > 0.0 ? cfg.T : 8.0;
  const auto S = static_cast<long long>(std::floor((T - cfg.buffer) / h + 1e-9));
  const RadiationProfile F = plus_map(datum, nl, T, cfg.buffer, -S, S);
  ScatterConfig c = cfg;
  c.T = T;
  const InverseResult inv = inverse_radiation(F, nl, c);
  const double rho0 = datum.measured_support(rel_tol);
  const double rho = inv.data.measured_support(rel_tol);
  rep.body["rho_datum"] = rho0;
  rep.body["rho_reconstructed"] = rho;
  rep.body["residual"] = inv.residual;
  rep.body["energy_error"] =
      linear_energy_distance(inv.data, datum) /
      std::max(linear_energy_norm(datum), 1e-300);
  rep.passed = std::abs(rho - rho0) <= 2.0 * h + 1e-12;
  rep.body["passed"] = rep.passed;
  return rep;
}

Report continuity_probe(const CauchyData &datum, const CauchyData &pert,
                        const Nonlinearity &nl, const ContinuityOptions &opt) {
  Report rep;
  rep.name = "continuity";
  const double pn = l2_norm_cylinder(linear_radiation(pert));
  if (pn == 0.0)
    throw Error(ErrorKind::configuration, "perturbation has zero radiation");
  const CauchyData p = pert.scaled(1.0 / pn);
  const double E = energy(datum, nl).total;
  const bool small = E <= opt.small_energy;
  const RadiationProfile F0 = forward_radiation(datum, nl, opt.T).F;
  std::vector<double> deltas = opt.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());
  Json rows = Json::array();
  double prev = std::numeric_limits<double>::infinity();
  bool monotone = true, bounded = true;
  for (double d : deltas) {
    const RadiationProfile Fd =
        forward_radiation(combine(1.0, datum, d, p), nl, opt.T).F;
    const double diff = l2_distance(Fd, F0);
    monotone = monotone && diff < prev;
    bounded = bounded && diff < 10.0 * d;
    prev = diff;
    rows.push_back({{"delta", d}, {"difference", diff}, {"ratio", diff / d}});
  }
  rep.body["energy"] = E;
  rep.body["regime"] = small ? "norm" : "strong";
  rep.body["table"] = rows;
  rep.body["monotone"] = monotone;
  rep.body["below_10_delta"] = bounded;
  rep.passed = monotone && (!small || bounded);
  rep.body["passed"] = rep.passed;
  return rep;
}

Report inverse_continuity_probe(const RadiationProfile &F,
                                const RadiationProfile &G,
                                const Nonlinearity &nl,
                                const std::vector<double> &deltas,
                                const ScatterConfig &cfg) {
  Report rep;
  rep.name = "inverse_continuity";
  const double gn = l2_norm_cylinder(G);
  if (gn == 0.0)
    throw Error(ErrorKind::configuration, "direction has zero norm");
  const CauchyData d0 = inverse_radiation(F, nl, cfg).data;
  Json rows = Json::array();
  double L = 0.0;
  for (double d : deltas) {
    const CauchyData dd = inverse_radiation(combine(1.0, F, d, G), nl, cfg).data;
    const double l = linear_energy_distance(dd, d0) / (d * gn);
    L = std::max(L, l);
    rows.push_back({{"delta", d}, {"lipschitz", l}});
  }
  rep.body["norm_F"] = l2_norm_cylinder(F);
  rep.body["table"] = rows;
  rep.body["lipschitz_max"] = L;
  rep.passed = L < 10.0;
  rep.body["passed"] = rep.passed;
  return rep;
}

Report convergence_study(const std::function<CauchyData(double)> &datum,
                         const Nonlinearity &nl,
                         const std::vector<double> &resolutions,
                         const ConvergenceOptions &opt) {
  Report rep;
  rep.name = "convergence";
  const char *names[] = {"energy_drift",   "energy_identity", "gap_tr_goursat",
                         "gap_tr_duhamel", "gap_duhamel_goursat",
                         "linear_oracle"};
  constexpr int M = 6;
  std::vector<std::array<double, M>> err;
  for (double h : resolutions) {
    const CauchyData d = datum(h);
    std::array<double, M> e{};
    const double E = energy(d, nl).total;
    {
      const SolutionField sol = solve_tr(prepare_domain(d, opt.T), nl, opt.T);
      const DiagnosticSeries ds = diagnostics(sol, nl);
      double drift = 0.0;
      for (const EnergyReport &s : ds.slices)
        drift = std::max(drift, std::abs(s.total - E));
      e[0] = E > 0.0 ? drift / E : drift;
      const ExtractedRadiation ex = forward_radiation_tr(sol);
      const double n = l2_norm_cylinder(ex.F);
      e[1] = E > 0.0 ? std::abs(n * n - E) / E : n * n;
      const DuhamelRadiation du = forward_radiation_duhamel(d, sol, nl);
      const double scale = n > 0.0 ? n : 1.0;
      if (d.support_radius > 0.0) {
        const CharGrid g = solve_goursat(d, nl, opt.T_c, h);
        const RadiationProfile Fg = forward_radiation_goursat(g, h);
        e[2] = l2_distance(ex.F, Fg) / scale;
        e[4] = l2_distance(du.F, Fg) / scale;
      }
      e[3] = l2_distance(ex.F, du.F) / scale;
    }
    {
      const Nonlinearity lin = Nonlinearity::linear();
      const SolutionField sol = solve_tr(prepare_domain(d, opt.T), lin, opt.T);
      const RadiationProfile F0 = forward_radiation_tr(sol).F;
      const RadiationProfile C = linear_radiation(d);
      const double n = l2_norm_cylinder(C);
      e[5] = l2_distance(F0, C) / (n > 0.0 ? n : 1.0);
    }
    err.push_back(e);
  }
  Json table = Json::array();
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    Json row;
    row["dr"] = resolutions[i];
    for (int m = 0; m < M; ++m)
      row[names[m]] = err[i][m];
    table.push_back(row);
  }
  Json orders;
  bool ok = true;
  for (int m = 0; m < M; ++m) {
    Json list = Json::array();
    for (std::size_t i = 0; i + 1 < resolutions.size(); ++i) {
      const double a = err[i][m], b = err[i + 1][m];
      if (a == 0.0 && b == 0.0) {
        list.push_back("exact");
        continue;
      }
      const double p = std::log(a / b) / std::log(resolutions[i] / resolutions[i + 1]);
      list.push_back(p);
      ok = ok && p >= opt.min_order;
    }
    orders[names[m]] = list;
  }
  rep.body["nonlinearity"] = nl.name();
  rep.body["coupling"] = nl.coupling();
  rep.body["errors"] = table;
  rep.body["orders"] = orders;
  rep.body["min_order"] = opt.min_order;
  rep.passed = ok;
  rep.body["passed"] = ok;
  return rep;
}

Report selftest() {
  Report rep;
  rep.name = "selftest";
  Json items = Json::array();
  auto check = [&](const std::string &name, double value, double limit) {
    const bool ok = std::isfinite(value) && value <= limit;
    items.push_back({{"name", name}, {"value", value}, {"limit", limit}, {"passed", ok}});
    rep.passed = rep.passed && ok;
  };
  auto guarded = [&](const std::string &name, const std::function<void()> &fn) {
    try {
      fn();
    } catch (const Error &e) {
      items.push_back({{"name", name}, {"passed", false}, {"error", e.what()}});
      rep.passed = false;
    }
  };

  const double h = 1.0 / 128.0;
  const Nonlinearity quintic = Nonlinearity::quintic(1.0);
  const Nonlinearity lin = Nonlinearity::linear();
  const BumpSpec bump{BumpSpec::Kind::poly, 3, 1.0, 1.0, 0.5};
  const CauchyData d1 = psi_datum(bump, h);

  guarded("closed_form_F_half", [&] {
    const RadiationProfile F = linear_radiation(d1);
    check("closed_form_F_half", std::abs(F.at(0.5) - 0.10546875), 1e-12);
  });
  guarded("linear_inverse_roundtrip", [&] {
    const CauchyData back = inverse_linear_radiation(linear_radiation(d1));
    double m = 0.0;
    for (std::size_t j = 1; j < d1.size(); ++j)
      m = std::max(m, std::abs(back.psi[j] - d1.psi[j]));
    check("linear_inverse_roundtrip", m, 1e-12);
  });
  guarded("linear_tr_oracle", [&] {
    const RadiationProfile F = forward_radiation(d1, lin, 8.0).F;
    const RadiationProfile C = linear_radiation(d1);
    check("linear_tr_oracle", l2_distance(F, C) / l2_norm_cylinder(C), 1e-3);
  });
  guarded("zero_inverse", [&] {
    const RadiationProfile Z(-1.0, h, std::vector<double>(257, 0.0));
    const InverseResult r = inverse_radiation(Z, quintic);
    check("zero_inverse", std::max(r.data.phi.max_abs(), r.data.psi.max_abs()), 0.0);
  });
  guarded("linear_A_is_minus_identity", [&] {
    const RadiationProfile F = linear_radiation(d1);
    const ScatteringResult A = scattering_A(F, lin);
    check("linear_A_is_minus_identity",
          l2_distance(A.AF, combine(-1.0, F, 0.0, F)), 1e-12);
  });
  guarded("linear_S_identity", [&] {
    const ScatteringSResult S = scattering_S(d1, lin);
    double m = 0.0;
    for (std::size_t j = 1; j < d1.size(); ++j)
      m = std::max(m, std::abs(S.data.psi[j] - d1.psi[j]));
    check("linear_S_identity", m, 1e-12);
  });
  guarded("energy_identity_a03", [&] {
    const CauchyData d = d1.scaled(0.3);
    const double E = energy(d, quintic).total;
    const double n = l2_norm_cylinder(forward_radiation(d, quintic, 8.0).F);
    check("energy_identity_a03", std::abs(n * n - E) / E, 1e-2);
  });
  guarded("goursat_corner_zero", [&] {
    const CharGrid g = solve_goursat(d1, quintic, 4.0, h);
    check("goursat_corner_zero",
          max_abs_below(forward_radiation_goursat(g, h), -1.0), 0.0);
  });
  guarded("roundtrip_a03", [&] {
    const CauchyData d = d1.scaled(0.3);
    const auto S = static_cast<long long>(std::llround(5.0 / h));
    const RadiationProfile F = plus_map(d, quintic, 8.0, 3.0, -S, S);
    const InverseResult r = inverse_radiation(F, quintic);
    check("roundtrip_a03",
          linear_energy_distance(r.data, d) / linear_energy_norm(d), 1e-3);
    check("roundtrip_a03_residual", r.residual, 1e-6 * l2_norm_cylinder(F));
  });
  guarded("time_reversal", [&] {
    const CauchyData d(RadialProfile::sample(bump, h, 1.0 + 2.0 * h),
                       d1.psi.scaled(0.5), 1.0);
    const RadiationProfile Fm = backward_radiation(d, quintic, 6.0).F;
    const RadiationProfile Fp = forward_radiation(d.time_reversed(), quintic, 6.0).F;
    double m = 0.0;
    for (std::size_t k = 0; k < Fm.size(); ++k)
      m = std::max(m, std::abs(Fm[k] + Fp.at(-Fm.s(k))));
    check("time_reversal", m, 1e-12);
  });
  rep.body["items"] = items;
  rep.body["passed"] = rep.passed;
  return rep;
}

} // namespace nullrad
