// Acceptance battery: one PASS/FAIL line per criterion, details indented
// below. Exit status is nonzero when any criterion fails.

#include "nullrad/linrad.hpp"
#include "nullrad/radfield.hpp"
#include "nullrad/scatter.hpp"
#include "nullrad/slwave.hpp"
#include "nullrad/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace nullrad;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRef = 1.0 / 512.0;
constexpr double kT = 8.0;
const std::vector<double> kLevels = {1.0 / 128.0, 1.0 / 256.0, 1.0 / 512.0};

const Nonlinearity kQuintic = Nonlinearity::quintic(1.0);
const Nonlinearity kLinear = Nonlinearity::linear();

int failures = 0;

void verdict(int id, const std::string &title, bool ok) {
  std::printf("%s %2d %s\n", ok ? "PASS" : "FAIL", id, title.c_str());
  std::fflush(stdout);
  if (!ok)
    ++failures;
}

template <class... A> void note(const char *fmt, A... args) {
  std::printf("        ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double bump(double r, int k) {
  const double x = 1.0 - r * r;
  return std::abs(r) < 1.0 ? std::pow(x, k) : 0.0;
}

// psi = a (1 - r^2)^3, phi = b (1 - r^2)^4
CauchyData datum(double h, double a, double b = 0.0) {
  const double R = 1.0 + 2.0 * h;
  const RadialProfile psi =
      RadialProfile::sample([=](double r) { return a * bump(r, 3); }, h, R);
  const RadialProfile phi =
      RadialProfile::sample([=](double r) { return b * bump(r, 4); }, h, R);
  return CauchyData(phi, psi, 1.0);
}

CauchyData spec_datum(const BumpSpec &s, double h) {
  const RadialProfile psi = RadialProfile::sample(s, h, s.R + 2.0 * h);
  return CauchyData(RadialProfile::zeros(h, psi.size()), psi, s.R);
}

double half_beta(double x, double y) {
  return 0.5 * std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y);
}

double order(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

double rel(const RadiationProfile &F, const RadiationProfile &G) {
  return l2_distance(F, G) / l2_norm_cylinder(G);
}

std::vector<double> orders_of(const Json &rep, const char *key) {
  std::vector<double> out;
  for (const Json &v : rep["orders"][key])
    out.push_back(v.is_number() ? v.get<double>() : INFINITY);
  return out;
}

double error_at(const Json &rep, const char *key, std::size_t level) {
  return rep["errors"][level][key].get<double>();
}

bool all_at_least(const std::vector<double> &p, double m) {
  for (double x : p)
    if (!(x >= m))
      return false;
  return true;
}

std::string list(const std::vector<double> &p) {
  std::string s;
  for (double x : p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.2f", s.empty() ? "" : ", ", x);
    s += buf;
  }
  return "[" + s + "]";
}

// ---------------------------------------------------------------------------

void c1_linear_oracle() {
  std::vector<double> err;
  for (double h : kLevels) {
    const CauchyData d = datum(h, 1.0);
    const RadiationProfile F = forward_radiation(d, kLinear, kT).F;
    std::vector<double> exact(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) {
      const double s = F.s(k);
      exact[k] = 0.5 * s * bump(s, 3);
    }
    err.push_back(rel(F, RadiationProfile(F.s_min(), F.ds(), exact)));
  }
  const std::vector<double> p = {order(err[0], err[1]), order(err[1], err[2])};
  note("rel L2 error at dr = 1/128, 1/256, 1/512: %.3e %.3e %.3e", err[0], err[1], err[2]);
  note("orders %s", list(p).c_str());
  verdict(1, "linear closed-form oracle", err[2] < 1e-4 && all_at_least(p, 1.8));
}

void c2_plancherel() {
  const double h = 1e-3;
  // 4 pi int psi^2 r^2 and 4 pi int phi'^2 r^2 for the bumps
  const double psi2 = 4.0 * kPi * half_beta(1.5, 7.0);
  const double dphi2 = 4.0 * kPi * 64.0 * half_beta(2.5, 7.0);

  const RadiationProfile F = linear_radiation(datum(h, 1.0));
  const double n2 = std::pow(l2_norm_cylinder(F), 2);
  const double c_ref = n2 / psi2;
  const double e_ref = std::abs(n2 - 0.5 * psi2) / (0.5 * psi2);

  const RadiationProfile G = linear_radiation(datum(h, 1.0, 1.0));
  const double m2 = std::pow(l2_norm_cylinder(G), 2);
  const double c_mix = m2 / (psi2 + dphi2);
  const double e_mix = std::abs(m2 - 0.5 * (psi2 + dphi2)) / (0.5 * (psi2 + dphi2));

  note("(0, psi): |R|^2 / (4 pi int psi^2 r^2) = %.10f, rel error vs 1/2 %.3e", c_ref, e_ref);
  note("(phi, psi): constant %.10f, rel error vs 1/2 %.3e (O(dr^2) from phi')", c_mix, e_mix);
  verdict(2, "linear Plancherel, constant 1/2",
          e_ref < 1e-6 && std::abs(c_ref - 0.5) < 1e-4 && std::abs(c_mix - 0.5) < 1e-4);
}

// One convergence study per amplitude feeds criteria 1 (cross-check), 3, 4
// and 11.
std::vector<Json> studies;

void run_studies() {
  for (double a : {0.1, 0.3, 1.0}) {
    ConvergenceOptions opt;
    opt.T = kT;
    opt.T_c = kT;
    const Report r = convergence_study([=](double h) { return datum(h, a); }, kQuintic,
                                       kLevels, opt);
    Json j = r.body;
    j["a"] = a;
    studies.push_back(j);
  }
}

void c3_energy_identity() {
  bool ok = true;
  for (const Json &s : studies) {
    const double e = error_at(s, "energy_identity", 2);
    const std::vector<double> p = orders_of(s, "energy_identity");
    note("a = %.1f: defect %.3e at 1/512, orders %s", s["a"].get<double>(), e,
         list(p).c_str());
    ok = ok && e < 1e-2 && all_at_least(p, 1.8);
  }
  verdict(3, "nonlinear energy identity", ok);
}

void c4_energy_conservation() {
  bool ok = true;
  for (const Json &s : studies) {
    const double e = error_at(s, "energy_drift", 2);
    const std::vector<double> p = orders_of(s, "energy_drift");
    note("a = %.1f: relative drift %.3e at 1/512, orders %s", s["a"].get<double>(), e,
         list(p).c_str());
    ok = ok && e < 1e-4 && all_at_least(p, 1.8);
  }
  verdict(4, "energy conservation over [0, 8]", ok);
}

void c5_forward_support() {
  ForwardSupportOptions opt;
  opt.dr = kRef;
  opt.T = kT;
  const Report r = support_forward_check(test_family(harness_seed()), kQuintic, opt);
  double g = 0.0, t = 0.0;
  for (const Json &c : r.body["cells"]) {
    g = std::max(g, c["goursat_sup_below_minus_R"].get<double>());
    t = std::max(t, c["tr_sup_below_minus_R_2dr"].get<double>());
  }
  note("%zu cells; max Goursat |F| for s <= -R: %.3e; max (t, r) |F| for s <= -R - 2dr: %.3e",
       r.body["cells"].size(), g, t);
  verdict(5, "finite speed at null infinity", r.passed);
}

void c6_round_trip() {
  bool ok = true;
  const auto K = static_cast<long long>(5.0 / kRef);
  for (double a : {0.1, 0.3}) {
    const CauchyData d = datum(kRef, a);
    const RadiationProfile F = plus_map(d, kQuintic, kT, 3.0, -K, K);
    const double nF = l2_norm_cylinder(F);
    const InverseResult inv = inverse_radiation(F, kQuintic);
    const double e = linear_energy_distance(inv.data, d) / linear_energy_norm(d);
    note("a = %.1f: energy-norm error %.3e, residual / |F| %.3e, outer iterations %d%s", a, e,
         inv.residual / nF, inv.outer_iterations, inv.seed_used ? ", seeded" : "");
    ok = ok && e < 1e-3 && inv.residual < 1e-6 * nF;
  }
  verdict(6, "round trip through the inverse", ok);
}

// F = R_+ of the family data; the linear field is a valid scattering datum
std::vector<RadiationProfile> family_fields() {
  std::vector<RadiationProfile> out;
  for (const BumpSpec &s : test_family(harness_seed()))
    out.push_back(linear_radiation(spec_datum(s, kRef)));
  return out;
}

void c7_c8_scattering() {
  const std::vector<BumpSpec> fam = test_family(harness_seed());
  const std::vector<RadiationProfile> Fs = family_fields();
  bool ok7 = true, ok8 = true;
  double worst_lin = 0.0;
  for (std::size_t i = 0; i < Fs.size(); ++i) {
    const RadiationProfile &F = Fs[i];
    const ScatteringResult lin = scattering_A(F, kLinear);
    for (std::size_t k = 0; k < lin.AF.size(); ++k)
      worst_lin = std::max(worst_lin, std::abs(lin.AF[k] + F.at(lin.AF.s(k))));
    try {
      const ScatteringResult A = scattering_A(F, kQuintic);
      const ScatteringResult Af = scattering_A_formula(F, kQuintic);
      const double gap = l2_distance(A.AF, Af.AF) / l2_norm_cylinder(A.AF);
      note("%-28s unitarity %.3e, formula gap %.3e", fam[i].label().c_str(),
           A.unitarity_defect, gap);
      ok7 = ok7 && A.unitarity_defect < 1e-2;
      ok8 = ok8 && gap < 1e-2;
    } catch (const Error &e) {
      note("%-28s %s", fam[i].label().c_str(), e.what());
      ok7 = ok8 = false;
    }
  }
  note("c = 0: max |A F + F| = %.3e", worst_lin);
  verdict(7, "scattering unitarity and linear limit", ok7 && worst_lin < 1e-12);
  verdict(8, "scattering formula against composition", ok8);
}

void c9_support_theorem() {
  InverseSupportOptions opt;
  opt.dr = kRef;
  const Report r = support_inverse_check(test_family(harness_seed()), kQuintic, opt);
  for (const Json &c : r.body["cells"])
    note("%-28s rho %.4f, bound %.4f%s", c["G"].get<std::string>().c_str(),
         c["rho"].get<double>(), c["bound"].get<double>(),
         c["passed"].get<bool>() ? "" : "  <- fails");
  verdict(9, "support theorem harness", r.passed);
}

void c10_linearization() {
  const CauchyData d = datum(kRef, 1.0);
  const double T = 6.0;
  // the linear field runs through the same discrete pipeline
  const RadiationProfile L = forward_radiation(d, kLinear, T).F;
  const std::vector<double> eps = {0.01, 0.02, 0.04, 0.07, 0.1};
  std::vector<double> x, y;
  for (double e : eps) {
    const RadiationProfile F = forward_radiation(d.scaled(e), kQuintic, T).F;
    std::vector<double> diff(F.size());
    for (std::size_t k = 0; k < F.size(); ++k)
      diff[k] = F[k] - e * L.at(F.s(k));
    const double n = l2_norm_cylinder(RadiationProfile(F.s_min(), F.ds(), diff));
    x.push_back(std::log(e));
    y.push_back(std::log(n));
    note("eps = %.2f: |L_+(eps d) - eps R_+(d)| = %.3e", e, n);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  note("least-squares slope %.4f", slope);
  verdict(10, "perturbative linearization slope", std::abs(slope - 5.0) <= 0.3);
}

void c11_method_agreement() {
  bool ok = true;
  for (const Json &s : studies) {
    for (const char *k : {"gap_tr_goursat", "gap_tr_duhamel", "gap_duhamel_goursat"}) {
      const double e = error_at(s, k, 2);
      const std::vector<double> p = orders_of(s, k);
      note("a = %.1f %-20s %.3e at 1/512, orders %s", s["a"].get<double>(), k, e,
           list(p).c_str());
      ok = ok && e < 5e-3 && all_at_least(p, 1.8);
    }
  }
  verdict(11, "three forward routes agree", ok);
}

void c12_time_reversal() {
  const CauchyData d = datum(kRef, 0.3, 0.3);
  const RadiationProfile Fm = backward_radiation(d, kQuintic, kT).F;
  const RadiationProfile Fp = forward_radiation(d.time_reversed(), kQuintic, kT).F;
  double e = 0.0;
  for (std::size_t k = 0; k < Fm.size(); ++k)
    e = std::max(e, std::abs(Fm[k] + Fp.at(-Fm.s(k))));

  const CauchyData p = datum(kRef, 1.0);
  const double lin = rel(backward_radiation(p, kLinear, kT).F, linear_radiation_minus(p));
  const CauchyData m = datum(kRef, 1.0, 1.0);
  const double lin_mix = rel(backward_radiation(m, kLinear, kT).F, linear_radiation_minus(m));
  note("quintic: max |L_-(s) + L_+(tau data)(-s)| = %.3e", e);
  note("linear (0, psi): rel error against the closed form %.3e", lin);
  note("linear (phi, psi): %.3e (O(dr^2) from phi', reported)", lin_mix);
  verdict(12, "time-reversal identity", e < 1e-12 && lin < 1e-6);
}

} // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  auto guarded = [](int id, const char *title, const std::function<void()> &f) {
    try {
      f();
    } catch (const std::exception &e) {
      note("%s", e.what());
      verdict(id, title, false);
    }
  };
  guarded(1, "linear closed-form oracle", c1_linear_oracle);
  guarded(2, "linear Plancherel, constant 1/2", c2_plancherel);
  run_studies();
  guarded(3, "nonlinear energy identity", c3_energy_identity);
  guarded(4, "energy conservation over [0, 8]", c4_energy_conservation);
  guarded(5, "finite speed at null infinity", c5_forward_support);
  guarded(6, "round trip through the inverse", c6_round_trip);
  guarded(7, "scattering unitarity and formula", c7_c8_scattering);
  guarded(9, "support theorem harness", c9_support_theorem);
  guarded(10, "perturbative linearization slope", c10_linearization);
  guarded(11, "three forward routes agree", c11_method_agreement);
  guarded(12, "time-reversal identity", c12_time_reversal);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d failing criteria, %.1f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
