#include "support.hpp"

#include "nullrad/linrad.hpp"
#include "nullrad/radfield.hpp"
#include "nullrad/slwave.hpp"

#include <doctest.h>

using namespace nullrad;
using testing::bump;

namespace {

const Nonlinearity kQuintic = Nonlinearity::quintic(1.0);
const Nonlinearity kLinear = Nonlinearity::linear();

ErrorKind kind_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::io;
}

} // namespace

TEST_CASE("solve_tr degenerate cases") {
  const double h = 1.0 / 128.0;
  const SolutionField z = solve_tr(prepare_domain(CauchyData::zero(h, 10), 2.0), kQuintic, 2.0);
  for (double v : z.w)
    REQUIRE(v == 0.0);

  const CauchyData d = prepare_domain(testing::psi_bump(h, 0.5), 3.0);
  const SolutionField a = solve_tr(d, kLinear, 3.0);
  const SolutionField b = linear_evolve(d, nullptr, 3.0);
  REQUIRE(a.w.size() == b.w.size());
  CHECK(testing::max_diff(a.w, b.w) < 1e-12);
  CHECK(testing::max_diff(a.wt, b.wt) < 1e-12);
}

TEST_CASE("solve_tr errors") {
  const double h = 1.0 / 64.0;
  const CauchyData d = prepare_domain(testing::psi_bump(h), 2.0);
  CHECK(kind_of([&] { solve_tr(d, kQuintic, 2.0, {h / 2}); }) == ErrorKind::configuration);
  CHECK(kind_of([&] { solve_tr(testing::psi_bump(h), kQuintic, 2.0); }) ==
        ErrorKind::domain_too_small);
  CHECK(kind_of([&] { solve_tr(d, kQuintic, 1.0 + h / 3); }) == ErrorKind::configuration);
  // large focusing-size data overflows the blowup guard
  TrOptions tight;
  tight.blowup_limit = 1e-3;
  CHECK(kind_of([&] { solve_tr(d, kQuintic, 2.0, tight); }) == ErrorKind::blowup_detected);
}

TEST_CASE("finite speed and energy conservation") {
  const double h = 1.0 / 512.0;
  const CauchyData d = prepare_domain(testing::psi_bump(h, 0.1), 4.0);
  const SolutionField sol = solve_tr(d, kQuintic, 4.0);
  double outside = 0.0;
  for (std::size_t n = 0; n <= sol.N; ++n)
    for (std::size_t j = n + 512; j <= sol.J; ++j)
      outside = std::max(outside, std::abs(sol.w_at(n, j)));
  CHECK(outside == 0.0);
  for (std::size_t n = 0; n <= sol.N; n += 37)
    CHECK(sol.w_at(n, 0) == 0.0);

  const DiagnosticSeries ds = diagnostics(sol, kQuintic);
  const double E0 = energy(d, kQuintic).total;
  double drift = 0.0;
  for (const EnergyReport &e : ds.slices)
    drift = std::max(drift, std::abs(e.total - E0) / E0);
  CHECK(drift < 1e-4);
}

TEST_CASE("energy drift is second order") {
  auto drift = [](double h) {
    const CauchyData d = prepare_domain(testing::psi_bump(h, 0.5), 4.0);
    const SolutionField sol = solve_tr(d, kQuintic, 4.0);
    const DiagnosticSeries ds = diagnostics(sol, kQuintic);
    const double E0 = energy(d, kQuintic).total;
    double m = 0.0;
    for (const EnergyReport &e : ds.slices)
      m = std::max(m, std::abs(e.total - E0) / E0);
    return m;
  };
  CHECK(drift(1.0 / 128) / drift(1.0 / 256) >= 3.5);
}

TEST_CASE("time reversal of the evolution") {
  const double h = 1.0 / 128.0;
  const RadialProfile phi =
      RadialProfile::sample([](double r) { return 0.4 * bump(r, 4); }, h, 1.0 + 2 * h);
  const CauchyData d0(phi, testing::psi_bump(h, 0.3).psi, 1.0);
  const double T = 2.0;
  const SolutionField fwd = solve_tr(prepare_domain(d0, 2 * T), kQuintic, T);
  // evolve the reversed slice at T back for time T
  const CauchyData back = prepare_domain(fwd.slice(fwd.N).time_reversed(), T);
  const SolutionField rev = solve_tr(back, kQuintic, T);
  const CauchyData end = rev.slice(rev.N).time_reversed();
  double e = 0.0;
  for (std::size_t j = 1; j < d0.size(); ++j)
    e = std::max(e, std::abs(end.phi[j] - d0.phi[j]));
  CHECK(e < 1e-4);
}

TEST_CASE("diagnostics") {
  const double h = 1.0 / 128.0;
  const SolutionField z = solve_tr(prepare_domain(CauchyData::zero(h, 10), 1.0), kQuintic, 1.0);
  for (const EnergyReport &e : diagnostics(z, kQuintic).slices) {
    CHECK(e.total == 0.0);
    CHECK(e.l6_norm == 0.0);
    CHECK(e.l5l10_partial == 0.0);
    CHECK(e.decay_constant == 0.0);
  }

  const CauchyData d = prepare_domain(testing::psi_bump(h), 3.0);
  const DiagnosticSeries lin = diagnostics(solve_tr(d, kLinear, 3.0), kLinear);
  for (std::size_t n = 1; n < lin.scheme_energy.size(); ++n)
    CHECK(std::abs(lin.scheme_energy[n] - lin.scheme_energy[n - 1]) <
          1e-12 * lin.scheme_energy[0]);

  // L6 decay by T = 8R
  const RadialProfile phi =
      RadialProfile::sample([](double r) { return 0.3 * bump(r, 4); }, h, 1.0 + 2 * h);
  const CauchyData q = prepare_domain(CauchyData(phi, testing::psi_bump(h, 0.3).psi, 1.0), 8.0);
  const SolutionField sol = solve_tr(q, kQuintic, 8.0);
  const DiagnosticSeries ds = diagnostics(sol, kQuintic);
  CHECK(ds.slices.front().l6_norm > 0.0);
  CHECK(ds.slices.back().l6_norm < ds.slices.front().l6_norm / 10.0);
  CHECK(ds.slices.back().decay_constant > 0.0);
  CHECK(ds.slices.back().l5l10_partial >= ds.slices[100].l5l10_partial);
}

TEST_CASE("solve_goursat") {
  const double h = 1.0 / 128.0;
  const CharGrid z = solve_goursat(testing::psi_bump(h, 0.0), kQuintic, 4.0, h);
  for (double v : z.v)
    REQUIRE(v == 0.0);

  const CauchyData d = testing::psi_bump(h, 1.0);
  const CharGrid g = solve_goursat(d, kQuintic, 4.0, h);
  // corner mu, nu <= 1/R is exactly zero
  for (std::size_t i = 0; i <= g.M && g.mu(i) <= 1.0; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      REQUIRE(g.at(i, j) == 0.0);
  CHECK(g.iterations_max <= 50);

  CHECK(kind_of([&] { solve_goursat(d, kQuintic, 0.5, h); }) == ErrorKind::configuration);
  CHECK(kind_of([&] { solve_goursat(d, kQuintic, 4.0, 0.5); }) == ErrorKind::resolution);
}

TEST_CASE("Goursat trace reproduces the linear closed form at second order") {
  auto err = [](double h) {
    const CauchyData d = testing::psi_bump(h);
    const CharGrid g = solve_goursat(d, kLinear, 4.0, h);
    const RadiationProfile F = forward_radiation_goursat(g, h);
    double e = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k)
      e = std::max(e, std::abs(F[k] - 0.5 * F.s(k) * bump(F.s(k), 3)));
    return e;
  };
  const double e1 = err(1.0 / 128), e2 = err(1.0 / 256);
  CHECK(e2 < 1e-3);
  CHECK(e1 / e2 >= 3.5);
}

TEST_CASE("characteristic energy flux") {
  const double h = 1.0 / 128.0;
  const CharGrid z = solve_goursat(testing::psi_bump(h, 0.0), kQuintic, 4.0, h);
  CHECK(char_energy_flux_check(z, kQuintic).residual == 0.0);

  const double hf = 1e-3;
  const CharGrid lin = solve_goursat(testing::psi_bump(hf), kLinear, 4.0, hf);
  CHECK(char_energy_flux_check(lin, kLinear).residual < 1e-3);

  auto res = [](double hh) {
    const CharGrid g = solve_goursat(testing::psi_bump(hh, 1.0), kQuintic, 4.0, hh);
    return char_energy_flux_check(g, kQuintic).residual;
  };
  const double r1 = res(1.0 / 128), r2 = res(1.0 / 256);
  CHECK(r1 / r2 >= 3.5);
}

TEST_CASE("engines agree at second order") {
  auto gap = [](double h) {
    const CauchyData d = testing::psi_bump(h, 1.0);
    const SolutionField sol = solve_tr(prepare_domain(d, 4.0), kQuintic, 4.0);
    const CharGrid g = solve_goursat(d, kQuintic, 4.0, h);
    return engine_agreement(sol, g);
  };
  const double g1 = gap(1.0 / 64), g2 = gap(1.0 / 128);
  CHECK(g2 < 1e-3);
  CHECK(g1 / g2 >= 3.0);
}

TEST_CASE("march_levels continues the leapfrog") {
  const double h = 1.0 / 128.0;
  const CauchyData d = prepare_domain(testing::psi_bump(h, 0.5), 2.0);
  const SolutionField sol = solve_tr(d, kQuintic, 2.0);
  const std::size_t C = sol.cols();
  const std::vector<double> prev(sol.w_row(99), sol.w_row(99) + C);
  const std::vector<double> cur(sol.w_row(100), sol.w_row(100) + C);
  const std::vector<double> out = march_levels(prev, cur, 50, h, kQuintic);
  REQUIRE(out.size() == 52 * C);
  double e = 0.0;
  for (std::size_t j = 0; j < C; ++j)
    e = std::max(e, std::abs(out[51 * C + j] - sol.w_at(150, j)));
  CHECK(e == 0.0);
  const std::vector<double> shorter(C - 1, 0.0);
  CHECK(kind_of([&] { march_levels(prev, shorter, 5, h, kQuintic); }) == ErrorKind::grid_mismatch);
}
