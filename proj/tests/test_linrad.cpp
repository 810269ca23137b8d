#include "support.hpp"

#include "nullrad/linrad.hpp"
#include "nullrad/slwave.hpp"

#include <doctest.h>

using namespace nullrad;
using testing::bump;
using testing::pi;

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v)
    m = std::max(m, std::abs(x));
  return m;
}

} // namespace

TEST_CASE("linear_radiation_psi closed forms") {
  const double h = 1.0 / 256.0;
  CHECK(max_abs(linear_radiation_psi(RadialProfile::zeros(h, 50)).values()) == 0.0);

  const CauchyData d = testing::psi_bump(h);
  const RadiationProfile F = linear_radiation_psi(d.psi);
  CHECK(F.first_index() == -static_cast<long long>(d.size() - 1));
  CHECK(F.at(0.5) == doctest::Approx(0.10546875).epsilon(1e-14));
  for (std::size_t k = 0; k < F.size(); ++k)
    CHECK(F[k] == doctest::Approx(0.5 * F.s(k) * bump(F.s(k), 3)).epsilon(1e-14));

  // indicator of the unit ball
  const RadialProfile ind = RadialProfile::sample(
      [](double r) { return r <= 1.0 ? 1.0 : 0.0; }, 0.125, 2.0);
  const RadiationProfile G = linear_radiation_psi(ind);
  for (std::size_t k = 0; k < G.size(); ++k)
    CHECK(G[k] == 0.5 * G.s(k) * (std::abs(G.s(k)) <= 1.0 ? 1.0 : 0.0));
}

TEST_CASE("linear_radiation_phi closed forms") {
  const double h = 1.0 / 256.0;
  CHECK(max_abs(linear_radiation_phi(RadialProfile::zeros(h, 50)).values()) == 0.0);
  const RadialProfile phi =
      RadialProfile::sample([](double r) { return bump(r, 2); }, h, 1.5);
  const RadiationProfile F = linear_radiation_phi(phi);
  // centered difference: phi(h) / 2 = 1/2 - h^2 + O(h^4)
  CHECK(std::abs(F.at(0.0) - 0.5) < 1.01 * h * h);
  // int F ds = 0: s phi(|s|) is odd and compactly supported
  double sum = 0.0;
  for (double v : F.values())
    sum += v;
  CHECK(std::abs(sum * h) < 1e-14);
  // second order away from the kink at |s| = 1
  const RadialProfile smooth =
      RadialProfile::sample([](double r) { return bump(r, 4); }, h, 1.5);
  const RadiationProfile S = linear_radiation_phi(smooth);
  double err = 0.0;
  for (std::size_t k = 0; k < S.size(); ++k) {
    const double s = S.s(k);
    const double exact = std::abs(s) < 1.0
                             ? 0.5 * (std::pow(1 - s * s, 4) - 8 * s * s * std::pow(1 - s * s, 3))
                             : 0.0;
    err = std::max(err, std::abs(S[k] - exact));
  }
  CHECK(err < 50.0 * h * h);
}

TEST_CASE("linear_radiation sums the parts and is isometric with the 1/2") {
  const double h = 1e-3;
  const RadialProfile phi =
      RadialProfile::sample([](double r) { return 0.7 * bump(r, 4); }, h, 1.5);
  const RadialProfile psi =
      RadialProfile::sample([](double r) { return bump(r, 3); }, h, 1.5);
  const CauchyData d(phi, psi, 1.0);
  const RadiationProfile F = linear_radiation(d);
  const RadiationProfile A = linear_radiation_psi(psi);
  const RadiationProfile B = linear_radiation_phi(phi);
  for (std::size_t k = 0; k < F.size(); ++k)
    CHECK(F[k] == doctest::Approx(A[k] + B[k]).epsilon(1e-15));
  // Plancherel: |F|^2 = 1/2 E^2, with E^2 from the exact moments
  //   int r^2 psi^2 = B(3/2,7)/2,  int r^2 phi'^2 = 0.49 * 64 int r^4 (1-r^2)^6
  const double psi2 = testing::beta_moment(6);
  const double phi2 = 0.49 * 64.0 * 0.5 * std::tgamma(2.5) * std::tgamma(7.0) / std::tgamma(9.5);
  const double E2 = 4.0 * pi * (psi2 + phi2);
  // psi part: samples of the closed form, exact up to quadrature
  const double na = l2_norm_cylinder(A);
  CHECK(std::abs(na * na / (4.0 * pi * psi2) - 0.5) < 0.5e-12);
  // phi part: the centered difference in s costs O(dr^2)
  const double n = l2_norm_cylinder(F);
  CHECK(std::abs(n * n / E2 - 0.5) < 0.5e-4);
  const double En = linear_energy_norm(d);
  CHECK(std::abs(n * n / (En * En) - 0.5) < 0.5e-4);
}

TEST_CASE("linear_radiation_minus is minus the forward field") {
  const double h = 1.0 / 256.0;
  const RadialProfile phi =
      RadialProfile::sample([](double r) { return bump(r, 4); }, h, 1.5);
  const CauchyData d(phi, testing::psi_bump(h).psi.padded(phi.size()), 1.0);
  const RadiationProfile P = linear_radiation(d);
  const RadiationProfile M = linear_radiation_minus(d);
  REQUIRE(P.size() == M.size());
  for (std::size_t k = 0; k < P.size(); ++k)
    CHECK(M[k] == -P[k]);
}

TEST_CASE("inverse_linear_radiation") {
  const double h = 1.0 / 512.0;
  const RadiationProfile Z(-1.0, h, std::vector<double>(1025, 0.0));
  const CauchyData z = inverse_linear_radiation(Z);
  CHECK(z.phi.max_abs() == 0.0);
  CHECK(z.psi.max_abs() == 0.0);

  // F = s (1 - s^2)^3 / 2 -> (0, (1 - r^2)^3)
  const RadiationProfile Fo = RadiationProfile::sample(
      [](double s) { return 0.5 * s * bump(s, 3); }, -1.5, h, 1537);
  const CauchyData a = inverse_linear_radiation(Fo);
  double e = 0.0;
  for (std::size_t j = 1; j < a.size(); ++j)
    e = std::max(e, std::abs(a.psi[j] - bump(a.psi.r(j), 3)));
  CHECK(e < 1e-12);
  // r = 0 by quadratic extrapolation
  CHECK(std::abs(a.psi[0] - 1.0) < 20.0 * std::pow(h, 4));
  CHECK(a.phi.max_abs() < 1e-15);
  CHECK(a.support_radius <= 1.0 + 2 * h);

  // F = d/ds (s (1 - s^2)^3) / 2 -> ((1 - r^2)^3, 0)
  const RadiationProfile Fe = RadiationProfile::sample(
      [](double s) {
        return std::abs(s) < 1.0
                   ? 0.5 * (std::pow(1 - s * s, 3) - 6 * s * s * std::pow(1 - s * s, 2))
                   : 0.0;
      },
      -1.5, h, 1537);
  const CauchyData b = inverse_linear_radiation(Fe);
  double ep = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j)
    ep = std::max(ep, std::abs(b.phi[j] - bump(b.phi.r(j), 3)));
  CHECK(ep < 5.0 * h * h);
  CHECK(b.psi.max_abs() < 1e-15);

  // round trip through the closed form
  const CauchyData d = testing::phi_bump(h, 0.5);
  const RadiationProfile F = linear_radiation(d);
  const RadiationProfile G = linear_radiation(inverse_linear_radiation(F));
  CHECK(testing::max_diff(F.values(), G.values()) < 1e-12);

  // an even profile with nonzero mean has no compactly supported preimage
  const RadiationProfile box = RadiationProfile::sample(
      [](double s) { return std::abs(s) < 0.5 ? 1.0 : 0.0; }, -1.0, h, 1025);
  try {
    inverse_linear_radiation(box);
    FAIL("expected non_invertible");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::non_invertible);
  }
  CHECK_NOTHROW(inverse_linear_radiation(box, {1e300}));
}

TEST_CASE("project_zero_mean") {
  const double h = 1.0 / 128.0;
  const RadiationProfile box = RadiationProfile::sample(
      [](double s) { return std::abs(s) < 0.5 ? 1.0 + s : 0.0; }, -1.0, h, 257);
  CHECK(std::abs(even_part_mean(box)) > 0.5);
  const RadiationProfile P = project_zero_mean(box);
  CHECK(std::abs(even_part_mean(P)) < 1e-14);
  CHECK(P.support_min(1e-12) >= box.support_min(1e-12) - 1e-12);
  CHECK_NOTHROW(inverse_linear_radiation(P));
}

TEST_CASE("linear_evolve") {
  const double h = 1.0 / 256.0;
  const CauchyData z = CauchyData::zero(h, 2000);
  const SolutionField s0 = linear_evolve(z, nullptr, 2.0);
  CHECK(max_abs(s0.w) == 0.0);

  const CauchyData d = prepare_domain(testing::psi_bump(h), 5.0);
  const SolutionField sol = linear_evolve(d, nullptr, 5.0);
  // finite speed: w = 0 for t - r <= -R
  double outside = 0.0;
  for (std::size_t n = 0; n <= sol.N; ++n)
    for (std::size_t j = 0; j <= sol.J; ++j)
      if (static_cast<double>(n) - static_cast<double>(j) <= -1.0 / h)
        outside = std::max(outside, std::abs(sol.w_at(n, j)));
  CHECK(outside == 0.0);

  // at t = 5, -d_t w along t - r = s is F(s) = s psi(|s|) / 2. d_t w comes
  // from fourth-order time differences: O(h^4) where psi is smooth, O(h^3)
  // at the C^2 edge |s| = 1.
  auto wt_error = [](double hh, double s_cap) {
    const CauchyData dd = prepare_domain(testing::psi_bump(hh), 5.0);
    const SolutionField ss = linear_evolve(dd, nullptr, 5.0);
    const auto K = static_cast<long long>(std::llround(1.0 / hh));
    double err = 0.0;
    for (long long k = -K; k <= K; ++k) {
      const double s = static_cast<double>(k) * hh;
      if (std::abs(s) > s_cap)
        continue;
      const auto j = static_cast<std::size_t>(static_cast<long long>(ss.N) - k);
      err = std::max(err, std::abs(-ss.wt_at(ss.N, j) - 0.5 * s * bump(s, 3)));
    }
    return err;
  };
  CHECK(wt_error(1.0 / 512, 0.9) < 1e-10);
  CHECK(wt_error(1.0 / 256, 0.9) / wt_error(1.0 / 512, 0.9) > 14.0);
  CHECK(wt_error(1.0 / 256, 1.0) / wt_error(1.0 / 512, 1.0) > 7.0);

  try {
    linear_evolve(testing::psi_bump(h), nullptr, 5.0);
    FAIL("expected domain_too_small");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::domain_too_small);
  }
}

TEST_CASE("duhamel_plane_integral") {
  const double h = 1.0 / 256.0;
  PlanarSource z{h, 256, 256, std::vector<double>(257 * 257, 0.0)};
  CHECK(duhamel_plane_integral(z, 0.0) == 0.0);

  PlanarSource one{h, 256, 256, std::vector<double>(257 * 257, 1.0)};
  CHECK(duhamel_plane_integral(one, 0.0) == doctest::Approx(2.0 * pi / 3.0).epsilon(1e-12));
  // int_0^1 int_{r >= |p|} r dr dp over the apex s = 1/2 plane, t = 1/2 + p in [0, 1]
  const double half = 2.0 * pi * (0.5 * 1.0 - (std::pow(0.5, 3) + std::pow(0.5, 3)) / 6.0);
  CHECK(duhamel_plane_integral(one, 0.5) == doctest::Approx(half).epsilon(1e-12));
  CHECK(2.0 * pi / 3.0 == doctest::Approx(2.094395).epsilon(1e-6));
  CHECK(duhamel_plane_integral(one, -1.0 - 2 * h) == 0.0);
  try {
    duhamel_plane_integral(one, 1.5);
    FAIL("expected out_of_range");
  } catch (const Error &err) {
    CHECK(err.kind() == ErrorKind::out_of_range);
  }
}

TEST_CASE("fourier_diagnostic") {
  const double h = 1e-3;
  const std::vector<double> lambdas = [] {
    std::vector<double> l;
    for (int i = -40; i <= 40; ++i)
      l.push_back(0.5 * i);
    return l;
  }();
  const RadialProfile zero = RadialProfile::zeros(h, 1500);
  CHECK(fourier_diagnostic(linear_radiation_psi(zero), zero, lambdas) == 0.0);

  const CauchyData d = testing::psi_bump(h);
  const RadiationProfile F = linear_radiation_psi(d.psi);
  const std::vector<double> l0 = {0.0};
  CHECK(fourier_diagnostic(F, d.psi, l0) < 1e-15);
  CHECK(fourier_diagnostic(F, d.psi, lambdas) < 1e-6);
}
