#include "nullrad/error.hpp"
#include "nullrad/nonlin.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace nullrad;

TEST_CASE("quintic evaluations") {
  const Nonlinearity q = Nonlinearity::quintic(1.0);
  CHECK(q.f(2.0) == 32.0);
  CHECK(q.f(0.0) == 0.0);
  CHECK(Nonlinearity::quintic(0.5).f(-1.0) == -0.5);

  CHECK(q.fprime(1.0) == 5.0);
  CHECK(q.fprime(0.0) == 0.0);
  CHECK(Nonlinearity::quintic(2.0).fprime(-1.0) == 10.0);

  CHECK(q.P(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(q.P(0.0) == 0.0);
  CHECK(Nonlinearity::quintic(3.0).P(-1.0) == doctest::Approx(0.5).epsilon(1e-15));

  for (double x : {0.0, 0.1, 1.0, 7.0})
    CHECK(q.f_tilde(x, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.f_tilde(0.4, 0.0) == 0.0);
  CHECK(q.f_tilde(0.3, 2.0) == doctest::Approx(32.0).epsilon(1e-14));
}

TEST_CASE("oddness and consistency") {
  const Nonlinearity q = Nonlinearity::quintic(1.7);
  // f(u) = u^5 (1 + 1 / (1 + u^2)), between u^5 and 2 u^5
  const Nonlinearity c = Nonlinearity::custom(
      "saturating", [](double s) { return s * s * (1.0 + 1.0 / (1.0 + s)); },
      [](double s) { return 2.0 * s * (1.0 + 1.0 / (1.0 + s)) - s * s / ((1.0 + s) * (1.0 + s)); });
  for (const Nonlinearity *nl : {&q, &c}) {
    for (double u : {0.1, 0.7, 1.3, 2.5}) {
      CHECK(nl->f(-u) == -nl->f(u));
      CHECK(nl->fprime(-u) == nl->fprime(u));
      CHECK(nl->P(-u) == doctest::Approx(nl->P(u)).epsilon(1e-14));
      // P' = f and f' by centered differences
      const double e = 1e-5;
      CHECK((nl->P(u + e) - nl->P(u - e)) / (2 * e) ==
            doctest::Approx(nl->f(u)).epsilon(1e-8));
      CHECK((nl->f(u + e) - nl->f(u - e)) / (2 * e) ==
            doctest::Approx(nl->fprime(u)).epsilon(1e-8));
    }
  }
  // P(1) = int_0^1 u^5 + u^5 / (1 + u^2) du = 1/6 + 1/4 - 1/2 + ln(2)/2
  CHECK(c.P(1.0) == doctest::Approx(1.0 / 6.0 - 0.25 + 0.5 * std::log(2.0)).epsilon(1e-12));
  // x -> 0 limit of x^-5 f(x v) is 2 v^5
  CHECK(c.f_tilde(0.0, 2.0) == doctest::Approx(64.0).epsilon(1e-6));
  const AssumptionReport a = validate_assumptions(c, std::vector<double>{-3, -1, -0.1, 0.1, 1, 3});
  CHECK(a.all_pass());
  CHECK(a.c1 >= 1.0);
  CHECK(a.c2 <= 2.0);
  CHECK(c.f_tilde(0.5, 2.0) == doctest::Approx(std::pow(0.5, -5) * c.f(1.0)).epsilon(1e-14));
  CHECK(c.P_tilde(0.5, 2.0) == doctest::Approx(std::pow(0.5, -6) * c.P(1.0)).epsilon(1e-12));
  CHECK(q.P_tilde(0.2, 1.5) == doctest::Approx(1.7 * std::pow(1.5, 6) / 6.0).epsilon(1e-14));
}

TEST_CASE("radial source") {
  const Nonlinearity q = Nonlinearity::quintic(1.0);
  CHECK(q.radial_source(0.0, 0.3) == 0.0);
  CHECK(q.radial_source(0.5, 0.25) == doctest::Approx(0.5 * std::pow(0.5, 5)).epsilon(1e-15));
  CHECK(q.radial_source_dw(0.5, 0.25) == doctest::Approx(5.0 * std::pow(0.5, 4)).epsilon(1e-15));
  CHECK(q.radial_source_dw(0.0, 0.25) == 0.0);
  CHECK(Nonlinearity::linear().is_linear());
  CHECK_FALSE(q.is_linear());
}

TEST_CASE("constructors reject bad input") {
  CHECK_THROWS_AS(Nonlinearity::quintic(-1.0), Error);
  CHECK_THROWS_AS(Nonlinearity::quintic(std::nan("")), Error);
  CHECK_THROWS_AS(Nonlinearity::custom("x", nullptr, [](double) { return 0.0; }), Error);
}

TEST_CASE("validate_assumptions") {
  const std::vector<double> u = {2.0, -2.0, 1.0, -1.0, 0.5, -0.5};
  const AssumptionReport q = validate_assumptions(Nonlinearity::quintic(1.0), u);
  CHECK(q.all_pass());
  CHECK(q.c1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.c2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.derivative_ratio_min == doctest::Approx(5.0));
  CHECK(q.derivative_ratio_max == doctest::Approx(5.0));
  CHECK_FALSE(q.linear_mode);

  const Nonlinearity neg = Nonlinearity::custom(
      "negative", [](double) { return -1.0; }, [](double) { return 0.0; });
  const AssumptionReport n = validate_assumptions(neg, u);
  CHECK_FALSE(n.nonneg_f0.pass);
  CHECK(n.nonneg_f0.witness == 2.0);
  CHECK_FALSE(n.all_pass());

  const AssumptionReport l = validate_assumptions(Nonlinearity::linear(), u);
  CHECK(l.linear_mode);
  CHECK_FALSE(l.quintic_bound.pass);
  CHECK(l.c1 == 0.0);
  CHECK(l.nonneg_f0.pass);

  CHECK_THROWS_AS(validate_assumptions(Nonlinearity::quintic(), std::vector<double>{}), Error);
}
