#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlkg/coeffs.hpp"

using namespace nlkg::coeffs;

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
// Reference: Gamma(2/3) to 17 digits, so Gamma(-1/3) = -3 Gamma(2/3).
constexpr double kGammaTwoThirds = 1.3541179394264004169;
}  // namespace

TEST_CASE("signed log gamma reproduces classic values") {
  auto g1 = log_gamma_signed(1.0);
  CHECK(g1.sign == 1);
  CHECK(std::abs(g1.log_abs) < 1e-13);

  auto gh = log_gamma_signed(0.5);
  CHECK(gh.sign == 1);
  CHECK(gh.log_abs == doctest::Approx(std::log(kSqrtPi)).epsilon(1e-13));

  auto gneg = log_gamma_signed(-1.0 / 3.0);
  CHECK(gneg.sign == -1);
  CHECK(std::exp(gneg.log_abs) ==
        doctest::Approx(3.0 * kGammaTwoThirds).epsilon(1e-12));

  CHECK(gamma_value(-0.5) == doctest::Approx(-2.0 * kSqrtPi).epsilon(1e-12));
  // Gamma(-5/6) = -(6/5) Gamma(1/6)
  CHECK(gamma_value(-5.0 / 6.0) ==
        doctest::Approx(-1.2 * std::exp(std::lgamma(1.0 / 6.0)))
            .epsilon(1e-12));
}

TEST_CASE("signed log gamma matches libm over a wide range") {
  for (double x = 0.05; x <= 100.0; x += 0.473) {
    auto g = log_gamma_signed(x);
    CHECK(g.sign == 1);
    CHECK(std::abs(g.log_abs - std::lgamma(x)) <=
          1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
  }
  for (double x = -0.45; x > -40.0; x -= 0.9) {
    auto g = log_gamma_signed(x);
    CHECK(std::abs(g.log_abs - std::lgamma(x)) <=
          1e-11 * std::max(1.0, std::abs(std::lgamma(x))));
  }
}

TEST_CASE("signed log gamma rejects poles") {
  CHECK_THROWS_AS(log_gamma_signed(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma_signed(-3.0), std::domain_error);
}

TEST_CASE("vanishing parity is exactly zero in closed form") {
  for (int n = 0; n <= 48; n += 2) CHECK(closed_form(Kind::Odd, n) == 0.0);
  for (int n = 1; n <= 49; n += 2) CHECK(closed_form(Kind::Even, n) == 0.0);
}

TEST_CASE("first harmonic matches its reduced Gamma-ratio form") {
  // After the Gamma(-1/3) cancellation the n = 1 coefficient collapses to
  // 2 Gamma(11/6) / (sqrt(pi) Gamma(7/3)).
  const double direct =
      2.0 * gamma_value(11.0 / 6.0) / (kSqrtPi * gamma_value(7.0 / 3.0));
  CHECK(closed_form(Kind::Odd, 1) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(closed_form(Kind::Odd, 1) == doctest::Approx(0.891476).epsilon(2e-5));
  CHECK(closed_form(Kind::Odd, 3) == doctest::Approx(0.127360).epsilon(2e-4));
  const double even0 =
      2.0 * gamma_value(4.0 / 3.0) / (kSqrtPi * gamma_value(11.0 / 6.0));
  CHECK(closed_form(Kind::Even, 0) == doctest::Approx(even0).epsilon(1e-13));
}

TEST_CASE("quadrature oracle agrees with closed forms") {
  for (int n : {1, 3, 5, 7, 9, 15, 25, 49}) {
    CHECK(std::abs(quadrature_oracle(Kind::Odd, n) - closed_form(Kind::Odd, n)) <=
          1e-10);
  }
  for (int n : {0, 2, 4, 10, 26, 48}) {
    CHECK(std::abs(quadrature_oracle(Kind::Even, n) -
                   closed_form(Kind::Even, n)) <= 1e-10);
  }
  // Vanishing parity integrates to ~0.
  CHECK(std::abs(quadrature_oracle(Kind::Odd, 4)) <= 1e-10);
  CHECK(std::abs(quadrature_oracle(Kind::Even, 5)) <= 1e-10);
}

TEST_CASE("odd-channel envelope decays like n^{-8/3}") {
  double prev = 1e300;
  for (int n = 3; n <= 99; n += 2) {
    const double env =
        std::abs(closed_form(Kind::Odd, n)) * std::pow(n, 8.0 / 3.0);
    CHECK(env <= prev * (1.0 + 1e-9));
    prev = env;
  }
}

TEST_CASE("correction amplitudes") {
  CHECK(harmonic_amplitude(3, 1.0) ==
        doctest::Approx(-closed_form(Kind::Odd, 3) / 8.0).epsilon(1e-14));
  CHECK(harmonic_amplitude(3, 1.0) == doctest::Approx(-0.015920).epsilon(2e-4));
  CHECK(harmonic_amplitude(9, -2.0) ==
        doctest::Approx(2.0 * closed_form(Kind::Odd, 9) / 80.0).epsilon(1e-14));
  CHECK_THROWS_AS(harmonic_amplitude(1, 1.0), std::invalid_argument);
}

TEST_CASE("series tail bound is monotone, valid, and small at high cutoffs") {
  double prev = 1e300;
  for (int n0 : {11, 41, 101, 501, 1001}) {
    const double b = series_tail_bound(n0, 1.0);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(series_tail_bound(1001, 1.0) <= 1e-8);
  // The bound dominates a long partial sum of the true tail.
  double partial = 0.0;
  for (int n = 11; n <= 411; n += 2) partial += std::abs(harmonic_amplitude(n, 1.0));
  CHECK(series_tail_bound(11, 1.0) >= partial);
  // Linear in |lambda1|.
  CHECK(series_tail_bound(11, -2.0) ==
        doctest::Approx(2.0 * series_tail_bound(11, 1.0)).epsilon(1e-14));
}

TEST_CASE("coefficient table") {
  CHECK_THROWS_AS(Table::build(4, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Table::build(1, 1.0, 0.0), std::invalid_argument);
  const Table t = Table::build(9, 1.0, 0.5);
  CHECK(t.odd_coeff[3] == closed_form(Kind::Odd, 3));
  CHECK(t.even_coeff[4] == closed_form(Kind::Even, 4));
  CHECK(t.odd_coeff[4] == 0.0);
  CHECK(t.correction_amp[9] == harmonic_amplitude(9, 1.0));
  CHECK(t.correction_amp[1] == 0.0);
  CHECK(t.tail_bound == doctest::Approx(series_tail_bound(11, 1.0)));
}
