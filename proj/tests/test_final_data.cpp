#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "nlkg/final_data.hpp"
#include "nlkg/util.hpp"

using namespace nlkg;

namespace {

// Physical-space Sobolev norms on a uniform radial grid, used as an
// independent route against the transform-side implementation. Index i is
// radius i*h; parity tells how to mirror across r=0.
struct RadialGrid {
  double h;
  int n;
  std::vector<double> f;
  bool odd;

  double at(int i) const {
    if (i >= 0) return i <= n ? f[i] : 0.0;
    return odd ? -f[-i] : f[-i];
  }
};

RadialGrid sample(double h, int n, bool odd,
                  const std::function<double(double)>& fn) {
  RadialGrid g{h, n, std::vector<double>(n + 1), odd};
  for (int i = 0; i <= n; ++i) g.f[i] = fn(i * h);
  if (odd) g.f[0] = 0.0;
  return g;
}

double d1(const RadialGrid& g, int i) {
  return (g.at(i - 2) - 8.0 * g.at(i - 1) + 8.0 * g.at(i + 1) - g.at(i + 2)) /
         (12.0 * g.h);
}

double d2(const RadialGrid& g, int i) {
  return (-g.at(i - 2) + 16.0 * g.at(i - 1) - 30.0 * g.at(i) +
          16.0 * g.at(i + 1) - g.at(i + 2)) /
         (12.0 * g.h * g.h);
}

// (1 - Laplacian) on an even radial field.
RadialGrid one_minus_lap(const RadialGrid& g) {
  RadialGrid out{g.h, g.n, std::vector<double>(g.n + 1), false};
  for (int i = 0; i <= g.n; ++i) {
    const double r = i * g.h;
    const double lap = i == 0 ? 3.0 * d2(g, 0) : d2(g, i) + 2.0 / r * d1(g, i);
    out.f[i] = g.at(i) - lap;
  }
  return out;
}

// (1 - L1) on an odd radial field, L1 q = q'' + (2/r)q' - (2/r^2)q.
RadialGrid one_minus_l1(const RadialGrid& g) {
  RadialGrid out{g.h, g.n, std::vector<double>(g.n + 1), true};
  out.f[0] = 0.0;
  for (int i = 1; i <= g.n; ++i) {
    const double r = i * g.h;
    const double l1 = d2(g, i) + 2.0 / r * d1(g, i) - 2.0 / (r * r) * g.at(i);
    out.f[i] = g.at(i) - l1;
  }
  return out;
}

// 4 pi * Simpson integral of w(i) * r^2 over the grid.
double integral_r2(const RadialGrid& g, const std::function<double(int)>& w) {
  std::vector<double> vals(g.n + 1);
  for (int i = 0; i <= g.n; ++i) {
    const double r = i * g.h;
    vals[i] = w(i) * r * r;
  }
  double acc = vals[0] + vals[g.n];
  for (int i = 1; i < g.n; ++i) acc += vals[i] * (i % 2 ? 4.0 : 2.0);
  return 4.0 * M_PI * acc * g.h / 3.0;
}

}  // namespace

TEST_CASE("transform values match the closed form and a radial quadrature") {
  FinalState s{1.0, 1.0, 0.0, 1.0};
  CHECK(fourier_hat(s, Component::Position, 0.0) == doctest::Approx(1.0));
  CHECK(fourier_hat(s, Component::Position, 1.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  FinalState z{0.0, 2.0, 0.0, 1.0};
  CHECK(fourier_hat(z, Component::Position, 0.7) == 0.0);

  // Independent route: radial transform integral
  //   (2pi)^{-3/2} 4pi/xi * int_0^inf r sin(xi r) e^{-r^2/2} dr.
  for (double xi : {0.3, 1.0, 2.5}) {
    auto f = [&](double r) {
      return r * std::sin(xi * r) * std::exp(-0.5 * r * r);
    };
    const QuadResult q = composite_gauss_legendre(f, 0.0, 16.0, 1e-12, 16, 12);
    REQUIRE(q.converged);
    const double oracle = std::pow(2.0 * M_PI, -1.5) * 4.0 * M_PI / xi * q.value;
    CHECK(fourier_hat(s, Component::Position, xi) ==
          doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("state validation rejects bad parameters") {
  CHECK_THROWS_AS(fourier_hat(FinalState{1.0, 0.0, 0.0, 1.0},
                              Component::Position, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fourier_hat(FinalState{1.0, 1.0, 0.0, -2.0},
                              Component::Velocity, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fourier_hat(FinalState{1.0, 1.0, 0.0, 1.0},
                              Component::Position, -1.0),
                  std::invalid_argument);
}

TEST_CASE("scattering data hand values at mu = 0") {
  // Position-only data: z = e^{i 3pi/4} * 1.
  ScatteringData sd0(FinalState{1.0, 1.0, 0.0, 1.0});
  CHECK(sd0.rho(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sd0.beta(0.0) == doctest::Approx(3.0 * M_PI / 4.0).epsilon(1e-14));

  // Velocity-only data: z = e^{i 3pi/4} * (-i).
  ScatteringData sd1(FinalState{0.0, 1.0, 1.0, 1.0});
  CHECK(sd1.rho(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sd1.beta(0.0) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));

  // Zero data: rho = 0 with the fixed beta = 0 convention.
  ScatteringData sdz(FinalState{0.0, 1.0, 0.0, 1.0});
  CHECK(sdz.rho(1.3) == 0.0);
  CHECK(sdz.beta(1.3) == 0.0);
}

TEST_CASE("modulus and argument reconstruct the rotated transform pair") {
  const FinalState s{0.7, 1.3, -0.4, 0.8};
  const ScatteringData sd(s);
  for (int i = 0; i < 1000; ++i) {
    const double mu = 12.0 * i / 999.0;
    const double br = std::sqrt(1.0 + mu * mu);
    const double pr = br * fourier_hat(s, Component::Position, mu);
    const double qi = fourier_hat(s, Component::Velocity, mu);
    const double re = -std::sqrt(0.5) * pr + std::sqrt(0.5) * qi;
    const double im = std::sqrt(0.5) * pr + std::sqrt(0.5) * qi;
    const double r = sd.rho(mu);
    CHECK(r * std::cos(sd.beta(mu)) == doctest::Approx(re).epsilon(5e-14));
    CHECK(r * std::sin(sd.beta(mu)) == doctest::Approx(im).epsilon(5e-14));
    CHECK(r >= 0.0);
    CHECK(sd.beta(mu) >= 0.0);
    CHECK(sd.beta(mu) < 2.0 * M_PI);
  }
}

TEST_CASE("scaling amplitudes scales rho and fixes beta") {
  const FinalState s{0.5, 1.1, 0.2, 0.9};
  FinalState s3 = s;
  s3.a0 *= 3.0;
  s3.a1 *= 3.0;
  const ScatteringData sd(s), sd3(s3);
  for (double mu : {0.0, 0.4, 1.7, 6.0}) {
    CHECK(sd3.rho(mu) == doctest::Approx(3.0 * sd.rho(mu)).epsilon(1e-13));
    CHECK(sd3.beta(mu) == doctest::Approx(sd.beta(mu)).epsilon(1e-13));
  }
}

TEST_CASE("analytic rho derivatives match finite differences") {
  const FinalState s{0.8, 1.2, -0.3, 0.7};
  const ScatteringData sd(s);
  const double h = 1e-5;
  for (double mu : {0.05, 0.3, 0.9, 1.6, 3.2, 6.5}) {
    auto r = [&](double m) { return sd.rho(m); };
    const double fd1 =
        (r(mu - 2 * h) - 8 * r(mu - h) + 8 * r(mu + h) - r(mu + 2 * h)) /
        (12 * h);
    const double fd2 = (-r(mu - 2 * h) + 16 * r(mu - h) - 30 * r(mu) +
                        16 * r(mu + h) - r(mu + 2 * h)) /
                       (12 * h * h);
    CHECK(sd.rho_prime(mu) == doctest::Approx(fd1).epsilon(1e-8));
    CHECK(sd.rho_second(mu) == doctest::Approx(fd2).epsilon(1e-5));
  }
  // rho is even in mu, so the derivative at 0 vanishes.
  CHECK(sd.rho_prime(0.0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("y norm matches a physical-space finite-difference oracle") {
  const FinalState s{1.0, 1.0, 0.0, 1.0};
  const double implemented = y_norm(s);

  const double h = 5e-4;
  const int n = 32000;  // radius 16
  auto phi = [](double r) { return std::exp(-0.5 * r * r); };

  // Unweighted part: H^2 norm = L^2 norm of (1 - Lap) phi.
  RadialGrid g = sample(h, n, false, phi);
  RadialGrid g1 = one_minus_lap(g);
  const double t1 =
      std::sqrt(integral_r2(g1, [&](int i) { return g1.at(i) * g1.at(i); }));

  // x-weighted part in H^3 through the odd radial reduction q = (1-L1)(r phi).
  RadialGrid godd = sample(h, n, true, [&](double r) { return r * phi(r); });
  RadialGrid q = one_minus_l1(godd);
  RadialGrid q1 = one_minus_l1(q);
  const double t2 =
      std::sqrt(integral_r2(q, [&](int i) { return q.at(i) * q1.at(i); }));

  // |x|^2-weighted part in H^4: L^2 norm of (1-Lap)^2 (r^2 phi).
  RadialGrid p = sample(h, n, false, [&](double r) { return r * r * phi(r); });
  RadialGrid p1 = one_minus_lap(p);
  RadialGrid p2 = one_minus_lap(p1);
  const double t3 =
      std::sqrt(integral_r2(p2, [&](int i) { return p2.at(i) * p2.at(i); }));

  const double oracle = t1 + t2 + t3;
  CHECK(implemented == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("y norm basic properties") {
  CHECK(y_norm(FinalState{0.0, 1.0, 0.0, 1.0}) == 0.0);
  const FinalState s{0.3, 1.4, 0.0, 1.0};
  FinalState d = s;
  d.a0 *= 2.0;
  CHECK(y_norm(d) == doctest::Approx(2.0 * y_norm(s)).epsilon(1e-12));
  // Both components contribute.
  const FinalState both{0.3, 1.4, 0.5, 0.9};
  const FinalState vel{0.0, 1.4, 0.5, 0.9};
  CHECK(y_norm(both) == doctest::Approx(y_norm(s) + y_norm(vel)).epsilon(1e-12));
  // Starved quadrature budget must be reported, not silently accepted.
  CHECK_THROWS_AS(y_norm(s, QuadSpec{1e-13, 1, 0}), std::runtime_error);
}

TEST_CASE("weighted sup of rho matches a 1d calculus oracle") {
  // Position-only unit Gaussian: maximize (1+m^2)^{5/4} e^{-m^2/2}. The
  // critical point solves 1+m^2 = 5/2.
  const FinalState s{1.0, 1.0, 0.0, 1.0};
  const double got = sup_weighted_rho(s);
  const double hand = std::pow(2.5, 1.25) * std::exp(-0.75);
  CHECK(got == doctest::Approx(hand).epsilon(1e-12));

  // Independent golden-section oracle over the same objective.
  auto f = [](double m) {
    return std::pow(1.0 + m * m, 1.25) * std::exp(-0.5 * m * m);
  };
  double a = 0.0, b = 4.0;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  CHECK(got == doctest::Approx(std::max(f1, f2)).epsilon(1e-10));

  CHECK(sup_weighted_rho(FinalState{0.0, 1.0, 0.0, 1.0}) == 0.0);
  FinalState s5 = s;
  s5.a0 *= 5.0;
  CHECK(sup_weighted_rho(s5) == doctest::Approx(5.0 * got).epsilon(1e-12));
}

TEST_CASE("amplitude rescaling hits the requested weighted sup") {
  const FinalState s{0.9, 1.2, -0.4, 0.8};
  const FinalState t = scaled_to_weight(s, 0.05);
  CHECK(sup_weighted_rho(t) == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(t.a0 / s.a0 == doctest::Approx(t.a1 / s.a1).epsilon(1e-13));
  CHECK_THROWS_AS(scaled_to_weight(FinalState{0.0, 1.0, 0.0, 1.0}, 0.05),
                  std::invalid_argument);
  CHECK_THROWS_AS(scaled_to_weight(s, 0.0), std::invalid_argument);
}
