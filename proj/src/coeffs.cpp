#include "nlkg/coeffs.hpp"

#include <cmath>
#include <stdexcept>

#include "nlkg/util.hpp"

namespace nlkg::coeffs {

namespace {

// Lanczos approximation, g = 7, 9 terms. Relative accuracy ~1e-14 on the
// positive axis, which the reflection identity carries to x < 0.5.
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2π)/2
constexpr double kLogPi = 1.1447298858494001741;

// sin(πx) with argument reduction in units of the period.
double sin_pi(double x) {
  const double y = std::remainder(x, 2.0);  // y in [-1, 1]
  return std::sin(M_PI * y);
}

double log_gamma_positive(double z) {
  // valid for z >= 0.5
  double series = kLanczos[0];
  for (int i = 1; i < 9; ++i) {
    series += kLanczos[i] / (z - 1.0 + i);
  }
  const double t = z + 6.5;
  return kHalfLog2Pi + (z - 0.5) * std::log(t) - t + std::log(series);
}

struct GammaFactor {
  double log_abs;
  int sign;
};

GammaFactor ratio_sign_combine(std::initializer_list<SignedLogGamma> num,
                               std::initializer_list<SignedLogGamma> den) {
  GammaFactor r{0.0, 1};
  for (const auto& g : num) {
    r.log_abs += g.log_abs;
    r.sign *= g.sign;
  }
  for (const auto& g : den) {
    r.log_abs -= g.log_abs;
    r.sign *= g.sign;
  }
  return r;
}

}  // namespace

SignedLogGamma log_gamma_signed(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("log_gamma_signed: non-finite argument");
  }
  if (x >= 0.5) {
    return {log_gamma_positive(x), +1};
  }
  if (x == std::floor(x)) {
    throw std::domain_error("log_gamma_signed: pole at nonpositive integer");
  }
  // Γ(x) Γ(1-x) = π / sin(πx); Γ(1-x) > 0 here since 1-x > 0.5.
  const double s = sin_pi(x);
  const double log_abs =
      kLogPi - std::log(std::abs(s)) - log_gamma_positive(1.0 - x);
  return {log_abs, s > 0.0 ? +1 : -1};
}

double gamma_value(double x) {
  const SignedLogGamma g = log_gamma_signed(x);
  return g.sign * std::exp(g.log_abs);
}

double closed_form(Kind kind, int n) {
  if (n < 0) throw std::invalid_argument("closed_form: n < 0");
  const bool n_odd = (n % 2) != 0;
  if (kind == Kind::Odd && !n_odd) return 0.0;
  if (kind == Kind::Even && n_odd) return 0.0;

  const SignedLogGamma num_mid = log_gamma_signed((3.0 * n - 5.0) / 6.0);
  const SignedLogGamma den_big = log_gamma_signed((3.0 * n + 11.0) / 6.0);
  GammaFactor f;
  int parity_sign;
  if (kind == Kind::Odd) {
    parity_sign = ((n - 1) / 2) % 2 == 0 ? +1 : -1;
    f = ratio_sign_combine({log_gamma_signed(11.0 / 6.0), num_mid},
                           {log_gamma_signed(-1.0 / 3.0), den_big});
  } else {
    parity_sign = (n / 2) % 2 == 0 ? +1 : -1;
    f = ratio_sign_combine({log_gamma_signed(4.0 / 3.0), num_mid},
                           {log_gamma_signed(-5.0 / 6.0), den_big});
  }
  const double log_mag = std::log(2.0) - 0.5 * kLogPi + f.log_abs;
  return parity_sign * f.sign * std::exp(log_mag);
}

double quadrature_oracle(Kind kind, int n, double rel_tol) {
  if (n < 0) throw std::invalid_argument("quadrature_oracle: n < 0");
  const auto waveform = [kind](double theta) {
    const double c = std::cos(theta);
    // |c|^{2/3} = cbrt(c²) avoids pow() domain issues at c < 0.
    const double p23 = std::cbrt(c * c);
    return kind == Kind::Odd ? p23 * c : p23 * std::abs(c);
  };
  const auto integrand = [&](double theta) {
    return waveform(theta) * std::cos(n * theta);
  };
  // The integrand is even; the half-range integral is split at π/2 where
  // |cos θ|^{2/3} has a fractional-power kink. On each side the cube-root
  // stretch θ = π/2 ∓ u³ makes the integrand smooth (|sin(u³)|^{2/3} · 3u²
  // is C^∞ near u = 0), so the adaptive rule converges at full order.
  const double u_max = std::cbrt(M_PI / 2);
  const auto left_stretched = [&](double u) {
    return 3.0 * u * u * integrand(M_PI / 2 - u * u * u);
  };
  const auto right_stretched = [&](double u) {
    return 3.0 * u * u * integrand(M_PI / 2 + u * u * u);
  };
  const QuadResult left =
      adaptive_gauss_kronrod(left_stretched, 0.0, u_max, rel_tol, 1e-15);
  const QuadResult right =
      adaptive_gauss_kronrod(right_stretched, 0.0, u_max, rel_tol, 1e-15);
  return (2.0 / M_PI) * (left.value + right.value);
}

double harmonic_amplitude(int n, double lambda1) {
  if (n < 2) throw std::invalid_argument("harmonic_amplitude: n < 2");
  return -lambda1 * closed_form(Kind::Odd, n) /
         (static_cast<double>(n) * n - 1.0);
}

double series_tail_bound(int n_from, double lambda1) {
  if (n_from < 3) throw std::invalid_argument("series_tail_bound: n_from < 3");
  int n0 = n_from % 2 == 0 ? n_from + 1 : n_from;  // first odd term in tail
  // Envelope constant from a window of measured coefficients; the envelope
  // |c_n| n^{8/3} is monotone decreasing on the odd channel.
  double env = 0.0;
  for (int n = std::max(3, n0 - 4); n <= n0; n += 2) {
    if (n % 2 == 0) continue;
    const double v =
        std::abs(closed_form(Kind::Odd, n)) * std::pow(n, 8.0 / 3.0);
    env = std::max(env, v);
  }
  const double nn = static_cast<double>(n0);
  const double cone = nn * nn / (nn * nn - 1.0);
  // Σ_{odd n >= n0} n^{-14/3} <= n0^{-14/3} + (1/2)∫_{n0}^∞ x^{-14/3} dx
  const double tail_sum =
      std::pow(nn, -14.0 / 3.0) + 0.5 * (3.0 / 11.0) * std::pow(nn, -11.0 / 3.0);
  return std::abs(lambda1) * env * cone * tail_sum;
}

Table Table::build(int n_max, double lambda1, double lambda2) {
  if (n_max < 3 || n_max % 2 == 0) {
    throw std::invalid_argument("Table::build: n_max must be odd and >= 3");
  }
  Table t;
  t.n_max = n_max;
  t.lambda1 = lambda1;
  t.lambda2 = lambda2;
  t.odd_coeff.assign(n_max + 1, 0.0);
  t.even_coeff.assign(n_max + 1, 0.0);
  t.correction_amp.assign(n_max + 1, 0.0);
  for (int n = 0; n <= n_max; ++n) {
    if (n % 2 == 1) {
      t.odd_coeff[n] = closed_form(Kind::Odd, n);
      if (n >= 3) t.correction_amp[n] = harmonic_amplitude(n, lambda1);
    } else {
      t.even_coeff[n] = closed_form(Kind::Even, n);
    }
  }
  t.tail_bound = series_tail_bound(n_max + 2, lambda1);
  return t;
}

}  // namespace nlkg::coeffs
