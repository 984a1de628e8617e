#pragma once
//============================================================================
// Fourier-cosine coefficients of the two fractional-power waveforms that
// drive the phase correction and the harmonic corrections:
//
//   odd channel   w(θ) = |cos θ|^{2/3} cos θ   (only odd harmonics survive)
//   even channel  w(θ) = |cos θ|^{5/3}         (only even harmonics survive)
//
// coefficient(n) = (1/π) ∫_{-π}^{π} w(θ) cos(nθ) dθ.
//
// Each coefficient has a closed form as a ratio of Gamma values, evaluated
// in log space with explicit sign tracking, plus an independent adaptive
// quadrature oracle. Derived from them: the per-harmonic correction
// amplitude -λ1 c_n / (n² - 1) and a rigorous series tail bound.
//============================================================================

#include <vector>

namespace nlkg::coeffs {

struct SignedLogGamma {
  double log_abs;
  int sign;  // -1 or +1
};

// log|Gamma(x)| with sign, Lanczos series plus the reflection identity for
// x < 0.5. Throws std::domain_error at the poles (x = 0, -1, -2, ...).
SignedLogGamma log_gamma_signed(double x);

// Convenience: sign * exp(log_abs). Overflows to +-inf for large x.
double gamma_value(double x);

enum class Kind { Odd, Even };

// Closed-form Fourier-cosine coefficient; exact 0 for the vanishing parity
// (even n in the odd channel, odd n in the even channel).
double closed_form(Kind kind, int n);

// (1/π) ∫_{-π}^{π} w(θ) cos(nθ) dθ by adaptive Gauss-Kronrod quadrature,
// split at θ = ±π/2 where the integrand loses smoothness.
double quadrature_oracle(Kind kind, int n, double rel_tol = 1e-13);

// Correction amplitude d_n = -λ1 c_n / (n² - 1) for harmonics n >= 2.
double harmonic_amplitude(int n, double lambda1);

// Upper bound on Σ_{n >= n_from, odd} |harmonic_amplitude(n, λ1)| using the
// measured n^{-8/3} envelope of the closed forms. Monotone nonincreasing
// in n_from.
double series_tail_bound(int n_from, double lambda1);

// Precomputed coefficients up to n_max (odd, >= 3).
struct Table {
  int n_max = 0;
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  std::vector<double> odd_coeff;        // index n: odd-channel c_n
  std::vector<double> even_coeff;       // index n: even-channel coefficient
  std::vector<double> correction_amp;   // index n: -λ1 c_n/(n²-1), n >= 2
  double tail_bound = 0.0;              // tail beyond n_max, odd channel

  static Table build(int n_max, double lambda1, double lambda2);
};

}  // namespace nlkg::coeffs
