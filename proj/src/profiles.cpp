#include "nlkg/profiles.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nlkg {

HyperbolicPoint to_hyperbolic(double t, double r) {
  if (!(t >= 3.0)) {
    throw std::domain_error("to_hyperbolic: requires t >= 3");
  }
  if (!(r >= 0.0) || r >= t) {
    throw std::domain_error("to_hyperbolic: point outside the light cone");
  }
  const double q = std::sqrt((t - r) * (t + r));
  return HyperbolicPoint{t, r / q, t / q};
}

namespace {

void validate(const ProfileConfig& c) {
  if (c.n_max < 3 || c.n_max % 2 == 0) {
    throw std::invalid_argument("ProfileConfig: n_max must be odd and >= 3");
  }
  if (!(c.cone_cutoff > 0.0) || !(c.cone_cutoff < 1.0)) {
    throw std::invalid_argument("ProfileConfig: cone_cutoff must be in (0,1)");
  }
  if (!(c.fd_step_t > 0.0)) {
    throw std::invalid_argument("ProfileConfig: fd_step_t must be positive");
  }
}

}  // namespace

ProfileFamily::ProfileFamily(const ScatteringData& data,
                             const ProfileConfig& config)
    : data_(data),
      config_(config),
      table_(coeffs::Table::build(config.n_max, config.lambda1,
                                  config.lambda2)),
      half_c1_(0.5 * coeffs::closed_form(coeffs::Kind::Odd, 1)) {
  validate(config);
}

double ProfileFamily::smoothed_amplitude(double s, double mu_norm) const {
  const double br = std::sqrt(1.0 + mu_norm * mu_norm);
  return std::hypot(data_.rho(mu_norm), std::pow(s * br * br * br, -0.5));
}

double ProfileFamily::log_phase_coeff(double mu_norm) const {
  const double r = data_.rho(mu_norm);
  return -config_.lambda1 * half_c1_ * std::cbrt(r * r);
}

double ProfileFamily::smoothed_log_phase_coeff(double s, double mu_norm) const {
  const double a = smoothed_amplitude(s, mu_norm);
  return -config_.lambda1 * half_c1_ * std::cbrt(a * a);
}

double ProfileFamily::phase(double t, double mu_norm) const {
  const double br = std::sqrt(1.0 + mu_norm * mu_norm);
  return t / br + smoothed_log_phase_coeff(t, mu_norm) * std::log(t);
}

// Derivatives act on P~ = -K W^{1/3} with W = rho^2 + s^{-1}<mu>^{-3},
// K = lambda1 c1/2. Denote dW/ds = -s^{-2}<mu>^{-3} and
// dW/dm = 2 rho rho' - 3 s^{-1}<mu>^{-5} m.

double ProfileFamily::smoothed_log_phase_ds(double s, double m) const {
  const double K = config_.lambda1 * half_c1_;
  const double br2 = 1.0 + m * m;
  const double br3 = br2 * std::sqrt(br2);
  const double rho = data_.rho(m);
  const double w = rho * rho + 1.0 / (s * br3);
  return (K / 3.0) / (s * s * br3) * std::pow(w, -2.0 / 3.0);
}

double ProfileFamily::smoothed_log_phase_ds2(double s, double m) const {
  const double K = config_.lambda1 * half_c1_;
  const double br2 = 1.0 + m * m;
  const double br3 = br2 * std::sqrt(br2);
  const double rho = data_.rho(m);
  const double w = rho * rho + 1.0 / (s * br3);
  return -(2.0 * K / 3.0) / (s * s * s * br3) * std::pow(w, -2.0 / 3.0) +
         (2.0 * K / 9.0) / (s * s * s * s * br3 * br3) *
             std::pow(w, -5.0 / 3.0);
}

double ProfileFamily::smoothed_log_phase_dm(double s, double m) const {
  const double K = config_.lambda1 * half_c1_;
  const double br2 = 1.0 + m * m;
  const double br5 = br2 * br2 * std::sqrt(br2);
  const double rho = data_.rho(m);
  const double w = rho * rho + 1.0 / (s * br2 * std::sqrt(br2));
  const double dw = 2.0 * rho * data_.rho_prime(m) - 3.0 * m / (s * br5);
  return -(K / 3.0) * std::pow(w, -2.0 / 3.0) * dw;
}

double ProfileFamily::smoothed_log_phase_dm2(double s, double m) const {
  const double K = config_.lambda1 * half_c1_;
  const double br2 = 1.0 + m * m;
  const double sqbr = std::sqrt(br2);
  const double br3 = br2 * sqbr;
  const double br5 = br2 * br2 * sqbr;
  const double br7 = br5 * br2;
  const double rho = data_.rho(m);
  const double rp = data_.rho_prime(m);
  const double w = rho * rho + 1.0 / (s * br3);
  const double dw = 2.0 * rho * rp - 3.0 * m / (s * br5);
  const double d2w = 2.0 * rp * rp + 2.0 * rho * data_.rho_second(m) -
                     3.0 / s * (1.0 / br5 - 5.0 * m * m / br7);
  return -(K / 3.0) * (std::pow(w, -2.0 / 3.0) * d2w -
                       (2.0 / 3.0) * std::pow(w, -5.0 / 3.0) * dw * dw);
}

double ProfileFamily::smoothed_log_phase_dm_ds(double s, double m) const {
  const double K = config_.lambda1 * half_c1_;
  const double br2 = 1.0 + m * m;
  const double sqbr = std::sqrt(br2);
  const double br3 = br2 * sqbr;
  const double br5 = br2 * br2 * sqbr;
  const double rho = data_.rho(m);
  const double w = rho * rho + 1.0 / (s * br3);
  const double dw = 2.0 * rho * data_.rho_prime(m) - 3.0 * m / (s * br5);
  return (K / 3.0) / (s * s) *
         (-3.0 * m / br5 * std::pow(w, -2.0 / 3.0) -
          (2.0 / 3.0) / br3 * std::pow(w, -5.0 / 3.0) * dw);
}

// Shared per-point ingredients for the profile formulas.
struct ProfileFamily::PointEval {
  bool outside;
  double mu, br;          // |mu|, <mu>
  double rho, beta;
  double amp_lead;        // t^{-3/2} <mu>^{3/2} rho
  double linear_phase;    // <mu>^{-1} t
  double log_t;
  double smoothed_coeff;  // P~(t, mu)
  double plain_coeff;     // P(mu)
  double smooth23;        // rho~^{2/3}
  double amp_harm;        // t^{-5/2} <mu>^{5/2} rho~^{2/3} rho
};

ProfileFamily::PointEval ProfileFamily::eval_point(double t, double r) const {
  PointEval p{};
  if (!(t >= 3.0)) {
    throw std::domain_error("profile evaluation requires t >= 3");
  }
  if (r < 0.0 || r >= config_.cone_cutoff * t) {
    p.outside = true;
    return p;
  }
  const HyperbolicPoint h = to_hyperbolic(t, r);
  p.outside = false;
  p.mu = h.mu_norm;
  p.br = h.bracket_mu;
  p.rho = data_.rho(p.mu);
  p.beta = data_.beta(p.mu);
  const double br32 = p.br * std::sqrt(p.br);
  p.amp_lead = std::pow(t, -1.5) * br32 * p.rho;
  p.linear_phase = t / p.br;
  p.log_t = std::log(t);
  const double sm = smoothed_amplitude(t, p.mu);
  p.smooth23 = std::cbrt(sm * sm);
  p.smoothed_coeff = -config_.lambda1 * half_c1_ * p.smooth23;
  p.plain_coeff = -config_.lambda1 * half_c1_ * std::cbrt(p.rho * p.rho);
  p.amp_harm = std::pow(t, -2.5) * br32 * p.br * p.smooth23 * p.rho;
  return p;
}

double ProfileFamily::leading_profile(double t, double r) const {
  const PointEval p = eval_point(t, r);
  if (p.outside) return 0.0;
  return p.amp_lead *
         std::cos(p.linear_phase + p.plain_coeff * p.log_t + p.beta);
}

double ProfileFamily::free_profile(double t, double r) const {
  const PointEval p = eval_point(t, r);
  if (p.outside) return 0.0;
  return p.amp_lead * std::cos(p.linear_phase + p.beta);
}

double ProfileFamily::smoothed_profile(double t, double r) const {
  const PointEval p = eval_point(t, r);
  if (p.outside) return 0.0;
  return p.amp_lead *
         std::cos(p.linear_phase + p.smoothed_coeff * p.log_t + p.beta);
}

double ProfileFamily::harmonic_correction(int n, double t, double r) const {
  if (n < 3 || n % 2 == 0) {
    throw std::domain_error("harmonic_correction: n must be odd and >= 3");
  }
  if (n > config_.n_max) {
    throw std::domain_error("harmonic_correction: n exceeds n_max");
  }
  const PointEval p = eval_point(t, r);
  if (p.outside) return 0.0;
  const double theta =
      p.linear_phase + p.smoothed_coeff * p.log_t + p.beta;
  return table_.correction_amp[n] * p.amp_harm * std::cos(n * theta);
}

double ProfileFamily::correction_sum(double t, double r) const {
  const PointEval p = eval_point(t, r);
  if (p.outside) return 0.0;
  const double theta =
      p.linear_phase + p.smoothed_coeff * p.log_t + p.beta;
  // cos(n theta) for odd n by the two-step recurrence
  // cos((n+2)x) = 2 cos(2x) cos(nx) - cos((n-2)x).
  const double c1 = std::cos(theta);
  const double c2 = 2.0 * std::cos(2.0 * theta);
  double prev = c1;           // cos(1 theta)
  double cur = c2 * c1 - c1;  // cos(3 theta)
  double acc = 0.0;
  for (int n = 3; n <= config_.n_max; n += 2) {
    acc += table_.correction_amp[n] * cur;
    const double next = c2 * cur - prev;
    prev = cur;
    cur = next;
  }
  return p.amp_harm * acc;
}

double ProfileFamily::full_profile(double t, double r) const {
  const PointEval p = eval_point(t, r);
  if (p.outside) return 0.0;
  const double theta =
      p.linear_phase + p.smoothed_coeff * p.log_t + p.beta;
  const double c1 = std::cos(theta);
  const double c2 = 2.0 * std::cos(2.0 * theta);
  double prev = c1;
  double cur = c2 * c1 - c1;
  double acc = 0.0;
  for (int n = 3; n <= config_.n_max; n += 2) {
    acc += table_.correction_amp[n] * cur;
    const double next = c2 * cur - prev;
    prev = cur;
    cur = next;
  }
  return p.amp_lead * c1 + p.amp_harm * acc;
}

ProfileFamily::DtResult ProfileFamily::full_profile_dt_checked(double t,
                                                               double r) const {
  const double h0 = config_.fd_step_t * t;
  if (!(t - 2.0 * h0 >= 3.0)) {
    throw std::domain_error("full_profile_dt: stencil leaves t >= 3");
  }
  auto fd = [&](double h) {
    return (full_profile(t - 2 * h, r) - 8.0 * full_profile(t - h, r) +
            8.0 * full_profile(t + h, r) - full_profile(t + 2 * h, r)) /
           (12.0 * h);
  };
  // Far out on the cone the highest retained harmonic oscillates at
  // n_max <mu> per unit time; a step with omega h > 1 sees it outside the
  // asymptotic regime even though its amplitude is negligible. Halve the
  // base step until the 4th-order ratio emerges or the gaps reach noise.
  double ratio = 0.0;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double h = std::ldexp(h0, -attempt);
    const double d1 = fd(h);
    const double d2 = fd(0.5 * h);
    const double d3 = fd(0.25 * h);
    const double gap12 = std::abs(d1 - d2);
    const double gap23 = std::abs(d2 - d3);
    if (std::isnan(d3)) {
      throw std::runtime_error("full_profile_dt: derivative is NaN");
    }
    // Ratios above 16 happen legitimately when the leading truncation term
    // degenerates; only slower-than-4th-order convergence is an error.
    const double floor = 1e-11 * (std::abs(d3) + std::pow(t, -1.5));
    if (gap23 <= floor || gap12 <= floor || gap12 / gap23 >= 6.0) {
      return DtResult{d3, gap23};
    }
    ratio = gap12 / gap23;
  }
  std::ostringstream msg;
  msg << "full_profile_dt: step halving ratio " << ratio
      << " is not 4th order at t=" << t << " r=" << r;
  throw std::runtime_error(msg.str());
}

double ProfileFamily::full_profile_dt(double t, double r) const {
  return full_profile_dt_checked(t, r).value;
}

}  // namespace nlkg
