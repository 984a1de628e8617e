#pragma once

#include "nlkg/coeffs.hpp"
#include "nlkg/final_data.hpp"

// Light-cone profile family built on the scattering data (rho, beta):
//
//   leading(t,r)     = t^{-3/2} <mu>^{3/2} rho cos(<mu>^{-1> t + P log t + beta)
//   smoothed(t,r)    = same with P replaced by its smoothed form
//   harmonic n       = d_n t^{-5/2} <mu>^{5/2} rho~^{2/3} rho cos(n(phase+beta))
//   full(t,r)        = smoothed + sum of odd harmonics 3..n_max
//
// where P(mu) = -lambda1 (c1/2) rho^{2/3} is the log-phase coefficient,
// rho~(s,mu) = sqrt(rho^2 + s^{-1}<mu>^{-3}) its zero-free regularization,
// and phase(t,mu) = <mu>^{-1} t + P~(t,mu) log t. Everything is evaluated in
// hyperbolic coordinates s = t, mu = x/sqrt(t^2-|x|^2) and vanishes outside
// r < cone_cutoff * t.

namespace nlkg {

struct HyperbolicPoint {
  double s;
  double mu_norm;
  double bracket_mu;  // sqrt(1 + mu_norm^2)
};

// Throws std::domain_error for r >= t; requires t >= 3.
HyperbolicPoint to_hyperbolic(double t, double r);

struct ProfileConfig {
  double lambda1 = 1.0;
  double lambda2 = 0.0;
  int n_max = 41;             // odd, >= 3
  double cone_cutoff = 0.995;  // profiles are 0 for r >= cone_cutoff * t
  double fd_step_t = 1e-3;     // relative step of the time derivative
};

class ProfileFamily {
 public:
  ProfileFamily(const ScatteringData& data, const ProfileConfig& config);

  // Ingredients.
  double smoothed_amplitude(double s, double mu_norm) const;       // rho~
  double log_phase_coeff(double mu_norm) const;                    // P
  double smoothed_log_phase_coeff(double s, double mu_norm) const; // P~
  double phase(double t, double mu_norm) const;  // <mu>^{-1} t + P~ log t

  // Analytic partial derivatives of the smoothed log-phase coefficient.
  // The mu derivatives are taken along the first axis at mu = (m, 0, 0).
  double smoothed_log_phase_ds(double s, double m) const;
  double smoothed_log_phase_ds2(double s, double m) const;
  double smoothed_log_phase_dm(double s, double m) const;
  double smoothed_log_phase_dm2(double s, double m) const;
  double smoothed_log_phase_dm_ds(double s, double m) const;

  // Profiles; all are 0 outside the cone cutoff.
  double leading_profile(double t, double r) const;
  double free_profile(double t, double r) const;  // log-phase dropped
  double smoothed_profile(double t, double r) const;
  double harmonic_correction(int n, double t, double r) const;  // odd n >= 3
  double correction_sum(double t, double r) const;
  double full_profile(double t, double r) const;

  struct DtResult {
    double value;
    double discrepancy;  // half-step vs quarter-step difference
  };
  // 4th-order finite difference of full_profile in t at fixed r, with an
  // internal step-halving consistency check that refines the base step where
  // the highest harmonic is under-resolved. Throws std::runtime_error when
  // no refinement converges at 4th order.
  DtResult full_profile_dt_checked(double t, double r) const;
  double full_profile_dt(double t, double r) const;

  const ScatteringData& data() const { return data_; }
  const ProfileConfig& config() const { return config_; }
  const coeffs::Table& coefficients() const { return table_; }

 private:
  struct PointEval;
  PointEval eval_point(double t, double r) const;

  ScatteringData data_;
  ProfileConfig config_;
  coeffs::Table table_;
  double half_c1_;  // c1 / 2
};

}  // namespace nlkg
