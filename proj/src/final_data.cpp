#include "nlkg/final_data.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nlkg/util.hpp"

namespace nlkg {

namespace {

void validate(const FinalState& s) {
  if (!(s.sigma0 > 0.0) || !(s.sigma1 > 0.0)) {
    throw std::invalid_argument("FinalState: widths must be positive");
  }
  if (!std::isfinite(s.a0) || !std::isfinite(s.a1)) {
    throw std::invalid_argument("FinalState: amplitudes must be finite");
  }
}

double hat_value(double a, double sigma, double xi) {
  return a * sigma * sigma * sigma * std::exp(-0.5 * sigma * sigma * xi * xi);
}

// rho^2 = <mu>^2 F0^2 + F1^2 and its mu-derivatives factor through
//   d(rho^2)/dmu = 2 mu G,  G = F0^2 (1 - sigma0^2 <mu>^2) - sigma1^2 F1^2.
struct RhoParts {
  double f0, f1, br2, g;
};

RhoParts rho_parts(const FinalState& s, double mu) {
  RhoParts p;
  p.f0 = hat_value(s.a0, s.sigma0, mu);
  p.f1 = hat_value(s.a1, s.sigma1, mu);
  p.br2 = 1.0 + mu * mu;
  p.g = p.f0 * p.f0 * (1.0 - s.sigma0 * s.sigma0 * p.br2) -
        s.sigma1 * s.sigma1 * p.f1 * p.f1;
  return p;
}

}  // namespace

double fourier_hat(const FinalState& state, Component which, double xi_norm) {
  validate(state);
  if (xi_norm < 0.0) {
    throw std::invalid_argument("fourier_hat: negative radius");
  }
  return which == Component::Position
             ? hat_value(state.a0, state.sigma0, xi_norm)
             : hat_value(state.a1, state.sigma1, xi_norm);
}

ScatteringData::ScatteringData(const FinalState& state) : state_(state) {
  validate(state);
  zero_ = state.a0 == 0.0 && state.a1 == 0.0;
}

double ScatteringData::rho(double mu_norm) const {
  const RhoParts p = rho_parts(state_, mu_norm);
  return std::hypot(std::sqrt(p.br2) * p.f0, p.f1);
}

double ScatteringData::beta(double mu_norm) const {
  if (zero_) return 0.0;
  const RhoParts p = rho_parts(state_, mu_norm);
  const double pr = std::sqrt(p.br2) * p.f0;
  const double qi = p.f1;
  // z = e^{i 3pi/4} (pr - i qi)
  const double c = -std::sqrt(0.5), s = std::sqrt(0.5);
  const double re = c * pr + s * qi;
  const double im = s * pr - c * qi;
  double b = std::atan2(im, re);
  if (b < 0.0) b += 2.0 * M_PI;
  return b;
}

double ScatteringData::rho_prime(double mu_norm) const {
  if (zero_) return 0.0;
  const RhoParts p = rho_parts(state_, mu_norm);
  return mu_norm * p.g / rho(mu_norm);
}

double ScatteringData::rho_second(double mu_norm) const {
  if (zero_) return 0.0;
  const FinalState& s = state_;
  const RhoParts p = rho_parts(s, mu_norm);
  const double mu = mu_norm;
  const double gp =
      -2.0 * mu *
      (s.sigma0 * s.sigma0 * p.f0 * p.f0 *
           (2.0 - s.sigma0 * s.sigma0 * p.br2) -
       s.sigma1 * s.sigma1 * s.sigma1 * s.sigma1 * p.f1 * p.f1);
  const double r = rho(mu);
  const double rp = mu * p.g / r;
  return (p.g + mu * gp - rp * rp) / r;
}

double y_norm(const FinalState& state, const QuadSpec& spec) {
  validate(state);
  // Transform-side weights for the three polynomial multipliers:
  //   1      -> F(k)
  //   x_j    -> radial derivative, |F'(k)|^2 = sigma^4 k^2 F^2
  //   |x|^2  -> radial Laplacian, (3 sigma^2 - sigma^4 k^2) F
  struct Term {
    double a, sigma;
    int sobolev;
    int weight;  // 0, 1, 2 as above
  };
  const Term terms[6] = {
      {state.a0, state.sigma0, 2, 0}, {state.a0, state.sigma0, 3, 1},
      {state.a0, state.sigma0, 4, 2}, {state.a1, state.sigma1, 1, 0},
      {state.a1, state.sigma1, 2, 1}, {state.a1, state.sigma1, 3, 2},
  };
  std::vector<double> parts;
  for (const Term& t : terms) {
    if (t.a == 0.0) {
      parts.push_back(0.0);
      continue;
    }
    const double k_max = 16.0 / t.sigma + 4.0;
    auto integrand = [&](double k) {
      const double f = hat_value(t.a, t.sigma, k);
      const double br = 1.0 + k * k;
      double w = 1.0;
      for (int i = 0; i < t.sobolev; ++i) w *= br;
      const double s2 = t.sigma * t.sigma;
      double amp2 = f * f;
      if (t.weight == 1) amp2 *= s2 * s2 * k * k;
      if (t.weight == 2) {
        const double lap = 3.0 * s2 - s2 * s2 * k * k;
        amp2 *= lap * lap;
      }
      return w * amp2 * k * k;
    };
    const QuadResult r =
        composite_gauss_legendre(integrand, 0.0, k_max, spec.rel_tol,
                                 spec.initial_panels, spec.max_doublings);
    if (!r.converged) {
      std::ostringstream msg;
      msg << "y_norm: quadrature did not stabilize; achieved estimate "
          << r.error_estimate;
      throw std::runtime_error(msg.str());
    }
    parts.push_back(std::sqrt(4.0 * M_PI * r.value));
  }
  return stable_sum(parts);
}

double sup_weighted_rho(const FinalState& state) {
  const ScatteringData sd(state);
  auto weighted = [&](double mu) {
    return std::pow(1.0 + mu * mu, 0.75) * sd.rho(mu);
  };
  // Coarse scan: mu = 0 plus a log-spaced sweep.
  const int n = 600;
  const double lo = 1e-3, hi = 40.0;
  double best = weighted(0.0);
  double best_mu = 0.0;
  std::vector<double> grid(n + 1);
  grid[0] = 0.0;
  for (int i = 0; i <= n - 1; ++i) {
    grid[i + 1] = lo * std::pow(hi / lo, double(i) / (n - 1));
  }
  int best_i = 0;
  for (int i = 1; i <= n; ++i) {
    const double v = weighted(grid[i]);
    if (v > best) {
      best = v;
      best_mu = grid[i];
      best_i = i;
    }
  }
  (void)best_mu;
  // Golden-section refinement on the bracketing interval.
  double a = grid[best_i > 0 ? best_i - 1 : 0];
  double b = best_i < n ? grid[best_i + 1] : hi;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = weighted(x1), f2 = weighted(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = weighted(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = weighted(x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

FinalState scaled_to_weight(const FinalState& state, double target) {
  if (!(target > 0.0)) {
    throw std::invalid_argument("scaled_to_weight: target must be positive");
  }
  const double current = sup_weighted_rho(state);
  if (current == 0.0) {
    throw std::invalid_argument("scaled_to_weight: zero state");
  }
  FinalState out = state;
  out.a0 *= target / current;
  out.a1 *= target / current;
  return out;
}

}  // namespace nlkg
