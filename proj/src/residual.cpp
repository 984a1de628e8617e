#include "nlkg/residual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlkg/parallel.hpp"

namespace nlkg {

namespace {

constexpr double kEps = 2.22e-16;

// Shared phase/amplitude snapshot of the smoothed leading profile at (t, r).
struct ConePoint {
  bool outside = true;
  double mu = 0.0;
  double br = 1.0;
  double rho = 0.0;
  double amp53 = 0.0;  // t^{-5/2} <mu>^{5/2} rho^{5/3}
  double theta = 0.0;  // phase + beta
};

ConePoint cone_point(const ProfileFamily& f, double t, double r) {
  ConePoint p;
  if (r >= f.config().cone_cutoff * t) return p;
  const HyperbolicPoint h = to_hyperbolic(t, r);
  p.mu = h.mu_norm;
  p.br = h.bracket_mu;
  p.rho = f.data().rho(p.mu);
  if (p.rho == 0.0) return p;
  p.outside = false;
  p.amp53 = std::pow(t, -2.5) * std::pow(p.br, 2.5) * p.rho *
            std::cbrt(p.rho * p.rho);
  p.theta = f.phase(t, p.mu) + f.data().beta(p.mu);
  return p;
}

// Bound on Sigma_{n >= n_from, step 2} |coefficient(n)| from the decreasing
// n^{8/3} envelope: each term is at most env * n^{-8/3}, and the lattice sum
// is at most half the integral of x^{-8/3} from n_from - 2.
double channel_tail(coeffs::Kind kind, int n_from) {
  const double env = std::abs(coeffs::closed_form(kind, n_from)) *
                     std::pow(n_from, 8.0 / 3.0);
  return env * 0.3 * std::pow(n_from - 2.0, -5.0 / 3.0);
}

}  // namespace

double nonlinearity(double u, double lambda1, double lambda2) {
  const double u23 = std::cbrt(u * u);
  return lambda1 * u23 * u + lambda2 * u23 * std::abs(u);
}

double resonant_part(const ProfileFamily& f, double t, double r) {
  const ConePoint p = cone_point(f, t, r);
  if (p.outside) return 0.0;
  return f.config().lambda1 * f.coefficients().odd_coeff[1] * p.amp53 *
         std::cos(p.theta);
}

double nonresonant_part(const ProfileFamily& f, double t, double r) {
  const ConePoint p = cone_point(f, t, r);
  if (p.outside) return 0.0;
  const coeffs::Table& table = f.coefficients();
  const double l1 = f.config().lambda1;
  const double l2 = f.config().lambda2;
  const double c1 = std::cos(p.theta);
  double odd_sum = 0.0;
  double even_sum = l2 == 0.0 ? 0.0 : 0.5 * table.even_coeff[0];
  // cos(n theta) by the two-step recurrence on consecutive harmonics.
  double prev = 1.0;  // cos(0)
  double cur = c1;    // cos(theta)
  for (int n = 2; n <= table.n_max; ++n) {
    const double next = 2.0 * c1 * cur - prev;
    prev = cur;
    cur = next;
    if (n % 2 == 1) {
      if (n >= 3) odd_sum += table.odd_coeff[n] * cur;
    } else if (l2 != 0.0) {
      even_sum += table.even_coeff[n] * cur;
    }
  }
  return p.amp53 * (l1 * odd_sum + l2 * even_sum);
}

double nonlinearity_tail_coeff(const coeffs::Table& table) {
  double tail = std::abs(table.lambda1) * channel_tail(coeffs::Kind::Odd,
                                                       table.n_max + 2);
  if (table.lambda2 != 0.0) {
    tail += std::abs(table.lambda2) *
            channel_tail(coeffs::Kind::Even, table.n_max + 1);
  }
  return tail;
}

double splitting_tail_bound(const ProfileFamily& f, double t, double r) {
  const ConePoint p = cone_point(f, t, r);
  if (p.outside) return 0.0;
  return nonlinearity_tail_coeff(f.coefficients()) * p.amp53;
}

double oscillatory_box_identity_deviation(
    double n, double m, std::span<const std::array<double, 2>> points,
    double h_t, double h_r) {
  double dev = 0.0;
  for (const auto& pt : points) {
    const double t = pt[0], r = pt[1];
    const double q = std::sqrt((t - r) * (t + r));
    const double br = t / q;
    const double amp = std::pow(t, -m);
    const double base = (-(n * n - 1.0) + m * (m + 1.0) / (t * t)) * amp;
    const double skew = n * (2.0 * m - 3.0) * amp / t * br;
    for (int part = 0; part < 2; ++part) {
      auto field = [n, m, part](double tt, double rr) {
        const double qq = std::sqrt((tt - rr) * (tt + rr));
        const double osc = part == 0 ? std::cos(n * qq) : std::sin(n * qq);
        return std::pow(tt, -m) * osc;
      };
      const double box = discrete_box_plus_one(field, t, r, h_t, h_r);
      const double c = std::cos(n * q), s = std::sin(n * q);
      const double rhs = part == 0 ? base * c + skew * s : base * s - skew * c;
      dev = std::max(dev, std::abs(box - rhs));
    }
  }
  return dev;
}

namespace {

// The eleven swept rows, as LHS/RHS pairs. Row 0 is the two-sided sandwich.
constexpr int kRowCount = 11;
const char* const kRowNames[kRowCount] = {
    "smoothed_amp_sandwich",   "smoothing_gap_amp",
    "log_coeff_ds",            "amp_log_coeff_ds",
    "amp_log_coeff_ds_sq",     "amp23_logcoeff_times_ds",
    "amp_log_coeff_ds2",       "log_coeff_dm",
    "amp23_dm_sq",             "amp_log_coeff_dm2",
    "amp_log_coeff_dm_ds",
};

struct DerivativeSet {
  double coeff, ds, ds2, dm, dm2, dmds;
};

void audit_derivatives(const ProfileFamily& f, double s, double m,
                       const DerivativeSet& d, const InequalityGrid& g) {
  // The coefficient is even in m, so reflected samples are exact.
  auto pm = [&f](double ss, double mm) {
    return f.smoothed_log_phase_coeff(ss, std::abs(mm));
  };
  const double hs = g.fd_check_rel_step * s;
  const double hm = g.fd_check_rel_step * std::max(m, 0.5);
  const double scale = std::abs(d.coeff) + 1e-300;
  struct Check {
    const char* what;
    double analytic, fd, floor;
  };
  const Check checks[5] = {
      {"ds", d.ds, (pm(s + hs, m) - pm(s - hs, m)) / (2 * hs),
       50 * kEps * scale / hs},
      {"dm", d.dm, (pm(s, m + hm) - pm(s, m - hm)) / (2 * hm),
       50 * kEps * scale / hm},
      {"ds2", d.ds2,
       (pm(s + hs, m) - 2 * d.coeff + pm(s - hs, m)) / (hs * hs),
       200 * kEps * scale / (hs * hs)},
      {"dm2", d.dm2,
       (pm(s, m + hm) - 2 * d.coeff + pm(s, m - hm)) / (hm * hm),
       200 * kEps * scale / (hm * hm)},
      {"dmds", d.dmds,
       (pm(s + hs, m + hm) - pm(s + hs, m - hm) - pm(s - hs, m + hm) +
        pm(s - hs, m - hm)) /
           (4 * hs * hm),
       100 * kEps * scale / (hs * hm)},
  };
  for (const Check& c : checks) {
    const double gap = std::abs(c.analytic - c.fd);
    const double allow =
        g.fd_check_rel_tol * std::max(std::abs(c.analytic), std::abs(c.fd)) +
        c.floor;
    if (!(gap <= allow)) {
      throw std::runtime_error(
          "verify_pointwise_inequalities: analytic and finite-difference "
          "log-phase derivatives disagree (" +
          std::string(c.what) + " at s=" + std::to_string(s) +
          ", mu=" + std::to_string(m) + ")");
    }
  }
}

std::array<double, kRowCount> sweep_rows(const ProfileFamily& f,
                                         const InequalityGrid& g, int s_count,
                                         int mu_count, bool audit,
                                         long& samples) {
  std::array<double, kRowCount> ratio{};
  const ScatteringData& sd = f.data();
  for (int i = 0; i < s_count; ++i) {
    const double s =
        g.s_min * std::pow(g.s_max / g.s_min,
                           s_count == 1 ? 0.0 : double(i) / (s_count - 1));
    for (int j = 0; j < mu_count; ++j) {
      const double m = g.mu_max * double(j) / (mu_count - 1);
      const double rho = sd.rho(m);
      const double rp = sd.rho_prime(m);
      const double rpp = sd.rho_second(m);
      const double br = std::sqrt(1.0 + m * m);
      const double lift = std::pow(s * br * br * br, -0.5);
      const double rhot = f.smoothed_amplitude(s, m);
      DerivativeSet d{f.smoothed_log_phase_coeff(s, m),
                      f.smoothed_log_phase_ds(s, m),
                      f.smoothed_log_phase_ds2(s, m),
                      f.smoothed_log_phase_dm(s, m),
                      f.smoothed_log_phase_dm2(s, m),
                      f.smoothed_log_phase_dm_ds(s, m)};
      if (audit && i % g.fd_check_stride == 0 && j % g.fd_check_stride == 0) {
        audit_derivatives(f, s, m, d, g);
      }
      const double rho23 = std::cbrt(rho * rho);
      const double lhs[kRowCount] = {
          std::max(std::max(rho, lift) / rhot, rhot / (rho + lift)),
          rho * (std::cbrt(rhot * rhot) - rho23),
          std::abs(d.ds),
          rho * std::abs(d.ds),
          rho * d.ds * d.ds,
          rho23 * std::abs(d.coeff * d.ds),
          rho * std::abs(d.ds2),
          std::abs(d.dm),
          rho23 * d.dm * d.dm,
          rho * std::abs(d.dm2),
          rho * std::abs(d.dmds),
      };
      const double rhs[kRowCount] = {
          1.0,
          std::pow(s, -5.0 / 6.0) * std::pow(br, -2.5),
          std::pow(s, -4.0 / 3.0) / br,
          std::pow(s, -11.0 / 6.0) * std::pow(br, -2.5),
          std::pow(s, -19.0 / 6.0) * std::pow(br, -3.5),
          std::pow(s, -2.0) * std::pow(br, -3.0),
          std::pow(s, -17.0 / 6.0) * std::pow(br, -2.5),
          std::pow(s, 1.0 / 6.0) * std::sqrt(br) * std::abs(rp) +
              std::pow(s, -1.0 / 3.0) * std::pow(br, -2.0),
          rp * rp + std::pow(br, -5.0) / s,
          rho23 * std::abs(rpp) + std::pow(s, 1.0 / 6.0) * std::sqrt(br) * rp *
                                      rp +
              std::pow(s, -1.0 / 3.0) * std::pow(br, -3.0) * rho,
          std::pow(s, -4.0 / 3.0) * (std::abs(rp) / br + rho / (br * br)),
      };
      for (int k = 0; k < kRowCount; ++k) {
        if (rhs[k] > 0.0) {
          ratio[k] = std::max(ratio[k], lhs[k] / rhs[k]);
        } else if (lhs[k] != 0.0) {
          ratio[k] = std::numeric_limits<double>::infinity();
        }
      }
      ++samples;
    }
  }
  return ratio;
}

}  // namespace

std::vector<InequalityReport> verify_pointwise_inequalities(
    const ProfileFamily& f, const InequalityGrid& grid) {
  if (grid.s_count < 2 || grid.mu_count < 2 || grid.s_min < 3.0 ||
      grid.s_max <= grid.s_min || grid.mu_max <= 0.0) {
    throw std::invalid_argument(
        "verify_pointwise_inequalities: malformed grid");
  }
  long base_samples = 0, fine_samples = 0;
  const auto base =
      sweep_rows(f, grid, grid.s_count, grid.mu_count, true, base_samples);
  const auto fine = sweep_rows(f, grid, 2 * grid.s_count - 1,
                               2 * grid.mu_count - 1, false, fine_samples);
  std::vector<InequalityReport> reports(kRowCount);
  for (int k = 0; k < kRowCount; ++k) {
    reports[k].name = kRowNames[k];
    reports[k].max_ratio = fine[k];
    reports[k].sample_count = fine_samples;
    reports[k].refinement_stable =
        std::abs(fine[k] - base[k]) <=
        0.1 * std::max({base[k], fine[k], 1e-300});
  }
  return reports;
}

double lightcone_l2_norm(const std::function<double(double, double)>& f,
                         double t, const ConeQuadSpec& spec) {
  if (!(t >= 3.0)) {
    throw std::domain_error("lightcone_l2_norm: t must be >= 3");
  }
  auto integrand = [&](double r) {
    const double v = f(t, r);
    return 4.0 * M_PI * v * v * r * r;
  };
  const QuadResult q =
      composite_gauss_legendre(integrand, 0.0, spec.cone_cutoff * t,
                               spec.rel_tol, spec.initial_panels,
                               spec.max_doublings);
  if (!q.converged) {
    throw std::runtime_error(
        "lightcone_l2_norm: panel doubling did not settle (estimate " +
        std::to_string(q.error_estimate) + " of " + std::to_string(q.value) +
        ")");
  }
  return std::sqrt(std::max(q.value, 0.0));
}

DecayReport residual_decay_scan(const ProfileFamily& f, ResidualKind kind,
                                const ScanConfig& cfg) {
  if (!(cfg.t_min >= 3.0) || !(cfg.t_max > cfg.t_min) || cfg.points < 3) {
    throw std::invalid_argument("residual_decay_scan: malformed time grid");
  }
  if (kind == ResidualKind::Harmonic &&
      (cfg.harmonic_n < 3 || cfg.harmonic_n % 2 == 0 ||
       cfg.harmonic_n > f.config().n_max)) {
    throw std::invalid_argument("residual_decay_scan: harmonic_n out of range");
  }

  // The finite-difference stencil must never straddle the support edge, so
  // the differentiated family carries its cutoff beyond the quadrature range.
  ProfileConfig wide_cfg = f.config();
  wide_cfg.cone_cutoff = std::max(wide_cfg.cone_cutoff, 0.9999);
  const ProfileFamily wf(f.data(), wide_cfg);
  const double l1 = f.config().lambda1;
  const double l2 = f.config().lambda2;
  const int n = cfg.harmonic_n;

  std::function<double(double, double)> field, subtract;
  switch (kind) {
    case ResidualKind::Full:
      field = [&wf](double t, double r) { return wf.full_profile(t, r); };
      subtract = [&wf, l1, l2](double t, double r) {
        return nonlinearity(wf.full_profile(t, r), l1, l2);
      };
      break;
    case ResidualKind::LeadingVsResonant:
      field = [&wf](double t, double r) { return wf.smoothed_profile(t, r); };
      subtract = [&wf](double t, double r) { return resonant_part(wf, t, r); };
      break;
    case ResidualKind::LeadingUncorrected:
      field = [&wf](double t, double r) { return wf.smoothed_profile(t, r); };
      subtract = [&wf, l1, l2](double t, double r) {
        return nonlinearity(wf.smoothed_profile(t, r), l1, l2);
      };
      break;
    case ResidualKind::Harmonic:
      field = [&wf, n](double t, double r) {
        return wf.harmonic_correction(n, t, r);
      };
      subtract = [&wf, l1, n](double t, double r) {
        const ConePoint p = cone_point(wf, t, r);
        if (p.outside) return 0.0;
        return l1 * wf.coefficients().odd_coeff[n] * p.amp53 *
               std::cos(n * p.theta);
      };
      break;
  }

  DecayReport rep;
  rep.times.resize(cfg.points);
  rep.norms.resize(cfg.points);
  std::vector<std::string> failures(cfg.points);
  const double cutoff = f.config().cone_cutoff;
  parallel_for(cfg.points, [&](long i) {
    const double t =
        cfg.t_min * std::pow(cfg.t_max / cfg.t_min,
                             double(i) / (cfg.points - 1));
    rep.times[i] = t;
    const double h_t = cfg.relative_steps ? cfg.theta_t * t : cfg.step_t;
    const double h_r = cfg.relative_steps ? cfg.theta_r * t : cfg.step_r;
    auto res = [&](double tt, double rr) {
      return discrete_box_plus_one(field, tt, rr, h_t, h_r) -
             subtract(tt, rr);
    };
    ConeQuadSpec q;
    q.rel_tol = cfg.quad_rel_tol;
    q.initial_panels = std::max(64, int(t / 5.0));
    q.cone_cutoff = cutoff;
    try {
      rep.norms[i] = lightcone_l2_norm(res, t, q);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  for (const std::string& msg : failures) {
    if (!msg.empty()) {
      throw std::runtime_error("residual_decay_scan: " + msg);
    }
  }
  for (double v : rep.norms) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::runtime_error("residual_decay_scan: non-finite norm");
    }
  }

  // Zero norms (identically vanishing field) carry no slope; fit over the
  // positive entries only and leave default fits when fewer than 3 remain.
  std::vector<double> fit_t, fit_y;
  for (size_t i = 0; i < rep.norms.size(); ++i) {
    if (rep.norms[i] > 0.0) {
      fit_t.push_back(rep.times[i]);
      fit_y.push_back(rep.norms[i]);
    }
  }
  if (fit_t.size() >= 3) {
    rep.plain = fit_power_law(fit_t, fit_y, false);
    rep.logged = fit_power_law(fit_t, fit_y, true);
  }
  rep.log_factor_preferred = rep.logged.r_squared > rep.plain.r_squared;
  const PowerLawFit& pick = cfg.with_log_factor ? rep.logged : rep.plain;
  rep.fitted_exponent = pick.exponent;
  rep.fitted_amplitude = pick.amplitude;
  rep.with_log_factor = pick.with_log_factor;
  rep.r_squared = pick.r_squared;
  rep.conclusive = pick.r_squared >= 0.98;
  return rep;
}

SplittingCheck splitting_consistency(const ProfileFamily& f, double t,
                                     const ConeQuadSpec& spec) {
  const double l1 = f.config().lambda1;
  const double l2 = f.config().lambda2;
  const double tail = nonlinearity_tail_coeff(f.coefficients());
  auto gap = [&](double tt, double rr) {
    return nonlinearity(f.smoothed_profile(tt, rr), l1, l2) -
           resonant_part(f, tt, rr) - nonresonant_part(f, tt, rr);
  };
  auto bound = [&](double tt, double rr) {
    const ConePoint p = cone_point(f, tt, rr);
    return p.outside ? 0.0 : tail * p.amp53;
  };
  SplittingCheck check;
  ConeQuadSpec q = spec;
  q.initial_panels = std::max(q.initial_panels, int(t / 2.0));
  check.norm_gap = lightcone_l2_norm(gap, t, q);
  check.bound = lightcone_l2_norm(bound, t, q);
  return check;
}

}  // namespace nlkg
