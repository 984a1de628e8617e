#include "nlkg/evolve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include "nlkg/parallel.hpp"
#include "nlkg/residual.hpp"
#include "nlkg/util.hpp"

namespace nlkg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

double potential_density(double u, double lambda1, double lambda2) {
  // Antiderivatives: d/du (3/8)|u|^{8/3} = |u|^{2/3} u and
  // d/du (3/8)|u|^{5/3} u = |u|^{5/3}.
  const double q = std::cbrt(u * u);  // |u|^{2/3}
  return 0.375 * (lambda1 * q * q * q * q + lambda2 * u * std::fabs(u) * q);
}

}  // namespace

SineBasis::SineBasis(int modes, double radius) : m_(modes), radius_(radius) {
  if (modes < 1) throw std::invalid_argument("SineBasis: modes must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("SineBasis: radius must be > 0");
  std::vector<double> in(static_cast<size_t>(m_)), out(static_cast<size_t>(m_));
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_ = fftw_plan_r2r_1d(m_, in.data(), out.data(), FFTW_RODFT00,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_ == nullptr) throw std::runtime_error("SineBasis: planning failed");
}

SineBasis::~SineBasis() {
  if (plan_ != nullptr) {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

double SineBasis::grid_point(int i) const { return (i + 1) * grid_step(); }

double SineBasis::wavenumber(int i) const { return (i + 1) * kPi / radius_; }

double SineBasis::dispersion(int i) const {
  const double k = wavenumber(i);
  return std::sqrt(1.0 + k * k);
}

std::vector<double> SineBasis::transform(const std::vector<double>& in,
                                         double scale) const {
  if (in.size() != static_cast<size_t>(m_))
    throw std::invalid_argument("SineBasis: wrong input length");
  std::vector<double> out(in.size());
  fftw_execute_r2r(static_cast<fftw_plan>(plan_),
                   const_cast<double*>(in.data()), out.data());
  for (double& x : out) x *= scale;
  return out;
}

// RODFT00 applied twice multiplies by 2(M+1); splitting the factor as
// 1/(M+1) then 1/2 makes to_modes return the sine-series coefficients.
std::vector<double> SineBasis::to_modes(const std::vector<double>& grid_values) const {
  return transform(grid_values, 1.0 / (m_ + 1));
}

std::vector<double> SineBasis::to_grid(const std::vector<double>& mode_coeffs) const {
  return transform(mode_coeffs, 0.5);
}

std::vector<double> SineBasis::to_modes_reference(
    const std::vector<double>& grid_values) const {
  if (grid_values.size() != static_cast<size_t>(m_))
    throw std::invalid_argument("SineBasis: wrong input length");
  std::vector<double> out(grid_values.size());
  const double step = kPi / (m_ + 1);
  parallel_for(m_, [&](long k) {
    std::vector<double> terms(static_cast<size_t>(m_));
    for (int j = 0; j < m_; ++j)
      terms[j] = grid_values[j] * std::sin(step * (j + 1) * (k + 1));
    out[k] = 2.0 / (m_ + 1) * stable_sum(terms);
  });
  return out;
}

std::vector<double> SineBasis::to_grid_reference(
    const std::vector<double>& mode_coeffs) const {
  if (mode_coeffs.size() != static_cast<size_t>(m_))
    throw std::invalid_argument("SineBasis: wrong input length");
  std::vector<double> out(mode_coeffs.size());
  const double step = kPi / (m_ + 1);
  parallel_for(m_, [&](long j) {
    std::vector<double> terms(static_cast<size_t>(m_));
    for (int k = 0; k < m_; ++k)
      terms[k] = mode_coeffs[k] * std::sin(step * (j + 1) * (k + 1));
    out[j] = stable_sum(terms);
  });
  return out;
}

void rotate_linear(const SineBasis& basis, EvolveState& state, double dt) {
  const int m = basis.modes();
  if (state.a.size() != static_cast<size_t>(m) ||
      state.b.size() != static_cast<size_t>(m))
    throw std::invalid_argument("rotate_linear: state size mismatch");
  parallel_for(m, [&](long i) {
    const double w = basis.dispersion(static_cast<int>(i));
    const double c = std::cos(w * dt);
    const double s = std::sin(w * dt);
    const double a = state.a[i];
    const double b = state.b[i];
    state.a[i] = a * c + b * s / w;
    state.b[i] = -a * w * s + b * c;
  });
  state.t += dt;
}

void strang_step(const SineBasis& basis, EvolveState& state, double dt,
                 double lambda1, double lambda2) {
  rotate_linear(basis, state, 0.5 * dt);
  if (lambda1 != 0.0 || lambda2 != 0.0) {
    const std::vector<double> v = basis.to_grid(state.a);
    std::vector<double> g(v.size());
    parallel_for(basis.modes(), [&](long j) {
      const double r = basis.grid_point(static_cast<int>(j));
      g[j] = r * nonlinearity(v[j] / r, lambda1, lambda2);
    });
    const std::vector<double> ghat = basis.to_modes(g);
    for (size_t i = 0; i < ghat.size(); ++i) state.b[i] += dt * ghat[i];
  }
  rotate_linear(basis, state, 0.5 * dt);
}

double l2_norm_x(const SineBasis& basis, const std::vector<double>& modes) {
  std::vector<double> terms(modes.size());
  for (size_t i = 0; i < modes.size(); ++i) terms[i] = modes[i] * modes[i];
  return std::sqrt(2.0 * kPi * basis.radius() * stable_sum(terms));
}

double h_half_norm_x(const SineBasis& basis, const std::vector<double>& modes) {
  std::vector<double> terms(modes.size());
  for (size_t i = 0; i < modes.size(); ++i) {
    const double k = basis.wavenumber(static_cast<int>(i));
    terms[i] = std::sqrt(1.0 + k * k) * modes[i] * modes[i];
  }
  return std::sqrt(2.0 * kPi * basis.radius() * stable_sum(terms));
}

double total_energy(const SineBasis& basis, const EvolveState& state,
                    double lambda1, double lambda2) {
  const int m = basis.modes();
  std::vector<double> quad(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double w = basis.dispersion(i);
    quad[i] = state.b[i] * state.b[i] + w * w * state.a[i] * state.a[i];
  }
  double energy = kPi * basis.radius() * stable_sum(quad);
  if (lambda1 != 0.0 || lambda2 != 0.0) {
    const std::vector<double> v = basis.to_grid(state.a);
    std::vector<double> pot(v.size());
    for (int j = 0; j < m; ++j) {
      const double r = basis.grid_point(j);
      pot[j] = r * r * potential_density(v[j] / r, lambda1, lambda2);
    }
    energy -= 4.0 * kPi * basis.grid_step() * stable_sum(pot);
  }
  return energy;
}

namespace {

void validate_window(double t_start, double t_end, double radius, int modes,
                     double dt, const char* who) {
  if (!(t_start >= 5.0))
    throw std::invalid_argument(std::string(who) + ": t_start must be >= 5");
  if (!(t_end > t_start))
    throw std::invalid_argument(std::string(who) + ": t_end must exceed t_start");
  if (!(radius > t_end))
    throw std::invalid_argument(std::string(who) +
                                ": radius must exceed t_end (finite speed)");
  if (modes < 15)
    throw std::invalid_argument(std::string(who) + ": modes must be >= 15");
  if (!(dt > 0.0) || dt > (t_end - t_start))
    throw std::invalid_argument(std::string(who) + ": bad time step");
}

std::vector<double> profile_on_grid(const SineBasis& basis,
                                    const ProfileFamily& family, double t,
                                    bool free_profile) {
  std::vector<double> vals(static_cast<size_t>(basis.modes()));
  parallel_for(basis.modes(), [&](long j) {
    const double r = basis.grid_point(static_cast<int>(j));
    vals[j] = r * (free_profile ? family.free_profile(t, r)
                                : family.full_profile(t, r));
  });
  return vals;
}

std::vector<double> mode_difference(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  std::vector<double> d(x.size());
  for (size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}

}  // namespace

TrackReport evolve_and_track(const ProfileFamily& family, const TrackConfig& cfg) {
  validate_window(cfg.t_start, cfg.t_end, cfg.radius, cfg.modes, cfg.dt,
                  "evolve_and_track");
  if (cfg.checkpoints < 2)
    throw std::invalid_argument("evolve_and_track: need >= 2 checkpoints");

  const SineBasis basis(cfg.modes, cfg.radius);
  const long n_steps =
      std::max(1L, std::lround((cfg.t_end - cfg.t_start) / cfg.dt));
  const double dt = (cfg.t_end - cfg.t_start) / static_cast<double>(n_steps);

  EvolveState state;
  state.t = cfg.t_start;
  if (cfg.init_from_linear_data) {
    // Exact linear flow of the final-state pair from t = 0 to t_start.
    const FinalState& data = family.data().state();
    std::vector<double> p(static_cast<size_t>(cfg.modes)),
        q(static_cast<size_t>(cfg.modes));
    parallel_for(cfg.modes, [&](long j) {
      const double r = basis.grid_point(static_cast<int>(j));
      p[j] = r * data.a0 * std::exp(-r * r / (2.0 * data.sigma0 * data.sigma0));
      q[j] = r * data.a1 * std::exp(-r * r / (2.0 * data.sigma1 * data.sigma1));
    });
    state.a = basis.to_modes(p);
    state.b = basis.to_modes(q);
    state.t = 0.0;
    rotate_linear(basis, state, cfg.t_start);
  } else {
    std::vector<double> va(static_cast<size_t>(cfg.modes)),
        vb(static_cast<size_t>(cfg.modes));
    parallel_for(cfg.modes, [&](long j) {
      const double r = basis.grid_point(static_cast<int>(j));
      va[j] = r * family.full_profile(cfg.t_start, r);
      vb[j] = r * family.full_profile_dt(cfg.t_start, r);
    });
    state.a = basis.to_modes(va);
    state.b = basis.to_modes(vb);
  }

  // Log-spaced checkpoint step indices, deduplicated, endpoints included.
  std::vector<long> marks;
  for (int k = 0; k < cfg.checkpoints; ++k) {
    const double frac = static_cast<double>(k) / (cfg.checkpoints - 1);
    const double target = cfg.t_start * std::pow(cfg.t_end / cfg.t_start, frac);
    const long step = std::lround((target - cfg.t_start) / dt);
    if (marks.empty() || step > marks.back()) marks.push_back(step);
  }
  if (marks.back() != n_steps) marks.push_back(n_steps);

  TrackReport report;
  size_t next_mark = 0;
  for (long s = 0; s <= n_steps; ++s) {
    const double t = cfg.t_start + s * dt;
    if (next_mark < marks.size() && s == marks[next_mark]) {
      ++next_mark;
      const std::vector<double> prof = basis.to_modes(profile_on_grid(basis, family, t, false));
      const std::vector<double> free = basis.to_modes(profile_on_grid(basis, family, t, true));
      report.times.push_back(t);
      report.err_l2.push_back(l2_norm_x(basis, mode_difference(state.a, prof)));
      report.err_h_half.push_back(
          h_half_norm_x(basis, mode_difference(state.a, prof)));
      report.err_l2_uncorrected.push_back(
          l2_norm_x(basis, mode_difference(state.a, free)));
      report.profile_norm.push_back(l2_norm_x(basis, prof));
      report.energy.push_back(
          total_energy(basis, state, cfg.lambda1, cfg.lambda2));
    }
    if (s < n_steps) strang_step(basis, state, dt, cfg.lambda1, cfg.lambda2);
  }

  {
    const std::vector<double> v = basis.to_grid(state.a);
    std::vector<double> all(v.size()), outer(v.size(), 0.0);
    for (size_t j = 0; j < v.size(); ++j) {
      all[j] = v[j] * v[j];
      if (basis.grid_point(static_cast<int>(j)) > 0.9 * cfg.radius)
        outer[j] = all[j];
    }
    const double total = stable_sum(all);
    report.boundary_mass_ratio = total > 0.0 ? stable_sum(outer) / total : 0.0;
  }

  // Fit the second half of the checkpoints; zero errors (exact start) are
  // excluded by construction of the window.
  std::vector<double> ts, es;
  for (size_t i = report.times.size() / 2; i < report.times.size(); ++i) {
    if (report.err_l2[i] > 0.0) {
      ts.push_back(report.times[i]);
      es.push_back(report.err_l2[i]);
    }
  }
  if (ts.size() >= 3)
    report.fitted_gamma = -fit_power_law(ts, es, false).exponent;
  return report;
}

std::vector<double> duhamel_tail_integral(double omega,
                                          const std::vector<double>& g,
                                          double dt) {
  if (!(omega > 0.0))
    throw std::invalid_argument("duhamel_tail_integral: omega must be > 0");
  if (!(dt > 0.0))
    throw std::invalid_argument("duhamel_tail_integral: dt must be > 0");
  if (g.size() < 2)
    throw std::invalid_argument("duhamel_tail_integral: need >= 2 samples");
  const std::complex<double> iw(0.0, omega);
  const std::complex<double> rot = std::exp(iw * dt);
  const std::complex<double> seg0 = (rot - 1.0) / iw;          // int e^{iws}
  const std::complex<double> seg1 = (dt * rot - seg0) / iw;    // int s e^{iws}
  std::vector<double> out(g.size());
  std::complex<double> phasor(0.0, 0.0);  // int_{t_i}^{t_max} e^{iw(tau-t_i)} g
  out.back() = 0.0;
  for (size_t i = g.size() - 1; i-- > 0;) {
    const double slope = (g[i + 1] - g[i]) / dt;
    phasor = g[i] * seg0 + slope * seg1 + rot * phasor;
    out[i] = phasor.imag() / omega;
  }
  return out;
}

FixedPointReport fixed_point_iterate(const ProfileFamily& family,
                                     const FixedPointConfig& cfg) {
  validate_window(cfg.t_start, cfg.t_end, cfg.radius, cfg.modes, cfg.dt,
                  "fixed_point_iterate");
  if (cfg.iterations < 1 || cfg.iterations > 16)
    throw std::invalid_argument("fixed_point_iterate: iterations in [1,16]");
  if (!(cfg.fd_step > 0.0) || cfg.t_start - 2.0 * cfg.fd_step <= 3.0)
    throw std::invalid_argument("fixed_point_iterate: bad fd_step");
  if (!(cfg.weight_exponent >= 0.0 && cfg.weight_exponent <= 3.0))
    throw std::invalid_argument("fixed_point_iterate: weight_exponent in [0,3]");

  const SineBasis basis(cfg.modes, cfg.radius);
  const long n_steps =
      std::max(1L, std::lround((cfg.t_end - cfg.t_start) / cfg.dt));
  const double dt = (cfg.t_end - cfg.t_start) / static_cast<double>(n_steps);
  const long nt = n_steps + 1;
  const int m = cfg.modes;
  const size_t field_size = static_cast<size_t>(nt) * m;

  // Widened support so box stencils never straddle the profile cutoff; the
  // two families agree to below 1e-30 inside the original cone.
  ProfileConfig wide = family.config();
  wide.cone_cutoff = std::max(wide.cone_cutoff, 0.9999);
  const ProfileFamily wf(family.data(), wide);

  std::vector<double> a_field(field_size), f_field(field_size);
  auto sampler = [&wf](double tt, double rr) { return wf.full_profile(tt, rr); };
  parallel_for(nt, [&](long i) {
    const double t = cfg.t_start + i * dt;
    for (int j = 0; j < m; ++j) {
      const double r = basis.grid_point(j);
      const double a = wf.full_profile(t, r);
      a_field[i * m + j] = a;
      f_field[i * m + j] =
          discrete_box_plus_one(sampler, t, r, cfg.fd_step, cfg.fd_step) -
          nonlinearity(a, cfg.lambda1, cfg.lambda2);
    }
  });

  const double dr = basis.grid_step();
  auto weighted_sup = [&](const std::vector<double>& u_diff) {
    std::vector<double> row(static_cast<size_t>(nt));
    parallel_for(nt, [&](long i) {
      std::vector<double> terms(static_cast<size_t>(m));
      for (int j = 0; j < m; ++j) {
        const double r = basis.grid_point(j);
        const double d = u_diff[i * m + j];
        terms[j] = r * r * d * d;
      }
      const double t = cfg.t_start + i * dt;
      row[i] = std::pow(t, cfg.weight_exponent) *
               std::sqrt(4.0 * kPi * dr * stable_sum(terms));
    });
    return *std::max_element(row.begin(), row.end());
  };

  FixedPointReport report;
  report.forcing_sup = weighted_sup(f_field);

  std::vector<double> w_prev(field_size, 0.0), w_cur(field_size);
  std::vector<double> modes_by_time(field_size), series(field_size);
  for (int k = 1; k <= cfg.iterations; ++k) {
    // Right side on the grid, premultiplied by r for the v = r u reduction.
    parallel_for(nt, [&](long i) {
      std::vector<double> row(static_cast<size_t>(m));
      for (int j = 0; j < m; ++j) {
        const size_t ij = i * m + j;
        const double rhs =
            nonlinearity(w_prev[ij] + a_field[ij], cfg.lambda1, cfg.lambda2) -
            nonlinearity(a_field[ij], cfg.lambda1, cfg.lambda2) - f_field[ij];
        row[j] = basis.grid_point(j) * rhs;
      }
      const std::vector<double> hat = basis.to_modes(row);
      for (int j = 0; j < m; ++j) modes_by_time[i * m + j] = hat[j];
    });
    parallel_for(m, [&](long mm) {
      for (long i = 0; i < nt; ++i)
        series[mm * nt + i] = modes_by_time[i * m + mm];
    });
    parallel_for(m, [&](long mm) {
      std::vector<double> slice(series.begin() + mm * nt,
                                series.begin() + (mm + 1) * nt);
      const std::vector<double> tail =
          duhamel_tail_integral(basis.dispersion(static_cast<int>(mm)), slice, dt);
      for (long i = 0; i < nt; ++i) series[mm * nt + i] = tail[i];
    });
    parallel_for(nt, [&](long i) {
      std::vector<double> hat(static_cast<size_t>(m));
      for (int j = 0; j < m; ++j) hat[j] = series[j * nt + i];
      const std::vector<double> grid = basis.to_grid(hat);
      for (int j = 0; j < m; ++j)
        w_cur[i * m + j] = grid[j] / basis.grid_point(j);
    });

    std::vector<double> diff(field_size);
    for (size_t idx = 0; idx < field_size; ++idx)
      diff[idx] = w_cur[idx] - w_prev[idx];
    report.increment_sup.push_back(weighted_sup(diff));
    std::swap(w_prev, w_cur);
  }
  for (size_t k = 1; k < report.increment_sup.size(); ++k) {
    const double prev = report.increment_sup[k - 1];
    report.ratios.push_back(prev > 0.0 ? report.increment_sup[k] / prev : 0.0);
  }
  return report;
}

}  // namespace nlkg
