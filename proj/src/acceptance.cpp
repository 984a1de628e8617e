#include "nlkg/acceptance.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nlkg/coeffs.hpp"
#include "nlkg/evolve.hpp"
#include "nlkg/residual.hpp"

namespace nlkg::acceptance {

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch())
      .count();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

bool zero_state(const FinalState& s) { return s.a0 == 0.0 && s.a1 == 0.0; }

// Rescales to the pinned amplitude weight; a zero shape passes through
// (every criterion treats it as the degenerate trivial case).
FinalState at_weight(const FinalState& s, double weight) {
  return zero_state(s) ? s : scaled_to_weight(s, weight);
}

bool all_zero(const std::vector<double>& xs) {
  for (double x : xs) {
    if (x != 0.0) return false;
  }
  return true;
}

CriterionResult trivial_pass(CriterionResult r) {
  r.measured = 0.0;
  r.passed = true;
  r.detail = "zero final state: every measured norm vanishes identically";
  return r;
}

//--------------------------------------------------------------------------
// C1: closed-form coefficients against the quadrature oracle, both
// channels, plus exact cross-parity zeros.
//--------------------------------------------------------------------------
CriterionResult criterion_c1() {
  CriterionResult r;
  r.id = "C1";
  r.description =
      "closed-form cosine coefficients match the quadrature oracle in both "
      "channels and vanish identically at the opposite parity";
  r.threshold = 1e-10;
  r.relation = "<=";
  const double t0 = now_seconds();

  double max_gap = 0.0;
  double max_cross_quad = 0.0;
  bool zeros_exact = true;
  for (int n = 1; n <= 49; n += 2) {
    const double gap = std::abs(coeffs::closed_form(coeffs::Kind::Odd, n) -
                                coeffs::quadrature_oracle(coeffs::Kind::Odd, n));
    max_gap = std::max(max_gap, gap);
    if (coeffs::closed_form(coeffs::Kind::Even, n) != 0.0) zeros_exact = false;
    max_cross_quad = std::max(
        max_cross_quad,
        std::abs(coeffs::quadrature_oracle(coeffs::Kind::Even, n)));
  }
  for (int n = 0; n <= 48; n += 2) {
    const double gap =
        std::abs(coeffs::closed_form(coeffs::Kind::Even, n) -
                 coeffs::quadrature_oracle(coeffs::Kind::Even, n));
    max_gap = std::max(max_gap, gap);
    if (coeffs::closed_form(coeffs::Kind::Odd, n) != 0.0) zeros_exact = false;
    max_cross_quad =
        std::max(max_cross_quad,
                 std::abs(coeffs::quadrature_oracle(coeffs::Kind::Odd, n)));
  }

  r.measured = max_gap;
  r.passed =
      max_gap <= r.threshold && zeros_exact && max_cross_quad <= r.threshold;
  r.detail = std::string("cross-parity closed forms ") +
             (zeros_exact ? "exactly zero" : "NONZERO") +
             "; cross-parity quadrature <= " + num(max_cross_quad);
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C2: odd-channel coefficients follow the n^{-8/3} envelope.
//--------------------------------------------------------------------------
CriterionResult criterion_c2() {
  CriterionResult r;
  r.id = "C2";
  r.description =
      "odd-channel coefficient magnitudes track the n^{-8/3} envelope "
      "within a factor 2 of the value at n = 99";
  r.threshold = 2.0;
  r.relation = "<=";
  const double t0 = now_seconds();

  const double ref = std::abs(coeffs::closed_form(coeffs::Kind::Odd, 99)) *
                     std::pow(99.0, 8.0 / 3.0);
  double worst = 1.0;
  int worst_n = 99;
  for (int n = 21; n <= 99; n += 2) {
    const double v = std::abs(coeffs::closed_form(coeffs::Kind::Odd, n)) *
                     std::pow(double(n), 8.0 / 3.0);
    const double band = std::max(v / ref, ref / v);
    if (band > worst) {
      worst = band;
      worst_n = n;
    }
  }

  r.measured = worst;
  r.passed = worst <= r.threshold && std::isfinite(worst);
  r.detail = "widest band at n = " + std::to_string(worst_n);
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C3: the discrete Klein-Gordon operator reproduces its closed-form image
// on oscillating power laws at 4th order in the step.
//--------------------------------------------------------------------------
CriterionResult criterion_c3() {
  CriterionResult r;
  r.id = "C3";
  r.description =
      "discrete wave operator matches the closed-form image on oscillating "
      "power laws, deviation shrinking 12x-20x under step halving";
  r.threshold = 12.0;
  r.relation = ">=";
  const double t0 = now_seconds();

  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 10; ++i) {
    const double t = 30.0 * std::pow(10.0, i / 9.0);
    for (double frac : {0.0, 0.2, 0.45, 0.7, 0.9}) {
      pts.push_back({t, frac * t});
    }
  }
  const double pairs[3][2] = {{1.0, 1.5}, {3.0, 2.5}, {1.0, 0.0}};
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::string ratios;
  for (const auto& p : pairs) {
    const double d1 =
        oscillatory_box_identity_deviation(p[0], p[1], pts, 0.05, 0.05);
    const double d2 =
        oscillatory_box_identity_deviation(p[0], p[1], pts, 0.025, 0.025);
    const double ratio = d1 / d2;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    if (!ratios.empty()) ratios += ", ";
    ratios += num(ratio);
  }

  r.measured = min_ratio;
  r.passed = min_ratio >= 12.0 && max_ratio <= 20.0;
  r.detail = "ratios " + ratios + " over 50 cone points, all required in "
             "[12, 20]";
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C4: amplitude sandwich exact; smoothing-gap and derivative bounds finite
// and stable under grid refinement, at two amplitude weights.
//--------------------------------------------------------------------------
CriterionResult criterion_c4(const Inputs& in) {
  CriterionResult r;
  r.id = "C4";
  r.description =
      "smoothed-amplitude sandwich exact at every sample; smoothing-gap and "
      "derivative bound ratios finite and stable under 2x refinement at "
      "amplitude weights 0.01 and 0.1";
  r.threshold = 1e3;  // sanity cap: the substance is finiteness + stability
  r.relation = "<=";
  const double t0 = now_seconds();

  double worst_bound_ratio = 0.0;
  double worst_sandwich = 0.0;
  bool all_stable = true;
  std::string unstable;
  for (double weight : {0.01, 0.1}) {
    ProfileConfig pc;
    pc.lambda1 = in.lambda1;
    pc.lambda2 = in.lambda2;
    ProfileFamily f(ScatteringData(at_weight(in.general, weight)), pc);
    const auto reports = verify_pointwise_inequalities(f);
    worst_sandwich = std::max(worst_sandwich, reports[0].max_ratio);
    for (size_t k = 0; k < reports.size(); ++k) {
      if (!reports[k].refinement_stable) {
        all_stable = false;
        if (!unstable.empty()) unstable += ", ";
        unstable += reports[k].name;
      }
      if (k > 0) {
        worst_bound_ratio = std::max(worst_bound_ratio, reports[k].max_ratio);
      }
    }
  }

  r.measured = worst_bound_ratio;
  r.passed = worst_sandwich <= 1.0 + 1e-12 && all_stable &&
             std::isfinite(worst_bound_ratio) &&
             worst_bound_ratio <= r.threshold;
  r.detail = "sandwich ratio " + num(worst_sandwich) + " (required <= 1)" +
             (all_stable ? "; all rows refinement-stable"
                         : "; UNSTABLE rows: " + unstable);
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C5: the smoothing changes the leading profile by a bounded multiple of
// t^{-5/6} log t across two decades.
//--------------------------------------------------------------------------
CriterionResult criterion_c5(const ProfileFamily* f) {
  CriterionResult r;
  r.id = "C5";
  r.description =
      "gap between smoothed and plain leading profiles stays within a "
      "factor-3 band around t^{-5/6} log t over t in [1e2, 1e4]";
  r.threshold = 3.0;
  r.relation = "<=";
  const double t0 = now_seconds();
  if (f == nullptr) return trivial_pass(std::move(r));

  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double t = 1e2 * std::pow(1e2, i / 11.0);
    const double norm = lightcone_l2_norm(
        [&](double tt, double rr) {
          return f->smoothed_profile(tt, rr) - f->leading_profile(tt, rr);
        },
        t);
    const double ratio = norm / (std::pow(t, -5.0 / 6.0) * std::log(t));
    rmin = std::min(rmin, ratio);
    rmax = std::max(rmax, ratio);
  }

  if (rmax == 0.0) {
    r.measured = 0.0;
    r.passed = true;
    r.detail = "gap identically zero (no log-phase correction to smooth)";
  } else {
    r.measured = rmax / rmin;
    r.passed = std::isfinite(r.measured) && r.measured <= r.threshold;
    r.detail = "normalized gap in [" + num(rmin) + ", " + num(rmax) +
               "] across 12 log-spaced times";
  }
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C6: the leading-profile residual decays at the corrected rate once the
// resonant part is subtracted, while the raw residual sits at the resonant
// rate.
//--------------------------------------------------------------------------
CriterionResult criterion_c6(const ProfileFamily* f) {
  CriterionResult r;
  r.id = "C6";
  r.description =
      "leading-profile residual minus its resonant part decays with fitted "
      "exponent <= -1.6 (r^2 >= 0.98); without subtraction the exponent "
      "sits in [-1.2, -0.85]";
  r.threshold = -1.6;
  r.relation = "<=";
  const double t0 = now_seconds();
  if (f == nullptr) return trivial_pass(std::move(r));

  const DecayReport res =
      residual_decay_scan(*f, ResidualKind::LeadingVsResonant);
  const DecayReport unc =
      residual_decay_scan(*f, ResidualKind::LeadingUncorrected);
  if (all_zero(res.norms) && all_zero(unc.norms)) {
    r.seconds = now_seconds() - t0;
    return trivial_pass(std::move(r));
  }

  const bool unc_in_window =
      unc.plain.exponent >= -1.2 && unc.plain.exponent <= -0.85;
  r.measured = res.plain.exponent;
  r.passed = res.plain.exponent <= r.threshold &&
             res.plain.r_squared >= 0.98 && unc_in_window;
  r.detail = "r^2 " + num(res.plain.r_squared) + "; unsubtracted exponent " +
             num(unc.plain.exponent) + " (required in [-1.2, -0.85], r^2 " +
             num(unc.plain.r_squared) + ")";
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C7: each harmonic correction cancels its cosine mode of the nonlinearity,
// with amplitudes proportional to the coefficients.
//--------------------------------------------------------------------------
CriterionResult criterion_c7(const ProfileFamily* f) {
  CriterionResult r;
  r.id = "C7";
  r.description =
      "harmonic corrections n = 3, 5, 7, 9 cancel their nonlinearity modes "
      "with fitted exponents <= -1.8 and amplitudes tracking the "
      "coefficients within a factor 4";
  r.threshold = -1.8;
  r.relation = "<=";
  const double t0 = now_seconds();
  if (f == nullptr) return trivial_pass(std::move(r));

  double worst_exp = -std::numeric_limits<double>::infinity();
  double scale_min = std::numeric_limits<double>::infinity();
  double scale_max = 0.0;
  bool any_nonzero = false;
  std::string exps;
  for (int n : {3, 5, 7, 9}) {
    ScanConfig cfg;
    cfg.harmonic_n = n;
    const DecayReport rep = residual_decay_scan(*f, ResidualKind::Harmonic, cfg);
    if (all_zero(rep.norms)) continue;
    any_nonzero = true;
    worst_exp = std::max(worst_exp, rep.plain.exponent);
    const double cn = std::abs(coeffs::closed_form(coeffs::Kind::Odd, n));
    const double scale = rep.plain.amplitude / cn;
    scale_min = std::min(scale_min, scale);
    scale_max = std::max(scale_max, scale);
    if (!exps.empty()) exps += ", ";
    exps += num(rep.plain.exponent);
  }
  if (!any_nonzero) {
    r.seconds = now_seconds() - t0;
    return trivial_pass(std::move(r));
  }

  const double spread = scale_max / scale_min;
  r.measured = worst_exp;
  r.passed = worst_exp <= r.threshold && spread <= 4.0;
  r.detail = "exponents " + exps + "; amplitude/coefficient spread " +
             num(spread) + " (required <= 4)";
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C8: the assembled profile leaves a residual decaying strictly faster
// than the uncorrected obstruction.
//--------------------------------------------------------------------------
CriterionResult criterion_c8(const ProfileFamily* f) {
  CriterionResult r;
  r.id = "C8";
  r.description =
      "full corrected profile residual decays with fitted exponent <= -1.6";
  r.threshold = -1.6;
  r.relation = "<=";
  const double t0 = now_seconds();
  if (f == nullptr) return trivial_pass(std::move(r));

  const DecayReport rep = residual_decay_scan(*f, ResidualKind::Full);
  if (all_zero(rep.norms)) {
    r.seconds = now_seconds() - t0;
    return trivial_pass(std::move(r));
  }

  r.measured = rep.plain.exponent;
  r.passed = rep.plain.exponent <= r.threshold;
  r.detail = "r^2 " + num(rep.plain.r_squared) + "; norm " +
             num(rep.norms.front()) + " -> " + num(rep.norms.back()) +
             " over [1e2, 1e4]";
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C9: the zero-coupling flow started from the exact linear evolution of
// the final state converges to the leading profile.
//--------------------------------------------------------------------------
CriterionResult criterion_c9(const Inputs& in, double& energy_drift,
                             bool& ran) {
  CriterionResult r;
  r.id = "C9";
  r.description =
      "zero-coupling flow from exactly evolved final data approaches the "
      "leading profile: relative gap decreasing and <= 0.05 at t = 400";
  r.threshold = 0.05;
  r.relation = "<=";
  const double t0 = now_seconds();
  ran = false;
  if (zero_state(in.general)) return trivial_pass(std::move(r));

  ProfileConfig pc;
  pc.lambda1 = 0.0;
  pc.lambda2 = 0.0;
  ProfileFamily f(ScatteringData(in.general), pc);
  TrackConfig tc;
  tc.t_start = 50.0;
  tc.t_end = 400.0;
  tc.radius = 450.0;
  tc.modes = 4095;
  tc.dt = 0.05;
  tc.checkpoints = 12;
  tc.lambda1 = 0.0;
  tc.lambda2 = 0.0;
  tc.init_from_linear_data = true;
  const TrackReport rep = evolve_and_track(f, tc);
  ran = true;

  std::vector<double> rel(rep.times.size());
  for (size_t k = 0; k < rel.size(); ++k) {
    rel[k] = rep.err_l2[k] / rep.profile_norm[k];
  }
  bool decreasing = rel.back() < rel.front();
  for (size_t k = 0; k + 1 < rel.size(); ++k) {
    // 2% slack absorbs checkpoint-level wobble of the oscillatory gap.
    if (rel[k + 1] > 1.02 * rel[k]) decreasing = false;
  }
  energy_drift = 0.0;
  for (double e : rep.energy) {
    energy_drift = std::max(energy_drift, std::abs(e - rep.energy.front()) /
                                              std::abs(rep.energy.front()));
  }

  r.measured = rel.back();
  r.passed = rel.back() <= r.threshold && decreasing;
  r.detail = "relative gap " + num(rel.front()) + " -> " + num(rel.back()) +
             (decreasing ? ", decreasing" : ", NOT decreasing") +
             "; boundary mass " + num(rep.boundary_mass_ratio);
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C10: the nonlinear flow started on the corrected profile tracks it, and
// tracks it at most half as far as the free profile, for both signs of the
// odd coupling and once with the even coupling on.
//--------------------------------------------------------------------------
CriterionResult criterion_c10(const Inputs& in, double& energy_drift,
                              int& runs) {
  CriterionResult r;
  r.id = "C10";
  r.description =
      "nonlinear flow from profile data keeps a decaying tracking gap "
      "(fitted decay rate >= 0.7) and stays at most half the free-profile "
      "gap, for couplings (+1, 0), (-1, 0), (+1, +1)";
  r.threshold = 0.7;
  r.relation = ">=";
  const double t0 = now_seconds();
  energy_drift = 0.0;
  runs = 0;
  if (zero_state(in.general)) return trivial_pass(std::move(r));

  const FinalState st = at_weight(in.general, 0.05);
  const double cases[3][2] = {{1.0, 0.0}, {-1.0, 0.0}, {1.0, 1.0}};
  double min_gamma = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  std::string gammas, ratios;
  for (const auto& c : cases) {
    ProfileConfig pc;
    pc.lambda1 = c[0];
    pc.lambda2 = c[1];
    ProfileFamily f(ScatteringData(st), pc);
    TrackConfig tc;
    tc.lambda1 = c[0];
    tc.lambda2 = c[1];
    const TrackReport rep = evolve_and_track(f, tc);
    ++runs;
    min_gamma = std::min(min_gamma, rep.fitted_gamma);
    const double ratio = rep.err_l2.back() / rep.err_l2_uncorrected.back();
    max_ratio = std::max(max_ratio, ratio);
    for (double e : rep.energy) {
      energy_drift = std::max(energy_drift, std::abs(e - rep.energy.front()) /
                                                std::abs(rep.energy.front()));
    }
    if (!gammas.empty()) {
      gammas += ", ";
      ratios += ", ";
    }
    gammas += num(rep.fitted_gamma);
    ratios += num(ratio);
  }

  r.measured = min_gamma;
  r.passed = min_gamma >= r.threshold && max_ratio <= 0.5;
  r.detail = "fitted decay rates " + gammas + "; corrected/free gap ratios " +
             ratios + " (required <= 0.5)";
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C11: the retarded-integral fixed-point iteration contracts.
//--------------------------------------------------------------------------
CriterionResult criterion_c11(const Inputs& in) {
  CriterionResult r;
  r.id = "C11";
  r.description =
      "retarded-integral fixed-point iteration contracts with successive "
      "increment ratios <= 0.7";
  r.threshold = 0.7;
  r.relation = "<=";
  const double t0 = now_seconds();
  if (zero_state(in.general)) return trivial_pass(std::move(r));

  ProfileConfig pc;
  pc.lambda1 = in.lambda1;
  pc.lambda2 = in.lambda2;
  ProfileFamily f(ScatteringData(at_weight(in.general, 0.05)), pc);
  FixedPointConfig fc;
  fc.lambda1 = in.lambda1;
  fc.lambda2 = in.lambda2;
  const FixedPointReport rep = fixed_point_iterate(f, fc);

  if (all_zero(rep.increment_sup)) {
    r.seconds = now_seconds() - t0;
    return trivial_pass(std::move(r));
  }
  double worst = 0.0;
  std::string ratios;
  for (double q : rep.ratios) {
    worst = std::max(worst, q);
    if (!ratios.empty()) ratios += ", ";
    ratios += num(q);
  }

  r.measured = worst;
  r.passed = worst <= r.threshold && std::isfinite(worst);
  r.detail = "increment ratios " + ratios + "; first increment " +
             num(rep.increment_sup.front()) + ", weighted forcing " +
             num(rep.forcing_sup);
  r.seconds = now_seconds() - t0;
  return r;
}

//--------------------------------------------------------------------------
// C12: conservation and transform consistency of the evolution kernels.
//--------------------------------------------------------------------------
CriterionResult criterion_c12(double tracked_drift, bool have_drift) {
  CriterionResult r;
  r.id = "C12";
  r.description =
      "evolution bookkeeping: relative energy drift <= 1e-4 per run, "
      "linear flow reversible to 1e-10, mode and grid norms agree to 1e-8";
  r.threshold = 1e-4;
  r.relation = "<=";
  const double t0 = now_seconds();

  const SineBasis basis(2047, 300.0);
  const int m = basis.modes();
  std::vector<double> a(m), b(m);
  for (int i = 0; i < m; ++i) {
    const double k = basis.wavenumber(i);
    a[i] = std::sin(0.37 * (i + 1)) / (1.0 + k * k);
    b[i] = std::cos(1.3 + 0.11 * (i + 1)) / (1.0 + k);
  }

  EvolveState fwd{0.0, a, b};
  rotate_linear(basis, fwd, 271.828);
  rotate_linear(basis, fwd, -271.828);
  double num2 = 0.0, den2 = 0.0;
  for (int i = 0; i < m; ++i) {
    num2 += (fwd.a[i] - a[i]) * (fwd.a[i] - a[i]) +
            (fwd.b[i] - b[i]) * (fwd.b[i] - b[i]);
    den2 += a[i] * a[i] + b[i] * b[i];
  }
  const double reversibility = std::sqrt(num2 / den2);

  const std::vector<double> grid = basis.to_grid(a);
  double grid2 = 0.0;
  for (double v : grid) grid2 += v * v;
  const double grid_norm =
      std::sqrt(4.0 * M_PI * basis.grid_step() * grid2);
  const double mode_norm = l2_norm_x(basis, a);
  const double parseval = std::abs(grid_norm - mode_norm) / mode_norm;

  r.measured = have_drift ? tracked_drift : 0.0;
  r.passed = (!have_drift || tracked_drift <= r.threshold) &&
             reversibility <= 1e-10 && parseval <= 1e-8;
  r.detail = std::string(have_drift ? "worst drift across tracking runs"
                                    : "no tracking run executed; drift 0") +
             "; reversibility gap " + num(reversibility) +
             " (<= 1e-10); norm agreement gap " + num(parseval) +
             " (<= 1e-8)";
  r.seconds = now_seconds() - t0;
  return r;
}

}  // namespace

Inputs inputs_from_config(const RunConfig& config) {
  Inputs in;
  in.general = config.data;
  in.scan = config.data;
  in.lambda1 = config.profile.lambda1;
  in.lambda2 = config.profile.lambda2;
  return in;
}

std::vector<CriterionResult> coefficient_criteria() {
  return {criterion_c1(), criterion_c2()};
}

std::vector<CriterionResult> lemma_criteria(const Inputs& in) {
  return {criterion_c3(), criterion_c4(in)};
}

std::vector<CriterionResult> residual_criteria(const Inputs& in) {
  std::vector<CriterionResult> out;
  if (zero_state(in.scan)) {
    out.push_back(criterion_c5(nullptr));
    out.push_back(criterion_c6(nullptr));
    out.push_back(criterion_c7(nullptr));
    out.push_back(criterion_c8(nullptr));
    return out;
  }
  ProfileConfig pc;
  pc.lambda1 = in.lambda1;
  pc.lambda2 = in.lambda2;
  ProfileFamily f(ScatteringData(at_weight(in.scan, 0.7)), pc);
  out.push_back(criterion_c5(&f));
  out.push_back(criterion_c6(&f));
  out.push_back(criterion_c7(&f));
  out.push_back(criterion_c8(&f));
  return out;
}

std::vector<CriterionResult> evolution_criteria(const Inputs& in) {
  std::vector<CriterionResult> out;
  double drift9 = 0.0, drift10 = 0.0;
  bool ran9 = false;
  int runs10 = 0;
  out.push_back(criterion_c9(in, drift9, ran9));
  out.push_back(criterion_c10(in, drift10, runs10));
  out.push_back(criterion_c11(in));
  const bool have_drift = ran9 || runs10 > 0;
  out.push_back(criterion_c12(std::max(drift9, drift10), have_drift));
  return out;
}

std::vector<CriterionResult> all_criteria(const Inputs& in) {
  std::vector<CriterionResult> out = coefficient_criteria();
  for (auto& r : lemma_criteria(in)) out.push_back(std::move(r));
  for (auto& r : residual_criteria(in)) out.push_back(std::move(r));
  for (auto& r : evolution_criteria(in)) out.push_back(std::move(r));
  return out;
}

std::string verdict_line(const CriterionResult& r) {
  char head[160];
  std::snprintf(head, sizeof head, "[%s] %-3s measured %.6g %s %.6g",
                r.passed ? "PASS" : "FAIL", r.id.c_str(), r.measured,
                r.relation.c_str(), r.threshold);
  char tail[32];
  std::snprintf(tail, sizeof tail, " [%.1fs]", r.seconds);
  std::string line = std::string(head) + " | " + r.description;
  if (!r.detail.empty()) line += " | " + r.detail;
  line += tail;
  return line;
}

std::string verdict_json(const std::vector<CriterionResult>& results) {
  std::string out = "[\n";
  for (size_t i = 0; i < results.size(); ++i) {
    const CriterionResult& r = results[i];
    char nums[96];
    std::snprintf(nums, sizeof nums,
                  "\"measured\": %.17g, \"threshold\": %.17g", r.measured,
                  r.threshold);
    out += "  {\"criterion_id\": \"" + r.id + "\", \"description\": \"" +
           r.description + "\", " + nums +
           ", \"passed\": " + (r.passed ? "true" : "false") + "}";
    if (i + 1 < results.size()) out += ",";
    out += "\n";
  }
  out += "]\n";
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

}  // namespace nlkg::acceptance
