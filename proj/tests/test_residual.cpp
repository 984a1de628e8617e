#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "nlkg/final_data.hpp"
#include "nlkg/profiles.hpp"
#include "nlkg/residual.hpp"

using namespace nlkg;

namespace {

const FinalState kDefault{1.0, 1.3, 0.5, 1.25};
const FinalState kZero{0.0, 1.0, 0.0, 1.0};

ProfileFamily family(double l1, double l2 = 0.0, int n_max = 41,
                     double weight = 0.05) {
  ProfileConfig c;
  c.lambda1 = l1;
  c.lambda2 = l2;
  c.n_max = n_max;
  return ProfileFamily(ScatteringData(scaled_to_weight(kDefault, weight)), c);
}

// Velocity-only data at a weight where the first-order channel dominates the
// uncorrected residual inside the scan window; see the decay-scan cases.
const FinalState kScanState{0.0, 1.0, 1.0, 1.0};

ProfileFamily scan_family(double l1) {
  ProfileConfig c;
  c.lambda1 = l1;
  return ProfileFamily(ScatteringData(scaled_to_weight(kScanState, 0.7)), c);
}

}  // namespace

TEST_CASE("nonlinearity closed forms") {
  CHECK(nonlinearity(0.0, 1.0, 1.0) == 0.0);
  CHECK(nonlinearity(-1.0, 1.0, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(nonlinearity(8.0, 1.0, 0.0) == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(nonlinearity(8.0, 0.0, 1.0) == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(nonlinearity(-8.0, 0.0, 1.0) == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(nonlinearity(-1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  // Continuity at 0: |N(u)| <= (|l1| + |l2|) |u|^{5/3}.
  for (double u : {1e-12, -1e-12, 1e-6, -1e-6}) {
    CHECK(std::abs(nonlinearity(u, 2.0, 3.0)) <=
          5.0 * std::pow(std::abs(u), 5.0 / 3.0) * 1.0000001);
  }
}

TEST_CASE("splitting reproduces the nonlinearity within the series tail") {
  std::mt19937 rng(20260818);
  std::uniform_real_distribution<double> ufrac(0.0, 0.99);
  std::uniform_real_distribution<double> ulog(std::log(10.0), std::log(1e4));

  for (double l2 : {0.0, 0.7}) {
    const ProfileFamily f = family(1.0, l2, 201);
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = std::exp(ulog(rng));
      const double r = ufrac(rng) * t;
      const double direct =
          nonlinearity(f.smoothed_profile(t, r), 1.0, l2);
      const double split = resonant_part(f, t, r) + nonresonant_part(f, t, r);
      const double tail = splitting_tail_bound(f, t, r);
      CHECK(std::abs(direct - split) <= tail + 1e-18);
    }
  }
}

TEST_CASE("splitting vanishes with the coupling and sums to zero at nodes") {
  const ProfileFamily f0 = family(0.0);
  CHECK(resonant_part(f0, 50.0, 10.0) == 0.0);
  CHECK(nonresonant_part(f0, 50.0, 10.0) == 0.0);

  // Bisect a zero of cos(phase + beta) in r at fixed t: there the profile
  // itself vanishes, so the truncated series must vanish within the tail.
  const ProfileFamily f = family(1.0, 0.0, 201);
  const double t = 80.0;
  auto osc = [&](double r) {
    const HyperbolicPoint h = to_hyperbolic(t, r);
    return std::cos(f.phase(t, h.mu_norm) + f.data().beta(h.mu_norm));
  };
  double lo = 1.0, hi = 2.0;
  while (osc(lo) * osc(hi) > 0.0) {
    lo = hi;
    hi += 1.0;
    REQUIRE(hi < 70.0);
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (osc(lo) * osc(mid) <= 0.0 ? hi : lo) = mid;
  }
  const double r0 = 0.5 * (lo + hi);
  CHECK(std::abs(osc(r0)) < 1e-13);
  CHECK(std::abs(nonlinearity(f.smoothed_profile(t, r0), 1.0, 0.0)) < 1e-18);
  CHECK(std::abs(resonant_part(f, t, r0) + nonresonant_part(f, t, r0)) <=
        splitting_tail_bound(f, t, r0) + 1e-18);
}

TEST_CASE("discrete operator: exact and closed-form samplers") {
  auto zero = [](double, double) { return 0.0; };
  CHECK(discrete_box_plus_one(zero, 50.0, 10.0, 0.01, 0.01) == 0.0);

  // No spatial dependence: (box+1) e^{-t} = 2 e^{-t} up to O(h^4).
  auto expt = [](double t, double) { return std::exp(-t); };
  const double got = discrete_box_plus_one(expt, 10.0, 2.0, 0.01, 0.01);
  CHECK(got == doctest::Approx(2.0 * std::exp(-10.0)).epsilon(1e-8));

  // Quadratic in r: the 4th-order stencil is exact, including on the axis.
  auto rsq = [](double, double r) { return r * r; };
  for (double r : {0.0, 0.5, 7.0}) {
    CHECK(discrete_box_plus_one(rsq, 50.0, r, 0.01, 0.01) ==
          doctest::Approx(r * r - 6.0).epsilon(1e-12));
  }

  CHECK_THROWS_AS(discrete_box_plus_one(zero, 3.01, 1.0, 0.01, 0.01),
                  std::domain_error);
  CHECK_THROWS_AS(discrete_box_plus_one(zero, 50.0, 1.0, 0.0, 0.01),
                  std::invalid_argument);
}

TEST_CASE("oscillatory power laws satisfy the operator identity") {
  const std::vector<std::array<double, 2>> pts = {
      {50.0, 10.0}, {40.0, 20.0}, {100.0, 60.0}, {30.0, 5.0}};
  for (auto [n, m] : std::vector<std::pair<double, double>>{
           {1.0, 0.0}, {1.0, 1.5}, {3.0, 2.5}}) {
    const double dev_h = oscillatory_box_identity_deviation(n, m, pts, 0.05,
                                                            0.05);
    const double dev_h2 = oscillatory_box_identity_deviation(n, m, pts, 0.025,
                                                             0.025);
    CHECK(dev_h < 1e-4);
    const double ratio = dev_h / dev_h2;
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
  }
}

TEST_CASE("pointwise inequality sweep: structure and stability") {
  const ProfileFamily f = family(1.0);
  const auto reports = verify_pointwise_inequalities(f);
  REQUIRE(reports.size() == 11);
  std::set<std::string> names;
  for (const auto& rep : reports) {
    names.insert(rep.name);
    CHECK(std::isfinite(rep.max_ratio));
    CHECK(rep.max_ratio >= 0.0);
    CHECK(rep.max_ratio < 50.0);
    CHECK(rep.refinement_stable);
    CHECK(rep.sample_count == long(97) * 129);
  }
  CHECK(names.size() == 11);
  CHECK(reports[0].max_ratio <= 1.0);
  CHECK(reports[0].max_ratio == doctest::Approx(1.0).epsilon(1e-12));

  InequalityGrid bad;
  bad.s_count = 1;
  CHECK_THROWS_AS(verify_pointwise_inequalities(f, bad),
                  std::invalid_argument);
}

TEST_CASE("pointwise inequality sweep: zero-data closed-form ratios") {
  ProfileConfig c;
  c.lambda1 = 1.0;
  const ProfileFamily f(ScatteringData(kZero), c);
  const double K = 0.5 * coeffs::closed_form(coeffs::Kind::Odd, 1);
  const auto reports = verify_pointwise_inequalities(f);
  // With rho = 0 the smoothed coefficient is -K (s <mu>^3)^{-1/3}, so the
  // s-derivative row saturates at exactly K/3 and the m-derivative row at
  // K * max(m / <mu>) over the grid.
  CHECK(reports[2].name == "log_coeff_ds");
  CHECK(reports[2].max_ratio == doctest::Approx(K / 3.0).epsilon(1e-12));
  CHECK(reports[7].name == "log_coeff_dm");
  CHECK(reports[7].max_ratio ==
        doctest::Approx(K * 20.0 / std::sqrt(401.0)).epsilon(1e-10));
  // Rows whose both sides vanish identically report ratio 0.
  CHECK(reports[1].max_ratio == 0.0);
  CHECK(reports[9].max_ratio == 0.0);
}

TEST_CASE("inequality constants hold across data choices") {
  const auto a = verify_pointwise_inequalities(family(1.0, 0.0, 41, 0.05));
  const auto b = verify_pointwise_inequalities(family(1.0, 0.0, 41, 0.4));
  for (size_t k = 2; k < a.size(); ++k) {
    // Same implicit constants: ratios stay within one order of magnitude
    // when the data weight changes by 8x.
    const double lo = std::min(a[k].max_ratio, b[k].max_ratio);
    const double hi = std::max(a[k].max_ratio, b[k].max_ratio);
    if (hi > 0.0) CHECK(hi / std::max(lo, 1e-3 * hi) <= 10.0);
  }
}

TEST_CASE("light-cone norm oracles") {
  auto zero = [](double, double) { return 0.0; };
  CHECK(lightcone_l2_norm(zero, 50.0) == 0.0);

  auto one = [](double, double) { return 1.0; };
  const double c = 0.995, t = 50.0;
  const double ball = std::sqrt(4.0 * M_PI * std::pow(c * t, 3.0) / 3.0);
  CHECK(lightcone_l2_norm(one, t) == doctest::Approx(ball).epsilon(1e-9));

  auto gauss = [](double, double r) { return std::exp(-0.5 * r * r); };
  CHECK(lightcone_l2_norm(gauss, 50.0) ==
        doctest::Approx(std::pow(M_PI, 0.75)).epsilon(1e-9));

  CHECK_THROWS_AS(lightcone_l2_norm(zero, 2.0), std::domain_error);
}

TEST_CASE("decay scans: rates, separation, and step-mode agreement") {
  ScanConfig cfg;  // 12 log-spaced times in [1e2, 1e4], relative steps

  // Zero coupling: the leading profile solves the linear equation up to
  // curvature remainders that carry exactly two extra powers of decay. The
  // fitted slope therefore straddles -2 within the oscillatory window
  // wobble; assert the rate with that slack rather than a strict -2.
  const DecayReport free_scan =
      residual_decay_scan(scan_family(0.0), ResidualKind::Full, cfg);
  CHECK(free_scan.times.size() == 12);
  CHECK(std::is_sorted(free_scan.times.begin(), free_scan.times.end()));
  CHECK(free_scan.plain.exponent <= -1.97);
  CHECK(free_scan.r_squared >= 0.98);
  CHECK(free_scan.conclusive);

  const ProfileFamily f1 = scan_family(1.0);

  // Without the harmonic corrections the first-order channel survives: one
  // full power slower than the corrected residual.
  const DecayReport uncorrected =
      residual_decay_scan(f1, ResidualKind::LeadingUncorrected, cfg);
  CHECK(uncorrected.fitted_exponent >= -1.2);
  CHECK(uncorrected.fitted_exponent <= -0.85);
  CHECK(uncorrected.conclusive);

  const DecayReport lead_res =
      residual_decay_scan(f1, ResidualKind::LeadingVsResonant, cfg);
  CHECK(lead_res.fitted_exponent <= -1.6);
  CHECK(lead_res.conclusive);

  const DecayReport full = residual_decay_scan(f1, ResidualKind::Full, cfg);
  CHECK(full.fitted_exponent <= -1.6);
  CHECK(full.fitted_exponent <= uncorrected.fitted_exponent - 0.5);
  for (double v : full.norms) CHECK(v >= 0.0);

  ScanConfig abs_cfg = cfg;
  abs_cfg.relative_steps = false;
  const DecayReport full_abs =
      residual_decay_scan(f1, ResidualKind::Full, abs_cfg);
  CHECK(std::abs(full_abs.fitted_exponent - full.fitted_exponent) < 0.05);

  ScanConfig bad = cfg;
  bad.points = 2;
  CHECK_THROWS_AS(residual_decay_scan(f1, ResidualKind::Full, bad),
                  std::invalid_argument);
  bad = cfg;
  bad.harmonic_n = 4;
  CHECK_THROWS_AS(residual_decay_scan(f1, ResidualKind::Harmonic, bad),
                  std::invalid_argument);
}

TEST_CASE("harmonic residuals decay fast and track their coefficients") {
  const ProfileFamily f1 = scan_family(1.0);
  ScanConfig cfg;
  std::vector<double> scaled_amp;
  for (int n : {3, 5}) {
    cfg.harmonic_n = n;
    const DecayReport rep =
        residual_decay_scan(f1, ResidualKind::Harmonic, cfg);
    CHECK(rep.fitted_exponent <= -1.8);
    CHECK(rep.conclusive);
    scaled_amp.push_back(rep.fitted_amplitude /
                         std::abs(f1.coefficients().odd_coeff[n]));
  }
  const double prop = scaled_amp[0] / scaled_amp[1];
  CHECK(prop < 4.0);
  CHECK(prop > 0.25);
}

TEST_CASE("series splitting consistency in the light-cone norm") {
  const ProfileFamily f = family(1.0, 0.0, 41);
  for (double t : {1e2, 1e3}) {
    const SplittingCheck check = splitting_consistency(f, t);
    CHECK(check.bound > 0.0);
    CHECK(check.norm_gap <= check.bound);
  }
}
