// Unified command line for the toolkit: coefficient tables, scattering-data
// dumps, profile sections, residual decay scans, inequality reports,
// evolution runs, the fixed-point iteration, and the acceptance suites.
// One dotted-key config file drives every subcommand; all computations are
// deterministic, so identical invocations produce byte-identical files.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlkg/acceptance.hpp"
#include "nlkg/config.hpp"
#include "nlkg/evolve.hpp"
#include "nlkg/parallel.hpp"
#include "nlkg/residual.hpp"

namespace fs = std::filesystem;
using namespace nlkg;

namespace {

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // canonical sign for zero cells
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON number: null for non-finite values (zero-data fits have no slope).
std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt(v);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

struct Emitter {
  fs::path dir;
  EmitSet emit;
  bool quiet = false;

  void table(const std::string& name, const std::string& csv) const {
    if (!quiet) std::fputs(csv.c_str(), stdout);
    if (emit.csv) write_text(dir / (name + ".csv"), csv);
  }
  void plot(const std::string& name, const std::string& dat) const {
    if (emit.gnuplot) write_text(dir / (name + ".dat"), dat);
  }
  void json(const std::string& name, const std::string& body) const {
    if (emit.json) write_text(dir / (name + ".json"), body);
  }
};

ProfileFamily make_family(const RunConfig& cfg) {
  return ProfileFamily(configured_data(cfg), cfg.profile);
}

//--------------------------------------------------------------------------
// coeffs: n, closed_form [, oracle, abs_diff]. Kind both reports the
// surviving parity channel at each n.
//--------------------------------------------------------------------------
void run_coeffs(const Emitter& em, int n_max, const std::string& kind,
                bool with_oracle) {
  auto channel = [&](int n) {
    if (kind == "c") return coeffs::Kind::Odd;
    if (kind == "ctilde") return coeffs::Kind::Even;
    return n % 2 == 1 ? coeffs::Kind::Odd : coeffs::Kind::Even;
  };
  std::string csv = with_oracle ? "n,closed_form,oracle,abs_diff\n"
                                : "n,closed_form\n";
  std::string dat = "# n closed_form\n";
  for (int n = 0; n <= n_max; ++n) {
    const coeffs::Kind k = channel(n);
    const double cf = coeffs::closed_form(k, n);
    csv += std::to_string(n) + "," + fmt(cf);
    if (with_oracle) {
      const double oracle = coeffs::quadrature_oracle(k, n);
      csv += "," + fmt(oracle) + "," + fmt(std::abs(cf - oracle));
    }
    csv += "\n";
    dat += std::to_string(n) + " " + fmt(cf) + "\n";
  }
  em.table("coeffs", csv);
  em.plot("coeffs", dat);
}

//--------------------------------------------------------------------------
// data: mu, rho, beta, weighted_rho on a uniform mu grid.
//--------------------------------------------------------------------------
void run_data(const Emitter& em, const RunConfig& cfg, double mu_min,
              double mu_max, int n) {
  if (!(mu_min >= 0.0) || !(mu_max > mu_min) || n < 2) {
    throw std::invalid_argument(
        "data: need 0 <= mu_min < mu_max and at least 2 samples");
  }
  const ScatteringData data = configured_data(cfg);
  std::string csv = "mu,rho,beta,weighted_rho\n";
  std::string dat = "# mu weighted_rho\n";
  for (int i = 0; i < n; ++i) {
    const double mu = mu_min + (mu_max - mu_min) * double(i) / (n - 1);
    const double br = std::sqrt(1.0 + mu * mu);
    const double rho = data.rho(mu);
    const double weighted = br * std::sqrt(br) * rho;
    csv += fmt(mu) + "," + fmt(rho) + "," + fmt(data.beta(mu)) + "," +
           fmt(weighted) + "\n";
    dat += fmt(mu) + " " + fmt(weighted) + "\n";
  }
  em.table("data", csv);
  em.plot("data", dat);
}

//--------------------------------------------------------------------------
// profile: r, value at fixed t for one member of the profile family.
//--------------------------------------------------------------------------
void run_profile(const Emitter& em, const RunConfig& cfg, double t,
                 const std::string& kind, const std::string& r_grid) {
  if (!(t >= 3.0)) throw std::invalid_argument("profile: t must be >= 3");
  double r_min = 0.0, r_max = 0.995 * t;
  int n = 200;
  if (!r_grid.empty()) {
    const size_t c1 = r_grid.find(',');
    const size_t c2 = r_grid.find(',', c1 == std::string::npos ? 0 : c1 + 1);
    size_t used1 = 0, used2 = 0, used3 = 0;
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw std::invalid_argument("profile: --r-grid expects min,max,n");
    }
    const std::string s1 = r_grid.substr(0, c1);
    const std::string s2 = r_grid.substr(c1 + 1, c2 - c1 - 1);
    const std::string s3 = r_grid.substr(c2 + 1);
    r_min = std::stod(s1, &used1);
    r_max = std::stod(s2, &used2);
    n = std::stoi(s3, &used3);
    if (used1 != s1.size() || used2 != s2.size() || used3 != s3.size()) {
      throw std::invalid_argument("profile: --r-grid expects min,max,n");
    }
  }
  if (!(r_min >= 0.0) || !(r_max > r_min) || n < 2) {
    throw std::invalid_argument(
        "profile: need 0 <= min < max and at least 2 samples");
  }
  const ProfileFamily family = make_family(cfg);
  auto sample = [&](double r) {
    if (kind == "uap") return family.leading_profile(t, r);
    if (kind == "uap-tilde") return family.smoothed_profile(t, r);
    if (kind == "vap-tilde") return family.correction_sum(t, r);
    return family.full_profile(t, r);
  };
  std::string csv = "r,value\n";
  std::string dat = "# r value\n";
  for (int i = 0; i < n; ++i) {
    const double r = r_min + (r_max - r_min) * double(i) / (n - 1);
    const double v = sample(r);
    csv += fmt(r) + "," + fmt(v) + "\n";
    dat += fmt(r) + " " + fmt(v) + "\n";
  }
  em.table("profile", csv);
  em.plot("profile", dat);
}

//--------------------------------------------------------------------------
// residual: decay scan of the configured kind; CSV of norms, JSON of fits.
//--------------------------------------------------------------------------
std::string fit_json(const PowerLawFit& f) {
  return std::string("{\"exponent\": ") + json_number(f.exponent) +
         ", \"amplitude\": " + json_number(f.amplitude) +
         ", \"r_squared\": " + json_number(f.r_squared) + "}";
}

void run_residual(const Emitter& em, const RunConfig& cfg,
                  const std::string& kind) {
  ResidualKind rk = ResidualKind::Full;
  if (kind == "leading-vs-resonant") rk = ResidualKind::LeadingVsResonant;
  if (kind == "leading-uncorrected") rk = ResidualKind::LeadingUncorrected;
  if (kind == "harmonic") rk = ResidualKind::Harmonic;
  const ProfileFamily family = make_family(cfg);
  const DecayReport rep = residual_decay_scan(family, rk, cfg.residual);

  std::string csv = "t,norm\n";
  std::string dat = "# t norm\n";
  for (size_t i = 0; i < rep.times.size(); ++i) {
    csv += fmt(rep.times[i]) + "," + fmt(rep.norms[i]) + "\n";
    dat += fmt(rep.times[i]) + " " + fmt(rep.norms[i]) + "\n";
  }
  std::string json = "{\n  \"kind\": \"" + kind + "\",\n";
  json += "  \"plain_fit\": " + fit_json(rep.plain) + ",\n";
  json += "  \"log_fit\": " + fit_json(rep.logged) + ",\n";
  json += std::string("  \"log_factor_preferred\": ") +
          (rep.log_factor_preferred ? "true" : "false") + ",\n";
  json += std::string("  \"conclusive\": ") +
          (rep.conclusive ? "true" : "false") + "\n}\n";
  em.table("residual", csv);
  em.plot("residual", dat);
  em.json("residual", json);
}

//--------------------------------------------------------------------------
// lemmas: operator-identity convergence ratios and the pointwise bound
// sweep at the configured data.
//--------------------------------------------------------------------------
void run_lemmas(const Emitter& em, const RunConfig& cfg) {
  std::vector<std::array<double, 2>> pts;
  for (int i = 0; i < 10; ++i) {
    const double t = 30.0 * std::pow(10.0, i / 9.0);
    for (double frac : {0.0, 0.2, 0.45, 0.7, 0.9}) {
      pts.push_back({t, frac * t});
    }
  }
  const double pairs[3][2] = {{1.0, 1.5}, {3.0, 2.5}, {1.0, 0.0}};
  std::string id_csv = "n,m,deviation_h,deviation_h_half,ratio\n";
  std::string ratios_json;
  for (const auto& p : pairs) {
    const double d1 =
        oscillatory_box_identity_deviation(p[0], p[1], pts, 0.05, 0.05);
    const double d2 =
        oscillatory_box_identity_deviation(p[0], p[1], pts, 0.025, 0.025);
    id_csv += fmt(p[0]) + "," + fmt(p[1]) + "," + fmt(d1) + "," + fmt(d2) +
              "," + fmt(d1 / d2) + "\n";
    if (!ratios_json.empty()) ratios_json += ", ";
    ratios_json += json_number(d1 / d2);
  }

  const ProfileFamily family = make_family(cfg);
  const auto reports = verify_pointwise_inequalities(family);
  std::string bounds_csv = "name,max_ratio,samples,refinement_stable\n";
  std::string bounds_json;
  for (const auto& r : reports) {
    bounds_csv += r.name + "," + fmt(r.max_ratio) + "," +
                  std::to_string(r.sample_count) + "," +
                  (r.refinement_stable ? "1" : "0") + "\n";
    if (!bounds_json.empty()) bounds_json += ",\n    ";
    bounds_json += "{\"name\": \"" + r.name +
                   "\", \"max_ratio\": " + json_number(r.max_ratio) +
                   ", \"refinement_stable\": " +
                   (r.refinement_stable ? "true" : "false") + "}";
  }
  em.table("lemmas_identity", id_csv);
  em.table("lemmas_bounds", bounds_csv);
  em.json("lemmas", "{\n  \"identity_ratios\": [" + ratios_json +
                        "],\n  \"bounds\": [\n    " + bounds_json +
                        "\n  ]\n}\n");
}

//--------------------------------------------------------------------------
// evolve: tracking run; CSV of checkpoint errors, JSON summary.
//--------------------------------------------------------------------------
void run_evolve(const Emitter& em, const RunConfig& cfg,
                bool uncorrected_baseline) {
  const ProfileFamily family = make_family(cfg);
  const TrackReport rep = evolve_and_track(family, cfg.evolve);

  std::string csv = "t,err_l2,err_h_half,err_l2_uncorrected,energy\n";
  std::string dat = "# t err_l2\n";
  for (size_t i = 0; i < rep.times.size(); ++i) {
    const double shown =
        uncorrected_baseline ? rep.err_l2_uncorrected[i] : rep.err_l2[i];
    csv += fmt(rep.times[i]) + "," + fmt(rep.err_l2[i]) + "," +
           fmt(rep.err_h_half[i]) + "," + fmt(rep.err_l2_uncorrected[i]) +
           "," + fmt(rep.energy[i]) + "\n";
    dat += fmt(rep.times[i]) + " " + fmt(shown) + "\n";
  }

  double gamma = rep.fitted_gamma;
  if (uncorrected_baseline) {
    // Same second-half fit as the report, on the free-profile gap.
    std::vector<double> ts, es;
    for (size_t i = rep.times.size() / 2; i < rep.times.size(); ++i) {
      if (rep.err_l2_uncorrected[i] > 0.0) {
        ts.push_back(rep.times[i]);
        es.push_back(rep.err_l2_uncorrected[i]);
      }
    }
    gamma = ts.size() >= 3 ? -fit_power_law(ts, es, false).exponent : 0.0;
  }
  std::string json = "{\n";
  json += std::string("  \"baseline\": \"") +
          (uncorrected_baseline ? "uncorrected" : "corrected") + "\",\n";
  json += "  \"fitted_gamma\": " + json_number(gamma) + ",\n";
  json += "  \"final_err_l2\": " + json_number(rep.err_l2.back()) + ",\n";
  json += "  \"final_err_l2_uncorrected\": " +
          json_number(rep.err_l2_uncorrected.back()) + ",\n";
  json += "  \"boundary_mass_ratio\": " +
          json_number(rep.boundary_mass_ratio) + "\n}\n";
  em.table("evolve", csv);
  em.plot("evolve", dat);
  em.json("evolve", json);
}

//--------------------------------------------------------------------------
// yang-feldman: fixed-point increments and contraction ratios.
//--------------------------------------------------------------------------
void run_yang_feldman(const Emitter& em, const RunConfig& cfg, int iters) {
  const ProfileFamily family = make_family(cfg);
  FixedPointConfig fc;
  fc.iterations = iters;
  fc.lambda1 = cfg.profile.lambda1;
  fc.lambda2 = cfg.profile.lambda2;
  const FixedPointReport rep = fixed_point_iterate(family, fc);

  std::string csv = "k,increment_sup,ratio_to_previous\n";
  std::string dat = "# k increment_sup\n";
  std::string ratios_json;
  for (size_t k = 0; k < rep.increment_sup.size(); ++k) {
    csv += std::to_string(k + 1) + "," + fmt(rep.increment_sup[k]) + ",";
    if (k > 0) csv += fmt(rep.ratios[k - 1]);
    csv += "\n";
    dat += std::to_string(k + 1) + " " + fmt(rep.increment_sup[k]) + "\n";
  }
  for (double q : rep.ratios) {
    if (!ratios_json.empty()) ratios_json += ", ";
    ratios_json += json_number(q);
  }
  em.table("yang_feldman", csv);
  em.plot("yang_feldman", dat);
  em.json("yang_feldman",
          "{\n  \"forcing_sup\": " + json_number(rep.forcing_sup) +
              ",\n  \"ratios\": [" + ratios_json + "]\n}\n");
}

//--------------------------------------------------------------------------
// suite: module artifacts plus the acceptance criteria of the named group,
// with a top-level verdict.
//--------------------------------------------------------------------------
int run_suite(const Emitter& em, const RunConfig& cfg,
              const std::string& which) {
  const acceptance::Inputs inputs = acceptance::inputs_from_config(cfg);
  const bool all = which == "all";
  Emitter quiet_em = em;
  quiet_em.quiet = true;

  std::vector<acceptance::CriterionResult> results;
  auto append = [&](std::vector<acceptance::CriterionResult> group) {
    for (auto& r : group) {
      std::printf("%s\n", acceptance::verdict_line(r).c_str());
      std::fflush(stdout);
      results.push_back(std::move(r));
    }
  };
  if (all || which == "coeffs") {
    run_coeffs(quiet_em, 49, "both", true);
    append(acceptance::coefficient_criteria());
  }
  if (all || which == "lemmas") {
    run_lemmas(quiet_em, cfg);
    append(acceptance::lemma_criteria(inputs));
  }
  if (all || which == "residual") {
    run_residual(quiet_em, cfg, "full");
    append(acceptance::residual_criteria(inputs));
  }
  if (all || which == "evolve") {
    run_evolve(quiet_em, cfg, false);
    run_yang_feldman(quiet_em, cfg, 4);
    append(acceptance::evolution_criteria(inputs));
  }

  write_text(em.dir / "verdict.json", acceptance::verdict_json(results));
  int npass = 0;
  for (const auto& r : results) npass += r.passed ? 1 : 0;
  std::printf("%d/%zu criteria passed; verdict written to %s\n", npass,
              results.size(), (em.dir / "verdict.json").string().c_str());
  return acceptance::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nlkg: log-phase-corrected asymptotic profiles for the critical "
      "nonlinear Klein-Gordon equation, with spectral evolution checks"};
  app.require_subcommand(1);

  std::string config_path, output_override;
  int threads = 0;
  bool seedless = false;
  app.add_option("--config", config_path, "dotted-key config file");
  app.add_option("--output", output_override,
                 "output directory (overrides output.dir)");
  app.add_option("--threads", threads, "worker threads (0 = default)")
      ->check(CLI::Range(0, 1024));
  app.add_flag("--seedless", seedless,
               "document determinism: no subcommand uses randomness");

  auto* sc_coeffs = app.add_subcommand(
      "coeffs", "cosine coefficient table, closed form and oracle");
  sc_coeffs->fallthrough();
  int n_max = 49;
  std::string coeff_kind = "both";
  bool with_oracle = false;
  sc_coeffs->add_option("--n-max", n_max, "largest index")
      ->check(CLI::Range(0, 999));
  sc_coeffs->add_option("--kind", coeff_kind, "c | ctilde | both")
      ->check(CLI::IsMember({"c", "ctilde", "both"}));
  sc_coeffs->add_flag("--oracle", with_oracle,
                      "add quadrature oracle and abs_diff columns");

  auto* sc_data =
      app.add_subcommand("data", "scattering data (rho, beta) on a mu grid");
  sc_data->fallthrough();
  std::vector<double> dump_rho{0.0, 20.0, 201.0};
  sc_data
      ->add_option("--dump-rho", dump_rho,
                   "mu_min mu_max n: sample count and range")
      ->expected(3);

  auto* sc_profile =
      app.add_subcommand("profile", "radial section of a profile at fixed t");
  sc_profile->fallthrough();
  double profile_t = 100.0;
  std::string profile_kind = "A";
  std::string r_grid;
  sc_profile->add_option("--t", profile_t, "time of the section");
  sc_profile
      ->add_option("--kind", profile_kind, "uap | uap-tilde | vap-tilde | A")
      ->check(CLI::IsMember({"uap", "uap-tilde", "vap-tilde", "A"}));
  sc_profile->add_option("--r-grid", r_grid,
                         "min,max,n (default 0,0.995t,200)");

  auto* sc_residual =
      app.add_subcommand("residual", "light-cone residual decay scan");
  sc_residual->fallthrough();
  std::string residual_kind = "full";
  sc_residual
      ->add_option("--kind", residual_kind,
                   "full | leading-vs-resonant | leading-uncorrected | "
                   "harmonic")
      ->check(CLI::IsMember({"full", "leading-vs-resonant",
                             "leading-uncorrected", "harmonic"}));

  auto* sc_lemmas = app.add_subcommand(
      "lemmas", "operator identity ratios and pointwise bound sweep");
  sc_lemmas->fallthrough();

  auto* sc_evolve =
      app.add_subcommand("evolve", "track the flow against the profiles");
  sc_evolve->fallthrough();
  bool uncorrected_baseline = false;
  auto* opt_ts = sc_evolve->add_option("--t-start", "start time");
  auto* opt_te = sc_evolve->add_option("--t-end", "end time");
  auto* opt_dt = sc_evolve->add_option("--dt", "time step");
  auto* opt_modes = sc_evolve->add_option("--modes", "sine modes");
  auto* opt_radius = sc_evolve->add_option("--radius", "domain radius");
  sc_evolve->add_flag("--uncorrected-baseline", uncorrected_baseline,
                      "fit and plot against the free profile instead");

  auto* sc_yf = app.add_subcommand(
      "yang-feldman", "retarded-integral fixed-point contraction");
  sc_yf->fallthrough();
  int yf_iters = 4;
  sc_yf->add_option("--iters", yf_iters, "iteration count")
      ->check(CLI::Range(1, 16));

  auto* sc_suite = app.add_subcommand(
      "suite", "acceptance criteria and artifacts of one group or all");
  sc_suite->fallthrough();
  std::string suite_which = "all";
  sc_suite
      ->add_option("group", suite_which,
                   "coeffs | lemmas | residual | evolve | all")
      ->check(CLI::IsMember({"coeffs", "lemmas", "residual", "evolve", "all"}));

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg =
        config_path.empty() ? RunConfig{} : load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (threads > 0) set_threads(threads);

    fs::create_directories(cfg.output_dir);
    write_text(fs::path(cfg.output_dir) / "effective_config.txt",
               echo_config(cfg));
    Emitter em{fs::path(cfg.output_dir), cfg.emit, false};

    if (*sc_coeffs) {
      run_coeffs(em, n_max, coeff_kind, with_oracle);
    } else if (*sc_data) {
      run_data(em, cfg, dump_rho[0], dump_rho[1],
               static_cast<int>(dump_rho[2]));
    } else if (*sc_profile) {
      run_profile(em, cfg, profile_t, profile_kind, r_grid);
    } else if (*sc_residual) {
      run_residual(em, cfg, residual_kind);
    } else if (*sc_lemmas) {
      run_lemmas(em, cfg);
    } else if (*sc_evolve) {
      if (opt_ts->count()) cfg.evolve.t_start = opt_ts->as<double>();
      if (opt_te->count()) cfg.evolve.t_end = opt_te->as<double>();
      if (opt_dt->count()) cfg.evolve.dt = opt_dt->as<double>();
      if (opt_modes->count()) cfg.evolve.modes = opt_modes->as<int>();
      if (opt_radius->count()) cfg.evolve.radius = opt_radius->as<double>();
      run_evolve(em, cfg, uncorrected_baseline);
    } else if (*sc_yf) {
      run_yang_feldman(em, cfg, yf_iters);
    } else if (*sc_suite) {
      return run_suite(em, cfg, suite_which);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
