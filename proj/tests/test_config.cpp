#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "nlkg/config.hpp"

using namespace nlkg;

namespace {

std::string must_mention(const std::exception& e, const std::string& needle) {
  const std::string what = e.what();
  CHECK(what.find(needle) != std::string::npos);
  return what;
}

#define CHECK_REJECTS(text, needle)                       \
  do {                                                    \
    try {                                                 \
      parse_config(text);                                 \
      FAIL_CHECK("accepted: " << (text));                 \
    } catch (const std::runtime_error& e) {               \
      must_mention(e, needle);                            \
    }                                                     \
  } while (0)

}  // namespace

TEST_CASE("empty and comment-only input yields the defaults") {
  for (const char* text : {"", "\n\n", "# only a comment\n  \t\n# more\n"}) {
    const RunConfig c = parse_config(text);
    CHECK(c.data.a0 == 0.0);
    CHECK(c.data.sigma0 == 1.0);
    CHECK(c.data_weight == 0.0);
    CHECK(c.profile.lambda1 == 1.0);
    CHECK(c.profile.n_max == 41);
    CHECK(c.residual.points == 12);
    CHECK(c.residual.relative_steps);
    CHECK(c.evolve.modes == 8191);
    CHECK_FALSE(c.evolve.init_from_linear_data);
    CHECK(c.output_dir == ".");
    CHECK(c.emit.csv);
    CHECK(c.emit.json);
    CHECK(c.emit.gnuplot);
  }
}

TEST_CASE("documented keys land in their fields") {
  const RunConfig c = parse_config(
      "phi0.amplitude = 1.5   # final position component\n"
      "phi0.width = 1.3\n"
      "phi1.amplitude = -0.5\n"
      "phi1.width = 2.0\n"
      "data.weight = 0.05\n"
      "nonlinearity.lambda1 = -1\n"
      "nonlinearity.lambda2 = 0.5\n"
      "profile.n_max = 99\n"
      "profile.cone_cutoff = 0.99\n"
      "profile.fd_step = 5e-4\n"
      "residual.t_min = 200\n"
      "residual.t_max = 2e4\n"
      "residual.points = 8\n"
      "residual.step_mode = absolute\n"
      "residual.theta = 1e-6\n"
      "residual.step = 0.01\n"
      "residual.quad_tol = 1e-6\n"
      "residual.harmonic_n = 5\n"
      "residual.with_log = true\n"
      "evolve.t_start = 60\n"
      "evolve.t_end = 300\n"
      "evolve.radius = 350\n"
      "evolve.modes = 2047\n"
      "evolve.dt = 0.05\n"
      "evolve.checkpoints = 20\n"
      "evolve.init = linear\n"
      "output.dir = out/run1\n"
      "output.emit = csv, gnuplot\n");
  CHECK(c.data.a0 == 1.5);
  CHECK(c.data.sigma0 == 1.3);
  CHECK(c.data.a1 == -0.5);
  CHECK(c.data.sigma1 == 2.0);
  CHECK(c.data_weight == 0.05);
  CHECK(c.profile.lambda1 == -1.0);
  CHECK(c.evolve.lambda1 == -1.0);  // single source for both modules
  CHECK(c.profile.lambda2 == 0.5);
  CHECK(c.evolve.lambda2 == 0.5);
  CHECK(c.profile.n_max == 99);
  CHECK(c.profile.cone_cutoff == 0.99);
  CHECK(c.profile.fd_step_t == 5e-4);
  CHECK(c.residual.t_min == 200.0);
  CHECK(c.residual.t_max == 2e4);
  CHECK(c.residual.points == 8);
  CHECK_FALSE(c.residual.relative_steps);
  CHECK(c.residual.theta_t == 1e-6);
  CHECK(c.residual.theta_r == 1e-6);
  CHECK(c.residual.step_t == 0.01);
  CHECK(c.residual.step_r == 0.01);
  CHECK(c.residual.quad_rel_tol == 1e-6);
  CHECK(c.residual.harmonic_n == 5);
  CHECK(c.residual.with_log_factor);
  CHECK(c.evolve.t_start == 60.0);
  CHECK(c.evolve.t_end == 300.0);
  CHECK(c.evolve.radius == 350.0);
  CHECK(c.evolve.modes == 2047);
  CHECK(c.evolve.dt == 0.05);
  CHECK(c.evolve.checkpoints == 20);
  CHECK(c.evolve.init_from_linear_data);
  CHECK(c.output_dir == "out/run1");
  CHECK(c.emit.csv);
  CHECK_FALSE(c.emit.json);
  CHECK(c.emit.gnuplot);
}

TEST_CASE("unknown keys and malformed lines carry line numbers") {
  CHECK_REJECTS("\n\nprofile.nmax = 41\n", "line 3");
  CHECK_REJECTS("profile.nmax = 41", "unknown key");
  CHECK_REJECTS("phi0.width 1.3\n", "expected 'key = value'");
  CHECK_REJECTS("phi0.width =\n", "empty value");
  CHECK_REJECTS("= 3\n", "empty key");
  CHECK_REJECTS("phi0.width = abc\n", "not a number");
  CHECK_REJECTS("phi0.width = 1.3x\n", "trailing characters");
  CHECK_REJECTS("residual.points = 8.5\n", "residual.points: trailing");
  CHECK_REJECTS("phi0.width = inf\n", "finite");
}

TEST_CASE("range violations name the key") {
  CHECK_REJECTS("profile.n_max = 4\n", "profile.n_max must be odd");
  CHECK_REJECTS("profile.n_max = 1\n", "profile.n_max");
  CHECK_REJECTS("profile.cone_cutoff = 1.0\n", "profile.cone_cutoff");
  CHECK_REJECTS("phi0.width = -2\n", "phi0.width");
  CHECK_REJECTS("phi0.width = 0\n", "phi0.width");
  CHECK_REJECTS("data.weight = 11\n", "data.weight");
  CHECK_REJECTS("nonlinearity.lambda1 = 9\n", "nonlinearity.lambda1");
  CHECK_REJECTS("residual.step_mode = mixed\n", "relative or absolute");
  CHECK_REJECTS("residual.harmonic_n = 4\n", "residual.harmonic_n must be odd");
  CHECK_REJECTS("evolve.modes = 3\n", "evolve.modes");
  CHECK_REJECTS("evolve.init = midpoint\n", "profile or linear");
  CHECK_REJECTS("output.emit = csv,svg\n", "unknown format");
  CHECK_REJECTS("residual.t_min = 500\nresidual.t_max = 400\n",
                "residual.t_max must exceed");
  CHECK_REJECTS("evolve.t_start = 100\nevolve.t_end = 60\n",
                "evolve.t_end must exceed");
}

TEST_CASE("echo round trip is exact") {
  const RunConfig base = parse_config("");
  const std::string echoed = echo_config(base);
  CHECK(echo_config(parse_config(echoed)) == echoed);

  RunConfig tweaked = base;
  tweaked.data = FinalState{0.1234567890123456, 1.75, -2.5e-3, 0.5};
  tweaked.data_weight = 0.07;
  tweaked.profile.lambda1 = -1.0;
  tweaked.profile.n_max = 201;
  tweaked.profile.fd_step_t = 0.1 / 3.0;  // exercises full precision
  tweaked.residual.relative_steps = false;
  tweaked.residual.points = 77;
  tweaked.evolve.init_from_linear_data = true;
  tweaked.evolve.dt = 0.1 / 7.0;
  tweaked.emit = EmitSet{false, true, false};
  tweaked.output_dir = "reports";
  const std::string text = echo_config(tweaked);
  const RunConfig back = parse_config(text);
  CHECK(echo_config(back) == text);
  CHECK(back.data.a0 == tweaked.data.a0);
  CHECK(back.profile.fd_step_t == tweaked.profile.fd_step_t);
  CHECK(back.evolve.dt == tweaked.evolve.dt);
  CHECK_FALSE(back.emit.csv);
  CHECK(back.emit.json);
}

TEST_CASE("last assignment wins and whitespace is tolerated") {
  const RunConfig c = parse_config(
      "  profile.n_max   =  5  \n"
      "profile.n_max=41\n");
  CHECK(c.profile.n_max == 41);
}

TEST_CASE("file loading") {
  const std::string path = "/tmp/nlkg_config_test.cfg";
  {
    std::ofstream out(path);
    out << "phi0.amplitude = 2.0\nresidual.points = 9\n";
  }
  const RunConfig c = load_config(path);
  CHECK(c.data.a0 == 2.0);
  CHECK(c.residual.points == 9);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("/tmp/definitely_missing_nlkg.cfg"),
                  std::runtime_error);
}

TEST_CASE("configured data applies the weight rescale") {
  RunConfig c = parse_config("phi0.amplitude = 1\nphi1.amplitude = 0.5\n");
  const ScatteringData raw = configured_data(c);
  c.data_weight = 0.05;
  const ScatteringData scaled = configured_data(c);
  CHECK(sup_weighted_rho(scaled.state()) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(sup_weighted_rho(raw.state()) > 0.05);
}

TEST_CASE("scan config keeps paired steps equal") {
  const RunConfig c = parse_config("residual.theta = 2e-6\nresidual.step = 0.02\n");
  CHECK(c.residual.theta_t == c.residual.theta_r);
  CHECK(c.residual.step_t == c.residual.step_r);
}
