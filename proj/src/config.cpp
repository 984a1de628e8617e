#include "nlkg/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nlkg {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double parse_double(int line, const std::string& key, const std::string& v) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(line, key + ": not a number: '" + v + "'");
  }
  if (used != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
  if (!std::isfinite(x)) fail(line, key + ": value must be finite");
  return x;
}

long parse_int(int line, const std::string& key, const std::string& v) {
  size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    fail(line, key + ": not an integer: '" + v + "'");
  }
  if (used != v.size()) fail(line, key + ": trailing characters in '" + v + "'");
  return x;
}

bool parse_bool(int line, const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, key + ": expected true or false, got '" + v + "'");
}

double ranged(int line, const std::string& key, const std::string& v,
              double lo, double hi) {
  const double x = parse_double(line, key, v);
  if (!(x >= lo && x <= hi)) {
    std::ostringstream msg;
    msg << key << " must be in [" << lo << ", " << hi << "], got " << x;
    fail(line, msg.str());
  }
  return x;
}

long ranged_int(int line, const std::string& key, const std::string& v,
                long lo, long hi) {
  const long x = parse_int(line, key, v);
  if (x < lo || x > hi) {
    std::ostringstream msg;
    msg << key << " must be in [" << lo << ", " << hi << "], got " << x;
    fail(line, msg.str());
  }
  return x;
}

void apply(RunConfig& c, int line, const std::string& key,
           const std::string& v) {
  if (key == "phi0.amplitude") {
    c.data.a0 = ranged(line, key, v, -1e3, 1e3);
  } else if (key == "phi0.width") {
    c.data.sigma0 = ranged(line, key, v, 1e-3, 1e3);
  } else if (key == "phi1.amplitude") {
    c.data.a1 = ranged(line, key, v, -1e3, 1e3);
  } else if (key == "phi1.width") {
    c.data.sigma1 = ranged(line, key, v, 1e-3, 1e3);
  } else if (key == "data.weight") {
    c.data_weight = ranged(line, key, v, 0.0, 10.0);
  } else if (key == "nonlinearity.lambda1") {
    c.profile.lambda1 = ranged(line, key, v, -8.0, 8.0);
    c.evolve.lambda1 = c.profile.lambda1;
  } else if (key == "nonlinearity.lambda2") {
    c.profile.lambda2 = ranged(line, key, v, -8.0, 8.0);
    c.evolve.lambda2 = c.profile.lambda2;
  } else if (key == "profile.n_max") {
    const long n = ranged_int(line, key, v, 3, 999);
    if (n % 2 == 0) fail(line, key + " must be odd, got " + v);
    c.profile.n_max = static_cast<int>(n);
  } else if (key == "profile.cone_cutoff") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x < 1.0)) fail(line, key + " must be in (0, 1)");
    c.profile.cone_cutoff = x;
  } else if (key == "profile.fd_step") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x <= 0.1)) fail(line, key + " must be in (0, 0.1]");
    c.profile.fd_step_t = x;
  } else if (key == "residual.t_min") {
    c.residual.t_min = ranged(line, key, v, 10.0, 1e7);
  } else if (key == "residual.t_max") {
    c.residual.t_max = ranged(line, key, v, 10.0, 1e7);
  } else if (key == "residual.points") {
    c.residual.points = static_cast<int>(ranged_int(line, key, v, 3, 200));
  } else if (key == "residual.step_mode") {
    if (v == "relative") {
      c.residual.relative_steps = true;
    } else if (v == "absolute") {
      c.residual.relative_steps = false;
    } else {
      fail(line, key + ": expected relative or absolute, got '" + v + "'");
    }
  } else if (key == "residual.theta") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x <= 0.1)) fail(line, key + " must be in (0, 0.1]");
    c.residual.theta_t = x;
    c.residual.theta_r = x;
  } else if (key == "residual.step") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x <= 1.0)) fail(line, key + " must be in (0, 1]");
    c.residual.step_t = x;
    c.residual.step_r = x;
  } else if (key == "residual.quad_tol") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x <= 1e-2)) fail(line, key + " must be in (0, 0.01]");
    c.residual.quad_rel_tol = x;
  } else if (key == "residual.harmonic_n") {
    const long n = ranged_int(line, key, v, 3, 99);
    if (n % 2 == 0) fail(line, key + " must be odd, got " + v);
    c.residual.harmonic_n = static_cast<int>(n);
  } else if (key == "residual.with_log") {
    c.residual.with_log_factor = parse_bool(line, key, v);
  } else if (key == "evolve.t_start") {
    c.evolve.t_start = ranged(line, key, v, 5.0, 1e6);
  } else if (key == "evolve.t_end") {
    c.evolve.t_end = ranged(line, key, v, 5.0, 1e6);
  } else if (key == "evolve.radius") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x <= 1e6)) fail(line, key + " must be in (0, 1e6]");
    c.evolve.radius = x;
  } else if (key == "evolve.modes") {
    c.evolve.modes =
        static_cast<int>(ranged_int(line, key, v, 15, 1L << 20));
  } else if (key == "evolve.dt") {
    const double x = parse_double(line, key, v);
    if (!(x > 0.0 && x <= 100.0)) fail(line, key + " must be in (0, 100]");
    c.evolve.dt = x;
  } else if (key == "evolve.checkpoints") {
    c.evolve.checkpoints =
        static_cast<int>(ranged_int(line, key, v, 2, 10000));
  } else if (key == "evolve.init") {
    if (v == "profile") {
      c.evolve.init_from_linear_data = false;
    } else if (v == "linear") {
      c.evolve.init_from_linear_data = true;
    } else {
      fail(line, key + ": expected profile or linear, got '" + v + "'");
    }
  } else if (key == "output.dir") {
    if (v.empty()) fail(line, key + " must not be empty");
    c.output_dir = v;
  } else if (key == "output.emit") {
    EmitSet e{false, false, false};
    std::stringstream ss(v);
    std::string tok;
    bool any = false;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok == "csv") {
        e.csv = true;
      } else if (tok == "json") {
        e.json = true;
      } else if (tok == "gnuplot") {
        e.gnuplot = true;
      } else {
        fail(line, key + ": unknown format '" + tok + "'");
      }
      any = true;
    }
    if (!any) fail(line, key + " must list at least one format");
    c.emit = e;
  } else {
    fail(line, "unknown key '" + key + "'");
  }
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::stringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    const std::string stripped =
        trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      fail(line, "expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    apply(c, line, key, value);
  }
  if (!(c.residual.t_max > c.residual.t_min)) {
    throw std::runtime_error("residual.t_max must exceed residual.t_min");
  }
  if (!(c.evolve.t_end > c.evolve.t_start)) {
    throw std::runtime_error("evolve.t_end must exceed evolve.t_start");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream out;
  out << "phi0.amplitude = " << fmt(c.data.a0) << "\n"
      << "phi0.width = " << fmt(c.data.sigma0) << "\n"
      << "phi1.amplitude = " << fmt(c.data.a1) << "\n"
      << "phi1.width = " << fmt(c.data.sigma1) << "\n"
      << "data.weight = " << fmt(c.data_weight) << "\n"
      << "nonlinearity.lambda1 = " << fmt(c.profile.lambda1) << "\n"
      << "nonlinearity.lambda2 = " << fmt(c.profile.lambda2) << "\n"
      << "profile.n_max = " << c.profile.n_max << "\n"
      << "profile.cone_cutoff = " << fmt(c.profile.cone_cutoff) << "\n"
      << "profile.fd_step = " << fmt(c.profile.fd_step_t) << "\n"
      << "residual.t_min = " << fmt(c.residual.t_min) << "\n"
      << "residual.t_max = " << fmt(c.residual.t_max) << "\n"
      << "residual.points = " << c.residual.points << "\n"
      << "residual.step_mode = "
      << (c.residual.relative_steps ? "relative" : "absolute") << "\n"
      << "residual.theta = " << fmt(c.residual.theta_t) << "\n"
      << "residual.step = " << fmt(c.residual.step_t) << "\n"
      << "residual.quad_tol = " << fmt(c.residual.quad_rel_tol) << "\n"
      << "residual.harmonic_n = " << c.residual.harmonic_n << "\n"
      << "residual.with_log = "
      << (c.residual.with_log_factor ? "true" : "false") << "\n"
      << "evolve.t_start = " << fmt(c.evolve.t_start) << "\n"
      << "evolve.t_end = " << fmt(c.evolve.t_end) << "\n"
      << "evolve.radius = " << fmt(c.evolve.radius) << "\n"
      << "evolve.modes = " << c.evolve.modes << "\n"
      << "evolve.dt = " << fmt(c.evolve.dt) << "\n"
      << "evolve.checkpoints = " << c.evolve.checkpoints << "\n"
      << "evolve.init = "
      << (c.evolve.init_from_linear_data ? "linear" : "profile") << "\n"
      << "output.dir = " << c.output_dir << "\n";
  out << "output.emit = ";
  bool first = true;
  for (const auto& [on, name] :
       {std::pair<bool, const char*>{c.emit.csv, "csv"},
        {c.emit.json, "json"},
        {c.emit.gnuplot, "gnuplot"}}) {
    if (!on) continue;
    if (!first) out << ",";
    out << name;
    first = false;
  }
  out << "\n";
  return out.str();
}

ScatteringData configured_data(const RunConfig& c) {
  if (c.data_weight > 0.0) {
    return ScatteringData(scaled_to_weight(c.data, c.data_weight));
  }
  return ScatteringData(c.data);
}

}  // namespace nlkg
