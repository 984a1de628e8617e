#pragma once
//============================================================================
// Shared numerical helpers: deterministic reductions, Gauss-Legendre and
// Gauss-Kronrod quadrature, and log-log power-law fitting.
//============================================================================

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace nlkg {

// Compensated (Kahan) sum, always left to right. Reductions over grid
// points go through this so output bytes never depend on thread count.
double stable_sum(std::span<const double> xs);

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1,1],
// computed once per n by Newton iteration and cached.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

// Adaptive Gauss-Kronrod (G7,K15) on [a,b] by interval bisection.
// Stops when the summed error estimate drops below
// max(abs_tol, rel_tol*|integral|).
template <class F>
QuadResult adaptive_gauss_kronrod(F&& f, double a, double b, double rel_tol,
                                  double abs_tol = 0.0, int max_depth = 48);

// Composite n-point Gauss-Legendre with panel doubling until two
// consecutive refinement levels agree to rel_tol.
template <class F>
QuadResult composite_gauss_legendre(F&& f, double a, double b, double rel_tol,
                                    int initial_panels, int max_doublings = 10,
                                    int points_per_panel = 20);

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;  // prefactor C in C * t^exponent [* log t]
  double r_squared = 0.0;
  bool with_log_factor = false;
};

// Least squares of log y = log C + p log t [+ log log t]. The optional
// term has fixed unit coefficient; it is subtracted before the linear fit.
PowerLawFit fit_power_law(std::span<const double> t, std::span<const double> y,
                          bool with_log_factor);

//----------------------------------------------------------------------------
// implementation
//----------------------------------------------------------------------------

namespace detail {

// QUADPACK 15-point Kronrod extension of 7-point Gauss, abscissae >= 0.
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// 7-point Gauss weights, matching kKronrodNodes[1], [3], [5], [7].
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gauss_kronrod_panel(F& f, double a, double b, double& kronrod,
                         double& err, double& abs_scale) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(c - h * kKronrodNodes[i]);
    fk[14 - i] = f(c + h * kKronrodNodes[i]);
  }
  fk[7] = f(c);
  double sk = 0.0, sg = 0.0, sa = 0.0;
  for (int i = 0; i < 7; ++i) {
    sk += kKronrodWeights[i] * (fk[i] + fk[14 - i]);
    sa += kKronrodWeights[i] * (std::abs(fk[i]) + std::abs(fk[14 - i]));
  }
  sk += kKronrodWeights[7] * fk[7];
  sa += kKronrodWeights[7] * std::abs(fk[7]);
  for (int i = 0; i < 3; ++i) {
    sg += kGaussWeights[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
  }
  sg += kGaussWeights[3] * fk[7];
  kronrod = sk * h;
  err = std::abs((sk - sg) * h);
  abs_scale = sa * std::abs(h);
}

template <class F>
void gk_recurse(F& f, double a, double b, double tol, int depth, int max_depth,
                double& total, double& total_err, long& evals) {
  double v, e, scale;
  gauss_kronrod_panel(f, a, b, v, e, scale);
  evals += 15;
  // Second acceptance clause: the error estimate has bottomed out at the
  // roundoff floor of the panel, so further splitting cannot help.
  if (e <= tol || e <= 30.0 * 2.22e-16 * scale || depth >= max_depth) {
    total += v;
    total_err += e;
    return;
  }
  const double c = 0.5 * (a + b);
  gk_recurse(f, a, c, 0.5 * tol, depth + 1, max_depth, total, total_err,
             evals);
  gk_recurse(f, c, b, 0.5 * tol, depth + 1, max_depth, total, total_err,
             evals);
}

}  // namespace detail

template <class F>
QuadResult adaptive_gauss_kronrod(F&& f, double a, double b, double rel_tol,
                                  double abs_tol, int max_depth) {
  double coarse, coarse_err, coarse_scale;
  detail::gauss_kronrod_panel(f, a, b, coarse, coarse_err, coarse_scale);
  double tol = std::max(abs_tol, rel_tol * std::abs(coarse));
  if (tol <= 0.0) tol = rel_tol;
  QuadResult r;
  r.evaluations = 15;
  // Two sweeps: the first fixes the tolerance scale from the coarse value,
  // the second re-runs if the converged integral turned out much larger.
  for (int sweep = 0; sweep < 2; ++sweep) {
    double total = 0.0, total_err = 0.0;
    long evals = 0;
    detail::gk_recurse(f, a, b, tol, 0, max_depth, total, total_err, evals);
    r.value = total;
    r.error_estimate = total_err;
    r.evaluations += evals;
    const double want = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err <= want || want <= tol) {
      r.converged = total_err <= std::max(want, tol);
      break;
    }
    tol = want;
  }
  return r;
}

template <class F>
QuadResult composite_gauss_legendre(F&& f, double a, double b, double rel_tol,
                                    int initial_panels, int max_doublings,
                                    int points_per_panel) {
  const GaussLegendreRule& rule = gauss_legendre(points_per_panel);
  QuadResult r;
  double prev = 0.0;
  int panels = initial_panels < 1 ? 1 : initial_panels;
  for (int level = 0; level <= max_doublings; ++level, panels *= 2) {
    const double w = (b - a) / panels;
    std::vector<double> partial(panels);
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * w;
      const double mid = lo + 0.5 * w;
      double acc = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + 0.5 * w * rule.nodes[i]);
      }
      partial[p] = acc * 0.5 * w;
    }
    r.value = stable_sum(partial);
    r.evaluations += static_cast<long>(panels) * points_per_panel;
    if (level > 0) {
      r.error_estimate = std::abs(r.value - prev);
      if (r.error_estimate <=
          rel_tol * std::max(std::abs(r.value), 1e-300)) {
        r.converged = true;
        return r;
      }
    }
    prev = r.value;
  }
  return r;
}

}  // namespace nlkg
