#pragma once

#include <cstddef>

// Radial two-Gaussian final state and its scattering data.
//
// The state is the pair phi0(x) = a0 exp(-|x|^2 / (2 sigma0^2)),
// phi1(x) = a1 exp(-|x|^2 / (2 sigma1^2)). Transforms are closed-form under
// the unitary convention g^(xi) = (2pi)^{-3/2} \int g(x) e^{-i x.xi} dx,
// giving a sigma^3 exp(-sigma^2 |xi|^2 / 2).
//
// The scattering data (rho, beta) are the modulus and argument of
//   z(mu) = e^{i 3pi/4} (<mu> phi0^(mu) - i phi1^(mu)),  <mu> = sqrt(1+mu^2).
// The rotation angle 3pi/4 is the stationary-phase offset of the linear
// Klein-Gordon flow at large times under the transform convention above; it
// is validated empirically by the linear leading-term acceptance check.

namespace nlkg {

struct FinalState {
  double a0 = 0.0;
  double sigma0 = 1.0;
  double a1 = 0.0;
  double sigma1 = 1.0;
};

enum class Component { Position, Velocity };

// Closed-form radial transform value at |xi| = xi_norm >= 0.
double fourier_hat(const FinalState& state, Component which, double xi_norm);

// Modulus/phase data of the rotated transform pair. All evaluations are pure
// and depend on mu only through |mu|; rho is either identically zero (both
// amplitudes zero) or strictly positive everywhere.
class ScatteringData {
 public:
  explicit ScatteringData(const FinalState& state);

  double rho(double mu_norm) const;
  // Argument in [0, 2pi); defined as 0 wherever rho vanishes.
  double beta(double mu_norm) const;
  // First and second derivatives of rho with respect to |mu|.
  double rho_prime(double mu_norm) const;
  double rho_second(double mu_norm) const;

  const FinalState& state() const { return state_; }

 private:
  FinalState state_;
  bool zero_ = true;
};

struct QuadSpec {
  double rel_tol = 1e-11;
  int initial_panels = 8;
  int max_doublings = 14;
};

// Sum of six transform-side Sobolev norms of the pair with polynomial
// weights 1, x, |x|^2: indices (2,3,4) for the position part and (1,2,3)
// for the velocity part. Throws std::runtime_error with the achieved error
// estimate if the quadrature fails to stabilize.
double y_norm(const FinalState& state, const QuadSpec& spec = {});

// max over mu of <mu>^{3/2} rho(mu): the smallness measure that gates the
// evolution runs. Coarse log-spaced scan refined by golden-section search.
double sup_weighted_rho(const FinalState& state);

// Rescale both amplitudes so sup_weighted_rho(result) == target (exact by
// homogeneity). target must be > 0 and the state must not be zero.
FinalState scaled_to_weight(const FinalState& state, double target);

}  // namespace nlkg
