#pragma once

#include <vector>

#include "brwlab/rng.hpp"

namespace brwlab {

// Normalized exponential profile with density 4*beta*exp(-4*beta*a) on [0, inf).
struct ExponentialProfile {
  double beta;
};

struct FellerState {
  double t = 0.0;
  double mass = 0.0;
  double sigma2 = 1.0;
  double y0 = 0.0;
};

// Interval mass exp(-4 beta a) - exp(-4 beta b); b may be infinity.
double profile_mass(const ExponentialProfile& profile, double a, double b);

// Euler-Maruyama path of dY = sigma sqrt(Y) dW on [0, t_end], clamped to 0
// and absorbed there. dt is snapped to an integer number of steps.
std::vector<FellerState> feller_euler_path(double y0, double sigma2, double t_end, double dt,
                                           Rng& rng);

// Endpoint of an Euler path, without materializing the trajectory.
double feller_euler_marginal(double y0, double sigma2, double t, double dt, Rng& rng);

// Exact Y_t draw: Poisson(2 y0/(sigma2 t)) many exponentials of mean
// sigma2 t/2, matching the transition Laplace transform
// exp(-y0 lambda/(1 + sigma2 lambda t/2)).
double feller_exact_marginal(double y0, double sigma2, double t, Rng& rng);

// Product-form interval mass y_t * profile_mass(a, b).
double limit_measure_mass(double y_t, const ExponentialProfile& profile, double a, double b);

inline double default_feller_dt(double t) { return 1e-3 * t; }

}  // namespace brwlab
