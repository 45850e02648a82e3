#pragma once

#include <string>
#include <vector>

#include "bolax/laxspec.hpp"
#include "bolax/potential.hpp"
#include "bolax/types.hpp"

namespace bolax {

/// Fourier coefficients u_hat(t)(k), 0 <= k <= kmax, of an evolved solution.
/// eps = 0 marks the dispersionless limit operator.
struct EvolutionState {
  double eps = 0.0;
  double t = 0.0;
  VecXcd coeffs;  // index k
  std::string provenance;  // explicit_formula | limit_operator | reference_integrator
  int M = 0;               // operator truncation (or mode count for the integrator)
  double error_estimate = 0.0;  // step-halving estimate, integrator only
};

/// Explicit resolvent route: u_hat(t)(k) = <M(t)^k Pi u0 | 1> with
/// M(t) = e^{i eps t} exp(2 i t L_{u0}(eps)) S*, the exponential realized by
/// the spectral decomposition of the truncated Lax matrix.
EvolutionState fourier_evolution(const TrigPotential& u0, double eps, double t, int kmax,
                                 int M);

/// eps -> 0 limit operator: same iteration with M(t) = exp(-2 i t T_{u0}) S*,
/// T_{u0} the Hermitian Toeplitz truncation.
EvolutionState weak_limit_operator(const TrigPotential& u0, double t, int kmax, int M);

/// Pseudo-spectral integrating-factor RK4 reference for
/// d_t u = d_x(eps |d_x| u - u^2), with 2/3-style dealiasing via zero padding
/// and a step-halving error estimate.
EvolutionState reference_integrator(const TrigPotential& u0, double eps, double t_end,
                                    double dt, int M_modes, int kmax = 16);

/// Frequency differences measured from the evolved shift pairings:
/// arg s_n(t2) - arg s_n(t1) over t2 - t1 should equal 2 lambda_n + eps
/// (the pairing phase is gauge free and tracks theta_{n+1} - theta_n).
struct FrequencyCheck {
  std::vector<int> n;
  std::vector<double> measured;
  std::vector<double> expected;
  std::vector<double> residual;
};

FrequencyCheck frequency_check(const TrigPotential& u0, double eps, double t1, double t2,
                               int M, double delta = 0.2);

}  // namespace bolax
