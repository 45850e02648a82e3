#pragma once

#include <vector>

#include "bolax/laxspec.hpp"
#include "bolax/potential.hpp"
#include "bolax/types.hpp"

namespace bolax {

/// Contours of the eigenvalue equation, for the translated potential with
/// c_N > 0. theta_k = (2k-1) pi / N are the decay rays of Re Q near 0.
/// Gamma_k (1 <= k <= N-1): radial ray out along theta_k, circle arc
/// theta_k -> theta_{k+1}, radial ray back; Gamma_N^- runs out along theta_N
/// then along the arc theta_N -> 2 pi; Gamma_N^+ runs along the arc
/// 0 -> theta_1 then back to the origin. All counterclockwise, with the
/// argument determination in (0, 2 pi).
struct ContourDescriptor {
  enum class Kind { gamma_k, gamma_N_plus, gamma_N_minus };
  Kind kind = Kind::gamma_k;
  int k = 1;  // contour index for gamma_k
  int N = 1;
  double theta_a = 0.0, theta_b = 0.0;  // arc range
};

ContourDescriptor make_contour(ContourDescriptor::Kind kind, int k, int N);

struct EvansQuadSettings {
  double abs_tol = 1e-10;
  long max_evals = 1000000;
  double log_cutoff = -46.0;  // radial truncation where the integrand is < 1e-20
};

struct OscillatoryIntegral {
  Complex value{0.0, 0.0};
  double err = 0.0;
  long evals = 0;
};

/// A_{k,l} = int_Gamma e^{Q(z)/eps} z^{-l - lambda/eps} dz/z on the chosen
/// contour, by adaptive Gauss-Kronrod with panels split to keep the phase
/// increment below pi/4. Radial segments use r = e^{-s} and are truncated
/// where Re Q/eps falls below the cutoff.
OscillatoryIntegral oscillatory_A(const TrigPotential& u, double eps, double lambda,
                                  const ContourDescriptor& contour, int ell,
                                  const EvansQuadSettings& quad = {});

struct EvansDet {
  Complex value{0.0, 0.0};
  double err = 0.0;  // propagated first-order quadrature error bound
};

/// det A(lambda; eps) with row N assembled as A^+ + e^{-2 i pi lambda/eps} A^-.
EvansDet evans_det(const TrigPotential& u, double eps, double lambda,
                   const EvansQuadSettings& quad = {});

struct EvansScan {
  double eps = 0.0;
  std::vector<double> lambdas;
  std::vector<double> abs_det;
  std::vector<double> err_est;
  std::vector<double> zeros;              // refined minima below threshold
  std::vector<double> matched_eigenvalue; // nearest eigensolver value, or NaN
  double median_abs_det = 0.0;
};

/// Samples |det A| on a uniform lambda grid, refines local minima below
/// 0.05 * median by golden section to width 1e-6, and keeps those whose
/// refined |det A| is below 1e-6 * median. Matching against the eigensolver
/// spectrum is advisory and never throws.
EvansScan scan_zeros(const TrigPotential& u, double eps, double lam_lo, double lam_hi,
                     int grid_points, const EvansQuadSettings& quad = {});

}  // namespace bolax
