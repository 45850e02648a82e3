#pragma once

#include <vector>

#include "bolax/potential.hpp"
#include "bolax/types.hpp"

namespace bolax {

/// Distribution function F(eta) = Leb{x : u(x) >= eta} / (2*pi) of a weakly
/// bell shaped potential, together with the antecedents x_+(eta) on the rising
/// arc and x_-(eta) on the falling arc, and the action A(eta) = int_eta^max F.
class DistributionProfile {
 public:
  explicit DistributionProfile(const TrigPotential& u);

  const TrigPotential& potential() const { return u_; }
  double min_u() const { return min_u_; }
  double max_u() const { return max_u_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }

  /// F(eta) in [0,1]; 1 below the minimum, 0 above the maximum.
  double F(double eta) const;

  /// Antecedents of eta on the two monotone arcs; requires
  /// min_u < eta < max_u. x_plus lies in (x_min, x_max) and x_minus in
  /// (x_max, x_min + 2*pi), both reported in [0, 2*pi).
  void antecedents(double eta, double& x_plus, double& x_minus) const;

  /// Same antecedents on the lifted line, ordered x_plus < x_max < x_minus
  /// (no wrap), for integrals along the arc through the maximum.
  void antecedents_lifted(double eta, double& x_plus, double& x_minus) const;

  /// A(eta) = int_eta^{max u} F(nu) dnu by adaptive Simpson (abs tol 1e-9,
  /// independent of the closed-form antiderivative route used elsewhere).
  double action_A(double eta, double abs_tol = 1e-9) const;

 private:
  TrigPotential u_;
  double min_u_, max_u_, x_min_, x_max_;
};

/// Branches of the multivalued Burgers solution at (t, x): all y with
/// y + 2 u(y) t = x (mod 2*pi), recorded as feet y_j and values u(y_j) sorted
/// ascending by value. The count is odd away from caustics.
struct BranchSet {
  double t = 0.0, x = 0.0;
  std::vector<double> feet;    // y_j, same order as values
  std::vector<double> values;  // ascending
};

BranchSet branches(const TrigPotential& u, double t, double x, int scan_grid = 8192);

/// Alternating signed sum over ascending branches.
double alt_sum(const BranchSet& b);

/// alt_sum(branches(u, t, x)) over many x, sharing one scan of the
/// characteristic map. Points that land on a caustic within tolerance are
/// retried with the stated 1e-7 nudge.
std::vector<double> alt_sum_field(const TrigPotential& u, double t,
                                  const std::vector<double>& xs, int scan_grid = 8192);

/// Fourier coefficient of the zero-dispersion weak limit:
///   u_hat(k) = -(i / (2 k pi)) * int_{min u}^{max u}
///              [e^{-ik(x_+(eta) + 2 eta t)} - e^{-ik(x_-(eta) + 2 eta t)}] d eta.
Complex weak_limit_fourier(const DistributionProfile& profile, double t, int k,
                           double abs_tol = 1e-8);

}  // namespace bolax
