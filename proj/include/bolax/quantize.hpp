#pragma once

#include <string>
#include <vector>

#include "bolax/landscape.hpp"
#include "bolax/laxspec.hpp"
#include "bolax/potential.hpp"

namespace bolax {

enum class Region { small, large, band, transition };

inline const char* region_name(Region r) {
  switch (r) {
    case Region::small: return "small";
    case Region::large: return "large";
    case Region::band: return "band";
    default: return "transition";
  }
}

/// Lambda_-(delta) = [-max u + delta, -min u - delta],
/// Lambda_+(delta) = [-min u + delta, inf), with excluded bands
/// (y_k - delta, y_k + delta) from the landscape diagnostics. Every eigenvalue
/// is tagged by the location of lambda_n + eps (band wins over small/large).
struct RegionPartition {
  double delta = 0.0;
  double small_lo = 0.0, small_hi = 0.0;
  double large_lo = 0.0;
  std::vector<double> bands;
  std::vector<Region> tags;
};

RegionPartition region_classify(const SpectrumResult& spec, const TrigPotential& u,
                                double delta, const std::vector<double>& bands);

/// psi(eta) = -1/4 - eta + (N+1) F(eta) for an even potential. The quantization
/// argument is eta = -lambda throughout.
double psi_even(const TrigPotential& u, double eta);

/// General-potential phase: -1/4 - eta + (N+1) F(eta)
/// + (1/2 pi) sum_k [arg(p_- - p_k) - arg(p_+ - p_k)] over the inside roots,
/// principal arguments, reduced mod 1 into [0, 1). Reduces to psi_even for
/// N = 1 even potentials (empty sum).
double psi_general(const TrigPotential& u, double lambda, const CriticalPointSet& cps);
double psi_general(const TrigPotential& u, double lambda);

/// Bohr-Sommerfeld prediction: solves A(eta) = eps (n + psi_q(eta)) for eta
/// (safeguarded Newton on the strictly decreasing A) and returns -eta. The
/// solution must fall inside (min u + delta, max u - delta). psi_q is the
/// measured level-count offset 3/4 - F(eta), which reproduces the eigensolver
/// indices; see the quantization report convention.
double predict_small(const TrigPotential& u, double eps, double delta, int n);

struct QuantizationReport {
  std::vector<double> eps_ladder;
  std::vector<std::vector<double>> small_pair_residuals;  // adjacent small-region pairs, per eps
  std::vector<double> max_small_residual;                 // per eps
  std::vector<double> max_large_residual;                 // per eps, over all large pairs
  std::vector<int> small_count, large_count;              // per eps
  double small_slope = 0.0;  // log(max small residual) vs log(eps)
  std::string convention =
      "psi argument eta = -lambda; quantization A(eta) = eps*(n + 3/4 - F(eta)), "
      "the measured level-count offset (Bessel-exact for N = 1)";
};

/// Residual diagnostics across an epsilon ladder (needs >= 3 values):
/// adjacent-pair residuals |int F - (n-p + psi_n - psi_p) eps| in the small
/// region, |lambda_n - lambda_p - (n-p) eps| in the large region, and the
/// fitted scaling exponent of the small-region maximum.
QuantizationReport residual_report(const TrigPotential& u,
                                   const std::vector<double>& eps_ladder, double delta,
                                   double lambda_max = 0.0);

/// Leading Evans-determinant factor at a small-case lambda:
///   Delta = 1 - exp(2 pi i (A/eps - psi)),
/// with A from the circle-integral route (independent of the quadrature used
/// by predict_small) and the real part of the exponent taken from the direct
/// S(p_+) - S(p_-) evaluation, so the unit-modulus property is a measurement.
struct DeltaFactor {
  Complex delta{0.0, 0.0};
  double second_term_modulus = 0.0;  // 1 up to the critical-point residuals
  double abs_P = 0.0;  // |det V_+| / (sqrt|S''(p_+)| prod_k sqrt|S''(p_k)|)
  double psi_used = 0.0;
};

DeltaFactor delta_factor(const TrigPotential& u, double lambda, double eps,
                         const CriticalPointSet& cps);

/// Zeros of Delta over [lam_lo, lam_hi], located by tracking the quantization
/// phase A/eps - psi across a grid and bisecting its integer crossings.
std::vector<double> delta_zeros(const TrigPotential& u, double eps, double lam_lo,
                                double lam_hi, int grid_points = 400);

std::string quantization_report_to_json(const QuantizationReport& rep);

}  // namespace bolax
