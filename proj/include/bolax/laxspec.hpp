#pragma once

#include <string>
#include <vector>

#include "bolax/potential.hpp"
#include "bolax/types.hpp"

namespace bolax {

/// Truncation of the Lax operator -i eps d/dx - Pi(u .) on the Hardy space in
/// the basis e^{ikx}, 0 <= k < M: H[j,k] = eps j delta_{jk} - c_{j-k}.
struct LaxMatrix {
  int M = 0;
  double eps = 0.0;
  MatXcd H;
};

struct SpectrumResult {
  double eps = 0.0;
  VecXd lambdas;   // ascending
  MatXcd vectors;  // column n is the gauge-fixed eigenvector f_n
  VecXd gaps;      // gamma_n = lambda_{n+1} - lambda_n - eps, n = 0..M-2
  std::string gauge;
};

struct SumRuleResult {
  int cap = 0;        // highest index entering the weighted gap sum
  double lhs = 0.0;   // eps * sum_{n=1..cap} n (lambda_n - lambda_{n-1} - eps)
  double rhs = 0.0;   // sum_k |c_k|^2  (= half the squared L2(dx/2pi) norm)
  double residual = 0.0;
};

struct ParityReport {
  VecXcd pairings;               // s_n = <f_n | S f_n>
  std::vector<int> upside_down;  // J: small-region indices with s_n > 0
  double max_abs_im = 0.0;       // over the tested range
  double max_abs = 0.0;
};

LaxMatrix assemble_lax(const TrigPotential& u, double eps, int M);

/// Diagonal (zero-potential) truncation, for free-operator fixtures.
LaxMatrix assemble_free(double eps, int M);

/// Truncation size covering eigenvalues up to lambda_target:
/// M = max(8N, ceil((lambda_target + 2 |u|_inf) / eps) + 4N).
int auto_truncation(const TrigPotential& u, double eps, double lambda_target);

/// Dense Hermitian eigendecomposition with a deterministic gauge: f_0 is
/// phased so <1|f_0> > 0; recursively f_{n+1} is phased so <f_{n+1}|S f_n> > 0
/// when that pairing is resolvable, else the largest-magnitude component is
/// made real positive. Inner products are linear in the first slot.
SpectrumResult eigensolve(const LaxMatrix& lax);

/// theta_n = arg<1|f_n> when |<1|f_n>| > 1e-12, else 0 by convention.
VecXd phase_constants(const SpectrumResult& spec);

/// Weighted-gap trace identity; the normalization (gap indexed by its upper
/// eigenvalue, L2 norm with dx/(2 pi)) is the one under which the identity is
/// an exact trace formula. The sum is capped away from the truncation edge.
SumRuleResult gaps_and_sumrule(const SpectrumResult& spec, const TrigPotential& u);

/// Shift pairings s_n = sum_k f_n[k+1] conj(f_n[k]) (gauge invariant) and the
/// upside-down index set J = {n >= 1 : lambda_n + eps in Lambda_-(delta),
/// Re s_n > 0}. For even bell-positioned potentials the normal parity
/// e^{i(theta_{n+1}-theta_n)} = -1 comes with s_n < 0 (measured on the cosine
/// family and consistent with the near-free limit), so positive pairings mark
/// the exceptional set.
ParityReport shift_pairing(const SpectrumResult& spec, const TrigPotential& u,
                           double delta);

/// Raw pairings only (no region classification).
VecXcd raw_pairings(const SpectrumResult& spec);

}  // namespace bolax
