#include "bolax/laxspec.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "bolax/errors.hpp"

namespace bolax {

LaxMatrix assemble_lax(const TrigPotential& u, double eps, int M) {
  if (!(eps > 0.0)) throw TruncationTooSmall("eps must be positive");
  if (M < 4 * u.degree) throw TruncationTooSmall("M must be at least 4N");
  LaxMatrix lax;
  lax.M = M;
  lax.eps = eps;
  lax.H = MatXcd::Zero(M, M);
  for (int j = 0; j < M; ++j) {
    lax.H(j, j) = Complex{eps * j, 0.0};
    for (int k = std::max(0, j - u.degree); k < j; ++k) {
      const Complex c = u.c(j - k);     // c_{j-k}, j-k >= 1
      lax.H(j, k) -= c;                 // H[j,k] = -c_{j-k}
      lax.H(k, j) -= std::conj(c);      // Hermitian partner
    }
  }
  return lax;
}

LaxMatrix assemble_free(double eps, int M) {
  LaxMatrix lax;
  lax.M = M;
  lax.eps = eps;
  lax.H = MatXcd::Zero(M, M);
  for (int j = 0; j < M; ++j) lax.H(j, j) = Complex{eps * j, 0.0};
  return lax;
}

int auto_truncation(const TrigPotential& u, double eps, double lambda_target) {
  const double s = sup_norm(u);
  int M = static_cast<int>(std::ceil((lambda_target + 2.0 * s) / eps)) + 4 * u.degree;
  return std::max(M, 8 * u.degree);
}

namespace {

// <f | S g> = sum_{k>=1} f[k] conj(g[k-1]); S is multiplication by e^{ix}.
Complex shift_inner(const VecXcd& f, const VecXcd& g) {
  Complex acc{0.0, 0.0};
  for (int k = 1; k < f.size(); ++k) acc += f(k) * std::conj(g(k - 1));
  return acc;
}

void phase_align(VecXcd& f, Complex anchor) {
  f *= std::conj(anchor) / std::abs(anchor);
}

void fallback_gauge(VecXcd& f) {
  int best = 0;
  double mag = std::abs(f(0));
  for (int k = 1; k < f.size(); ++k)
    if (std::abs(f(k)) > mag) mag = std::abs(f(k)), best = k;
  if (mag > 0.0) phase_align(f, f(best));
}

}  // namespace

SpectrumResult eigensolve(const LaxMatrix& lax) {
  Eigen::SelfAdjointEigenSolver<MatXcd> solver(lax.H);
  if (solver.info() != Eigen::Success)
    throw ConvergenceFailure("Hermitian eigensolve did not converge");

  SpectrumResult out;
  out.eps = lax.eps;
  out.lambdas = solver.eigenvalues();  // ascending
  out.vectors = solver.eigenvectors();
  out.gauge = "f0: <1|f0> > 0; chain: <f_{n+1}|S f_n> > 0; fallback: largest component real positive";

  const int M = lax.M;
  const double tol = 1e-12;
  for (int n = 0; n < M; ++n) {
    VecXcd f = out.vectors.col(n);
    if (n == 0) {
      // <1|f> = conj(f[0]); making f[0] real positive makes it positive
      if (std::abs(f(0)) > tol) {
        phase_align(f, f(0));
      } else {
        fallback_gauge(f);
      }
    } else {
      Complex w = shift_inner(f, out.vectors.col(n - 1));
      if (std::abs(w) > tol) {
        phase_align(f, w);
      } else {
        fallback_gauge(f);
      }
    }
    out.vectors.col(n) = f;
  }

  out.gaps = VecXd(M - 1);
  for (int n = 0; n + 1 < M; ++n)
    out.gaps(n) = out.lambdas(n + 1) - out.lambdas(n) - lax.eps;
  return out;
}

VecXd phase_constants(const SpectrumResult& spec) {
  const int M = static_cast<int>(spec.lambdas.size());
  VecXd theta(M);
  for (int n = 0; n < M; ++n) {
    const Complex inner1 = std::conj(spec.vectors(0, n));  // <1|f_n>
    theta(n) = std::abs(inner1) > 1e-12 ? std::arg(inner1) : 0.0;
  }
  return theta;
}

SumRuleResult gaps_and_sumrule(const SpectrumResult& spec, const TrigPotential& u) {
  const int M = static_cast<int>(spec.lambdas.size());
  const int N = u.degree;
  const double eps = spec.eps;
  if (M < 8 * N) throw TruncationTooSmall("sum rule needs M >= 8N");
  if (eps * M < 4.0 * sup_norm(u)) throw TruncationTooSmall("sum rule needs eps*M >= 4 |u|_inf");

  SumRuleResult r;
  // Keep clear of the truncation edge: the top ~|u|_inf/eps rows feel the
  // cutoff and their gaps carry an O(1) artifact. The margin grows with M so
  // that refining the truncation genuinely shrinks the residual.
  const int edge = std::max(2 * N + static_cast<int>(std::ceil(2.5 * sup_norm(u) / eps)),
                            M / 32);
  r.cap = std::max(1, M - edge);
  double lhs = 0.0;
  for (int n = 1; n <= r.cap; ++n)
    lhs += n * (spec.lambdas(n) - spec.lambdas(n - 1) - eps);
  r.lhs = eps * lhs;
  double rhs = 0.0;
  for (int k = 1; k <= N; ++k) rhs += std::norm(u.c(k));
  r.rhs = rhs;
  r.residual = std::abs(r.lhs - r.rhs);
  return r;
}

VecXcd raw_pairings(const SpectrumResult& spec) {
  const int M = static_cast<int>(spec.lambdas.size());
  VecXcd s(M);
  for (int n = 0; n < M; ++n) {
    const VecXcd& f = spec.vectors.col(n);
    Complex acc{0.0, 0.0};
    for (int k = 0; k + 1 < M; ++k) acc += f(k + 1) * std::conj(f(k));
    s(n) = acc;
  }
  return s;
}

ParityReport shift_pairing(const SpectrumResult& spec, const TrigPotential& u,
                           double delta) {
  ParityReport rep;
  rep.pairings = raw_pairings(spec);
  auto ext = find_extrema(u);
  const double lo = -ext.max_u + delta;
  const double hi = -ext.min_u - delta;
  const int M = static_cast<int>(spec.lambdas.size());
  for (int n = 0; n < M; ++n) {
    rep.max_abs = std::max(rep.max_abs, std::abs(rep.pairings(n)));
    rep.max_abs_im = std::max(rep.max_abs_im, std::abs(rep.pairings(n).imag()));
    const double shifted = spec.lambdas(n) + spec.eps;
    if (n >= 1 && shifted >= lo && shifted <= hi && rep.pairings(n).real() > 0.0)
      rep.upside_down.push_back(n);
  }
  return rep;
}

}  // namespace bolax
