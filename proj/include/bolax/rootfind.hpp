#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <vector>

#include "bolax/errors.hpp"
#include "bolax/types.hpp"

namespace bolax {

/// Bisection for a sign change of f on [a,b]; f(a) and f(b) must have
/// opposite signs. Returns the midpoint of the final bracket of width x_tol.
template <class F>
double bisect(const F& f, double a, double b, double x_tol = 1e-14, int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw ConvergenceFailure("bisect: no sign change");
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// Golden-section minimization of f on [a,b] down to bracket width x_tol.
template <class F>
double golden_min(const F& f, double a, double b, double x_tol = 1e-6) {
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > x_tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// All roots of the polynomial sum_k coeff[k] z^k (coeff.back() != 0) via the
/// companion matrix, each polished by a few Newton steps.
inline std::vector<Complex> poly_roots(const std::vector<Complex>& coeff,
                                       double polish_tol = 1e-12) {
  const int deg = static_cast<int>(coeff.size()) - 1;
  if (deg < 1 || coeff.back() == Complex{0.0, 0.0})
    throw ZeroLeadingCoefficient("poly_roots: degenerate polynomial");
  MatXcd companion = MatXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeff[i] / coeff[deg];
  Eigen::ComplexEigenSolver<MatXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw RootPolishFailure("companion eigensolve failed");

  auto eval = [&](Complex z, Complex& p, Complex& dp) {
    p = coeff[deg];
    dp = Complex{0.0, 0.0};
    for (int k = deg - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + coeff[k];
    }
  };

  std::vector<Complex> roots(deg);
  for (int i = 0; i < deg; ++i) {
    Complex z = solver.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      Complex p, dp;
      eval(z, p, dp);
      if (std::abs(p) == 0.0) break;
      if (std::abs(dp) == 0.0) break;  // multiple root; keep companion value
      Complex step = p / dp;
      z -= step;
      if (std::abs(step) < polish_tol * (1.0 + std::abs(z))) break;
    }
    roots[i] = z;
  }
  return roots;
}

}  // namespace bolax
