#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "bolax/errors.hpp"
#include "bolax/types.hpp"

namespace bolax {

// Adaptive Simpson with absolute tolerance and a hard subdivision cap (2^20
// intervals). Works for any value type with +,-,* double and a norm().
namespace detail {

inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(Complex x) { return std::abs(x); }

template <class F, class V>
V adaptive_simpson_rec(const F& f, double a, double b, V fa, V fm, V fb, V whole,
                       double tol, int depth, std::int64_t& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  V flm = f(lm);
  V frm = f(rm);
  budget -= 2;
  const double h = b - a;
  V left = (h / 12.0) * (fa + 4.0 * flm + fm);
  V right = (h / 12.0) * (fm + 4.0 * frm + fb);
  V s2 = left + right;
  V err = s2 - whole;
  if (depth <= 0 || budget <= 0) {
    if (qnorm(err) > 15.0 * tol) throw QuadratureNoConvergence("adaptive Simpson cap exceeded");
    return s2 + (1.0 / 15.0) * err;
  }
  if (qnorm(err) <= 15.0 * tol) return s2 + (1.0 / 15.0) * err;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a,b] to absolute tolerance abs_tol.
template <class F, class V = decltype(std::declval<F>()(0.0))>
V adaptive_simpson(const F& f, double a, double b, double abs_tol = 1e-9) {
  if (a == b) return V{};
  V fa = f(a);
  V fm = f(0.5 * (a + b));
  V fb = f(b);
  V whole = ((b - a) / 6.0) * (fa + 4.0 * fm + fb);
  std::int64_t budget = std::int64_t(1) << 20;
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, abs_tol, 120, budget);
}

// Gauss(7)/Kronrod(15) nodes and weights on [-1,1].
namespace gk {
inline constexpr double kNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
inline constexpr double kWK[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
// Gauss weights attach to nodes 0,2,4,6.
inline constexpr double kWG[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};
}  // namespace gk

struct QuadResult {
  Complex value{0.0, 0.0};
  double err = 0.0;
  std::int64_t evals = 0;
};

namespace detail {

template <class F>
void gk15_panel(const F& f, double a, double b, Complex& k15, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Complex g7{0.0, 0.0};
  Complex k{0.0, 0.0};
  Complex f0 = f(c);
  k += gk::kWK[0] * f0;
  g7 += gk::kWG[0] * f0;
  for (int i = 1; i < 8; ++i) {
    Complex fp = f(c + h * gk::kNodes[i]);
    Complex fmv = f(c - h * gk::kNodes[i]);
    k += gk::kWK[i] * (fp + fmv);
    if (i % 2 == 0) g7 += gk::kWG[i / 2] * (fp + fmv);
  }
  k15 = h * k;
  err = std::abs(h * (k - g7));
}

template <class F>
void gk_adaptive(const F& f, double a, double b, double tol, int depth,
                 QuadResult& out) {
  Complex v;
  double e;
  gk15_panel(f, a, b, v, e);
  out.evals += 15;
  if (e <= tol || depth <= 0) {
    if (depth <= 0 && e > 50.0 * tol)
      throw QuadratureNoConvergence("Gauss-Kronrod depth exhausted");
    out.value += v;
    out.err += e;
    return;
  }
  const double m = 0.5 * (a + b);
  gk_adaptive(f, a, m, 0.5 * tol, depth - 1, out);
  gk_adaptive(f, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of a complex-valued f over the real
/// parameter interval [a,b]. abs_tol is per call; max_evals caps the work.
template <class F>
QuadResult gk_integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                        std::int64_t max_evals = 1000000) {
  QuadResult out;
  if (a == b) return out;
  // Depth bounded so total evaluations stay under max_evals even in the
  // worst balanced tree (15 * 2^depth evals).
  int depth = 0;
  while ((std::int64_t(15) << (depth + 1)) < max_evals && depth < 40) ++depth;
  detail::gk_adaptive(f, a, b, abs_tol, depth, out);
  if (out.evals > max_evals) throw QuadratureNoConvergence("evaluation cap exceeded");
  return out;
}

}  // namespace bolax
