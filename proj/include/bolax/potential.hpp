#pragma once

#include <string>
#include <vector>

#include "bolax/types.hpp"

namespace bolax {

/// Real-valued zero-mean trigonometric polynomial u(x) = sum_{k=1..N} c_k
/// e^{ikx} + conj(c_k) e^{-ikx}. Only the coefficients for k >= 1 are stored;
/// conjugate symmetry (and hence real values on the torus) is implied.
///
/// `rotation` records the spatial translation a in [0, 2*pi) such that
/// u(x - a)... i.e. the translated potential u_norm(x) := u(x + a) has a
/// positive leading coefficient c_N e^{iNa} > 0. The translation is recorded,
/// never applied to user-facing coordinates.
struct TrigPotential {
  int degree = 0;      // N
  VecXcd coeffs;       // c_1..c_N as entered
  double rotation = 0.0;
  bool is_even = false;          // all c_k real
  bool leading_positive = false; // c_N > 0 as entered

  Complex c(int k) const { return coeffs(k - 1); }  // 1-based
};

enum class Shape { bell, weakly_bell, neither };

inline const char* shape_name(Shape s) {
  switch (s) {
    case Shape::bell: return "bell";
    case Shape::weakly_bell: return "weakly_bell";
    default: return "neither";
  }
}

struct ShapeReport {
  Shape classification = Shape::neither;
  double x_min = 0.0, x_max = 0.0;     // torus points
  double xi_minus = 0.0, xi_plus = 0.0;  // inflection points, bell only
  double min_u = 0.0, max_u = 0.0;
  double tol = 0.0;
};

struct ApproxRecord {
  int N = 0;
  double x_min = 0.0, x_max = 0.0;
  double sup_error = 0.0;
  bool comonotone = false;
};

struct ApproxReport {
  std::vector<ApproxRecord> records;
  int N0 = -1;             // smallest tested N from which all larger are comonotone
  double loglog_slope = 0.0;  // fitted slope of log(sup_error) vs log(N)
};

/// Builds a TrigPotential from c_1..c_N. The list must be nonempty with a
/// nonzero last entry; the normalizing rotation is recorded.
TrigPotential parse_potential(const std::vector<Complex>& coeff_list);

/// Named presets used throughout the test fixtures.
TrigPotential preset_potential(const std::string& name);

double eval_torus(const TrigPotential& u, double x);
double eval_torus_d1(const TrigPotential& u, double x);
double eval_torus_d2(const TrigPotential& u, double x);
double eval_torus_d3(const TrigPotential& u, double x);

/// Antiderivative on the torus: U'(x) = u(x), U(0) fixed by the series.
double eval_torus_antideriv(const TrigPotential& u, double x);

/// Meromorphic extension u(z) = sum c_k z^k + conj(c_k) z^{-k}, z != 0.
Complex eval_complex(const TrigPotential& u, Complex z);

/// d/dz of the meromorphic extension.
Complex eval_complex_dz(const TrigPotential& u, Complex z);

/// Q(z) = sum_k (-c_k z^k / k + conj(c_k) z^{-k} / k), so that -z Q'(z) = u(z).
Complex eval_Q(const TrigPotential& u, Complex z);

/// Coefficients of the translated potential with positive leading term.
VecXcd normalized_coeffs(const TrigPotential& u);

/// min/max of u over the torus with the attaining points, refined by bisection
/// on u'.
struct ExtremaInfo {
  double min_u, max_u, x_min, x_max;
};
ExtremaInfo find_extrema(const TrigPotential& u, int grid_size = 0);

inline double sup_norm(const TrigPotential& u) {
  auto e = find_extrema(u);
  return std::max(std::abs(e.min_u), std::abs(e.max_u));
}

/// Classification per the bell-shape definition: weakly bell needs exactly one
/// rising and one falling arc; bell additionally needs exactly two simple
/// inflection points. The normalization x_min = 0 is treated as met up to the
/// recorded translation.
ShapeReport classify_shape(const TrigPotential& u, int grid_size = 0, double tol = 1e-12);

/// Discrete Fourier truncation of real samples on a uniform 2*pi grid.
TrigPotential truncate_fourier(const std::vector<double>& samples, int N);

/// Per-N comonotonicity verdicts of the truncated Fourier series of a weakly
/// bell shaped sampled function.
ApproxReport comonotone_check(const std::vector<double>& samples,
                              const std::vector<int>& N_ladder);

std::string potential_to_json(const TrigPotential& u);
TrigPotential potential_from_json(const std::string& json_text);

}  // namespace bolax
