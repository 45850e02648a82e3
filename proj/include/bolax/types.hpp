#pragma once

#include <Eigen/Dense>
#include <complex>

namespace bolax {

using Complex = std::complex<double>;

using VecXd = Eigen::VectorXd;
using VecXcd = Eigen::VectorXcd;
using MatXd = Eigen::MatrixXd;
using MatXcd = Eigen::MatrixXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr Complex kI{0.0, 1.0};

/// Wraps an angle into [0, 2*pi).
inline double wrap_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y;
}

/// Argument of z with the determination arg(z) in (0, 2*pi).
/// The positive real axis is the branch cut; callers must exclude it.
inline double arg_cut_positive_axis(Complex z) {
  double a = std::arg(z);
  if (a <= 0.0) a += kTwoPi;
  return a;
}

}  // namespace bolax
