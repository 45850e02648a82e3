#include "bolax/burgers.hpp"

#include <algorithm>
#include <cmath>

#include "bolax/errors.hpp"
#include "bolax/quadrature.hpp"
#include "bolax/rootfind.hpp"

namespace bolax {

DistributionProfile::DistributionProfile(const TrigPotential& u) : u_(u) {
  ShapeReport s = classify_shape(u);
  if (s.classification == Shape::neither)
    throw NotWeaklyBellShaped("profile requires a weakly bell shaped potential");
  min_u_ = s.min_u;
  max_u_ = s.max_u;
  x_min_ = s.x_min;
  x_max_ = s.x_max;
}

void DistributionProfile::antecedents_lifted(double eta, double& x_plus, double& x_minus) const {
  if (!(eta > min_u_ && eta < max_u_))
    throw OutOfRangeEta("eta must lie strictly between min u and max u");
  // rising arc (x_min, x_max), falling arc (x_max, x_min + 2*pi) on the lifted
  // line.
  const double a = x_min_;
  const double b = x_min_ < x_max_ ? x_max_ : x_max_ + kTwoPi;
  auto g = [&](double x) { return eval_torus(u_, x) - eta; };
  x_plus = bisect(g, a, b, 1e-14);
  x_minus = bisect(g, b, a + kTwoPi, 1e-14);
}

void DistributionProfile::antecedents(double eta, double& x_plus, double& x_minus) const {
  antecedents_lifted(eta, x_plus, x_minus);
  x_plus = wrap_2pi(x_plus);
  x_minus = wrap_2pi(x_minus);
}

double DistributionProfile::F(double eta) const {
  if (eta <= min_u_) return 1.0;
  if (eta > max_u_) return 0.0;
  if (eta == max_u_) return 0.0;
  double xp, xm;
  antecedents(eta, xp, xm);
  double gap = xm - xp;  // measure of {u >= eta}
  if (gap < 0.0) gap += kTwoPi;
  return gap / kTwoPi;
}

double DistributionProfile::action_A(double eta, double abs_tol) const {
  if (eta >= max_u_) return 0.0;
  if (eta < min_u_) eta = min_u_;
  auto f = [&](double nu) { return F(nu); };
  return adaptive_simpson(f, eta, max_u_, abs_tol);
}

BranchSet branches(const TrigPotential& u, double t, double x, int scan_grid) {
  if (t < 0.0) throw OutOfRegion("branches requires t >= 0");
  {
    ShapeReport s = classify_shape(u);
    if (s.classification == Shape::neither)
      throw NotWeaklyBellShaped("branches requires a weakly bell shaped potential");
  }
  BranchSet out;
  out.t = t;
  out.x = x;

  // Characteristic feet: y + 2 u(y) t = x + 2 pi m for every integer m whose
  // shifted target intersects the range of y + 2 u(y) t over [0, 2 pi).
  auto g = [&](double y) { return y + 2.0 * eval_torus(u, y) * t; };
  double lo = 0.0, hi = 0.0;
  {
    double gmin = g(0.0), gmax = g(0.0);
    for (int i = 1; i <= scan_grid; ++i) {
      double v = g(kTwoPi * i / scan_grid);
      gmin = std::min(gmin, v);
      gmax = std::max(gmax, v);
    }
    lo = std::floor((gmin - x) / kTwoPi) - 1;
    hi = std::ceil((gmax - x) / kTwoPi) + 1;
  }

  std::vector<std::pair<double, double>> found;  // (value, foot)
  const double tangency_tol = 1e-10;
  for (int m = static_cast<int>(lo); m <= static_cast<int>(hi); ++m) {
    const double target = x + kTwoPi * m;
    auto h = [&](double y) { return g(y) - target; };
    double prev = h(0.0);
    for (int i = 0; i < scan_grid; ++i) {
      double y0 = kTwoPi * i / scan_grid;
      double y1 = kTwoPi * (i + 1) / scan_grid;
      double cur = h(y1);
      if (prev == 0.0) {
        found.emplace_back(eval_torus(u, y0), y0);
      } else if ((prev > 0.0) != (cur > 0.0)) {
        double y = bisect(h, y0, y1, 1e-13);
        found.emplace_back(eval_torus(u, y), y);
      } else if (std::abs(cur) < tangency_tol && std::abs(cur) < std::abs(prev)) {
        // near-tangency: counted below via the parity check
      }
      prev = cur;
    }
  }
  std::sort(found.begin(), found.end());
  for (auto& p : found) {
    out.values.push_back(p.first);
    out.feet.push_back(p.second);
  }
  if (out.values.empty() || out.values.size() % 2 == 0)
    throw BranchCountEven("even branch count at (t, x); perturb x");
  return out;
}

double alt_sum(const BranchSet& b) {
  double acc = 0.0;
  double sign = 1.0;
  for (double v : b.values) {
    acc += sign * v;
    sign = -sign;
  }
  return acc;
}

std::vector<double> alt_sum_field(const TrigPotential& u, double t,
                                  const std::vector<double>& xs, int scan_grid) {
  {
    ShapeReport s = classify_shape(u);
    if (s.classification == Shape::neither)
      throw NotWeaklyBellShaped("alt_sum_field requires a weakly bell shaped potential");
  }
  // one shared scan of y + 2 u(y) t over the period
  std::vector<double> ys(scan_grid + 1), gs(scan_grid + 1);
  double gmin = 1e300, gmax = -1e300;
  for (int i = 0; i <= scan_grid; ++i) {
    ys[i] = kTwoPi * i / scan_grid;
    gs[i] = ys[i] + 2.0 * eval_torus(u, ys[i]) * t;
    gmin = std::min(gmin, gs[i]);
    gmax = std::max(gmax, gs[i]);
  }

  auto solve_one = [&](double x) {
    std::vector<double> values;
    const int m_lo = static_cast<int>(std::floor((gmin - x) / kTwoPi)) - 1;
    const int m_hi = static_cast<int>(std::ceil((gmax - x) / kTwoPi)) + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
      const double target = x + kTwoPi * m;
      for (int i = 0; i < scan_grid; ++i) {
        const double a = gs[i] - target, b = gs[i + 1] - target;
        if (a == 0.0) {
          values.push_back(eval_torus(u, ys[i]));
        } else if (b != 0.0 && (a > 0.0) != (b > 0.0)) {
          auto h = [&](double y) { return y + 2.0 * eval_torus(u, y) * t - target; };
          values.push_back(eval_torus(u, bisect(h, ys[i], ys[i + 1], 1e-13)));
        }
      }
    }
    std::sort(values.begin(), values.end());
    if (values.empty() || values.size() % 2 == 0) throw BranchCountEven("caustic hit");
    double acc = 0.0, sign = 1.0;
    for (double v : values) {
      acc += sign * v;
      sign = -sign;
    }
    return acc;
  };

  std::vector<double> field(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    try {
      field[i] = solve_one(xs[i]);
    } catch (const BranchCountEven&) {
      field[i] = solve_one(xs[i] + 1e-7);
    }
  }
  return field;
}

Complex weak_limit_fourier(const DistributionProfile& profile, double t, int k,
                           double abs_tol) {
  if (k == 0) throw ZeroArgument("weak_limit_fourier requires k != 0");
  auto f = [&](double eta) -> Complex {
    double xp, xm;
    profile.antecedents(eta, xp, xm);
    return std::polar(1.0, -k * (xp + 2.0 * eta * t)) -
           std::polar(1.0, -k * (xm + 2.0 * eta * t));
  };
  // endpoints are integrable (bounded integrand); nudge off the boundary
  const double a = profile.min_u() + 1e-13 * (1.0 + std::abs(profile.min_u()));
  const double b = profile.max_u() - 1e-13 * (1.0 + std::abs(profile.max_u()));
  Complex integral = adaptive_simpson(f, a, b, abs_tol);
  return -kI / (2.0 * k * kPi) * integral;
}

}  // namespace bolax
