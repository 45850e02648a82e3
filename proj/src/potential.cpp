#include "bolax/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"

#include "bolax/errors.hpp"
#include "bolax/rootfind.hpp"

namespace bolax {

namespace {

// sum over k of 2 Re(c_k (ik)^m e^{ikx})
double torus_deriv(const TrigPotential& u, double x, int m) {
  double acc = 0.0;
  for (int k = 1; k <= u.degree; ++k) {
    Complex w = u.c(k) * std::polar(1.0, k * x);
    Complex ikm = std::pow(Complex{0.0, double(k)}, m);
    acc += 2.0 * std::real(ikm * w);
  }
  return acc;
}

double deriv_sup(const TrigPotential& u, int m) {
  double s = 0.0;
  for (int k = 1; k <= u.degree; ++k)
    s += 2.0 * std::abs(u.c(k)) * std::pow(double(k), m);
  return s;  // coefficient bound, cheap and sufficient for tolerances
}

// Sign transitions of a 2*pi-periodic f on a uniform grid, refined by
// bisection. Grid points landing exactly on roots are bridged by bracketing
// between the surrounding strict-sign samples.
std::vector<double> sign_change_roots(const std::function<double(double)>& f,
                                      int grid_size) {
  std::vector<double> xs(grid_size), fs(grid_size);
  for (int i = 0; i < grid_size; ++i) {
    xs[i] = kTwoPi * i / grid_size;
    fs[i] = f(xs[i]);
  }
  int i0 = -1;
  for (int i = 0; i < grid_size; ++i)
    if (fs[i] != 0.0) { i0 = i; break; }
  std::vector<double> roots;
  if (i0 < 0) return roots;  // identically zero on the grid
  int last = i0;
  for (int step = 1; step <= grid_size; ++step) {
    const int i = (i0 + step) % grid_size;
    if (fs[i] == 0.0) continue;
    if ((fs[i] > 0.0) != (fs[last] > 0.0)) {
      double a = xs[last];
      double b = i > last ? xs[i] : xs[i] + kTwoPi;  // lift across the wrap
      auto fw = [&](double x) { return f(wrap_2pi(x)); };
      roots.push_back(wrap_2pi(bisect(fw, a, b, 1e-13)));
    }
    last = i;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

TrigPotential parse_potential(const std::vector<Complex>& coeff_list) {
  if (coeff_list.empty()) throw EmptyCoefficients();
  if (coeff_list.back() == Complex{0.0, 0.0})
    throw ZeroLeadingCoefficient("c_N must be nonzero");
  TrigPotential u;
  u.degree = static_cast<int>(coeff_list.size());
  u.coeffs = VecXcd(u.degree);
  for (int k = 0; k < u.degree; ++k) u.coeffs(k) = coeff_list[k];

  const Complex cN = u.coeffs(u.degree - 1);
  u.leading_positive = (cN.imag() == 0.0 && cN.real() > 0.0);
  double phi = std::arg(cN);  // rotation a with c_N e^{iNa} > 0
  if (phi < 0.0) phi += kTwoPi;
  u.rotation = u.leading_positive ? 0.0 : phi / u.degree;

  u.is_even = true;
  double scale = u.coeffs.cwiseAbs().sum();
  for (int k = 0; k < u.degree; ++k)
    if (std::abs(u.coeffs(k).imag()) > 1e-15 * scale) u.is_even = false;
  return u;
}

TrigPotential preset_potential(const std::string& name) {
  if (name == "cosine") return parse_potential({Complex{-1.0, 0.0}});
  if (name == "fig-level0")
    return parse_potential({{4.0, 0.0}, {0.0, -0.5}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.1, 0.0}});
  if (name == "fig-level0-outside")
    return parse_potential({{4.0, 0.0}, {0.0, 0.25}, {0.0, 0.0}, {0.0, -0.125}, {0.0, 0.0}, {0.05, 0.0}});
  throw ConfigInvalid("unknown preset '" + name + "'");
}

double eval_torus(const TrigPotential& u, double x) { return torus_deriv(u, x, 0); }
double eval_torus_d1(const TrigPotential& u, double x) { return torus_deriv(u, x, 1); }
double eval_torus_d2(const TrigPotential& u, double x) { return torus_deriv(u, x, 2); }
double eval_torus_d3(const TrigPotential& u, double x) { return torus_deriv(u, x, 3); }

double eval_torus_antideriv(const TrigPotential& u, double x) {
  double acc = 0.0;
  for (int k = 1; k <= u.degree; ++k) {
    Complex w = u.c(k) * std::polar(1.0, k * x);
    acc += 2.0 * std::real(w / Complex{0.0, double(k)});
  }
  return acc;
}

Complex eval_complex(const TrigPotential& u, Complex z) {
  if (z == Complex{0.0, 0.0}) throw ZeroArgument("u(z) has a pole at z = 0");
  Complex acc{0.0, 0.0};
  Complex zk{1.0, 0.0};
  Complex zmk{1.0, 0.0};
  const Complex zi = 1.0 / z;
  for (int k = 1; k <= u.degree; ++k) {
    zk *= z;
    zmk *= zi;
    acc += u.c(k) * zk + std::conj(u.c(k)) * zmk;
  }
  return acc;
}

Complex eval_complex_dz(const TrigPotential& u, Complex z) {
  if (z == Complex{0.0, 0.0}) throw ZeroArgument("u'(z) has a pole at z = 0");
  Complex acc{0.0, 0.0};
  for (int k = 1; k <= u.degree; ++k) {
    acc += double(k) * u.c(k) * std::pow(z, k - 1) -
           double(k) * std::conj(u.c(k)) * std::pow(z, -k - 1);
  }
  return acc;
}

Complex eval_Q(const TrigPotential& u, Complex z) {
  if (z == Complex{0.0, 0.0}) throw ZeroArgument("Q(z) has a pole at z = 0");
  Complex acc{0.0, 0.0};
  Complex zk{1.0, 0.0};
  Complex zmk{1.0, 0.0};
  const Complex zi = 1.0 / z;
  for (int k = 1; k <= u.degree; ++k) {
    zk *= z;
    zmk *= zi;
    acc += (-u.c(k) * zk + std::conj(u.c(k)) * zmk) / double(k);
  }
  return acc;
}

VecXcd normalized_coeffs(const TrigPotential& u) {
  // coefficients of u(x - rotation), whose leading coefficient is positive
  VecXcd out(u.degree);
  for (int k = 1; k <= u.degree; ++k)
    out(k - 1) = u.c(k) * std::polar(1.0, -k * u.rotation);
  out(u.degree - 1) = Complex{std::abs(u.c(u.degree)), 0.0};
  return out;
}

ExtremaInfo find_extrema(const TrigPotential& u, int grid_size) {
  if (grid_size <= 0) grid_size = 4096 * std::max(1, u.degree / 8);
  auto d1 = [&](double x) { return eval_torus_d1(u, x); };
  auto roots = sign_change_roots(d1, grid_size);
  ExtremaInfo info{0.0, 0.0, 0.0, 0.0};
  bool first = true;
  for (double r : roots) {
    double v = eval_torus(u, r);
    if (first || v < info.min_u) info.min_u = v, info.x_min = r;
    if (first || v > info.max_u) info.max_u = v, info.x_max = r;
    first = false;
  }
  if (first) {  // no critical point resolved (degenerate); fall back to grid
    for (int i = 0; i < grid_size; ++i) {
      double x = kTwoPi * i / grid_size;
      double v = eval_torus(u, x);
      if (i == 0 || v < info.min_u) info.min_u = v, info.x_min = x;
      if (i == 0 || v > info.max_u) info.max_u = v, info.x_max = x;
    }
  }
  return info;
}

ShapeReport classify_shape(const TrigPotential& u, int grid_size, double tol) {
  if (grid_size <= 0) grid_size = 4096 * std::max(1, u.degree / 8);
  if (grid_size < 16 * u.degree) grid_size = 16 * u.degree;

  ShapeReport rep;
  rep.tol = tol;
  const double d1_sup = deriv_sup(u, 1);
  const double d1_tol = std::max(tol, 1e-9 * d1_sup);
  if (d1_sup <= tol) return rep;  // flat within tolerance: neither

  auto d1 = [&](double x) { return eval_torus_d1(u, x); };
  auto crit = sign_change_roots(d1, grid_size);
  if (crit.size() != 2) return rep;  // more than one rising/falling arc

  double a = crit[0], b = crit[1];
  double va = eval_torus(u, a), vb = eval_torus(u, b);
  rep.x_min = va < vb ? a : b;
  rep.x_max = va < vb ? b : a;
  rep.min_u = std::min(va, vb);
  rep.max_u = std::max(va, vb);
  if (rep.max_u - rep.min_u <= d1_tol) return rep;
  rep.classification = Shape::weakly_bell;

  auto d2 = [&](double x) { return eval_torus_d2(u, x); };
  auto infl = sign_change_roots(d2, grid_size);
  if (infl.size() != 2) return rep;
  const double d3_tol = std::max(tol, 1e-9 * deriv_sup(u, 3));
  for (double xi : infl)
    if (std::abs(eval_torus_d3(u, xi)) <= d3_tol) return rep;  // non-simple inflection

  // order as x_min < xi_- < x_max < xi_+ < x_min + 2*pi
  double xm = rep.x_min;
  auto lift = [&](double x) { return x >= xm ? x : x + kTwoPi; };
  double i0 = lift(infl[0]), i1 = lift(infl[1]);
  if (i0 > i1) std::swap(i0, i1);
  double xmax_l = lift(rep.x_max);
  if (!(xm < i0 && i0 < xmax_l && xmax_l < i1)) return rep;
  rep.xi_minus = wrap_2pi(i0);
  rep.xi_plus = wrap_2pi(i1);
  rep.classification = Shape::bell;
  return rep;
}

TrigPotential truncate_fourier(const std::vector<double>& samples, int N) {
  const int G = static_cast<int>(samples.size());
  if (G < 4 * N) throw GridTooCoarse("need at least 4N samples");
  std::vector<Complex> c(N);
  for (int k = 1; k <= N; ++k) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < G; ++j)
      acc += samples[j] * std::polar(1.0, -k * kTwoPi * j / G);
    c[k - 1] = acc / double(G);
  }
  if (c.back() == Complex{0.0, 0.0}) c.back() = Complex{1e-300, 0.0};  // keep degree
  return parse_potential(c);
}

ApproxReport comonotone_check(const std::vector<double>& samples,
                              const std::vector<int>& N_ladder) {
  const int G = static_cast<int>(samples.size());
  const int N_ref = std::min(G / 4, 256);
  TrigPotential ref = truncate_fourier(samples, N_ref);
  ShapeReport ref_shape = classify_shape(ref);
  if (ref_shape.classification == Shape::neither)
    throw NotWeaklyBellShaped("sampled function is not weakly bell shaped");

  ApproxReport rep;
  for (int N : N_ladder) {
    TrigPotential uN = truncate_fourier(samples, N);
    ApproxRecord rec;
    rec.N = N;
    double err = 0.0;
    for (int j = 0; j < G; ++j)
      err = std::max(err, std::abs(samples[j] - eval_torus(uN, kTwoPi * j / G)));
    rec.sup_error = err;
    ShapeReport s = classify_shape(uN);
    rec.comonotone = s.classification != Shape::neither;
    if (rec.comonotone) {
      rec.x_min = s.x_min;
      rec.x_max = s.x_max;
    } else {
      auto e = find_extrema(uN);
      rec.x_min = e.x_min;
      rec.x_max = e.x_max;
    }
    rep.records.push_back(rec);
  }

  rep.N0 = -1;
  for (size_t i = 0; i < rep.records.size(); ++i) {
    bool all = true;
    for (size_t j = i; j < rep.records.size(); ++j) all = all && rep.records[j].comonotone;
    if (all) {
      rep.N0 = rep.records[i].N;
      break;
    }
  }

  // least-squares slope of log(sup_error) against log(N)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rep.records) {
    if (r.sup_error <= 1e-15) continue;
    double lx = std::log(double(r.N)), ly = std::log(r.sup_error);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++n;
  }
  rep.loglog_slope = n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
  return rep;
}

std::string potential_to_json(const TrigPotential& u) {
  nlohmann::json j;
  j["coeffs"] = nlohmann::json::array();
  for (int k = 1; k <= u.degree; ++k)
    j["coeffs"].push_back({u.c(k).real(), u.c(k).imag()});
  j["rotation"] = u.rotation;
  return j.dump();
}

TrigPotential potential_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::vector<Complex> c;
  for (const auto& e : j.at("coeffs")) c.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return parse_potential(c);
}

}  // namespace bolax
