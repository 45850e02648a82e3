#include "bolax/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>

#include "bolax/errors.hpp"
#include "bolax/quantize.hpp"

namespace bolax {

namespace {

VecXcd hardy_coefficients(const TrigPotential& u0, int M) {
  VecXcd v = VecXcd::Zero(M);
  for (int k = 1; k <= u0.degree && k < M; ++k) v(k) = u0.c(k);
  double tail = 0.0, total = 0.0;
  for (int k = 1; k < M; ++k) {
    total += std::norm(v(k));
    if (k > M / 2) tail += std::norm(v(k));
  }
  if (total > 0.0 && tail > 1e-10 * total)
    throw TruncationTooSmall("Pi u0 carries mass beyond M/2");
  return v;
}

VecXcd shift_down(const VecXcd& v) {  // S*: drops the 0 mode
  const int M = static_cast<int>(v.size());
  VecXcd w(M);
  for (int j = 0; j + 1 < M; ++j) w(j) = v(j + 1);
  w(M - 1) = Complex{0.0, 0.0};
  return w;
}

EvolutionState iterate_resolvent(const MatXcd& H, double scalar_phase_rate,
                                 const TrigPotential& u0, double eps, double t, int kmax,
                                 int M, const char* provenance) {
  Eigen::SelfAdjointEigenSolver<MatXcd> es(H);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("propagator eigensolve failed");
  VecXcd phases(M);
  for (int j = 0; j < M; ++j) phases(j) = std::exp(Complex{0.0, 2.0 * t * es.eigenvalues()(j)});
  const Complex scalar = std::exp(Complex{0.0, scalar_phase_rate * t});

  EvolutionState out;
  out.eps = eps;
  out.t = t;
  out.M = M;
  out.provenance = provenance;
  out.coeffs = VecXcd::Zero(kmax + 1);
  VecXcd v = hardy_coefficients(u0, M);
  out.coeffs(0) = v(0);  // zero by construction
  const MatXcd& U = es.eigenvectors();
  for (int k = 1; k <= kmax; ++k) {
    v = shift_down(v);
    v = (U * (phases.asDiagonal() * (U.adjoint() * v))).eval();
    v *= scalar;
    out.coeffs(k) = v(0);
  }
  return out;
}

}  // namespace

EvolutionState fourier_evolution(const TrigPotential& u0, double eps, double t, int kmax,
                                 int M) {
  if (!(eps > 0.0)) throw TruncationTooSmall("eps must be positive; use the limit operator");
  if (kmax > M / 2) throw TruncationTooSmall("kmax must not exceed M/2");
  LaxMatrix lax = assemble_lax(u0, eps, M);
  return iterate_resolvent(lax.H, eps, u0, eps, t, kmax, M, "explicit_formula");
}

EvolutionState weak_limit_operator(const TrigPotential& u0, double t, int kmax, int M) {
  if (kmax > M / 2) throw TruncationTooSmall("kmax must not exceed M/2");
  // -T_{u0}: the Lax matrix with the derivative part switched off
  MatXcd H = MatXcd::Zero(M, M);
  for (int j = 0; j < M; ++j)
    for (int k = std::max(0, j - u0.degree); k < j; ++k) {
      const Complex c = u0.c(j - k);
      H(j, k) -= c;
      H(k, j) -= std::conj(c);
    }
  return iterate_resolvent(H, 0.0, u0, 0.0, t, kmax, M, "limit_operator");
}

namespace {

// one IFRK4 pass; spectrum layout: c[j] is mode k = j for j <= K,
// k = j - G for j > G/2, grid size G = 4K (alias-free quadratic products)
VecXcd ifrk4_run(const TrigPotential& u0, double eps, double t_end, double dt, int K) {
  const int G = 4 * K;
  Eigen::FFT<double> fft;

  VecXcd c = VecXcd::Zero(G);
  for (int k = 1; k <= u0.degree && k <= K; ++k) {
    c(k) = u0.c(k);
    c(G - k) = std::conj(u0.c(k));
  }

  std::vector<double> mode(G);  // signed wavenumber per slot
  for (int j = 0; j < G; ++j) mode[j] = j <= G / 2 ? j : j - G;

  const int steps = std::max(1, static_cast<int>(std::lround(t_end / dt)));
  const double h = t_end / steps;

  VecXcd E(G), E2(G);
  for (int j = 0; j < G; ++j) {
    const double k = mode[j];
    const Complex L{0.0, eps * k * std::abs(k)};
    E(j) = std::exp(L * (h / 2.0));
    E2(j) = E(j) * E(j);
  }

  std::vector<Complex> buf_time(G), buf_freq(G);
  double sup0 = 0.0;
  auto nonlinear = [&](const VecXcd& spec) {
    for (int j = 0; j < G; ++j) buf_freq[j] = spec(j);
    fft.inv(buf_time, buf_freq);  // Eigen's inv carries the 1/G
    double sup = 0.0;
    for (int j = 0; j < G; ++j) {
      const double uj = buf_time[j].real() * G;
      sup = std::max(sup, std::abs(uj));
      buf_time[j] = uj * uj;
    }
    if (sup0 == 0.0) sup0 = sup + 1e-300;
    if (sup > 10.0 * sup0) throw BlowupDetected("sup norm grew by more than 10x");
    fft.fwd(buf_freq, buf_time);  // returns G * coefficients
    VecXcd out = VecXcd::Zero(G);
    for (int j = 0; j < G; ++j) {
      const double k = mode[j];
      if (std::abs(k) > K) continue;  // dealias
      out(j) = Complex{0.0, -k / G} * buf_freq[j];  // -d_x(u^2)
    }
    return out;
  };

  for (int s = 0; s < steps; ++s) {
    const VecXcd k1 = nonlinear(c);
    const VecXcd k2 = nonlinear(E.cwiseProduct(c + (h / 2.0) * k1));
    const VecXcd k3 = nonlinear(E.cwiseProduct(c) + (h / 2.0) * k2);
    const VecXcd k4 = nonlinear(E2.cwiseProduct(c) + h * E.cwiseProduct(k3));
    c = E2.cwiseProduct(c) +
        (h / 6.0) * (E2.cwiseProduct(k1) + 2.0 * E.cwiseProduct(k2 + k3) + k4);
  }
  return c;
}

}  // namespace

EvolutionState reference_integrator(const TrigPotential& u0, double eps, double t_end,
                                    double dt, int M_modes, int kmax) {
  const int K = M_modes;
  VecXcd c = ifrk4_run(u0, eps, t_end, dt, K);
  VecXcd c_half = ifrk4_run(u0, eps, t_end, dt / 2.0, K);

  EvolutionState out;
  out.eps = eps;
  out.t = t_end;
  out.M = M_modes;
  out.provenance = "reference_integrator";
  out.coeffs = VecXcd::Zero(kmax + 1);
  double err2 = 0.0;
  for (int k = 0; k <= kmax && k <= K; ++k) {
    out.coeffs(k) = c_half(k);
    err2 += std::norm(c_half(k) - c(k));
  }
  out.error_estimate = std::sqrt(err2);
  return out;
}

FrequencyCheck frequency_check(const TrigPotential& u0, double eps, double t1, double t2,
                               int M, double delta) {
  if (!(t2 > t1)) throw ComputeError("need t2 > t1");
  const int kpot = std::min(M / 4, 48);  // the rebuilt Lax matrix needs M >= 4N

  auto evolved_potential = [&](double t) {
    EvolutionState st = fourier_evolution(u0, eps, t, kpot, M);
    std::vector<Complex> c(st.coeffs.data() + 1, st.coeffs.data() + kpot + 1);
    while (c.size() > size_t(u0.degree) && std::abs(c.back()) < 1e-13) c.pop_back();
    return parse_potential(c);
  };

  TrigPotential ua = evolved_potential(t1);
  TrigPotential ub = evolved_potential(t2);
  SpectrumResult sa = eigensolve(assemble_lax(ua, eps, M));
  SpectrumResult sb = eigensolve(assemble_lax(ub, eps, M));
  VecXcd pa = raw_pairings(sa);
  VecXcd pb = raw_pairings(sb);

  // the Lax spectrum is conserved; use the t1 snapshot for the expectation.
  // delta <= 0 disables the region restriction.
  RegionPartition part;
  if (delta > 0.0) part = region_classify(sa, u0, delta, {});

  FrequencyCheck out;
  const double tol = 1e-8;
  for (int n = 0; n < sa.lambdas.size(); ++n) {
    if (delta > 0.0 && part.tags[n] != Region::small) continue;
    if (std::abs(pa(n)) < tol || std::abs(pb(n)) < tol) continue;
    const double dphi = std::arg(pb(n) / pa(n));
    if (std::abs(dphi) > kPi / 2.0)
      throw PhaseUnwrapAmbiguity("pairing phase moved more than pi/2; reduce t2 - t1");
    const double measured = dphi / (t2 - t1);
    const double expected = 2.0 * sa.lambdas(n) + eps;
    out.n.push_back(n);
    out.measured.push_back(measured);
    out.expected.push_back(expected);
    out.residual.push_back(std::abs(measured - expected));
  }
  return out;
}

}  // namespace bolax
