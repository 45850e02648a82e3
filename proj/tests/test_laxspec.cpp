#include "bolax/laxspec.hpp"

#include <cmath>

#include "doctest.h"

#include "bolax/errors.hpp"
#include "bolax/potential.hpp"

using namespace bolax;

TEST_CASE("assemble: cosine at eps=1, M=4") {
  TrigPotential u = preset_potential("cosine");  // c_1 = -1
  LaxMatrix lax = assemble_lax(u, 1.0, 4);
  for (int j = 0; j < 4; ++j) CHECK(lax.H(j, j) == Complex{double(j), 0.0});
  for (int j = 0; j + 1 < 4; ++j) {
    CHECK(lax.H(j + 1, j) == Complex{1.0, 0.0});  // -c_1
    CHECK(lax.H(j, j + 1) == Complex{1.0, 0.0});
  }
  CHECK((lax.H - lax.H.adjoint()).norm() == 0.0);
  CHECK_THROWS_AS(assemble_lax(u, 1.0, 3), TruncationTooSmall);
}

TEST_CASE("assemble: banded by the degree") {
  TrigPotential u = preset_potential("fig-level0");
  LaxMatrix lax = assemble_lax(u, 0.1, 64);
  for (int j = 0; j < 64; ++j)
    for (int k = 0; k < 64; ++k)
      if (std::abs(j - k) > u.degree) CHECK(lax.H(j, k) == Complex{0.0, 0.0});
  CHECK((lax.H - lax.H.adjoint()).norm() == 0.0);
}

TEST_CASE("free operator: exact integers, zero gaps, trivial phases") {
  SpectrumResult spec = eigensolve(assemble_free(1.0, 16));
  for (int n = 0; n < 16; ++n) CHECK(std::abs(spec.lambdas(n) - n) <= 1e-12);
  for (int n = 0; n + 1 < 16; ++n) CHECK(std::abs(spec.gaps(n)) <= 1e-12);
  VecXd theta = phase_constants(spec);
  for (int n = 1; n < 16; ++n) CHECK(theta(n) == 0.0);  // <1|f_n> = 0 convention
  VecXcd s = raw_pairings(spec);
  for (int n = 0; n < 16; ++n) CHECK(std::abs(s(n)) <= 1e-14);
}

TEST_CASE("eigensolve: residuals, orthonormality, determinism") {
  TrigPotential u = preset_potential("cosine");
  LaxMatrix lax = assemble_lax(u, 0.5, 96);
  SpectrumResult a = eigensolve(lax);
  const double scale = 0.5 * 96 + 2.0 * sup_norm(u);
  for (int n = 0; n < 96; n += 7) {
    VecXcd r = lax.H * a.vectors.col(n) - a.lambdas(n) * a.vectors.col(n);
    CHECK(r.norm() <= 1e-10 * scale);
  }
  MatXcd gram = a.vectors.adjoint() * a.vectors;
  CHECK((gram - MatXcd::Identity(96, 96)).norm() <= 1e-10);

  SpectrumResult b = eigensolve(lax);
  CHECK((a.lambdas - b.lambdas).norm() == 0.0);
  CHECK((a.vectors - b.vectors).norm() == 0.0);

  // spectrum bounds
  for (int n = 0; n < 96; ++n) {
    CHECK(a.lambdas(n) >= -2.0 - 1e-9);
    CHECK(a.lambdas(n) <= 0.5 * n + 2.0 + 1e-9);
  }
}

TEST_CASE("eigensolve: truncation convergence under doubling") {
  TrigPotential u = preset_potential("cosine");
  SpectrumResult a = eigensolve(assemble_lax(u, 0.5, 128));
  SpectrumResult b = eigensolve(assemble_lax(u, 0.5, 256));
  for (int n = 0; n <= 64; ++n)
    CHECK(std::abs(a.lambdas(n) - b.lambdas(n)) < 1e-9);
}

TEST_CASE("gaps: nonnegative away from the truncation edge") {
  TrigPotential u = preset_potential("cosine");
  SpectrumResult spec = eigensolve(assemble_lax(u, 0.5, 256));
  for (int n = 0; n <= 256 - 2; ++n) {
    if (n > 256 - 2 * u.degree - 1) break;
    CHECK(spec.gaps(n) >= -1e-8);
  }
}

TEST_CASE("sum rule on the cosine fixture") {
  TrigPotential u = preset_potential("cosine");
  SumRuleResult s = gaps_and_sumrule(eigensolve(assemble_lax(u, 0.5, 256)), u);
  CHECK(s.rhs == doctest::Approx(1.0));  // sum |c_k|^2
  CHECK(s.residual <= 1e-3 * 2.0 * s.rhs);
  CHECK_THROWS_AS(gaps_and_sumrule(eigensolve(assemble_lax(u, 0.5, 4 * u.degree)), u),
                  TruncationTooSmall);
}

TEST_CASE("phase constants: multiples of pi for even potentials") {
  TrigPotential u = preset_potential("cosine");
  for (double eps : {0.5, 0.1}) {
    SpectrumResult spec = eigensolve(assemble_lax(u, eps, auto_truncation(u, eps, 6.0)));
    VecXd theta = phase_constants(spec);
    const int M = static_cast<int>(spec.lambdas.size());
    for (int n = 0; n + 1 < M - 4; ++n) {
      if (std::abs(spec.vectors(0, n)) <= 1e-6) continue;
      if (std::abs(spec.vectors(0, n + 1)) <= 1e-6) continue;
      const Complex e = std::exp(Complex{0.0, theta(n + 1) - theta(n)});
      CHECK(std::min(std::abs(e - 1.0), std::abs(e + 1.0)) <= 1e-6);
    }
  }
}

TEST_CASE("shift pairings: real for even potentials, complex for a twisted one") {
  TrigPotential even = parse_potential({Complex{-1.0, 0.0}, Complex{0.2, 0.0}});
  SpectrumResult spec = eigensolve(assemble_lax(even, 0.5, 128));
  ParityReport rep = shift_pairing(spec, even, 0.2);
  CHECK(rep.max_abs_im <= 1e-8 * rep.max_abs + 1e-12);

  // control: a nonreal c_2 breaks the reality
  TrigPotential twisted = parse_potential({Complex{-1.0, 0.0}, Complex{0.15, 0.1}});
  SpectrumResult spec2 = eigensolve(assemble_lax(twisted, 0.5, 128));
  ParityReport rep2 = shift_pairing(spec2, twisted, 0.2);
  CHECK(rep2.max_abs_im > 1e-4 * rep2.max_abs);
}

TEST_CASE("min-max monotonicity under a potential perturbation") {
  TrigPotential u = preset_potential("cosine");
  TrigPotential v = parse_potential({Complex{-1.05, 0.0}});  // u + 0.1 cos x
  SpectrumResult su = eigensolve(assemble_lax(u, 0.5, 128));
  SpectrumResult sv = eigensolve(assemble_lax(v, 0.5, 128));
  for (int n = 0; n < 100; ++n)
    CHECK(std::abs(su.lambdas(n) - sv.lambdas(n)) <= 0.1 + 1e-6);
}

TEST_CASE("tail gap sums stay small at large index") {
  TrigPotential u = preset_potential("cosine");
  SpectrumResult spec = eigensolve(assemble_lax(u, 0.25, 256));
  // Weyl counting: beyond K/eps the gap tail is below delta
  const double delta = 0.2;
  const int n0 = static_cast<int>(std::ceil(8.0 / 0.25));
  double tail = 0.0;
  for (int k = n0 + 1; k <= 256 - 8; ++k) tail += std::max(spec.gaps(k), 0.0);
  CHECK(tail <= delta);
}
