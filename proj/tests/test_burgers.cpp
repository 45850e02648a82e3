#include "bolax/burgers.hpp"

#include <cmath>

#include "doctest.h"

#include "bolax/errors.hpp"
#include "bolax/potential.hpp"

using namespace bolax;

TEST_CASE("distribution function of the cosine") {
  DistributionProfile prof(preset_potential("cosine"));
  CHECK(prof.F(3.0) == 0.0);
  CHECK(prof.F(-3.0) == 1.0);
  CHECK(prof.F(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prof.F(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // closed form arccos(eta/2)/pi against a grid count
  const double eta = 0.7;
  int count = 0;
  const int G = 1000000;
  TrigPotential u = preset_potential("cosine");
  for (int i = 0; i < G; ++i)
    if (eval_torus(u, kTwoPi * i / G) >= eta) ++count;
  CHECK(std::abs(prof.F(eta) - double(count) / G) <= kTwoPi / 1000.0);
}

TEST_CASE("F is non-increasing") {
  DistributionProfile prof(preset_potential("fig-level0"));
  double prev = 1.1;
  for (int i = 0; i <= 1000; ++i) {
    const double eta = prof.min_u() - 0.1 + (prof.max_u() - prof.min_u() + 0.2) * i / 1000.0;
    const double F = prof.F(eta);
    CHECK(F <= prev + 1e-12);
    prev = F;
  }
}

TEST_CASE("antecedents of the cosine") {
  DistributionProfile prof(preset_potential("cosine"));
  double xp, xm;
  prof.antecedents(0.0, xp, xm);
  CHECK(xp == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(xm == doctest::Approx(3 * kPi / 2).epsilon(1e-12));

  prof.antecedents(2.0 - 1e-8, xp, xm);
  CHECK(std::abs(xp - kPi) <= 1e-4 + 2e-4);
  CHECK(std::abs(xm - kPi) <= 1e-4 + 2e-4);

  prof.antecedents(-2.0 + 1e-8, xp, xm);
  CHECK(xp <= 1e-3);
  CHECK(xm >= kTwoPi - 1e-3);

  CHECK_THROWS_AS(prof.antecedents(2.5, xp, xm), OutOfRangeEta);
}

TEST_CASE("action integral values") {
  DistributionProfile prof(preset_potential("cosine"));
  CHECK(prof.action_A(2.0) == 0.0);
  CHECK(prof.action_A(-2.0) == doctest::Approx(2.0).epsilon(1e-9));  // zero-mean identity
  CHECK(prof.action_A(0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-9));
}

TEST_CASE("branches across the breaking time") {
  TrigPotential u = preset_potential("cosine");
  // t = 0: the single branch is u(x)
  BranchSet b0 = branches(u, 0.0, 1.3);
  REQUIRE(b0.values.size() == 1);
  CHECK(b0.values[0] == doctest::Approx(eval_torus(u, 1.3)).epsilon(1e-10));

  // before t* = 1/4 a single branch everywhere
  for (int i = 0; i < 512; ++i)
    CHECK(branches(u, 0.2, kTwoPi * i / 512 + 1e-7).values.size() == 1);

  // after breaking: 1 or 3, with 3 on a nonempty set
  int three = 0;
  for (int i = 0; i < 512; ++i) {
    auto b = branches(u, 0.5, kTwoPi * i / 512 + 1e-7);
    REQUIRE((b.values.size() == 1 || b.values.size() == 3));
    if (b.values.size() == 3) ++three;
    // consistency: u_j = u(x - 2 u_j t) mod 2 pi
    for (double v : b.values) {
      const double y = b.x - 2.0 * v * 0.5;
      CHECK(std::abs(v - eval_torus(u, y)) <= 1e-9);
    }
  }
  CHECK(three > 0);

  CHECK_THROWS_AS(branches(parse_potential({{-1.0, 0.0}, {0.6, 0.0}}), 0.1, 1.0),
                  NotWeaklyBellShaped);
}

TEST_CASE("alternating sum basics and mean preservation") {
  BranchSet b;
  b.values = {1.5};
  CHECK(alt_sum(b) == 1.5);
  b.values = {-1.0, 0.25, 2.0};
  CHECK(alt_sum(b) == doctest::Approx(-1.0 - 0.25 + 2.0));

  TrigPotential u = preset_potential("cosine");
  const int G = 1024;
  std::vector<double> xs(G);
  for (int i = 0; i < G; ++i) xs[i] = kTwoPi * i / G + 1e-7;
  std::vector<double> field = alt_sum_field(u, 0.5, xs);
  double mean = 0.0;
  for (double v : field) mean += v;
  CHECK(std::abs(mean / G) <= 1e-6);
}

TEST_CASE("weak limit coefficients") {
  TrigPotential u = preset_potential("cosine");
  DistributionProfile prof(u);
  // t = 0 recovers the Fourier coefficient
  Complex c1 = weak_limit_fourier(prof, 0.0, 1);
  CHECK(std::abs(c1 - Complex{-1.0, 0.0}) <= 1e-7);
  // conjugate symmetry
  for (int k : {1, 2, 3}) {
    Complex plus = weak_limit_fourier(prof, 0.3, k);
    Complex minus = weak_limit_fourier(prof, 0.3, -k);
    CHECK(std::abs(minus - std::conj(plus)) <= 1e-10);
  }
  CHECK_THROWS_AS(weak_limit_fourier(prof, 0.1, 0), ZeroArgument);

  // equivalence with the branch field after breaking
  const int G = 4096;
  std::vector<double> xs(G);
  for (int i = 0; i < G; ++i) xs[i] = kTwoPi * i / G + 1e-7;
  std::vector<double> field = alt_sum_field(u, 0.5, xs);
  Complex dft{0.0, 0.0};
  for (int i = 0; i < G; ++i) dft += field[i] * std::polar(1.0, -xs[i]);
  dft /= double(G);
  CHECK(std::abs(dft - weak_limit_fourier(prof, 0.5, 1)) <= 1e-5);
}

TEST_CASE("antecedent stability under truncation") {
  // smooth bell function, truncated at increasing orders
  const int G = 1024;
  std::vector<double> samples(G);
  double mean = 0.0;
  for (int i = 0; i < G; ++i) {
    const double x = kTwoPi * i / G;
    samples[i] = std::exp(-1.5 * (1.0 + std::cos(x)));
    mean += samples[i];
  }
  mean /= G;
  for (auto& s : samples) s -= mean;
  TrigPotential ref = truncate_fourier(samples, 128);
  DistributionProfile pref(ref);

  double prev_sup = 1e300;
  for (int N : {8, 16, 32, 64}) {
    DistributionProfile ptrunc{truncate_fourier(samples, N)};
    double sup = 0.0;
    const double lo = pref.min_u() + 0.1, hi = pref.max_u() - 0.1;
    for (int i = 0; i <= 50; ++i) {
      const double eta = lo + (hi - lo) * i / 50.0;
      double xp1, xm1, xp2, xm2;
      pref.antecedents(eta, xp1, xm1);
      ptrunc.antecedents(eta, xp2, xm2);
      sup = std::max({sup, std::abs(xp1 - xp2), std::abs(xm1 - xm2)});
    }
    CHECK(sup <= prev_sup + 1e-12);
    prev_sup = sup;
  }
  CHECK(prev_sup <= 1e-4);  // converged by N = 64
}
