#include "bolax/quantize.hpp"

#include <cmath>

#include "doctest.h"

#include "bolax/burgers.hpp"
#include "bolax/errors.hpp"
#include "bolax/potential.hpp"

using namespace bolax;

TEST_CASE("psi_even formula values on the cosine") {
  TrigPotential u = preset_potential("cosine");
  CHECK(psi_even(u, 0.0) == doctest::Approx(0.75).epsilon(1e-12));           // -1/4 + 2 F(0)
  CHECK(psi_even(u, 2.0) == doctest::Approx(-0.25 - 2.0).epsilon(1e-12));    // F = 0
  CHECK(psi_even(u, -2.0) == doctest::Approx(-0.25 + 2.0 + 2.0).epsilon(1e-9));  // F = 1
  CHECK_THROWS_AS(psi_even(parse_potential({Complex{0.0, 1.0}}), 0.0), NotEven);
}

TEST_CASE("psi_general reduces to psi_even for degree-1 even potentials") {
  for (double amp : {1.0, 0.7}) {
    TrigPotential u = parse_potential({Complex{-amp, 0.0}});
    for (double lam : {-1.2, -0.4, 0.0, 0.5, 1.3}) {
      const double pg = psi_general(u, lam * amp);
      const double pe = psi_even(u, -lam * amp);
      CHECK(std::abs(std::remainder(pg - pe, 1.0)) <= 1e-10);
    }
  }
}

TEST_CASE("psi_general is continuous mod 1 on a non-even fixture") {
  // cosine plus 0.3 sin 2x
  TrigPotential u = parse_potential({Complex{-1.0, 0.0}, Complex{0.0, -0.15}});
  REQUIRE(classify_shape(u).classification != Shape::neither);
  auto ext = find_extrema(u);
  const double lo = -ext.max_u + 0.2, hi = -ext.min_u - 0.2;
  auto max_jump = [&](int pts) {
    double prev = psi_general(u, lo);
    double worst = 0.0;
    for (int i = 1; i < pts; ++i) {
      const double cur = psi_general(u, lo + (hi - lo) * i / (pts - 1.0));
      worst = std::max(worst, std::abs(std::remainder(cur - prev, 1.0)));
      prev = cur;
    }
    return worst;
  };
  const double j200 = max_jump(200);
  CHECK(j200 < 0.05);
  // refining the grid shrinks the steps: variation, not discontinuity
  CHECK(j200 < 0.7 * max_jump(100));
}

TEST_CASE("region classification of the cosine") {
  TrigPotential u = preset_potential("cosine");
  const double eps = 0.05;
  SpectrumResult spec = eigensolve(assemble_lax(u, eps, auto_truncation(u, eps, 4.0)));
  RegionPartition part = region_classify(spec, u, 0.2, {-2.0, 2.0});
  CHECK(part.small_lo == doctest::Approx(-1.8));
  CHECK(part.small_hi == doctest::Approx(1.8));
  CHECK(part.large_lo == doctest::Approx(2.2));

  int between = 0;
  for (int n = 0; n < spec.lambdas.size(); ++n) {
    const double sh = spec.lambdas(n) + eps;
    const Region tag = part.tags[n];
    if (tag == Region::band) CHECK(((sh > -2.2 && sh < -1.8) || (sh > 1.8 && sh < 2.2)));
    if (tag == Region::small) CHECK((sh >= -1.8 && sh <= 1.8));
    if (tag == Region::large) CHECK(sh >= 2.2);
    // index gap between the regions (for the cosine these states carry the
    // band tag since the excluded band coincides with the crossover window)
    if (tag != Region::small && tag != Region::large && sh > part.small_hi && sh < part.large_lo)
      ++between;
  }
  CHECK(between >= static_cast<int>(0.5 * 0.2 / eps));
}

TEST_CASE("predict_small matches the eigensolver across the small region") {
  TrigPotential u = preset_potential("cosine");
  const double eps = 0.1;
  SpectrumResult spec = eigensolve(assemble_lax(u, eps, auto_truncation(u, eps, 3.0)));
  int tested = 0;
  double prev_hat = -1e300;
  for (int n = 0; n < spec.lambdas.size(); ++n) {
    const double lam = spec.lambdas(n);
    if (-lam < -1.5 || -lam > 1.5) continue;
    double hat;
    try {
      hat = predict_small(u, eps, 0.1, n);
    } catch (const OutOfRegion&) {
      continue;
    }
    CHECK(std::abs(hat - lam) <= 0.1 * eps);
    CHECK(hat > prev_hat);  // monotone in n
    prev_hat = hat;
    ++tested;
  }
  CHECK(tested >= 10);
}

TEST_CASE("predict_small satisfies its defining equation") {
  TrigPotential u = preset_potential("cosine");
  DistributionProfile prof(u);
  const double eps = 0.2;
  double prev_hat = 0.0;
  bool have_prev = false;
  for (int n = 3; n <= 8; ++n) {
    const double hat = predict_small(u, eps, 0.1, n);
    if (have_prev) {
      const double dA = prof.action_A(-hat) - prof.action_A(-prev_hat);
      const double dpsi = (0.75 - prof.F(-hat)) - (0.75 - prof.F(-prev_hat));
      CHECK(std::abs(dA - eps * (1.0 + dpsi)) <= 1e-10);
    }
    prev_hat = hat;
    have_prev = true;
  }
  CHECK_THROWS_AS(predict_small(u, 0.1, 0.1, 10000), OutOfRegion);
}

TEST_CASE("ground state prediction approaches the maximum as eps shrinks") {
  TrigPotential u = preset_potential("cosine");
  double prev_gap = 1e300;
  for (double eps : {0.2, 0.1, 0.05}) {
    const double hat = predict_small(u, eps, 0.01, 0);
    const double gap = 2.0 - (-hat);  // max u - eta_0
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("residual report: ladder scaling and monotone maxima") {
  TrigPotential u = preset_potential("cosine");
  QuantizationReport rep = residual_report(u, {0.2, 0.1, 0.05}, 0.2);
  CHECK(rep.small_slope >= 1.2);
  CHECK(rep.max_small_residual[1] < rep.max_small_residual[0]);
  CHECK(rep.max_small_residual[2] < rep.max_small_residual[1]);
  CHECK_THROWS_AS(residual_report(u, {0.2, 0.1}, 0.2), InsufficientLadder);
}

TEST_CASE("level counting stays within the coarse window") {
  // |A(-lambda_n) - n eps| <= 2 eps (sup|psi| + 1) on the small region
  TrigPotential u = preset_potential("cosine");
  DistributionProfile prof(u);
  const double eps = 0.1;
  SpectrumResult spec = eigensolve(assemble_lax(u, eps, auto_truncation(u, eps, 3.0)));
  double sup_psi = 0.0;
  for (int i = 0; i <= 20; ++i)
    sup_psi = std::max(sup_psi, std::abs(psi_even(u, -1.8 + 3.6 * i / 20.0)));
  for (int n = 0; n < spec.lambdas.size(); ++n) {
    const double lam = spec.lambdas(n);
    if (lam + eps < -1.8 || lam + eps > 1.8) continue;
    CHECK(std::abs(prof.action_A(-lam) - n * eps) <= 2.0 * eps * (sup_psi + 1.0));
  }
}

TEST_CASE("Delta factor: unit modulus and zero locations") {
  TrigPotential u = preset_potential("cosine");
  const double eps = 0.25;
  CriticalPointSet cps = critical_points(u, 0.3);
  DeltaFactor d = delta_factor(u, 0.3, eps, cps);
  CHECK(std::abs(d.second_term_modulus - 1.0) <= 1e-8);
  CHECK(d.abs_P > 0.0);

  // |P| bounded above and below over the window
  double pmin = 1e300, pmax = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double lam = -1.6 + 3.2 * i / 40.0;
    DeltaFactor di = delta_factor(u, lam, eps, critical_points(u, lam));
    pmin = std::min(pmin, di.abs_P);
    pmax = std::max(pmax, di.abs_P);
  }
  CHECK(pmin > 1e-3);
  CHECK(pmax < 1e3);
  INFO("measured |P| range [", pmin, ", ", pmax, "]");

  std::vector<double> zeros = delta_zeros(u, eps, -1.5, 1.5, 300);
  CHECK(!zeros.empty());
  DistributionProfile prof(u);
  for (double z : zeros) {
    const int n = static_cast<int>(std::lround(prof.action_A(-z) / eps - 0.75 + prof.F(-z)));
    const double hat = predict_small(u, eps, 0.05, n);
    CHECK(std::abs(hat - z) <= 1e-8);
  }

  CriticalPointSet large = critical_points(u, 3.0);
  CHECK_THROWS_AS(delta_factor(u, 3.0, eps, large), DegenerateCriticalPoints);
}
