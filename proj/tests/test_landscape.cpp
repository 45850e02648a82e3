#include "bolax/landscape.hpp"

#include <cmath>

#include "doctest.h"

#include "bolax/burgers.hpp"
#include "bolax/errors.hpp"
#include "bolax/potential.hpp"
#include "testutil.hpp"

using namespace bolax;

TEST_CASE("phase evaluation and the branch cut") {
  TrigPotential u = preset_potential("cosine");
  // lambda = 0: S = Q
  CHECK(std::abs(eval_S(u, 0.0, Complex{0.0, 1.0}) - eval_Q(u, Complex{0.0, 1.0})) == 0.0);
  const Complex diff = eval_S(u, 0.0, Complex{0.0, 1.0}) - eval_S(u, 0.0, Complex{0.0, -1.0});
  CHECK(std::abs(diff - Complex{0.0, 4.0}) <= 1e-14);
  CHECK_THROWS_AS(eval_S(u, 0.5, Complex{0.7, 0.0}), OnBranchCut);

  // purely imaginary on the circle for real lambda
  testing::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const double x = rng.uniform(1e-3, kTwoPi - 1e-3);
    CHECK(std::abs(eval_S_real(u, 0.7, std::polar(1.0, x))) <= 1e-13);
  }
}

TEST_CASE("critical points of the cosine") {
  TrigPotential u = preset_potential("cosine");
  CriticalPointSet small = critical_points(u, 0.0);
  REQUIRE(small.small_case);
  CHECK(small.inside.empty());
  CHECK(std::abs(small.p_plus - Complex{0.0, 1.0}) <= 1e-10);
  CHECK(std::abs(small.p_minus - Complex{0.0, -1.0}) <= 1e-10);

  CriticalPointSet large = critical_points(u, 3.0);
  REQUIRE(!large.small_case);
  REQUIRE(large.inside.size() == 1);
  REQUIRE(large.outside.size() == 1);
  const double golden = (3.0 - std::sqrt(5.0)) / 2.0;
  CHECK(std::abs(large.inside[0] - Complex{golden, 0.0}) <= 1e-10);
  CHECK(std::abs(large.outside[0] - Complex{1.0 / golden, 0.0}) <= 1e-9);
}

TEST_CASE("critical points: factorization and pairing structure") {
  TrigPotential u = preset_potential("fig-level0");
  CriticalPointSet cps = critical_points(u, 0.0);
  REQUIRE(cps.roots.size() == 12);
  REQUIRE(cps.small_case);
  CHECK(cps.inside.size() == 5);
  CHECK(cps.outside.size() == 5);
  CHECK(cps.factorization_residual <= 1e-9 * (sup_norm(u) + 1.0));

  // inside/outside reciprocal-conjugate pairs
  for (Complex p : cps.inside) {
    double best = 1e300;
    for (Complex q : cps.outside) best = std::min(best, std::abs(q - 1.0 / std::conj(p)));
    CHECK(best <= 1e-8);
  }

  // the full factorization c_N z^-N prod(z - root) reproduces u + lambda
  testing::Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const Complex z = rng.annulus(0.4, 1.8);
    Complex prod = u.c(u.degree) * std::pow(z, -u.degree);
    for (Complex r : cps.roots) prod *= z - r;
    const Complex direct = eval_complex(u, z);
    CHECK(std::abs(prod - direct) <= 1e-8 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("small case holds exactly when -lambda is in the range of u") {
  TrigPotential u = preset_potential("fig-level0");
  auto ext = find_extrema(u);
  testing::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double lam = rng.uniform(-1.5 * ext.max_u, 1.5 * ext.max_u);
    if (std::abs(-lam - ext.min_u) < 1e-3 || std::abs(-lam - ext.max_u) < 1e-3) continue;
    CriticalPointSet cps = critical_points(u, lam);
    const bool in_range = -lam > ext.min_u && -lam < ext.max_u;
    CHECK(cps.small_case == in_range);
  }
}

TEST_CASE("circle roots sit at the antecedent angles") {
  TrigPotential u = preset_potential("cosine");
  DistributionProfile prof(u);
  for (double lam : {-1.2, -0.3, 0.4, 1.5}) {
    CriticalPointSet cps = critical_points(u, lam);
    double xp, xm;
    prof.antecedents(-lam, xp, xm);
    CHECK(std::abs(wrap_2pi(std::arg(cps.p_plus)) - xp) <= 1e-8);
    CHECK(std::abs(wrap_2pi(std::arg(cps.p_minus)) - xm) <= 1e-8);
  }
}

TEST_CASE("spacing diagnostics and band candidates") {
  TrigPotential u = preset_potential("cosine");
  CriticalPointSet cps = critical_points(u, 0.0);
  SpacingDiagnostics d = spacing_report(u, cps, 0.2);
  REQUIRE(d.bands.size() == 2);
  CHECK(d.bands[0] == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(d.bands[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(d.min_pair_distance >= 0.5);
  CHECK(!d.degenerate);

  // a lambda at the band center produces a double root
  SpacingDiagnostics dd = spacing_report(u, critical_points(u, 2.0), 0.2);
  CHECK(dd.degenerate);
  CHECK(dd.min_pair_distance <= 1e-4);
}

TEST_CASE("second derivative identity") {
  TrigPotential u = preset_potential("cosine");
  CriticalPointSet c0 = critical_points(u, 0.0);
  CHECK(std::abs(eval_S_dz2(u, 0.0, c0.p_plus)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(check_S2(u, c0) <= 1e-10);
  CHECK(check_S2(u, critical_points(u, 1e-9)) <= 1e-6);  // stable under tiny shifts

  TrigPotential fig = preset_potential("fig-level0");
  CHECK(check_S2(fig, critical_points(fig, 0.0)) <= 1e-8);
  CHECK_THROWS_AS(check_S2(u, critical_points(u, 3.0)), DegenerateCriticalPoints);
}

TEST_CASE("every simple critical point is a saddle of Re S") {
  TrigPotential u = preset_potential("fig-level0");
  CriticalPointSet cps = critical_points(u, 0.0);
  const double h = 1e-5;
  for (Complex p : cps.inside) {
    auto f = [&](double dx, double dy) {
      return eval_S_real(u, 0.0, p + Complex{dx, dy});
    };
    const double fxx = (f(h, 0) - 2 * f(0, 0) + f(-h, 0)) / (h * h);
    const double fyy = (f(0, h) - 2 * f(0, 0) + f(0, -h)) / (h * h);
    const double fxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    CHECK(fxx * fyy - fxy * fxy < 0.0);
  }
}

TEST_CASE("action identity") {
  TrigPotential u = preset_potential("cosine");
  ActionIdentity a = action_integral(u, 0.0);
  CHECK(std::abs(a.lhs - Complex{0.0, 4.0}) <= 1e-10);
  CHECK(a.residual <= 1e-8);

  // both sides vanish at the edge of the small region
  ActionIdentity edge = action_integral(u, -(2.0 - 1e-7));
  CHECK(std::abs(edge.lhs) <= 1e-3);
  CHECK(std::abs(edge.rhs) <= 1e-3);

  TrigPotential fig = preset_potential("fig-level0");
  CHECK(action_integral(fig, 0.0).residual <= 1e-6);
  CHECK_THROWS_AS(action_integral(u, 3.0), OutOfRegion);
}

TEST_CASE("level grid: clamped sign pattern near the origin") {
  TrigPotential u = preset_potential("fig-level0");
  LevelGridSpec spec;
  spec.n_r = 64;
  spec.n_theta = 240;
  LevelGrid g = level_grid(u, 0.0, spec);
  // innermost ring: alternation of clamped mountains (rays 2k pi/N) and lakes
  const int N = u.degree;
  int sign_changes = 0;
  double prev = g.values(0, 0);
  for (int j = 1; j <= spec.n_theta; ++j) {
    const double cur = g.values(0, j % spec.n_theta);
    if ((cur > 0) != (prev > 0)) ++sign_changes;
    prev = cur;
  }
  CHECK(sign_changes == 2 * N);
}

TEST_CASE("merge tree of fig-level0 at lambda = 0") {
  TrigPotential u = preset_potential("fig-level0");
  MergeTree tree = merge_tree(u, 0.0);
  REQUIRE(tree.N == 6);
  int leaves = 0, internal = 0, unary = 0;
  for (const auto& node : tree.nodes) {
    if (node.is_leaf) {
      ++leaves;
    } else {
      ++internal;
      if (node.children.size() == 1) ++unary;
      REQUIRE(node.saddle_index >= 0);
      CHECK(std::abs(node.level - tree.saddle_levels[node.saddle_index]) <= 1e-3);
    }
  }
  CHECK(leaves == 6);
  CHECK(internal == 6);
  CHECK(unary == 1);
  CHECK(tree.small_case);
  CHECK(tree.nodes[tree.distinguished].level == doctest::Approx(0.0).epsilon(1e-6));

  PruneResult pr = prune_tree(tree);
  CHECK(pr.pairing.size() == 5);
  // D sets only contain already-pruned leaves
  std::uint64_t pruned = 0;
  for (size_t i = 0; i < pr.pairing.size(); ++i) {
    pruned |= std::uint64_t(1) << pr.pairing[i].first;
    for (int leaf : pr.D[i]) CHECK(((pruned >> leaf) & 1) == 1);
  }
  CHECK(((pruned >> pr.survivor) & 1) == 0);
}

TEST_CASE("merge tree of the cosine is a single mountain with its circle event") {
  MergeTree tree = merge_tree(preset_potential("cosine"), 0.0);
  REQUIRE(tree.nodes.size() == 2);
  CHECK(tree.nodes[1].children.size() == 1);
  PruneResult pr = prune_tree(tree);
  CHECK(pr.pairing.empty());
  CHECK(pr.survivor == 0);
}

TEST_CASE("merge tree in the large case encircles the origin") {
  TrigPotential u = preset_potential("fig-level0-outside");
  auto ext = find_extrema(u);
  MergeTree tree = merge_tree(u, -ext.min_u + 1.0);
  CHECK(!tree.small_case);
  CHECK(tree.N == 6);
  CHECK(tree.nodes[tree.distinguished].children.size() == 1);
  CHECK(tree.nodes[tree.distinguished].level > 0.0);
  PruneResult pr = prune_tree(tree);
  CHECK(pr.pairing.size() == 5);
}

namespace {

// hand-built tree following the worked pruning example: six leaves, binary
// nodes p1..p2 below the distinguished node and p4..p6 above it
MergeTree example_tree() {
  MergeTree tree;
  tree.N = 6;
  tree.small_case = true;
  tree.nodes.resize(12);
  for (int k = 0; k < 6; ++k) {
    tree.nodes[k].id = k;
    tree.nodes[k].is_leaf = true;
    tree.nodes[k].level = 10.0;
  }
  auto internal = [&](int id, double level, std::vector<int> children) {
    tree.nodes[id].id = id;
    tree.nodes[id].level = level;
    tree.nodes[id].children = children;
    for (int c : children) tree.nodes[c].parent = id;
  };
  internal(6, 5.0, {0, 5});      // p1: leaves 1 and 6
  internal(7, 4.0, {6, 4});      // p2: group + leaf 5
  internal(8, 0.0, {7});         // distinguished
  internal(9, -1.0, {8, 1});     // p4: continent + leaf 2
  internal(10, -2.0, {9, 3});    // p5: + leaf 4
  internal(11, -3.0, {10, 2});   // p6: + leaf 3
  tree.root = 11;
  tree.distinguished = 8;
  return tree;
}

}  // namespace

TEST_CASE("pruning reproduces the worked example pairing") {
  MergeTree tree = example_tree();
  PruneResult pr = prune_tree(tree);
  REQUIRE(pr.pairing.size() == 5);
  CHECK(pr.pairing[0] == std::pair{0, 6});
  CHECK(pr.pairing[1] == std::pair{4, 7});
  CHECK(pr.pairing[2] == std::pair{1, 9});
  CHECK(pr.pairing[3] == std::pair{3, 10});
  CHECK(pr.pairing[4] == std::pair{2, 11});
  CHECK(pr.survivor == 5);
  // D grows along the pruning order and stays inside the descendants
  CHECK(pr.D[0] == std::vector<int>{0});
  CHECK(pr.D[1] == std::vector<int>{0, 4});
}

TEST_CASE("pruning a two-leaf star") {
  MergeTree tree;
  tree.N = 2;
  tree.small_case = true;
  tree.nodes.resize(4);
  for (int k = 0; k < 2; ++k) {
    tree.nodes[k].id = k;
    tree.nodes[k].is_leaf = true;
    tree.nodes[k].level = 5.0;
  }
  tree.nodes[2] = {2, false, 1.0, 3, {0}, -1};
  tree.nodes[0].parent = 2;
  tree.nodes[3] = {3, false, 0.5, -1, {2, 1}, -1};
  tree.nodes[1].parent = 3;
  tree.nodes[2].parent = 3;
  tree.root = 3;
  tree.distinguished = 2;
  PruneResult pr = prune_tree(tree);
  REQUIRE(pr.pairing.size() == 1);
  CHECK(pr.pairing[0].first == 1);
  CHECK(pr.survivor == 0);
}

TEST_CASE("pruning is a bijection on random trees") {
  testing::Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const int N = 2 + static_cast<int>(rng.uniform(0.0, 9.0));
    MergeTree tree;
    tree.N = N;
    tree.small_case = true;
    tree.nodes.resize(N);
    for (int k = 0; k < N; ++k) {
      tree.nodes[k].id = k;
      tree.nodes[k].is_leaf = true;
      tree.nodes[k].level = 100.0;
    }
    // merge random pairs of current roots at decreasing levels; insert the
    // unary node at a random step
    std::vector<int> roots(N);
    for (int k = 0; k < N; ++k) roots[k] = k;
    double level = 50.0;
    const int unary_step = static_cast<int>(rng.uniform(0.0, double(N - 1)));
    int step = 0;
    while (roots.size() > 1) {
      if (step == unary_step) {
        const int i = static_cast<int>(rng.uniform(0.0, double(roots.size())));
        MergeTreeNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.level = level;
        node.children = {roots[i]};
        tree.nodes[roots[i]].parent = node.id;
        tree.nodes.push_back(node);
        tree.distinguished = node.id;
        roots[i] = node.id;
        level -= rng.uniform(0.1, 2.0);
      }
      const int i = static_cast<int>(rng.uniform(0.0, double(roots.size())));
      int j = static_cast<int>(rng.uniform(0.0, double(roots.size() - 1)));
      if (j >= i) ++j;
      MergeTreeNode node;
      node.id = static_cast<int>(tree.nodes.size());
      node.level = level;
      node.children = {roots[i], roots[j]};
      tree.nodes[roots[i]].parent = node.id;
      tree.nodes[roots[j]].parent = node.id;
      tree.nodes.push_back(node);
      roots[std::min(i, j)] = node.id;
      roots.erase(roots.begin() + std::max(i, j));
      level -= rng.uniform(0.1, 2.0);
      ++step;
    }
    tree.root = roots[0];
    if (step <= unary_step) {  // unary node never inserted: put it on the root
      MergeTreeNode node;
      node.id = static_cast<int>(tree.nodes.size());
      node.level = level;
      node.children = {tree.root};
      tree.nodes[tree.root].parent = node.id;
      tree.nodes.push_back(node);
      tree.distinguished = node.id;
      tree.root = node.id;
    }

    PruneResult pr = prune_tree(tree);
    REQUIRE(static_cast<int>(pr.pairing.size()) == N - 1);
    std::uint64_t leaves_seen = 0, nodes_seen = 0;
    for (auto [leaf, node] : pr.pairing) {
      CHECK(((leaves_seen >> leaf) & 1) == 0);
      leaves_seen |= std::uint64_t(1) << leaf;
      CHECK(((nodes_seen >> (node - N)) & 1) == 0);
      nodes_seen |= std::uint64_t(1) << (node - N);
      CHECK(leaf != pr.survivor);
    }
  }
}
