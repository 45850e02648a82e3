#include "bolax/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "bolax/burgers.hpp"
#include "bolax/errors.hpp"
#include "bolax/parallel.hpp"
#include "bolax/rootfind.hpp"

namespace bolax {

Complex eval_S(const TrigPotential& u, double lambda, Complex z) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw OnBranchCut("S_lambda is cut along the positive real axis");
  const double a = arg_cut_positive_axis(z);
  const Complex logz{std::log(std::abs(z)), a};
  return eval_Q(u, z) - lambda * logz;
}

double eval_S_real(const TrigPotential& u, double lambda, Complex z) {
  return std::real(eval_Q(u, z)) - lambda * std::log(std::abs(z));
}

Complex eval_S_dz2(const TrigPotential& u, double lambda, Complex z) {
  // S' = -(u + lambda)/z, so S'' = -u'/z + (u + lambda)/z^2
  const Complex uz = eval_complex(u, z);
  return -eval_complex_dz(u, z) / z + (uz + lambda) / (z * z);
}

CriticalPointSet critical_points(const TrigPotential& u, double lambda) {
  const int N = u.degree;
  std::vector<Complex> a(2 * N + 1, Complex{0.0, 0.0});
  for (int k = 1; k <= N; ++k) {
    a[N + k] = u.c(k);
    a[N - k] = std::conj(u.c(k));
  }
  a[N] = Complex{lambda, 0.0};

  CriticalPointSet cps;
  cps.lambda = lambda;
  cps.roots = poly_roots(a);

  const double circle_tol = 1e-6;
  const double scale = sup_norm(u) + std::abs(lambda);
  std::vector<Complex> on_circle;
  for (Complex z : cps.roots) {
    cps.factorization_residual =
        std::max(cps.factorization_residual, std::abs(eval_complex(u, z) + lambda));
    const double dr = std::abs(std::abs(z) - 1.0);
    if (dr <= circle_tol)
      on_circle.push_back(z);
    else if (std::abs(z) < 1.0)
      cps.inside.push_back(z);
    else
      cps.outside.push_back(z);
  }
  if (cps.factorization_residual > 1e-9 * scale) cps.degenerate = true;

  if (on_circle.size() == 2) {
    cps.small_case = true;
    // p_+ carries the rising antecedent: d/dx u(e^{ix}) > 0 there
    auto rising = [&](Complex z) { return eval_torus_d1(u, std::arg(z)) > 0.0; };
    if (rising(on_circle[0]) && !rising(on_circle[1])) {
      cps.p_plus = on_circle[0];
      cps.p_minus = on_circle[1];
    } else if (rising(on_circle[1]) && !rising(on_circle[0])) {
      cps.p_plus = on_circle[1];
      cps.p_minus = on_circle[0];
    } else {
      cps.degenerate = true;  // tangential contact
      cps.p_plus = on_circle[0];
      cps.p_minus = on_circle[1];
    }
  } else if (!on_circle.empty()) {
    cps.degenerate = true;
    for (Complex z : on_circle) cps.inside.push_back(z);
  }

  auto by_arg = [](Complex za, Complex zb) {
    double aa = wrap_2pi(std::arg(za)), bb = wrap_2pi(std::arg(zb));
    if (aa != bb) return aa < bb;
    return std::abs(za) < std::abs(zb);
  };
  std::sort(cps.inside.begin(), cps.inside.end(), by_arg);
  std::sort(cps.outside.begin(), cps.outside.end(), by_arg);
  return cps;
}

SpacingDiagnostics spacing_report(const TrigPotential& u, const CriticalPointSet& cps,
                                  double delta) {
  (void)delta;
  SpacingDiagnostics d;
  std::vector<Complex> all = cps.inside;
  if (cps.small_case) {
    all.push_back(cps.p_plus);
    all.push_back(cps.p_minus);
  }
  for (Complex z : cps.outside) all.push_back(z);

  d.min_pair_distance = 1e300;
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t j = i + 1; j < all.size(); ++j)
      d.min_pair_distance = std::min(d.min_pair_distance, std::abs(all[i] - all[j]));

  d.min_inside_modulus = 1e300;
  for (Complex z : cps.inside) d.min_inside_modulus = std::min(d.min_inside_modulus, std::abs(z));

  d.min_distance_to_circle_roots = 1e300;
  if (cps.small_case)
    for (Complex z : cps.inside)
      d.min_distance_to_circle_roots =
          std::min({d.min_distance_to_circle_roots, std::abs(z - cps.p_plus),
                    std::abs(z - cps.p_minus)});

  d.degenerate = cps.degenerate || d.min_pair_distance < 1e-4;

  // candidate bands: y = -u(z*) over the nonzero roots of z^{N+1} u'(z)
  const int N = u.degree;
  std::vector<Complex> b(2 * N + 1, Complex{0.0, 0.0});
  for (int k = 1; k <= N; ++k) {
    b[N + k] = double(k) * u.c(k);
    b[N - k] = -double(k) * std::conj(u.c(k));
  }
  const double scale = sup_norm(u);
  for (Complex zs : poly_roots(b)) {
    const Complex y = -eval_complex(u, zs);
    d.band_values.push_back(y);
    if (std::abs(y.imag()) <= 1e-9 * (scale + std::abs(y)))
      d.bands.push_back(y.real());
  }
  std::sort(d.bands.begin(), d.bands.end());
  d.bands.erase(
      std::unique(d.bands.begin(), d.bands.end(),
                  [&](double da, double db) { return std::abs(da - db) < 1e-9 * (1 + scale); }),
      d.bands.end());
  return d;
}

double check_S2(const TrigPotential& u, const CriticalPointSet& cps) {
  if (!cps.small_case || cps.degenerate)
    throw DegenerateCriticalPoints("S'' identity needs the simple small case");
  const double cN = std::abs(u.c(u.degree));
  double residual = 0.0;
  for (Complex p : {cps.p_plus, cps.p_minus}) {
    double rhs = cN * std::abs(cps.p_plus - cps.p_minus);
    for (Complex pk : cps.inside) rhs *= std::norm(pk - p) / std::abs(pk);
    const double lhs = std::abs(eval_S_dz2(u, cps.lambda, p));
    residual = std::max(residual, std::abs(lhs - rhs));
  }
  return residual;
}

ActionIdentity action_integral(const TrigPotential& u, double lambda) {
  DistributionProfile prof(u);
  const double eta = -lambda;
  if (!(eta > prof.min_u() && eta < prof.max_u()))
    throw OutOfRegion("-lambda must lie in (min u, max u)");
  double xp, xm;
  prof.antecedents_lifted(eta, xp, xm);

  ActionIdentity out;
  // S(p_+) - S(p_-) = i int_{x_+}^{x_-} (u + lambda) dx along the arc through
  // x_max; the u part via the closed-form antiderivative.
  const double Uint = eval_torus_antideriv(u, xm) - eval_torus_antideriv(u, xp);
  out.lhs = kI * (Uint + lambda * (xm - xp));
  out.rhs = 2.0 * kI * kPi * prof.action_A(eta);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

namespace {

TrigPotential normalized_potential(const TrigPotential& u) {
  if (u.leading_positive) return u;
  VecXcd cn = normalized_coeffs(u);
  std::vector<Complex> c(cn.data(), cn.data() + cn.size());
  return parse_potential(c);
}

double floor_radius(const TrigPotential& un, double clamp) {
  const int N = un.degree;
  const double cN = std::abs(un.c(N));
  return std::pow(cN / (N * clamp), 1.0 / N);
}

// Union-find over grid cells with angular winding offsets; a winding mismatch
// on an edge inside one component means the component encircles the origin.
struct WindingForest {
  std::vector<int> parent;
  std::vector<int> rank_;
  std::vector<long> turns;  // winding of node relative to parent

  explicit WindingForest(int n) : parent(n), rank_(n, 0), turns(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::pair<int, long> find(int x) {
    if (parent[x] == x) return {x, 0};
    auto [root, w] = find(parent[x]);
    parent[x] = root;
    turns[x] += w;
    return {root, turns[x]};
  }

  // unites the components of a and b along an edge with winding offset d;
  // returns {merged, winding_mismatch} and reports the two old roots
  std::pair<bool, bool> unite(int a, int b, long d, int& root_a, int& root_b) {
    auto [ra, wa] = find(a);
    auto [rb, wb] = find(b);
    root_a = ra;
    root_b = rb;
    if (ra == rb) return {false, wa + d != wb};
    if (rank_[ra] < rank_[rb]) {
      parent[ra] = rb;
      turns[ra] = wb - d - wa;
    } else {
      parent[rb] = ra;
      turns[rb] = wa + d - wb;
      if (rank_[ra] == rank_[rb]) ++rank_[ra];
    }
    return {true, false};
  }
};

}  // namespace

LevelGrid level_grid(const TrigPotential& u, double lambda, const LevelGridSpec& spec) {
  const TrigPotential un = normalized_potential(u);
  LevelGrid g;
  g.r_floor = floor_radius(un, spec.clamp);
  g.radii.resize(spec.n_r);
  g.thetas.resize(spec.n_theta);
  const double l0 = std::log(g.r_floor);
  for (int i = 0; i < spec.n_r; ++i) g.radii[i] = std::exp(l0 + (i + 0.5) * (-l0) / spec.n_r);
  for (int j = 0; j < spec.n_theta; ++j) g.thetas[j] = kTwoPi * (j + 0.5) / spec.n_theta;
  g.values.resize(spec.n_r, spec.n_theta);
  parallel_for(spec.n_r, [&](long i) {
    for (int j = 0; j < spec.n_theta; ++j) {
      const Complex z = std::polar(g.radii[i], g.thetas[j]);
      g.values(i, j) = std::clamp(eval_S_real(un, lambda, z), -spec.clamp, spec.clamp);
    }
  });
  return g;
}

MergeTree merge_tree(const TrigPotential& u, double lambda, const LevelGridSpec& spec) {
  const TrigPotential un = normalized_potential(u);
  const int N = un.degree;

  CriticalPointSet cps = critical_points(un, lambda);
  if (cps.degenerate) throw DegenerateCriticalPoints("merge tree needs simple critical points");
  if (!cps.small_case && !cps.inside.empty() && static_cast<int>(cps.inside.size()) != N)
    throw DegenerateCriticalPoints("unexpected inside-root count");

  MergeTree tree;
  tree.N = N;
  tree.small_case = cps.small_case;
  tree.saddles = cps.inside;
  for (Complex p : cps.inside) tree.saddle_levels.push_back(eval_S_real(un, lambda, p));
  if (cps.small_case) {
    tree.saddles.push_back(cps.p_plus);
    tree.saddle_levels.push_back(0.0);  // Re S = 0 on the circle
  }

  // grid; the floor must sit below every inside saddle
  double r_floor = floor_radius(un, spec.clamp);
  for (Complex p : cps.inside) r_floor = std::min(r_floor, 0.8 * std::abs(p));
  const int n_r = spec.n_r, n_t = spec.n_theta;
  std::vector<double> radii(n_r), thetas(n_t);
  const double l0 = std::log(r_floor);
  for (int i = 0; i < n_r; ++i) radii[i] = std::exp(l0 + (i + 0.5) * (-l0) / n_r);
  for (int j = 0; j < n_t; ++j) thetas[j] = kTwoPi * (j + 0.5) / n_t;

  const int n_cells = n_r * n_t;
  const int kCircle = n_cells;
  std::vector<double> value(n_cells + 1);
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_t; ++j)
      value[i * n_t + j] = std::clamp(
          eval_S_real(un, lambda, std::polar(radii[i], thetas[j])), -spec.clamp, spec.clamp);
  value[kCircle] = 0.0;  // Re S vanishes on the unit circle

  // leaf seeds on the innermost ring, at the mountain rays 2 pi k / N
  std::vector<int> seed_of_cell(n_cells + 1, -1);
  for (int k = 1; k <= N; ++k) {
    const double ang = wrap_2pi(kTwoPi * k / N);
    const int j = static_cast<int>(std::floor(ang / kTwoPi * n_t)) % n_t;
    seed_of_cell[j] = k - 1;
  }

  std::vector<int> order(n_cells + 1);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (value[a] != value[b]) return value[a] > value[b];
    return a < b;
  });

  WindingForest forest(n_cells + 1);
  std::vector<char> active(n_cells + 1, 0);
  std::vector<std::uint64_t> leafmask(n_cells + 1, 0);
  std::vector<char> has_circle(n_cells + 1, 0);
  std::vector<int> top(n_cells + 1, -1);

  tree.nodes.resize(N);
  for (int k = 0; k < N; ++k) {
    tree.nodes[k].id = k;
    tree.nodes[k].is_leaf = true;
  }

  bool continent_found = false;
  struct Event {
    double level;
    int node;
    double local_scale;
  };
  std::vector<Event> events;

  std::vector<std::pair<int, long>> nbrs;
  auto neighbors = [&](int cell) {
    nbrs.clear();
    if (cell == kCircle) {
      for (int j = 0; j < n_t; ++j) nbrs.emplace_back((n_r - 1) * n_t + j, 0);
      return;
    }
    const int i = cell / n_t, j = cell % n_t;
    if (i > 0) nbrs.emplace_back((i - 1) * n_t + j, 0);
    if (i < n_r - 1) nbrs.emplace_back((i + 1) * n_t + j, 0);
    if (i == n_r - 1) nbrs.emplace_back(kCircle, 0);
    nbrs.emplace_back(i * n_t + (j + 1) % n_t, j + 1 == n_t ? 1 : 0);
    nbrs.emplace_back(i * n_t + (j + n_t - 1) % n_t, j == 0 ? -1 : 0);
  };

  for (int cell : order) {
    active[cell] = 1;
    if (cell == kCircle) has_circle[cell] = 1;
    if (seed_of_cell[cell] >= 0) {
      leafmask[cell] = std::uint64_t(1) << seed_of_cell[cell];
      top[cell] = seed_of_cell[cell];
      tree.nodes[seed_of_cell[cell]].level = value[cell];
    }
    neighbors(cell);
    for (auto [nb, d] : nbrs) {
      if (!active[nb]) continue;
      int ra, rb;
      auto [merged, winding] = forest.unite(cell, nb, d, ra, rb);
      const double level = value[cell];
      const double local_scale = std::abs(value[cell] - value[nb]);
      if (winding) {
        auto [root, w0] = forest.find(cell);
        (void)w0;
        if (!tree.small_case && !continent_found && leafmask[root] != 0 && top[root] >= 0) {
          MergeTreeNode node;
          node.id = static_cast<int>(tree.nodes.size());
          node.level = level;
          node.children.push_back(top[root]);
          tree.nodes[top[root]].parent = node.id;
          tree.nodes.push_back(node);
          tree.distinguished = node.id;
          top[root] = node.id;
          continent_found = true;
          events.push_back({level, node.id, local_scale});
        }
        continue;
      }
      if (!merged) continue;
      auto [root, w1] = forest.find(cell);
      (void)w1;
      const std::uint64_t la = leafmask[ra], lb = leafmask[rb];
      const bool ca = has_circle[ra], cb = has_circle[rb];
      const int ta = top[ra], tb = top[rb];
      leafmask[root] = la | lb;
      has_circle[root] = ca || cb;

      const bool both_leaves = la != 0 && lb != 0;
      const bool circle_join = (ca && la == 0 && lb != 0) || (cb && lb == 0 && la != 0);
      if (both_leaves) {
        MergeTreeNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.level = level;
        node.children = {ta, tb};
        tree.nodes.push_back(node);
        tree.nodes[ta].parent = node.id;
        tree.nodes[tb].parent = node.id;
        top[root] = node.id;
        events.push_back({level, node.id, local_scale});
      } else if (circle_join && tree.small_case && !continent_found) {
        const int child = la != 0 ? ta : tb;
        MergeTreeNode node;
        node.id = static_cast<int>(tree.nodes.size());
        node.level = level;
        node.children = {child};
        tree.nodes.push_back(node);
        tree.nodes[child].parent = node.id;
        tree.distinguished = node.id;
        top[root] = node.id;
        continent_found = true;
        events.push_back({level, node.id, local_scale});
      } else {
        top[root] = ta >= 0 ? ta : tb;
      }
    }
  }

  if (!continent_found) throw GridTooCoarse("no continent event detected");
  if (static_cast<int>(tree.nodes.size()) != 2 * N)
    throw GridTooCoarse("merge event count does not match the saddle count");
  tree.root = static_cast<int>(tree.nodes.size()) - 1;

  // match merge levels to saddle values
  std::vector<char> used(tree.saddles.size(), 0);
  for (const Event& ev : events) {
    const bool is_dist = ev.node == tree.distinguished;
    int best = -1;
    double best_d = 1e300;
    for (size_t s = 0; s < tree.saddles.size(); ++s) {
      if (used[s]) continue;
      if (tree.small_case &&
          is_dist != (s + 1 == tree.saddles.size()))
        continue;  // in the small case the circle event pairs with p_+ only
      const double dist = std::abs(ev.level - tree.saddle_levels[s]);
      if (dist < best_d) best_d = dist, best = static_cast<int>(s);
    }
    const double tol = 3.0 * (ev.local_scale + 1e-9 * (1.0 + std::abs(ev.level)));
    if (best < 0 || best_d > tol) throw GridTooCoarse("merge level unmatched to a saddle value");
    used[best] = 1;
    tree.nodes[ev.node].saddle_index = best;
  }
  return tree;
}

PruneResult prune_tree(const MergeTree& tree) {
  const int N = tree.N;
  const int total = static_cast<int>(tree.nodes.size());
  if (total != 2 * N || tree.distinguished < 0) throw MalformedTree("wrong node counts");
  int unary = 0;
  for (const auto& node : tree.nodes) {
    if (node.is_leaf && !node.children.empty()) throw MalformedTree("leaf with children");
    if (!node.is_leaf && node.children.size() == 1) ++unary;
    if (!node.is_leaf && node.children.size() > 2) throw MalformedTree("node with >2 children");
  }
  if (unary != 1 || tree.nodes[tree.distinguished].children.size() != 1)
    throw MalformedTree("expected exactly one unary (distinguished) node");

  std::vector<int> ord(total);
  std::iota(ord.begin(), ord.end(), 0);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) {
    if (tree.nodes[a].level != tree.nodes[b].level)
      return tree.nodes[a].level > tree.nodes[b].level;
    return a < b;
  });

  // original descendant leaf sets (children always sit above their parent)
  std::vector<std::uint64_t> desc(total, 0);
  for (int v : ord) {
    if (tree.nodes[v].is_leaf) desc[v] = std::uint64_t(1) << v;
    for (int c : tree.nodes[v].children) desc[v] |= desc[c];
  }

  constexpr int kDistMarker = -2;
  std::vector<int> rep(total, -1);
  for (int k = 0; k < N; ++k) rep[k] = k;

  PruneResult out;
  std::uint64_t pruned = 0;
  for (int v : ord) {
    const auto& node = tree.nodes[v];
    if (node.is_leaf) continue;
    if (v == tree.distinguished) {
      out.survivor = rep[node.children[0]];
      if (out.survivor < 0) throw MalformedTree("unprocessed child of the distinguished node");
      rep[v] = kDistMarker;
      continue;
    }
    const int r1 = rep[node.children[0]];
    const int r2 = rep[node.children[1]];
    if ((r1 < 0 && r1 != kDistMarker) || (r2 < 0 && r2 != kDistMarker))
      throw MalformedTree("unprocessed child");
    int prune_leaf, survivor;
    if (r1 == kDistMarker) {
      prune_leaf = r2;
      survivor = r1;
    } else if (r2 == kDistMarker) {
      prune_leaf = r1;
      survivor = r2;
    } else {
      prune_leaf = std::min(r1, r2);
      survivor = std::max(r1, r2);
    }
    pruned |= std::uint64_t(1) << prune_leaf;
    out.pairing.emplace_back(prune_leaf, v);
    std::vector<int> dset;
    for (int k = 0; k < N; ++k)
      if ((pruned >> k & 1) && (desc[v] >> k & 1)) dset.push_back(k);
    out.D.push_back(std::move(dset));
    rep[v] = survivor;
  }
  if (static_cast<int>(out.pairing.size()) != N - 1)
    throw MalformedTree("pruning did not pair N-1 leaves");
  return out;
}

std::string merge_tree_to_json(const MergeTree& tree, const PruneResult& pruning) {
  nlohmann::json j;
  j["N"] = tree.N;
  j["case"] = tree.small_case ? "small" : "large";
  j["root"] = tree.root;
  j["distinguished"] = tree.distinguished;
  j["survivor"] = pruning.survivor;
  j["nodes"] = nlohmann::json::array();
  for (const auto& node : tree.nodes) {
    nlohmann::json nj;
    nj["id"] = node.id;
    nj["leaf"] = node.is_leaf;
    nj["level"] = node.level;
    nj["children"] = node.children;
    if (node.saddle_index >= 0) {
      nj["saddle_re"] = tree.saddles[node.saddle_index].real();
      nj["saddle_im"] = tree.saddles[node.saddle_index].imag();
      nj["saddle_level"] = tree.saddle_levels[node.saddle_index];
    }
    j["nodes"].push_back(nj);
  }
  j["pruning"] = nlohmann::json::array();
  for (size_t i = 0; i < pruning.pairing.size(); ++i) {
    nlohmann::json pj;
    pj["leaf"] = pruning.pairing[i].first;
    pj["node"] = pruning.pairing[i].second;
    pj["D"] = pruning.D[i];
    j["pruning"].push_back(pj);
  }
  return j.dump(2);
}

}  // namespace bolax
