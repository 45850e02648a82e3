#pragma once

#include <utility>
#include <vector>

#include "bolax/potential.hpp"
#include "bolax/types.hpp"

namespace bolax {

/// Roots of z^N (u(z) + lambda), classified against the unit circle. In the
/// small case (-lambda in the range of u) exactly two roots sit on the circle
/// at the antecedent angles; all other roots come in (p, 1/conj p) pairs.
struct CriticalPointSet {
  double lambda = 0.0;
  std::vector<Complex> roots;    // all 2N roots
  std::vector<Complex> inside;   // p_k, |p_k| < 1
  std::vector<Complex> outside;  // 1/conj(p_k)
  Complex p_plus{0.0, 0.0}, p_minus{0.0, 0.0};  // on-circle roots, small case
  bool small_case = false;
  bool degenerate = false;       // unexpected on-circle count or near-multiple roots
  double factorization_residual = 0.0;  // max |u(root)+lambda| over roots
};

struct SpacingDiagnostics {
  double min_pair_distance = 0.0;     // over distinct root pairs
  double min_inside_modulus = 0.0;
  double min_distance_to_circle_roots = 0.0;  // inside roots vs p_+/-
  bool degenerate = false;
  std::vector<double> bands;          // real candidates y = -u(z*), u'(z*) = 0
  std::vector<Complex> band_values;   // all -u(z*) including complex ones
};

struct ActionIdentity {
  Complex lhs{0.0, 0.0};  // S(p_+) - S(p_-) via the circle integral of u + lambda
  Complex rhs{0.0, 0.0};  // 2 i pi A(-lambda) via quadrature of F
  double residual = 0.0;
};

/// S_lambda(z) = Q(z) - lambda log(z), arg in (0, 2*pi).
Complex eval_S(const TrigPotential& u, double lambda, Complex z);

/// Re S_lambda, branch free (Re log z = ln|z|).
double eval_S_real(const TrigPotential& u, double lambda, Complex z);

Complex eval_S_dz2(const TrigPotential& u, double lambda, Complex z);

CriticalPointSet critical_points(const TrigPotential& u, double lambda);

/// Pairwise separations plus the band candidates y = -u(z*) over the nonzero
/// roots z* of z^{N+1} u'(z). Degeneracy is reported, not thrown.
SpacingDiagnostics spacing_report(const TrigPotential& u, const CriticalPointSet& cps,
                                  double delta);

/// | |S''(p_+/-)| - |c_N| |p_+ - p_-| prod |p_k - p_+/-|^2 / |p_k| |,
/// maximized over the two circle roots.
double check_S2(const TrigPotential& u, const CriticalPointSet& cps);

/// Both sides of S(p_+) - S(p_-) = 2 i pi int_{-lambda}^{max u} F. The left
/// side integrates u + lambda along the circle arc through x_max (closed-form
/// antiderivative); the right side integrates F by adaptive quadrature.
ActionIdentity action_integral(const TrigPotential& u, double lambda);

struct LevelGridSpec {
  int n_r = 600;
  int n_theta = 1200;
  double clamp = 1e3;   // |Re S| cap near the origin
};

/// Polar sample of Re S_lambda on the annulus [r_floor, 1), log-spaced radii.
/// Computed for the translated potential with c_N > 0, whose mountain rays sit
/// at angles 2 pi k / N.
struct LevelGrid {
  std::vector<double> radii;   // cell-center radii
  std::vector<double> thetas;  // cell-center angles
  MatXd values;                // n_r x n_theta, clamped
  double r_floor = 0.0;
};

LevelGrid level_grid(const TrigPotential& u, double lambda, const LevelGridSpec& spec = {});

/// Merge tree of the superlevel filtration of Re S_lambda. Leaves are the N
/// mountains at rays 2 pi k / N near the origin; internal nodes are merge
/// events matched to saddle values Re S(p_k); the distinguished node is the
/// continent event (connection to the unit circle in the small case,
/// encirclement of the origin in the large case).
struct MergeTreeNode {
  int id = -1;
  bool is_leaf = false;
  double level = 0.0;           // merge level; leaves carry their birth level
  int parent = -1;
  std::vector<int> children;    // empty for leaves; 1 child for the distinguished node
  int saddle_index = -1;        // index into saddles for internal nodes
};

struct MergeTree {
  int N = 0;
  bool small_case = false;
  std::vector<MergeTreeNode> nodes;  // ids 0..N-1 are leaves ell_1..ell_N
  int root = -1;
  int distinguished = -1;
  std::vector<Complex> saddles;      // inside saddles (+ p_+ for the small case)
  std::vector<double> saddle_levels; // Re S at the saddles
};

MergeTree merge_tree(const TrigPotential& u, double lambda, const LevelGridSpec& spec = {});

/// Tree pruning: pairs every leaf except the designated survivor with a binary
/// internal node, processing saddles in descending level order and removing
/// the smallest-index leaf (never the distinguished node). D[k] collects the
/// leaves pruned before internal node k that descend from it in the original
/// tree.
struct PruneResult {
  std::vector<std::pair<int, int>> pairing;  // (leaf id, internal node id)
  std::vector<std::vector<int>> D;           // aligned with pairing
  int survivor = -1;                         // leaf id; belongs to the continent
};

PruneResult prune_tree(const MergeTree& tree);

std::string merge_tree_to_json(const MergeTree& tree, const PruneResult& pruning);

}  // namespace bolax
