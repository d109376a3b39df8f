#pragma once

#include <map>
#include <optional>
#include <vector>

#include "geomax/geometry.hpp"
#include "geomax/grid.hpp"
#include "geomax/measure.hpp"

namespace geomax {

struct CZSelection {
  RectBox root;
  double beta = 0;
  std::vector<MeshIndex> selected;
  std::vector<RectBox> boxes;
  std::vector<double> averages;  // μ(S∩E)/μ(S)
  std::vector<double> masses;    // μ(S)
  double residual_mass = 0;      // μ(E∩root) outside the selected elements
};

/// Maximal mesh elements (below the root) with μ(S∩E)/μ(S) > β.
CZSelection cz_decompose(const GridMeasure& mu, const DyadicMesh& mesh, const CellSet& E, double beta);

/// Cells covered by the selection.
CellSet selection_cells(const GridMeasure& mu, const DyadicMesh& mesh, const CZSelection& sel);

struct DilateChain {
  std::vector<RectBox> dilates;  // S_{j,1}, S_{j,2}, ...
  std::vector<double> factors;   // c with S_{j,k} = c*S
  std::vector<double> ratios;    // μ(S_{j,k}) / μ(S_{j,k-1})
  bool truncated = false;        // ran out of window before `count` steps
};

/// Corner dilates of a mesh element, each the smallest grid-representable one whose
/// mass is at least 1/β times the previous.
DilateChain expanding_dilates(const GridMeasure& mu, const DyadicMesh& mesh, const RectBox& S,
                              double beta, int count);

/// ⌈log⁺(βΔ)/log(1/β)⌉
int choose_N(double beta, double Delta);
/// ⌈log(β/α)/log(1/β)⌉
int choose_jo(double alpha, double beta);
/// j_o (N + 2) + 1
int k_alpha_beta(double alpha, double beta, double Delta);
/// 1 + (2^n - 1)/δ
double growth_gamma(int n, double delta);
/// Δ^{-⌈(3/2) log2 n⌉}
double rho_constant(double Delta, int n);

struct WhitneyResult {
  std::vector<RectBox> cubes;
  /// Minimal-depth elements off K that never met the distance condition (the boundary collar).
  std::vector<RectBox> residual;
};

/// Dyadic elements of `box` with diam S <= dist(S, K) <= 4 diam S covering box \ K
/// down to mesh_depth.
WhitneyResult whitney_cubes(const ConvexBody& K, const RectBox& box, int mesh_depth);

struct AnnulusResult {
  double mass = 0;   // μ{x ∉ K : dist(x, K) < ε}
  double bound = 0;  // 9 δ^{4+⌈log2(34√n)⌉} / log2(1/ε) · μ(Q)
  bool holds() const { return mass <= bound; }
};

AnnulusResult annulus_measure(const GridMeasure& mu, const ConvexBody& K, const RectBox& Q, double eps,
                              double delta);

struct XiResult {
  double xi = 1;            // (μ(∪Q_j) + μ(K)) / μ(Q)
  double annulus_floor = 1; // 1 - μ(annulus at √n 2^{-m} side)/μ(Q)
  std::vector<RectBox> cubes;
};

/// Depth-m subcubes of Q disjoint from K; K absent means nothing is removed.
XiResult xi_constant(const GridMeasure& mu, const std::optional<ConvexBody>& K, const RectBox& Q, int m);

struct CopiesResult {
  CellSet cells;             // rasterized K_N
  std::size_t copies = 0;
  int max_depth = 0;         // generations below Q of the deepest copy's frame
  bool disjoint = true;
  double measure = 0;        // μ(K_N)
  double lower_bound = 0;    // ρ (1 - Ψ^{N+1}) / (1 - Ψ) μ(Q)
  double xi = 0;
  double psi = 0;
  double rho = 0;
  std::vector<RectBox> frames;  // Q-images of the copies (level ≤ 1 only, for export)
  bool holds() const { return disjoint && measure >= lower_bound * (1 - 1e-12); }
};

CopiesResult homothetic_copies(const GridMeasure& mu, const ConvexBody& K, const RectBox& Q, int m, int N,
                               double rho);

struct MNChoice {
  int m = 0;
  int N = 0;
  double threshold = 0;
  double psi = 0;
  double achieved = 0;  // ρ (1 - Ψ^{N+1}) / (1 - Ψ)
  double target = 0;    // (1 - α)/(1 - η)
};

MNChoice choose_mN(double rho, double alpha, double eta, const std::map<int, double>& xi_table);

}  // namespace geomax
