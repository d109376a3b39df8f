#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geomax/geometry.hpp"
#include "geomax/grid.hpp"
#include "geomax/measure.hpp"

namespace geomax {

/// Relative slack used when comparing computed averages against a level.
constexpr double kTieTol = 1e-12;

struct MaximalOptions {
  /// Basis elements must lie inside this cell range (default: the whole grid).
  std::optional<CellRange> truncation;
  /// Longest admissible side, in cells, per axis (rectangle kinds only). 0 = unbounded.
  std::array<int, 3> max_side{0, 0, 0};
  /// Worker threads; 0 reads GEOMAX_THREADS (default 1).
  int threads = 0;
};

/// Per-cell values of a maximal operator over a window grid.
struct MaximalField {
  GridShape shape;
  std::vector<double> values;
  std::string basis;
  std::string measure_id;
  RectBox window;
  CellRange truncation;
  /// Largest side ratio (physical units) among the elements considered.
  double max_eccentricity = 1;
  /// Convex-vs-rectangle comparability constant attached by callers; NaN if unset.
  double comparability_constant = std::numeric_limits<double>::quiet_NaN();

  double operator[](std::size_t i) const { return values[i]; }
  double at(int i, int j = 0, int k = 0) const { return values[shape.index(i, j, k)]; }
};

/// sup over basis elements B ∋ x inside the truncation with μ(B) > 0 of μ(B∩E)/μ(B).
MaximalField maximal_indicator(const GridMeasure& mu, const BasisFamily& family, const CellSet& E,
                               const MaximalOptions& opts = {});
/// sup of μ-averages of f ≥ 0 over basis elements containing the cell.
MaximalField maximal_function(const GridMeasure& mu, const BasisFamily& family,
                              std::span<const double> f, const MaximalOptions& opts = {});

/// Both the sup and the inf of the averages (rectangle kinds); inf is +inf where no element fits.
struct AverageEnvelope {
  std::vector<double> sup;
  std::vector<double> inf;
};
AverageEnvelope average_envelope(const GridMeasure& mu, const BasisFamily& family,
                                 std::span<const double> f, const MaximalOptions& opts = {});

/// Cells with value > level (strict) or >= level, with a relative tie tolerance.
CellSet superlevel(const MaximalField& field, double level, bool strict);

struct HaloResult {
  std::vector<CellSet> iterates;  // ℋ^0 .. ℋ^k
  bool truncated = false;         // some iterate reached the window boundary
  int truncated_from = -1;        // first iterate touching the boundary
};

HaloResult halo_iterate(const GridMeasure& mu, const BasisFamily& family, const CellSet& E,
                        double beta, int k, const MaximalOptions& opts = {});

/// Maximal averages over the mesh elements containing each cell (cells off the root get 0).
MaximalField dyadic_maximal(const GridMeasure& mu, const DyadicMesh& mesh, std::span<const double> f);

/// Homothetic copies of the associated rectangle, sampled at the family's scales and lattice.
BasisFamily associated_family(const BasisFamily& convex_family);

struct ComparabilityReport {
  double constant = 1;              // c_n = Δ^{⌈1.5 log2 n⌉}
  double max_ratio_convex = 0;      // max M_B / M_G over checked cells
  double max_ratio_rect = 0;        // max M_G / M_B
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t first_violation = 0;  // cell index
  bool pass() const { return violations == 0; }
};

/// Checks c^{-1} M_G f <= M_B f <= c M_G f on cells at least `margin` cells from the edge.
ComparabilityReport comparability_check(const GridMeasure& mu, const BasisFamily& convex_family,
                                        const BasisFamily& rect_family, std::span<const double> f,
                                        double delta_mu, int margin = 0,
                                        const MaximalOptions& opts = {});

/// Δ^{⌈(3/2) log2 n⌉}
double comparability_constant(double delta, int n);

}  // namespace geomax
