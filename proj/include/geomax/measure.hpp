#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geomax/geometry.hpp"
#include "geomax/grid.hpp"

namespace geomax {

/// One-dimensional density factor of a product weight.
struct Factor1D {
  enum class Kind { Lebesgue, Power, Gaussian };
  Kind kind = Kind::Lebesgue;
  double exponent = 0.0;  // Power: |x|^exponent

  double density(double x) const;
  /// Exact integral over [a, b]; +inf when a non-integrable singularity lies in [a, b].
  double integral(double a, double b) const;
  /// The factor raised to the power q (Lebesgue and Power only).
  std::optional<Factor1D> power(double q) const;
};

struct WeightSpec {
  enum class Kind { Lebesgue, Power, Product, Gaussian, DyadicRandom };
  Kind kind = Kind::Lebesgue;
  std::vector<double> exponents;    // Power, one per axis (a single value broadcasts)
  std::vector<Factor1D> factors;    // Product, one per axis
  std::uint64_t seed = 0;           // DyadicRandom
  double multiplier_lo = 0.5;       // DyadicRandom split fractions in [lo, hi] ⊂ (0, 1)
  double multiplier_hi = 0.5;

  static WeightSpec lebesgue();
  static WeightSpec power(std::vector<double> exponents);
  static WeightSpec product(std::vector<Factor1D> factors);
  static WeightSpec gaussian();
  static WeightSpec dyadic_random(std::uint64_t seed, double lo, double hi);

  /// Per-axis factor for the product kinds; nullopt for DyadicRandom.
  std::optional<Factor1D> factor(int axis) const;
  std::string descriptor() const;
};

/// Nonnegative masses on a uniform res^dim grid over a window; cells are
/// half-open and a cell belongs to a region iff its center does.
class GridMeasure {
 public:
  GridMeasure(RectBox window, int resolution, std::vector<double> mass, std::string id = {});

  const RectBox& window() const { return window_; }
  int resolution() const { return shape_.res; }
  int dim() const { return shape_.dim; }
  const GridShape& shape() const { return shape_; }
  const std::string& id() const { return id_; }
  std::span<const double> masses() const { return mass_; }
  double mass(std::size_t i) const { return mass_[i]; }
  double total() const { return total_; }

  double cell_side(int axis) const { return window_.side(axis) / shape_.res; }
  double cell_volume() const;
  double center(int axis, int i) const { return window_.lo[axis] + (i + 0.5) * cell_side(axis); }
  Vec cell_center(std::size_t idx) const;
  RectBox cell_box(const CellRange& r) const;

  long double box_mass(const CellRange& r) const { return prefix_->sum(r); }
  const PrefixSum& prefix() const { return *prefix_; }
  /// Cells whose centers lie in the closed box (clipped to the window).
  CellRange cells_in(const RectBox& box) const;
  /// Cells whose centers lie in the body.
  CellSet cells_in(const ConvexBody& body) const;
  /// True when the box edges fall on cell boundaries (within tol cells).
  bool grid_aligned(const RectBox& box, double tol = 1e-9) const;

 private:
  RectBox window_;
  GridShape shape_;
  std::vector<double> mass_;
  double total_ = 0;
  std::shared_ptr<const PrefixSum> prefix_;
  std::string id_;
};

int max_resolution(int dim);
void validate_resolution(int dim, int resolution);

/// Cell masses of the density over the window.
GridMeasure realize(const WeightSpec& spec, const RectBox& window, int resolution);
/// Cell integrals of w^q for a product weight (Power/Lebesgue factors exact,
/// others by midpoint rule); non-integrable cells come out as +inf.
GridMeasure realize_power(const WeightSpec& spec, const RectBox& window, int resolution, double q);

struct Integral {
  double value = 0;
  bool truncated = false;  // region reaches outside the window
};

Integral integrate(const GridMeasure& mu, const RectBox& region);
Integral integrate(const GridMeasure& mu, const ConvexBody& region);
Integral integrate(const GridMeasure& mu, const CellSet& region);
/// ∫ f dμ over the cell set.
double integrate(const GridMeasure& mu, std::span<const double> f, const CellSet& region);

struct DoublingReport {
  double estimate = 1.0;
  RectBox witness_small;  // bounding box of B (cell extents)
  RectBox witness_big;    // bounding box of τ_σ dil_2 B
  std::size_t sample_count = 0;
  std::size_t skipped = 0;  // samples with μ(B) = 0
  std::uint64_t seed = 0;
};

/// Lower bound on Δ_{μ,𝔅}: the largest μ(τ_σ dil₂B)/μ(B) over sampled pairs
/// with B ⊂ τ_σ dil₂B, both inside the window.
DoublingReport doubling_constant_estimate(const GridMeasure& mu, const BasisFamily& family,
                                          std::size_t samples, std::uint64_t seed);

struct ApReport {
  double estimate = 1.0;  // +inf when a sample meets a non-integrable dual cell
  RectBox witness;
  std::size_t sample_count = 0;
  std::size_t infinite_samples = 0;
};

/// Lower bound on [w]_{A_p}: max over sampled rectangles of
/// (avg_B w)(avg_B w^{1-p'})^{p-1}. `dual` holds the cell integrals of w^{1-p'}.
ApReport ap_constant_estimate(const GridMeasure& w, const GridMeasure& dual, double p,
                              const BasisFamily& family, std::size_t samples, std::uint64_t seed);

struct GrowthViolation {
  MeshIndex element;
  int generations = 0;
  double ratio = 0;  // μ(R) / μ(R^{(m)})
  double allowed = 0;
};

struct GrowthReport {
  double gamma = 1;
  std::size_t checked = 0;
  std::vector<GrowthViolation> violations;
};

/// γ = 1 + (2^n - 1)/δ and the check μ(R) ≤ γ^{-m} μ(R^{(m)}) over the mesh.
GrowthReport growth_constant(const GridMeasure& mu, const DyadicMesh& mesh, double delta);

/// Cell range of a mesh element; throws Resolution when the mesh does not sit on the grid.
CellRange element_cells(const GridMeasure& mu, const DyadicMesh& mesh, const MeshIndex& m);
void check_mesh_on_grid(const GridMeasure& mu, const DyadicMesh& mesh);

struct AffineMap {
  Mat linear;
  Vec offset;
};

/// μ_T(E) = μ(T^{-1}E) for a diagonal T.
GridMeasure pushforward_affine(const GridMeasure& mu, const AffineMap& map);

void dump(const GridMeasure& mu, std::ostream& os);
GridMeasure load_measure(std::istream& is);

}  // namespace geomax
