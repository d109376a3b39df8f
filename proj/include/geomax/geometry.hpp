#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace geomax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr int kMaxDim = 3;

Vec make_vec(std::initializer_list<double> xs);

/// Axis-parallel box [lo, hi] with nonempty interior.
struct RectBox {
  Vec lo;
  Vec hi;

  static RectBox make(const Vec& lo, const Vec& hi);
  static RectBox make(std::initializer_list<double> lo, std::initializer_list<double> hi);
  /// The cube [a, b]^dim.
  static RectBox cube(int dim, double a, double b);

  int dim() const { return static_cast<int>(lo.size()); }
  double side(int axis) const { return hi[axis] - lo[axis]; }
  double volume() const;
  double diameter() const;
  Vec center() const { return 0.5 * (lo + hi); }
  bool contains(const Vec& p, double tol = 0.0) const;
  bool contains(const RectBox& other, double tol = 0.0) const;
  bool intersects(const RectBox& other) const;
  std::string to_string() const;
};

bool approx_equal(const RectBox& a, const RectBox& b, double tol = 1e-12);

/// {x : (x - center)^T shape (x - center) <= 1}
struct Ellipsoid {
  Vec center;
  Mat shape;

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const Vec& p, double tol = 0.0) const;
  /// Symmetric square root of shape^{-1}; maps the unit ball onto the ellipsoid.
  Mat transform() const;
  Vec semiaxes() const;
  double volume() const;
  Ellipsoid dilated(double c) const;
  /// Boundary points (2D: k equispaced angles; 1D: the two endpoints).
  std::vector<Vec> boundary_samples(int k) const;
};

/// normal . x <= offset, with |normal| = 1.
struct Halfspace {
  Vec normal;
  double offset;
};

/// Bounded convex polytope with nonempty interior, stored as its own hull
/// (counterclockwise in 2D, {lo, hi} in 1D).
class ConvexBody {
 public:
  /// Hull of the given points; throws Degenerate when the hull has zero volume.
  static ConvexBody from_points(int dim, const std::vector<Vec>& pts);
  static ConvexBody from_box(const RectBox& box);
  static ConvexBody regular_polygon(int sides, const Vec& center, double circumradius,
                                    double phase = 0.0);
  /// Inscribed regular polygon; Hausdorff distance to the disk is r(1 - cos(pi/sides)).
  static ConvexBody disk(const Vec& center, double radius, int sides = 256);

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }
  const std::vector<Halfspace>& facets() const { return facets_; }
  const std::optional<Ellipsoid>& cached_john() const { return john_; }

  bool contains(const Vec& p, double tol = 0.0) const;
  /// Euclidean distance to the body (0 inside).
  double distance(const Vec& p) const;
  double diameter() const;
  double volume() const;
  RectBox bounding_box() const;

  /// Image under x -> center + c (x - center).
  ConvexBody scaled_about(const Vec& center, double c) const;
  /// Image under x -> offset + diag(scale) x; scale entries must be nonzero.
  ConvexBody affine_image(const Vec& scale, const Vec& offset) const;
  ConvexBody with_john(Ellipsoid e) const;

 private:
  ConvexBody() = default;
  static ConvexBody build(int dim, std::vector<Vec> hull);

  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> facets_;
  std::optional<Ellipsoid> john_;
};

/// Distance between an axis box and a convex body (0 when they meet). 1D/2D.
double distance(const RectBox& box, const ConvexBody& body);

struct JohnOptions {
  double rel_volume_tol = 1e-8;
  int max_newton = 200;
};

/// Maximal-volume inscribed ellipsoid by a log-barrier Newton method.
Ellipsoid john_ellipsoid(const ConvexBody& body, const JohnOptions& opts = {});

/// Smallest axis-aligned box containing dim * john(body). body ⊂ R_B always; R_B ⊂ dim^{3/2} body
/// needs the ellipsoid axes to be (close to) the coordinate axes.
RectBox associated_rectangle(const ConvexBody& body);

/// Minimal-volume rectangle around dim * john(body), aligned with the ellipsoid's axes.
/// Unlike the axis box above, it always sits inside dim^{3/2} body. 1D/2D.
ConvexBody principal_rectangle(const ConvexBody& body);

/// x -> c_J + c (x - c_J) where c_J is the John center of body.
ConvexBody dilate_about_john(const ConvexBody& body, double c);

/// Dyadic mesh D_R: depth-d elements have sides 2^{-d} times the root's.
struct MeshIndex {
  int depth = 0;
  std::array<long, kMaxDim> idx{0, 0, 0};

  bool operator==(const MeshIndex&) const = default;
};

class DyadicMesh {
 public:
  DyadicMesh(RectBox root, int max_depth);

  const RectBox& root() const { return root_; }
  int max_depth() const { return max_depth_; }
  int dim() const { return root_.dim(); }

  RectBox element(const MeshIndex& m) const;
  /// Throws InvalidArgument when the box is not a mesh element.
  MeshIndex locate(const RectBox& box) const;
  bool contains_element(const RectBox& box) const;
  MeshIndex parent(const MeshIndex& m) const;
  std::vector<MeshIndex> children(const MeshIndex& m) const;
  /// Element containing point p at the given depth.
  MeshIndex element_at(const Vec& p, int depth) const;

 private:
  RectBox root_;
  int max_depth_;
};

/// R^{(j)}: the ancestor j generations up.
RectBox ancestor(const DyadicMesh& mesh, const RectBox& element, int j);

/// c*S: scale S by c about the corner it shares with its dyadic parent.
RectBox corner_dilate(const DyadicMesh& mesh, const RectBox& element, double c);

enum class BasisKind { AxisRectangles, AxisCubes, ConvexShape };

/// Which side lengths the exact rectangle kernel enumerates.
enum class SideLengths { All, Dyadic };

/// Homothecy-invariant family sampled on the grid.
struct BasisFamily {
  BasisKind kind = BasisKind::AxisRectangles;
  std::optional<ConvexBody> generator;
  /// Scale factors applied to the generator about its John center, strictly decreasing.
  std::vector<double> scales;
  /// Translation lattice step in cells.
  int translation_step = 1;
  SideLengths sides = SideLengths::All;

  static BasisFamily rectangles(SideLengths sides = SideLengths::All);
  static BasisFamily cubes(SideLengths sides = SideLengths::All);
  static BasisFamily shape(ConvexBody generator, std::vector<double> scales,
                           int translation_step = 1);
  /// Scales from the largest copy fitting the window down to about one cell,
  /// with per_octave steps per factor of two.
  static std::vector<double> default_scales(const ConvexBody& generator, const RectBox& window,
                                            int resolution, int per_octave = 4);

  void validate() const;
  std::string descriptor() const;
};

}  // namespace geomax
