#include "geomax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "geomax/error.hpp"

namespace geomax {

Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

RectBox RectBox::make(const Vec& lo, const Vec& hi) {
  require(lo.size() == hi.size(), "RectBox: lo/hi dimension mismatch");
  require(lo.size() >= 1 && lo.size() <= kMaxDim, "RectBox: dimension must be 1..3");
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    require(std::isfinite(lo[i]) && std::isfinite(hi[i]), "RectBox: non-finite coordinate");
    require(lo[i] < hi[i], "RectBox: empty interior on axis " + std::to_string(i));
  }
  return RectBox{lo, hi};
}

RectBox RectBox::make(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  return make(make_vec(lo), make_vec(hi));
}

RectBox RectBox::cube(int dim, double a, double b) {
  return make(Vec::Constant(dim, a), Vec::Constant(dim, b));
}

double RectBox::volume() const { return (hi - lo).prod(); }

double RectBox::diameter() const { return (hi - lo).norm(); }

bool RectBox::contains(const Vec& p, double tol) const {
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
  return true;
}

bool RectBox::contains(const RectBox& o, double tol) const {
  for (int i = 0; i < dim(); ++i)
    if (o.lo[i] < lo[i] - tol || o.hi[i] > hi[i] + tol) return false;
  return true;
}

bool RectBox::intersects(const RectBox& o) const {
  for (int i = 0; i < dim(); ++i)
    if (o.hi[i] <= lo[i] || o.lo[i] >= hi[i]) return false;
  return true;
}

std::string RectBox::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < dim(); ++i) {
    if (i) os << "x";
    os << "[" << lo[i] << "," << hi[i] << "]";
  }
  return os.str();
}

bool approx_equal(const RectBox& a, const RectBox& b, double tol) {
  if (a.dim() != b.dim()) return false;
  return (a.lo - b.lo).cwiseAbs().maxCoeff() <= tol && (a.hi - b.hi).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// Ellipsoid

bool Ellipsoid::contains(const Vec& p, double tol) const {
  Vec d = p - center;
  return d.dot(shape * d) <= 1.0 + tol;
}

Mat Ellipsoid::transform() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(shape);
  Vec inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
}

Vec Ellipsoid::semiaxes() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(shape);
  return es.eigenvalues().cwiseSqrt().cwiseInverse();
}

double Ellipsoid::volume() const {
  const int n = dim();
  const double ball = n == 1 ? 2.0 : n == 2 ? std::numbers::pi : 4.0 / 3.0 * std::numbers::pi;
  return ball * semiaxes().prod();
}

Ellipsoid Ellipsoid::dilated(double c) const { return Ellipsoid{center, shape / (c * c)}; }

std::vector<Vec> Ellipsoid::boundary_samples(int k) const {
  std::vector<Vec> out;
  const Mat t = transform();
  if (dim() == 1) {
    out.push_back(center - t.col(0));
    out.push_back(center + t.col(0));
    return out;
  }
  require(dim() == 2, "Ellipsoid::boundary_samples: 1D/2D only");
  for (int i = 0; i < k; ++i) {
    const double th = 2.0 * std::numbers::pi * i / k;
    out.push_back(center + t * make_vec({std::cos(th), std::sin(th)}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ConvexBody

namespace {

double cross(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double box_point_distance(const RectBox& box, const Vec& p) {
  double s = 0;
  for (int i = 0; i < box.dim(); ++i) {
    const double d = std::max({box.lo[i] - p[i], 0.0, p[i] - box.hi[i]});
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

ConvexBody ConvexBody::build(int dim, std::vector<Vec> hull) {
  ConvexBody b;
  b.dim_ = dim;
  b.vertices_ = std::move(hull);
  if (dim == 1) {
    b.facets_.push_back({make_vec({-1.0}), -b.vertices_[0][0]});
    b.facets_.push_back({make_vec({1.0}), b.vertices_[1][0]});
    return b;
  }
  const auto& v = b.vertices_;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec& a = v[i];
    const Vec& c = v[(i + 1) % v.size()];
    Vec n = make_vec({c[1] - a[1], -(c[0] - a[0])});
    n.normalize();
    b.facets_.push_back({n, n.dot(a)});
  }
  return b;
}

ConvexBody ConvexBody::from_points(int dim, const std::vector<Vec>& pts) {
  require(dim == 1 || dim == 2, "ConvexBody: only dimensions 1 and 2 are supported");
  for (const auto& p : pts) require(p.size() == dim, "ConvexBody: point dimension mismatch");
  if (dim == 1) {
    if (pts.empty()) fail(ErrorKind::Degenerate, "degenerate body");
    double lo = pts[0][0], hi = pts[0][0];
    for (const auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    if (!(hi > lo)) fail(ErrorKind::Degenerate, "degenerate body");
    return build(1, {make_vec({lo}), make_vec({hi})});
  }
  // Andrew's monotone chain, collinear points dropped.
  std::vector<Vec> p = pts;
  std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  p.erase(std::unique(p.begin(), p.end(), [](const Vec& a, const Vec& b) { return a == b; }),
          p.end());
  if (p.size() < 3) fail(ErrorKind::Degenerate, "degenerate body");
  std::vector<Vec> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  if (h.size() < 3) fail(ErrorKind::Degenerate, "degenerate body");
  double area = 0, diam = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    area += cross(h[0], h[i], h[(i + 1) % h.size()]);
    for (std::size_t j = 0; j < h.size(); ++j) diam = std::max(diam, (h[i] - h[j]).norm());
  }
  if (!(0.5 * area > 1e-14 * diam * diam)) fail(ErrorKind::Degenerate, "degenerate body");
  return build(2, std::move(h));
}

ConvexBody ConvexBody::from_box(const RectBox& box) {
  if (box.dim() == 1) return from_points(1, {box.lo, box.hi});
  require(box.dim() == 2, "ConvexBody::from_box: 1D/2D only");
  return from_points(2, {box.lo, make_vec({box.hi[0], box.lo[1]}), box.hi,
                         make_vec({box.lo[0], box.hi[1]})});
}

ConvexBody ConvexBody::regular_polygon(int sides, const Vec& center, double r, double phase) {
  require(sides >= 3 && r > 0, "regular_polygon: need >= 3 sides and positive radius");
  std::vector<Vec> pts;
  for (int i = 0; i < sides; ++i) {
    const double th = phase + 2.0 * std::numbers::pi * i / sides;
    pts.push_back(center + r * make_vec({std::cos(th), std::sin(th)}));
  }
  return from_points(2, pts);
}

ConvexBody ConvexBody::disk(const Vec& center, double radius, int sides) {
  if (center.size() == 1) return from_points(1, {center.array() - radius, center.array() + radius});
  return regular_polygon(sides, center, radius);
}

bool ConvexBody::contains(const Vec& p, double tol) const {
  for (const auto& f : facets_)
    if (f.normal.dot(p) > f.offset + tol) return false;
  return true;
}

double ConvexBody::distance(const Vec& p) const {
  if (contains(p)) return 0.0;
  if (dim_ == 1) return std::max(vertices_[0][0] - p[0], p[0] - vertices_[1][0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    best = std::min(best, segment_distance(p, vertices_[i], vertices_[(i + 1) % vertices_.size()]));
  return best;
}

double ConvexBody::diameter() const {
  double d = 0;
  for (const auto& a : vertices_)
    for (const auto& b : vertices_) d = std::max(d, (a - b).norm());
  return d;
}

double ConvexBody::volume() const {
  if (dim_ == 1) return vertices_[1][0] - vertices_[0][0];
  double area = 0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Vec& a = vertices_[i];
    const Vec& b = vertices_[(i + 1) % vertices_.size()];
    area += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * area;
}

RectBox ConvexBody::bounding_box() const {
  Vec lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return RectBox::make(lo, hi);
}

ConvexBody ConvexBody::scaled_about(const Vec& center, double c) const {
  require(c > 0, "scale factor must be positive");
  std::vector<Vec> pts;
  pts.reserve(vertices_.size());
  for (const auto& v : vertices_) pts.push_back(center + c * (v - center));
  ConvexBody out = build(dim_, std::move(pts));
  if (john_) out.john_ = Ellipsoid{center + c * (john_->center - center), john_->shape / (c * c)};
  return out;
}

ConvexBody ConvexBody::affine_image(const Vec& scale, const Vec& offset) const {
  require(scale.size() == dim_ && offset.size() == dim_, "affine_image: dimension mismatch");
  for (int i = 0; i < dim_; ++i) require(scale[i] != 0.0, "affine_image: singular map");
  std::vector<Vec> pts;
  for (const auto& v : vertices_) pts.push_back(offset + scale.cwiseProduct(v));
  ConvexBody out = from_points(dim_, pts);
  if (john_) {
    // John ellipsoids are affine equivariant.
    const Vec inv = scale.cwiseInverse();
    out.john_ = Ellipsoid{offset + scale.cwiseProduct(john_->center),
                          inv.asDiagonal() * john_->shape * inv.asDiagonal()};
  }
  return out;
}

ConvexBody ConvexBody::with_john(Ellipsoid e) const {
  require(e.dim() == dim_, "with_john: dimension mismatch");
  ConvexBody out = *this;
  out.john_ = std::move(e);
  return out;
}

double distance(const RectBox& box, const ConvexBody& body) {
  require(box.dim() == body.dim(), "distance: dimension mismatch");
  if (body.dim() == 1) {
    const double lo = body.vertices()[0][0], hi = body.vertices()[1][0];
    return std::max({lo - box.hi[0], box.lo[0] - hi, 0.0});
  }
  // Separating axis test over the box axes and the polygon's edge normals.
  auto box_range = [&](const Vec& n) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int cx = 0; cx < 2; ++cx)
      for (int cy = 0; cy < 2; ++cy) {
        const double v = n[0] * (cx ? box.hi[0] : box.lo[0]) + n[1] * (cy ? box.hi[1] : box.lo[1]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    return std::pair{lo, hi};
  };
  bool separated = false;
  for (const auto& f : body.facets()) {
    if (box_range(f.normal).first > f.offset) {
      separated = true;
      break;
    }
  }
  if (!separated) {
    const RectBox bb = body.bounding_box();
    for (int i = 0; i < 2 && !separated; ++i)
      separated = bb.hi[i] < box.lo[i] || bb.lo[i] > box.hi[i];
  }
  if (!separated) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : body.vertices()) best = std::min(best, box_point_distance(box, v));
  for (int cx = 0; cx < 2; ++cx)
    for (int cy = 0; cy < 2; ++cy)
      best = std::min(best, body.distance(make_vec({cx ? box.hi[0] : box.lo[0],
                                                    cy ? box.hi[1] : box.lo[1]})));
  return best;
}

RectBox associated_rectangle(const ConvexBody& body) {
  const Ellipsoid e = body.cached_john() ? *body.cached_john() : john_ellipsoid(body);
  const int n = body.dim();
  // Support of n*E along e_i is sqrt((A^{-1})_ii) * n.
  const Mat inv = e.shape.inverse();
  Vec half(n);
  for (int i = 0; i < n; ++i) half[i] = n * std::sqrt(inv(i, i));
  return RectBox::make(e.center - half, e.center + half);
}

ConvexBody principal_rectangle(const ConvexBody& body) {
  const Ellipsoid e = body.cached_john() ? *body.cached_john() : john_ellipsoid(body);
  const int n = body.dim();
  require(n <= 2, "principal_rectangle: 1D/2D only");
  Eigen::SelfAdjointEigenSolver<Mat> es(e.shape);
  const Mat axes = es.eigenvectors();
  const Vec half = n * es.eigenvalues().cwiseSqrt().cwiseInverse();
  std::vector<Vec> corners;
  for (int sx = -1; sx <= 1; sx += 2)
    for (int sy = -1; sy <= (n == 2 ? 1 : -1); sy += 2) {
      Vec p = e.center + sx * half[0] * axes.col(0);
      if (n == 2) p += sy * half[1] * axes.col(1);
      corners.push_back(p);
    }
  return ConvexBody::from_points(n, corners);
}

ConvexBody dilate_about_john(const ConvexBody& body, double c) {
  require(c > 0, "dilate_about_john: c must be positive");
  const Ellipsoid e = john_ellipsoid(body);
  return body.with_john(e).scaled_about(e.center, c);
}

// ---------------------------------------------------------------------------
// BasisFamily

BasisFamily BasisFamily::rectangles(SideLengths sides) {
  BasisFamily f;
  f.kind = BasisKind::AxisRectangles;
  f.sides = sides;
  return f;
}

BasisFamily BasisFamily::cubes(SideLengths sides) {
  BasisFamily f;
  f.kind = BasisKind::AxisCubes;
  f.sides = sides;
  return f;
}

BasisFamily BasisFamily::shape(ConvexBody generator, std::vector<double> scales,
                               int translation_step) {
  BasisFamily f;
  f.kind = BasisKind::ConvexShape;
  if (!generator.cached_john()) generator = generator.with_john(john_ellipsoid(generator));
  f.generator = std::move(generator);
  f.scales = std::move(scales);
  f.translation_step = translation_step;
  f.validate();
  return f;
}

std::vector<double> BasisFamily::default_scales(const ConvexBody& generator,
                                                const RectBox& window, int resolution,
                                                int per_octave) {
  require(per_octave >= 1, "default_scales: per_octave must be >= 1");
  const RectBox bb = generator.bounding_box();
  double s_max = std::numeric_limits<double>::infinity();
  double s_min = 0;
  for (int i = 0; i < window.dim(); ++i) {
    s_max = std::min(s_max, window.side(i) / bb.side(i));
    s_min = std::max(s_min, 0.5 * window.side(i) / resolution / bb.side(i));
  }
  std::vector<double> out;
  for (int j = 0;; ++j) {
    const double s = s_max * std::exp2(-static_cast<double>(j) / per_octave);
    if (s < s_min) break;
    out.push_back(s);
  }
  return out;
}

void BasisFamily::validate() const {
  require(translation_step >= 1, "BasisFamily: translation step must be >= 1");
  if (kind == BasisKind::ConvexShape) {
    require(generator.has_value(), "BasisFamily: ConvexShape requires a generator");
    if (scales.empty()) fail(ErrorKind::Degenerate, "basis element family empty");
    for (std::size_t i = 0; i < scales.size(); ++i) {
      require(scales[i] > 0, "BasisFamily: scales must be positive");
      if (i) require(scales[i] < scales[i - 1], "BasisFamily: scales must strictly decrease");
    }
  } else {
    require(!generator.has_value(), "BasisFamily: generator only allowed for ConvexShape");
  }
}

std::string BasisFamily::descriptor() const {
  std::ostringstream os;
  switch (kind) {
    case BasisKind::AxisRectangles:
      os << "rectangles";
      break;
    case BasisKind::AxisCubes:
      os << "cubes";
      break;
    case BasisKind::ConvexShape:
      os << "shape[" << generator->vertices().size() << " vertices, " << scales.size()
         << " scales, step " << translation_step << "]";
      break;
  }
  if (kind != BasisKind::ConvexShape && sides == SideLengths::Dyadic) os << "(dyadic sides)";
  return os.str();
}

}  // namespace geomax
