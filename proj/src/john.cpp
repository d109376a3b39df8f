#include <cmath>
#include <vector>

#include "geomax/error.hpp"
#include "geomax/geometry.hpp"

namespace geomax {
namespace {

// Inscribed ellipsoid {B u + d : |u| <= 1} with B symmetric positive definite.
// Containment in {a_i . x <= b_i} is |B a_i| + a_i . d <= b_i, so maximizing
// log det B is a convex program; we follow the central path of
//   t * (-log det B) - sum_i log(b_i - a_i . d - |B a_i|).
class InscribedBarrier {
 public:
  InscribedBarrier(int n, const std::vector<Halfspace>& facets) : n_(n), facets_(facets) {
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) pairs_.push_back({k, l});
    np_ = static_cast<int>(pairs_.size());
  }

  int size() const { return np_ + n_; }

  Mat shape_of(const Vec& x) const {
    Mat b = Mat::Zero(n_, n_);
    for (int p = 0; p < np_; ++p) {
      b(pairs_[p].first, pairs_[p].second) = x[p];
      b(pairs_[p].second, pairs_[p].first) = x[p];
    }
    return b;
  }

  Vec center_of(const Vec& x) const { return x.tail(n_); }

  Vec pack(const Mat& b, const Vec& d) const {
    Vec x(size());
    for (int p = 0; p < np_; ++p) x[p] = b(pairs_[p].first, pairs_[p].second);
    x.tail(n_) = d;
    return x;
  }

  // Value only; returns false outside the domain.
  bool value(const Vec& x, double t, double& f) const {
    const Mat b = shape_of(x);
    Eigen::LLT<Mat> llt(b);
    if (llt.info() != Eigen::Success) return false;
    const Mat l = llt.matrixL();
    double logdet = 0;
    for (int i = 0; i < n_; ++i) {
      if (!(l(i, i) > 0)) return false;
      logdet += 2.0 * std::log(l(i, i));
    }
    f = -t * logdet;
    const Vec d = center_of(x);
    for (const auto& h : facets_) {
      const double s = h.offset - h.normal.dot(d) - (b * h.normal).norm();
      if (!(s > 0)) return false;
      f -= std::log(s);
    }
    return true;
  }

  void derivatives(const Vec& x, double t, Vec& g, Mat& hess) const {
    const int m = size();
    g = Vec::Zero(m);
    hess = Mat::Zero(m, m);
    const Mat b = shape_of(x);
    const Mat binv = b.inverse();
    std::vector<Mat> e(np_);
    for (int p = 0; p < np_; ++p) {
      e[p] = Mat::Zero(n_, n_);
      e[p](pairs_[p].first, pairs_[p].second) = 1.0;
      e[p](pairs_[p].second, pairs_[p].first) = 1.0;
    }
    for (int p = 0; p < np_; ++p) {
      g[p] -= t * (binv * e[p]).trace();
      for (int q = 0; q < np_; ++q) hess(p, q) += t * (binv * e[p] * binv * e[q]).trace();
    }
    const Vec d = center_of(x);
    for (const auto& h : facets_) {
      const Vec y = b * h.normal;
      const double ny = y.norm();
      const Vec u = y / ny;
      const double s = h.offset - h.normal.dot(d) - ny;
      Mat jac = Mat::Zero(n_, m);  // dy/dx
      for (int p = 0; p < np_; ++p) jac.col(p) = e[p] * h.normal;
      Vec ds = -(jac.transpose() * u);
      ds.tail(n_) = -h.normal;
      const Mat proj = Mat::Identity(n_, n_) - u * u.transpose();
      const Mat norm_hess = jac.transpose() * proj * jac / ny;
      g -= ds / s;
      hess += ds * ds.transpose() / (s * s) + norm_hess / s;
    }
  }

 private:
  int n_;
  int np_ = 0;
  const std::vector<Halfspace>& facets_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace

Ellipsoid john_ellipsoid(const ConvexBody& body, const JohnOptions& opts) {
  if (body.cached_john()) return *body.cached_john();
  const int n = body.dim();
  if (n == 1) {
    const double lo = body.vertices()[0][0], hi = body.vertices()[1][0];
    if (!(hi > lo)) fail(ErrorKind::Degenerate, "degenerate body");
    const double half = 0.5 * (hi - lo);
    return Ellipsoid{make_vec({0.5 * (lo + hi)}), Mat::Constant(1, 1, 1.0 / (half * half))};
  }
  if (!(body.volume() > 0)) fail(ErrorKind::Degenerate, "degenerate body");

  const auto& facets = body.facets();
  InscribedBarrier barrier(n, facets);

  Vec d0 = Vec::Zero(n);
  for (const auto& v : body.vertices()) d0 += v;
  d0 /= static_cast<double>(body.vertices().size());
  double r0 = std::numeric_limits<double>::infinity();
  for (const auto& h : facets) r0 = std::min(r0, h.offset - h.normal.dot(d0));
  if (!(r0 > 0)) fail(ErrorKind::Degenerate, "degenerate body");
  Vec x = barrier.pack(0.5 * r0 * Mat::Identity(n, n), d0);

  const double m = static_cast<double>(facets.size());
  // log det gap of the central path point is m / t.
  const double gap_target = opts.rel_volume_tol;
  for (double t = 1.0;; t *= 8.0) {
    for (int it = 0; it < opts.max_newton; ++it) {
      Vec g;
      Mat h;
      barrier.derivatives(x, t, g, h);
      const Vec step = -h.ldlt().solve(g);
      const double decrement = -g.dot(step);
      if (!(decrement >= 0)) fail(ErrorKind::Numerical, "john_ellipsoid: Newton direction lost");
      // f is O(t), so roundoff floors the attainable decrement
      if (0.5 * decrement < 1e-10 + 1e-15 * t) break;
      double f0;
      barrier.value(x, t, f0);
      double alpha = 1.0, f1;
      while (!barrier.value(x + alpha * step, t, f1) || f1 > f0 - 0.25 * alpha * decrement) {
        alpha *= 0.5;
        if (alpha < 1e-16) break;
      }
      if (alpha < 1e-16) break;
      if ((alpha * step).norm() <= 1e-15 * x.norm()) break;
      x += alpha * step;
      if (it + 1 == opts.max_newton)
        fail(ErrorKind::Numerical, "john_ellipsoid: Newton iteration did not converge");
    }
    if (m / t < gap_target) break;
  }

  const Mat b = barrier.shape_of(x);
  const Mat a = (b * b).inverse();
  return Ellipsoid{barrier.center_of(x), 0.5 * (a + a.transpose())};
}

}  // namespace geomax
