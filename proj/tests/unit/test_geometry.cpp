#include <doctest.h>

#include <cmath>
#include <random>

#include "geomax/error.hpp"
#include "geomax/geometry.hpp"

using namespace geomax;

namespace {

ConvexBody unit_square() { return ConvexBody::from_box(RectBox::make({0, 0}, {1, 1})); }

ConvexBody random_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec> pts;
  const int k = 3 + static_cast<int>(rng() % 8);
  for (int i = 0; i < k; ++i) pts.push_back(make_vec({u(rng), 0.6 * u(rng)}));
  return ConvexBody::from_points(2, pts);
}

}  // namespace

TEST_CASE("john ellipsoid of the unit square is the inscribed disk") {
  const Ellipsoid e = john_ellipsoid(unit_square());
  CHECK(e.center[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(e.center[1] == doctest::Approx(0.5).epsilon(1e-6));
  const Vec ax = e.semiaxes();
  CHECK(ax[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(ax[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("john ellipsoid of a regular triangle") {
  const ConvexBody tri = ConvexBody::regular_polygon(3, make_vec({0, 0}), 1.0);
  const Ellipsoid e = john_ellipsoid(tri);
  CHECK(std::abs(e.center[0]) < 1e-6);
  CHECK(std::abs(e.center[1]) < 1e-6);
  const Vec ax = e.semiaxes();
  CHECK(ax[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(ax[1] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("john ellipsoid of a quadrilateral matches the convex-optimization oracle") {
  // tests/oracles/john_oracle.py
  const ConvexBody q = ConvexBody::from_points(
      2, {make_vec({0, 0}), make_vec({2, 0}), make_vec({2.5, 1}), make_vec({0.5, 1.2})});
  const Ellipsoid e = john_ellipsoid(q);
  CHECK(e.center[0] == doctest::Approx(1.25).epsilon(1e-4));
  CHECK(e.center[1] == doctest::Approx(0.5500967).epsilon(1e-4));
  CHECK(e.shape(0, 0) == doctest::Approx(0.96447878).epsilon(1e-3));
  CHECK(e.shape(0, 1) == doctest::Approx(-0.27556909).epsilon(1e-3));
  CHECK(e.shape(1, 1) == doctest::Approx(3.38335774).epsilon(1e-3));
}

TEST_CASE("degenerate hull is rejected") {
  CHECK_THROWS_AS(ConvexBody::from_points(2, {make_vec({0, 0}), make_vec({1, 1}), make_vec({2, 2})}), Error);
}

TEST_CASE("john inclusion on random polygons") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const ConvexBody b = random_polygon(rng);
    const Ellipsoid e = john_ellipsoid(b);
    const double tol = 1e-6 * b.diameter();
    const Ellipsoid big = e.dilated(2.0);
    for (const auto& v : b.vertices()) CHECK(big.contains(v, tol));
    for (const auto& p : e.boundary_samples(64)) CHECK(b.contains(p, tol));
  }
}

TEST_CASE("associated rectangle examples") {
  const RectBox r = associated_rectangle(unit_square());
  CHECK(approx_equal(r, RectBox::make({-0.5, -0.5}, {1.5, 1.5}), 1e-6));
  // [-0.5,1.5]^2 inside 2^{3/2} square about its center
  const ConvexBody big = unit_square().scaled_about(make_vec({0.5, 0.5}), std::pow(2.0, 1.5));
  for (double x : {-0.5, 1.5})
    for (double y : {-0.5, 1.5}) CHECK(big.contains(make_vec({x, y}), 1e-12));

  const RectBox rb = associated_rectangle(ConvexBody::from_box(RectBox::make({1, 2}, {4, 3})));
  CHECK(rb.center()[0] == doctest::Approx(2.5));
  CHECK(rb.center()[1] == doctest::Approx(2.5));

  const RectBox rd = associated_rectangle(ConvexBody::disk(make_vec({0, 0}), 1.0, 512));
  CHECK(rd.side(0) == doctest::Approx(4).epsilon(1e-3));
  CHECK(rd.side(1) == doctest::Approx(4).epsilon(1e-3));
}

TEST_CASE("principal rectangle follows the ellipsoid axes") {
  // 4x1 rectangle rotated by 45 degrees: the axis box pokes out, the principal one does not
  const double r = std::sqrt(0.5);
  std::vector<Vec> pts;
  for (double a : {-2.0, 2.0})
    for (double b : {-0.5, 0.5}) pts.push_back(make_vec({r * (a - b), r * (a + b)}));
  ConvexBody slab = ConvexBody::from_points(2, pts);
  slab = slab.with_john(john_ellipsoid(slab));
  const ConvexBody P = principal_rectangle(slab);
  CHECK(P.volume() == doctest::Approx(16.0).epsilon(1e-5));
  const ConvexBody big = slab.scaled_about(make_vec({0, 0}), std::pow(2.0, 1.5));
  for (const auto& v : P.vertices()) CHECK(big.contains(v, 1e-9));
  const RectBox R = associated_rectangle(slab);
  CHECK_FALSE(big.contains(make_vec({R.hi[0], R.lo[1]}), 1e-9));

  const ConvexBody sq = principal_rectangle(unit_square());
  CHECK(approx_equal(sq.bounding_box(), RectBox::make({-0.5, -0.5}, {1.5, 1.5}), 1e-6));
}

TEST_CASE("dilate about john center") {
  const ConvexBody s = unit_square();
  const ConvexBody same = dilate_about_john(s, 1.0);
  for (std::size_t i = 0; i < s.vertices().size(); ++i) CHECK((same.vertices()[i] - s.vertices()[i]).norm() < 1e-9);
  const RectBox d = dilate_about_john(s, 2.0).bounding_box();
  CHECK(approx_equal(d, RectBox::make({-0.5, -0.5}, {1.5, 1.5}), 1e-6));
  const ConvexBody s1 = s.with_john(john_ellipsoid(s));
  const ConvexBody ab = dilate_about_john(dilate_about_john(s1, 1.5), 0.7);
  const ConvexBody c = dilate_about_john(s1, 1.05);
  for (std::size_t i = 0; i < c.vertices().size(); ++i) CHECK((ab.vertices()[i] - c.vertices()[i]).norm() < 1e-12);
}

TEST_CASE("corner dilation") {
  const DyadicMesh mesh(RectBox::make({0, 0}, {1, 1}), 6);
  const RectBox S = RectBox::make({0, 0}, {0.5, 0.5});
  CHECK(approx_equal(corner_dilate(mesh, S, 2), mesh.root()));
  CHECK(approx_equal(corner_dilate(mesh, S, 1), S));
  const RectBox T = RectBox::make({0.5, 0}, {1, 0.5});
  CHECK(approx_equal(corner_dilate(mesh, T, 1.5), RectBox::make({0.25, 0}, {1, 0.75})));
  CHECK(corner_dilate(mesh, T, 1.7).contains(corner_dilate(mesh, T, 1.2)));
  CHECK_THROWS_AS(corner_dilate(mesh, RectBox::make({0.1, 0}, {0.6, 0.5}), 2), Error);
}

TEST_CASE("ancestors") {
  const DyadicMesh mesh(RectBox::make({0, 0}, {1, 1}), 6);
  const RectBox R = RectBox::make({0.25, 0}, {0.5, 0.25});
  CHECK(approx_equal(ancestor(mesh, R, 0), R));
  CHECK(approx_equal(ancestor(mesh, R, 1), RectBox::make({0, 0}, {0.5, 0.5})));
  CHECK(approx_equal(ancestor(mesh, R, 2), mesh.root()));
  CHECK_THROWS_AS(ancestor(mesh, R, 3), Error);
  const RectBox deep = RectBox::make({0.375, 0.125}, {0.4375, 0.1875});
  CHECK(approx_equal(ancestor(mesh, ancestor(mesh, deep, 1), 2), ancestor(mesh, deep, 3)));
}

TEST_CASE("children partition the parent") {
  const DyadicMesh mesh(RectBox::make({0, 0}, {2, 1}), 4);
  const MeshIndex p{2, {1, 3, 0}};
  double vol = 0;
  for (const auto& c : mesh.children(p)) {
    CHECK(mesh.parent(c) == p);
    CHECK(mesh.element(p).contains(mesh.element(c), 1e-12));
    vol += mesh.element(c).volume();
  }
  CHECK(vol == doctest::Approx(mesh.element(p).volume()));
}
