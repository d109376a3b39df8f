#include <doctest.h>

#include <cmath>
#include <sstream>

#include "geomax/error.hpp"
#include "geomax/measure.hpp"

using namespace geomax;

TEST_CASE("realize closed forms") {
  const GridMeasure leb = realize(WeightSpec::lebesgue(), RectBox::make({0}, {1}), 4);
  for (int i = 0; i < 4; ++i) CHECK(leb.mass(i) == doctest::Approx(0.25));

  const GridMeasure pw = realize(WeightSpec::power({1.0}), RectBox::make({0}, {1}), 2);
  CHECK(pw.mass(0) == doctest::Approx(0.125));
  CHECK(pw.mass(1) == doctest::Approx(0.375));

  // standard normal density, tests/oracles/weight_oracle.py
  const GridMeasure g = realize(WeightSpec::gaussian(), RectBox::make({-4}, {4}), 256);
  CHECK(std::abs(g.total() - 0.9999366575163338) < 1e-4);

  CHECK_THROWS_AS(realize(WeightSpec::power({-1.0}), RectBox::make({0}, {1}), 4), Error);
  CHECK_THROWS_AS(realize(WeightSpec::lebesgue(), RectBox::make({0}, {1}), 100), Error);
}

TEST_CASE("integrate") {
  const GridMeasure leb = realize(WeightSpec::lebesgue(), RectBox::make({0, 0}, {1, 1}), 64);
  CHECK(integrate(leb, RectBox::make({0, 0}, {0.5, 0.5})).value == doctest::Approx(0.25));
  CHECK(integrate(leb, leb.window()).value == doctest::Approx(leb.total()));
  CHECK(integrate(leb, RectBox::make({0.5, 0.5}, {2, 2})).truncated);
  for (int res : {2, 8, 1024}) {
    const GridMeasure pw = realize(WeightSpec::power({1.0}), RectBox::make({0}, {1}), res);
    CHECK(integrate(pw, RectBox::make({0.5}, {1})).value == doctest::Approx(0.375).epsilon(1e-12));
  }
}

TEST_CASE("product weights factor over rectangles") {
  const WeightSpec spec =
      WeightSpec::product({Factor1D{Factor1D::Kind::Power, 0.5}, Factor1D{Factor1D::Kind::Gaussian, 0}});
  const GridMeasure mu = realize(spec, RectBox::make({-1, -2}, {1, 2}), 64);
  const RectBox r = RectBox::make({-0.5, -1}, {0.75, 1.5});
  const double expect = spec.factor(0)->integral(-0.5, 0.75) * spec.factor(1)->integral(-1, 1.5);
  CHECK(std::abs(integrate(mu, r).value - expect) <= 1e-10 * expect);
}

TEST_CASE("positivity and monotonicity") {
  const GridMeasure mu = realize(WeightSpec::dyadic_random(3, 0.2, 0.8), RectBox::make({0, 0}, {1, 1}), 32);
  for (double m : mu.masses()) CHECK(m > 0);
  const double a = integrate(mu, RectBox::make({0.25, 0.25}, {0.5, 0.5})).value;
  const double b = integrate(mu, RectBox::make({0.25, 0}, {0.75, 0.5})).value;
  CHECK(a <= b);
  long double s = 0;
  for (double m : mu.masses()) s += m;
  CHECK(std::abs(static_cast<double>(s) - mu.total()) <= 1e-12 * mu.total());
}

TEST_CASE("doubling estimates") {
  const GridMeasure leb = realize(WeightSpec::lebesgue(), RectBox::make({0, 0}, {1, 1}), 64);
  const DoublingReport d = doubling_constant_estimate(leb, BasisFamily::rectangles(), 2000, 1);
  CHECK(d.estimate == doctest::Approx(4.0).epsilon(0.01));

  // more samples never lower the estimate (same seed prefix)
  const GridMeasure pw = realize(WeightSpec::power({0.7}), RectBox::make({0}, {1}), 1024);
  const double e1 = doubling_constant_estimate(pw, BasisFamily::rectangles(), 200, 5).estimate;
  const double e2 = doubling_constant_estimate(pw, BasisFamily::rectangles(), 2000, 5).estimate;
  CHECK(e2 >= e1);
}

TEST_CASE("A_p estimates") {
  const RectBox w1 = RectBox::make({0}, {1});
  const GridMeasure one = realize(WeightSpec::lebesgue(), w1, 256);
  const GridMeasure one_dual = realize_power(WeightSpec::lebesgue(), w1, 256, -1.0);
  CHECK(ap_constant_estimate(one, one_dual, 2.0, BasisFamily::rectangles(), 500, 1).estimate == 1.0);

  const GridMeasure x = realize(WeightSpec::power({1.0}), w1, 256);
  const GridMeasure x_dual = realize_power(WeightSpec::power({1.0}), w1, 256, -1.0);
  const ApReport r = ap_constant_estimate(x, x_dual, 2.0, BasisFamily::rectangles(), 500, 1);
  CHECK(std::isinf(r.estimate));
  CHECK(r.infinite_samples > 0);
}

TEST_CASE("growth constant") {
  const GridMeasure l1 = realize(WeightSpec::lebesgue(), RectBox::make({0}, {1}), 64);
  const GrowthReport g1 = growth_constant(l1, DyadicMesh(l1.window(), 6), 2.0);
  CHECK(g1.gamma == doctest::Approx(1.5));
  CHECK(g1.violations.empty());
  const GridMeasure l2 = realize(WeightSpec::lebesgue(), RectBox::make({0, 0}, {1, 1}), 16);
  const GrowthReport g2 = growth_constant(l2, DyadicMesh(l2.window(), 4), 4.0);
  CHECK(g2.gamma == doctest::Approx(1.75));
  CHECK(g2.violations.empty());
  // children carrying 95% of the parent cannot satisfy gamma = 1.5
  const GridMeasure skew = realize(WeightSpec::dyadic_random(1, 0.05, 0.95), RectBox::make({0}, {1}), 64);
  CHECK_FALSE(growth_constant(skew, DyadicMesh(skew.window(), 6), 2.0).violations.empty());
}

TEST_CASE("pushforward") {
  const GridMeasure leb = realize(WeightSpec::lebesgue(), RectBox::make({0}, {2}), 64);
  const GridMeasure same = pushforward_affine(leb, AffineMap{Mat::Identity(1, 1), Vec::Zero(1)});
  CHECK(std::equal(same.masses().begin(), same.masses().end(), leb.masses().begin()));
  Mat half = Mat::Identity(1, 1) * 0.5;
  const GridMeasure t = pushforward_affine(leb, AffineMap{half, Vec::Zero(1)});
  CHECK(t.window().hi[0] == doctest::Approx(1.0));
  CHECK(t.total() == doctest::Approx(2.0));
  for (double m : t.masses()) CHECK(m == doctest::Approx(2.0 / 64));
  Mat rot(2, 2);
  rot << 0, 1, 1, 0;
  const GridMeasure l2 = realize(WeightSpec::lebesgue(), RectBox::make({0, 0}, {1, 1}), 8);
  CHECK_THROWS_AS(pushforward_affine(l2, AffineMap{rot, Vec::Zero(2)}), Error);
}

TEST_CASE("dump and load round trip") {
  const GridMeasure mu = realize(WeightSpec::power({0.5, 1.0}), RectBox::make({0, -1}, {1, 1}), 16);
  std::stringstream ss;
  dump(mu, ss);
  const GridMeasure back = load_measure(ss);
  CHECK(back.shape() == mu.shape());
  CHECK(std::equal(back.masses().begin(), back.masses().end(), mu.masses().begin()));
}
