#include "geomax/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "geomax/error.hpp"
#include "kernels.hpp"

namespace geomax {

namespace {

CellRange full_range(const GridShape& g) {
  CellRange r;
  for (int a = 0; a < g.dim; ++a) r.hi[a] = g.res;
  return r;
}

CellRange resolve_region(const GridMeasure& mu, const MaximalOptions& opts) {
  if (!opts.truncation) return full_range(mu.shape());
  CellRange r = *opts.truncation;
  for (int a = 0; a < 3; ++a) {
    if (a >= mu.dim()) {
      r.lo[a] = 0;
      r.hi[a] = 1;
      continue;
    }
    require(r.lo[a] >= 0 && r.hi[a] <= mu.resolution() && r.lo[a] < r.hi[a],
            "truncation range outside the grid");
  }
  return r;
}

detail::KernelResult run_kernel(const GridMeasure& mu, const BasisFamily& family,
                                std::span<const double> f, const CellRange& region,
                                const MaximalOptions& opts) {
  family.validate();
  if (family.kind == BasisKind::ConvexShape) {
    require(family.generator->dim() == mu.dim(), "basis/measure dimension mismatch");
    return detail::shape_sup(mu, family, f, region, opts.threads);
  }
  return detail::rect_sup(mu, family, f, region, opts.max_side, opts.threads);
}

MaximalField make_field(const GridMeasure& mu, const BasisFamily& family, const CellRange& region,
                        detail::KernelResult&& k) {
  MaximalField out;
  out.shape = mu.shape();
  out.values = std::move(k.sup);
  for (double& v : out.values)
    if (!std::isfinite(v)) v = 0.0;  // no admissible element
  out.basis = family.descriptor();
  out.measure_id = mu.id();
  out.window = mu.window();
  out.truncation = region;
  out.max_eccentricity = k.eccentricity;
  return out;
}

}  // namespace

MaximalField maximal_function(const GridMeasure& mu, const BasisFamily& family,
                              std::span<const double> f, const MaximalOptions& opts) {
  require(f.size() == mu.shape().size(), "maximal_function: function does not match the grid");
  for (double v : f) {
    if (!std::isfinite(v)) fail(ErrorKind::InvalidArgument, "maximal_function: f must be finite");
    if (v < 0) fail(ErrorKind::InvalidArgument, "maximal_function: f must be nonnegative (pass |f|)");
  }
  const CellRange region = resolve_region(mu, opts);
  return make_field(mu, family, region, run_kernel(mu, family, f, region, opts));
}

MaximalField maximal_indicator(const GridMeasure& mu, const BasisFamily& family, const CellSet& E,
                               const MaximalOptions& opts) {
  require(E.shape() == mu.shape(), "maximal_indicator: set does not match the grid");
  const CellRange region = resolve_region(mu, opts);
  if (E.empty()) {
    family.validate();
    MaximalField z = make_field(mu, family, region, detail::KernelResult{std::vector<double>(mu.shape().size(), 0.0), 1});
    return z;
  }
  const auto ind = E.indicator();
  MaximalField out = make_field(mu, family, region, run_kernel(mu, family, ind, region, opts));
  for (double& v : out.values) v = std::clamp(v, 0.0, 1.0);
  return out;
}

AverageEnvelope average_envelope(const GridMeasure& mu, const BasisFamily& family,
                                 std::span<const double> f, const MaximalOptions& opts) {
  require(f.size() == mu.shape().size(), "average_envelope: function does not match the grid");
  const CellRange region = resolve_region(mu, opts);
  AverageEnvelope env;
  env.sup = run_kernel(mu, family, f, region, opts).sup;
  std::vector<double> neg(f.begin(), f.end());
  for (double& v : neg) v = -v;
  env.inf = run_kernel(mu, family, neg, region, opts).sup;
  for (double& v : env.inf) v = -v;
  return env;
}

CellSet superlevel(const MaximalField& field, double level, bool strict) {
  CellSet s(field.shape);
  const double slack = kTieTol * std::max(1.0, std::abs(level));
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double v = field.values[i];
    s.set(i, strict ? v > level + slack : v >= level - slack);
  }
  return s;
}

HaloResult halo_iterate(const GridMeasure& mu, const BasisFamily& family, const CellSet& E,
                        double beta, int k, const MaximalOptions& opts) {
  require(beta > 0 && beta < 1, "halo_iterate: beta must lie in (0,1)");
  require(k >= 0, "halo_iterate: k must be >= 0");
  HaloResult out;
  out.iterates.push_back(E);
  for (int i = 1; i <= k; ++i) {
    const MaximalField f = maximal_indicator(mu, family, out.iterates.back(), opts);
    out.iterates.push_back(superlevel(f, beta, false));
    if (!out.truncated && out.iterates.back().touches_boundary()) {
      out.truncated = true;
      out.truncated_from = i;
    }
  }
  return out;
}

BasisFamily associated_family(const BasisFamily& convex_family) {
  require(convex_family.kind == BasisKind::ConvexShape, "associated_family: needs a convex-shape family");
  const ConvexBody& gen = *convex_family.generator;
  const RectBox r = associated_rectangle(gen);
  // Keep the generator's John center so that copies nest: R_{τB} = τR_B.
  const Ellipsoid e = gen.cached_john() ? *gen.cached_john() : john_ellipsoid(gen);
  Mat shape = Mat::Zero(gen.dim(), gen.dim());
  for (int a = 0; a < gen.dim(); ++a) shape(a, a) = 4.0 / (r.side(a) * r.side(a));
  ConvexBody box = ConvexBody::from_box(r).with_john(Ellipsoid{e.center, shape});
  return BasisFamily::shape(box, convex_family.scales, convex_family.translation_step);
}

double comparability_constant(double delta, int n) {
  require(delta >= 1 && n >= 1, "comparability_constant: need delta >= 1 and n >= 1");
  return std::pow(delta, std::ceil(1.5 * std::log2(static_cast<double>(n)) - 1e-12));
}

ComparabilityReport comparability_check(const GridMeasure& mu, const BasisFamily& convex_family,
                                        const BasisFamily& rect_family, std::span<const double> f,
                                        double delta_mu, int margin, const MaximalOptions& opts) {
  ComparabilityReport rep;
  rep.constant = comparability_constant(delta_mu, mu.dim());
  MaximalField mb = maximal_function(mu, convex_family, f, opts);
  const MaximalField mg = maximal_function(mu, rect_family, f, opts);
  mb.comparability_constant = rep.constant;
  const GridShape& g = mu.shape();
  const double c = rep.constant * (1 + 1e-9);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto co = g.coords(i);
    bool inner = true;
    for (int a = 0; a < g.dim; ++a)
      if (co[a] < margin || co[a] >= g.res - margin) inner = false;
    if (!inner) continue;
    ++rep.checked;
    const double b = mb[i], r = mg[i];
    if (r > 0) rep.max_ratio_convex = std::max(rep.max_ratio_convex, b / r);
    if (b > 0) rep.max_ratio_rect = std::max(rep.max_ratio_rect, r / b);
    if (b > c * r || r > c * b) {
      if (rep.violations == 0) rep.first_violation = i;
      ++rep.violations;
    }
  }
  return rep;
}

}  // namespace geomax
