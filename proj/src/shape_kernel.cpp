// Sampled maximal averages over homothetic copies of a convex generator.
// Copies are anchored by their John center on the cell-corner lattice, so the
// raster of a copy is a translate of one row-span mask per scale.
#include <algorithm>
#include <cmath>
#include <limits>

#include "geomax/error.hpp"
#include "kernels.hpp"

namespace geomax::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

std::vector<RowSpan> raster_mask(const ConvexBody& body, const Vec& anchor, const GridMeasure& mu) {
  std::vector<RowSpan> rows;
  const RectBox bb = body.bounding_box();
  const double h0 = mu.cell_side(0);
  const double slack = 1e-9;
  auto span_for = [&](double xl, double xr, int row) {
    const int a = static_cast<int>(std::ceil((xl - anchor[0]) / h0 - 0.5 - slack));
    const int b = static_cast<int>(std::floor((xr - anchor[0]) / h0 - 0.5 + slack)) + 1;
    if (b > a) rows.push_back({row, a, b});
  };
  if (mu.dim() == 1) {
    span_for(bb.lo[0], bb.hi[0], 0);
    return rows;
  }
  const double h1 = mu.cell_side(1);
  const int r0 = static_cast<int>(std::ceil((bb.lo[1] - anchor[1]) / h1 - 0.5 - slack));
  const int r1 = static_cast<int>(std::floor((bb.hi[1] - anchor[1]) / h1 - 0.5 + slack));
  for (int r = r0; r <= r1; ++r) {
    const double y = anchor[1] + (r + 0.5) * h1;
    double xl = -std::numeric_limits<double>::infinity();
    double xr = std::numeric_limits<double>::infinity();
    bool empty = false;
    for (const auto& f : body.facets()) {
      // n0 x + n1 y <= off
      const double rhs = f.offset - f.normal[1] * y;
      if (std::abs(f.normal[0]) < 1e-15) {
        if (rhs < -slack * h1) empty = true;
      } else if (f.normal[0] > 0) {
        xr = std::min(xr, rhs / f.normal[0]);
      } else {
        xl = std::max(xl, rhs / f.normal[0]);
      }
    }
    if (!empty && xl <= xr) span_for(xl, xr, r);
  }
  return rows;
}

KernelResult shape_sup(const GridMeasure& mu, const BasisFamily& family, std::span<const double> f,
                       const CellRange& region, int threads) {
  const int n = mu.dim();
  if (n > 2) fail(ErrorKind::InvalidArgument, "convex-shape bases are supported in 1D and 2D only");
  const ConvexBody& gen = *family.generator;
  const Vec cj = gen.cached_john() ? gen.cached_john()->center : john_ellipsoid(gen).center;
  const int step = family.translation_step;

  // Row prefix sums (long double) of numerator and mass.
  const int res = mu.resolution();
  const int nrows = n == 2 ? res : 1;
  std::vector<long double> pnum(static_cast<std::size_t>(nrows) * (res + 1), 0.0L);
  std::vector<long double> pden(pnum.size(), 0.0L);
  for (int j = 0; j < nrows; ++j)
    for (int i = 0; i < res; ++i) {
      const std::size_t c = mu.shape().index(i, j);
      const double m = std::isfinite(mu.mass(c)) ? mu.mass(c) : 0.0;
      const std::size_t at = static_cast<std::size_t>(j) * (res + 1) + i;
      pnum[at + 1] = pnum[at] + static_cast<long double>(f[c]) * m;
      pden[at + 1] = pden[at] + m;
    }
  auto row_sum = [&](const std::vector<long double>& p, int j, int a, int b) {
    const std::size_t base = static_cast<std::size_t>(j) * (res + 1);
    return p[base + b] - p[base + a];
  };

  const int lo1 = n == 2 ? region.lo[1] : 0;
  const int hi1 = n == 2 ? region.hi[1] : 1;
  threads = resolve_threads(threads);
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(family.scales.size())));
  std::vector<std::vector<double>> local(static_cast<std::size_t>(workers),
                                         std::vector<double>(mu.shape().size(), kNegInf));

  parallel_tasks(family.scales.size(), workers, [&](std::size_t si, int w) {
    const ConvexBody body = gen.scaled_about(cj, family.scales[si]);
    // Translation t puts the John center on the lattice point lo + t h.
    const auto rows = raster_mask(body, cj, mu);
    if (rows.empty()) return;
    int rmin = rows.front().row, rmax = rows.back().row;
    int amin = rows.front().a, bmax = rows.front().b;
    for (const auto& r : rows) {
      amin = std::min(amin, r.a);
      bmax = std::max(bmax, r.b);
    }
    // Valid translations keep every mask cell inside the region.
    const int t0lo = region.lo[0] - amin, t0hi = region.hi[0] - bmax;  // inclusive
    const int t1lo = lo1 - rmin, t1hi = hi1 - 1 - rmax;
    if (t0lo > t0hi || t1lo > t1hi) return;
    const int W = t0hi - t0lo + 1;
    std::vector<double> avg(static_cast<std::size_t>(W));
    std::vector<double> spread;
    std::vector<int> dq;
    auto& out = local[static_cast<std::size_t>(w)];
    for (int t1 = t1lo; t1 <= t1hi; ++t1) {
      if (((t1 % step) + step) % step != 0) continue;
      bool any = false;
      for (int i = 0; i < W; ++i) {
        const int t0 = t0lo + i;
        if (((t0 % step) + step) % step != 0) {
          avg[i] = kNegInf;
          continue;
        }
        long double sn = 0, sd = 0;
        for (const auto& r : rows) {
          sn += row_sum(pnum, t1 + r.row, t0 + r.a, t0 + r.b);
          sd += row_sum(pden, t1 + r.row, t0 + r.a, t0 + r.b);
        }
        avg[i] = sd > 0 ? static_cast<double>(sn / sd) : kNegInf;
        any = any || sd > 0;
      }
      if (!any) continue;
      for (const auto& r : rows) {
        // Cell g in row t1+r.row is covered by t0 in [g - b + 1, g - a].
        const int len = r.b - r.a;
        spread.resize(static_cast<std::size_t>(W + len - 1));
        sliding_max(avg.data(), 1, W, len, spread.data(), 1, dq);
        const int g0 = t0lo + r.a;  // cell of spread[0]
        const int j = t1 + r.row;
        for (int q = 0; q < W + len - 1; ++q) {
          const std::size_t c = mu.shape().index(g0 + q, j);
          out[c] = std::max(out[c], spread[q]);
        }
      }
    }
  });

  KernelResult res_out;
  res_out.sup.assign(mu.shape().size(), kNegInf);
  for (const auto& l : local)
    for (std::size_t c = 0; c < l.size(); ++c) res_out.sup[c] = std::max(res_out.sup[c], l[c]);
  const RectBox bb = gen.bounding_box();
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int a = 0; a < n; ++a) {
    lo = std::min(lo, bb.side(a));
    hi = std::max(hi, bb.side(a));
  }
  res_out.eccentricity = hi / lo;
  return res_out;
}

}  // namespace geomax::detail
