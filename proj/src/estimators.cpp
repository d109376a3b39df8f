// Sampled lower bounds for doubling and A_p constants.
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "geomax/error.hpp"
#include "geomax/measure.hpp"
#include "kernels.hpp"

namespace geomax {

namespace {

constexpr int kOffsetBudget = 64;

// Log-uniform integer in [1, top].
int draw_size(std::mt19937_64& rng, int top) {
  std::uniform_real_distribution<double> u(0.0, std::log(static_cast<double>(top) + 1.0));
  return std::clamp(static_cast<int>(std::exp(u(rng))), 1, top);
}

// Uniform start in [0, G - s], snapped to either window edge one time in eight each;
// the extreme ratios of singular weights sit at the window edge.
int draw_start(std::mt19937_64& rng, int G, int s) {
  std::uniform_int_distribution<int> pick(0, 7);
  const int k = pick(rng);
  if (k == 0) return 0;
  if (k == 1) return G - s;
  return std::uniform_int_distribution<int>(0, G - s)(rng);
}

RectBox box_of(const GridMeasure& mu, const CellRange& r) { return mu.cell_box(r); }

// Offsets to try inside per-axis ranges [lo[a], hi[a]] (inclusive).
std::vector<std::array<int, 3>> offsets_to_try(std::mt19937_64& rng, int n, const std::array<int, 3>& lo,
                                               const std::array<int, 3>& hi) {
  std::vector<std::array<int, 3>> out;
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
  if (total <= static_cast<std::size_t>(kOffsetBudget)) {
    for (std::size_t q = 0; q < total; ++q) {
      std::array<int, 3> d{0, 0, 0};
      std::size_t r = q;
      for (int a = 0; a < n; ++a) {
        const std::size_t w = static_cast<std::size_t>(hi[a] - lo[a] + 1);
        d[a] = lo[a] + static_cast<int>(r % w);
        r /= w;
      }
      out.push_back(d);
    }
    return out;
  }
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    std::array<int, 3> d{0, 0, 0};
    for (int a = 0; a < n; ++a) d[a] = (mask >> a) & 1U ? hi[a] : lo[a];
    out.push_back(d);
  }
  std::array<int, 3> mid{0, 0, 0};
  for (int a = 0; a < n; ++a) mid[a] = (lo[a] + hi[a]) / 2;
  out.push_back(mid);
  for (int q = 0; q < kOffsetBudget; ++q) {
    std::array<int, 3> d{0, 0, 0};
    for (int a = 0; a < n; ++a) d[a] = std::uniform_int_distribution<int>(lo[a], hi[a])(rng);
    out.push_back(d);
  }
  return out;
}

DoublingReport doubling_rect(const GridMeasure& mu, const BasisFamily& family, std::size_t samples,
                             std::uint64_t seed) {
  const int n = mu.dim();
  const int G = mu.resolution();
  require(G >= 2, "doubling estimate needs at least two cells per axis");
  std::mt19937_64 rng(seed);
  DoublingReport rep;
  rep.seed = seed;
  for (std::size_t it = 0; it < samples; ++it) {
    std::array<int, 3> s{1, 1, 1};
    if (family.kind == BasisKind::AxisCubes) {
      const int c = draw_size(rng, G / 2);
      for (int a = 0; a < n; ++a) s[a] = c;
    } else {
      for (int a = 0; a < n; ++a) s[a] = draw_size(rng, G / 2);
    }
    CellRange B;
    std::array<int, 3> dlo{0, 0, 0}, dhi{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      B.lo[a] = draw_start(rng, G, s[a]);
      B.hi[a] = B.lo[a] + s[a];
      // big = [lo - d, lo - d + 2s) with 0 <= d <= s, inside the grid.
      dlo[a] = std::max(0, B.lo[a] + 2 * s[a] - G);
      dhi[a] = std::min(s[a], B.lo[a]);
    }
    ++rep.sample_count;
    const long double mb = mu.box_mass(B);
    const auto offsets = offsets_to_try(rng, n, dlo, dhi);
    if (mb <= 0) {
      ++rep.skipped;
      continue;
    }
    for (const auto& d : offsets) {
      CellRange big;
      for (int a = 0; a < n; ++a) {
        big.lo[a] = B.lo[a] - d[a];
        big.hi[a] = big.lo[a] + 2 * s[a];
      }
      const double ratio = static_cast<double>(mu.box_mass(big) / mb);
      if (ratio > rep.estimate || rep.witness_small.dim() == 0) {
        rep.estimate = std::max(rep.estimate, ratio);
        rep.witness_small = box_of(mu, B);
        rep.witness_big = box_of(mu, big);
      }
    }
  }
  return rep;
}

long double mask_mass(const GridMeasure& mu, const std::vector<detail::RowSpan>& rows, int t0, int t1) {
  long double m = 0;
  for (const auto& r : rows) {
    CellRange c;
    c.lo = {t0 + r.a, t1 + r.row, 0};
    c.hi = {t0 + r.b, t1 + r.row + 1, 1};
    m += mu.box_mass(c);
  }
  return m;
}

bool mask_fits(const GridMeasure& mu, const std::vector<detail::RowSpan>& rows, int t0, int t1) {
  const int G = mu.resolution();
  const int rows_max = mu.dim() == 2 ? G : 1;
  for (const auto& r : rows)
    if (t0 + r.a < 0 || t0 + r.b > G || t1 + r.row < 0 || t1 + r.row >= rows_max) return false;
  return true;
}

// Every cell of the small copy (at t) is a cell of the big copy (at u).
bool mask_inside(const std::vector<detail::RowSpan>& small, int t0, int t1,
                 const std::vector<detail::RowSpan>& big, int u0, int u1) {
  for (const auto& r : small) {
    const int row = t1 + r.row - u1;
    const auto it = std::find_if(big.begin(), big.end(), [&](const detail::RowSpan& b) { return b.row == row; });
    if (it == big.end()) return false;
    if (t0 + r.a < u0 + it->a || t0 + r.b > u0 + it->b) return false;
  }
  return true;
}

RectBox mask_box(const GridMeasure& mu, const std::vector<detail::RowSpan>& rows, int t0, int t1) {
  CellRange c;
  c.lo = {std::numeric_limits<int>::max(), t1 + rows.front().row, 0};
  c.hi = {std::numeric_limits<int>::min(), t1 + rows.back().row + 1, 1};
  for (const auto& r : rows) {
    c.lo[0] = std::min(c.lo[0], t0 + r.a);
    c.hi[0] = std::max(c.hi[0], t0 + r.b);
  }
  return mu.cell_box(c);
}

DoublingReport doubling_shape(const GridMeasure& mu, const BasisFamily& family, std::size_t samples,
                              std::uint64_t seed) {
  const int n = mu.dim();
  if (n > 2) fail(ErrorKind::InvalidArgument, "convex-shape bases are supported in 1D and 2D only");
  const ConvexBody& gen = *family.generator;
  const Vec cj = gen.cached_john()->center;
  const int G = mu.resolution();
  const int rows_max = n == 2 ? G : 1;
  std::mt19937_64 rng(seed);
  DoublingReport rep;
  rep.seed = seed;

  struct Pair {
    ConvexBody small;
    std::vector<detail::RowSpan> ms, mb;
  };
  std::vector<std::optional<Pair>> cache(family.scales.size());
  std::uniform_int_distribution<std::size_t> pick(0, family.scales.size() - 1);

  for (std::size_t it = 0; it < samples; ++it) {
    const std::size_t si = pick(rng);
    if (!cache[si]) {
      const double s = family.scales[si];
      Pair p{gen.scaled_about(cj, s), {}, {}};
      p.ms = detail::raster_mask(p.small, cj, mu);
      p.mb = detail::raster_mask(gen.scaled_about(cj, 2 * s), cj, mu);
      cache[si] = std::move(p);
    }
    const Pair& p = *cache[si];
    ++rep.sample_count;
    if (p.ms.empty() || p.mb.empty()) {
      ++rep.skipped;
      continue;
    }
    // Random small placement inside the grid.
    int amin = p.ms.front().a, bmax = p.ms.front().b;
    for (const auto& r : p.ms) {
      amin = std::min(amin, r.a);
      bmax = std::max(bmax, r.b);
    }
    const int t0lo = -amin, t0hi = G - bmax;
    const int t1lo = -p.ms.front().row, t1hi = rows_max - 1 - p.ms.back().row;
    if (t0lo > t0hi || t1lo > t1hi) {
      ++rep.skipped;
      continue;
    }
    const int t0 = draw_start(rng, t0hi - t0lo + 1, 1) + t0lo;
    const int t1 = draw_start(rng, t1hi - t1lo + 1, 1) + t1lo;
    const long double ms = mask_mass(mu, p.ms, t0, t1);
    if (ms <= 0) {
      ++rep.skipped;
      continue;
    }
    // Offsets o with cj + o h inside the small body: the big copy anchored at t - o contains it.
    const RectBox bb = p.small.bounding_box();
    std::array<int, 3> olo{0, 0, 0}, ohi{0, 0, 0};
    for (int a = 0; a < n; ++a) {
      olo[a] = static_cast<int>(std::ceil((bb.lo[a] - cj[a]) / mu.cell_side(a)));
      ohi[a] = static_cast<int>(std::floor((bb.hi[a] - cj[a]) / mu.cell_side(a)));
    }
    for (const auto& o : offsets_to_try(rng, n, olo, ohi)) {
      Vec q = cj;
      for (int a = 0; a < n; ++a) q[a] += o[a] * mu.cell_side(a);
      if (!p.small.contains(q, 1e-12)) continue;
      const int u0 = t0 - o[0], u1 = n == 2 ? t1 - o[1] : 0;
      if (!mask_fits(mu, p.mb, u0, u1) || !mask_inside(p.ms, t0, t1, p.mb, u0, u1)) continue;
      const double ratio = static_cast<double>(mask_mass(mu, p.mb, u0, u1) / ms);
      if (ratio > rep.estimate || rep.witness_small.dim() == 0) {
        rep.estimate = std::max(rep.estimate, ratio);
        rep.witness_small = mask_box(mu, p.ms, t0, t1);
        rep.witness_big = mask_box(mu, p.mb, u0, u1);
      }
    }
  }
  return rep;
}

}  // namespace

DoublingReport doubling_constant_estimate(const GridMeasure& mu, const BasisFamily& family,
                                          std::size_t samples, std::uint64_t seed) {
  family.validate();
  require(samples > 0, "doubling estimate needs at least one sample");
  DoublingReport rep = family.kind == BasisKind::ConvexShape ? doubling_shape(mu, family, samples, seed)
                                                             : doubling_rect(mu, family, samples, seed);
  if (rep.skipped == rep.sample_count) fail(ErrorKind::Degenerate, "measure vanishes on basis");
  return rep;
}

ApReport ap_constant_estimate(const GridMeasure& w, const GridMeasure& dual, double p,
                              const BasisFamily& family, std::size_t samples, std::uint64_t seed) {
  require(p > 1, "A_p estimate needs p > 1");
  require(w.shape() == dual.shape(), "A_p estimate: weight and dual grids differ");
  family.validate();
  if (family.kind == BasisKind::ConvexShape)
    fail(ErrorKind::InvalidArgument, "A_p estimation supports rectangle and cube bases only");
  const int n = w.dim();
  const int G = w.resolution();
  std::vector<double> inf_cells(dual.shape().size());
  for (std::size_t i = 0; i < inf_cells.size(); ++i) inf_cells[i] = std::isfinite(dual.mass(i)) ? 0.0 : 1.0;
  const PrefixSum infinite(dual.shape(), inf_cells);

  std::mt19937_64 rng(seed);
  ApReport rep;
  for (std::size_t it = 0; it < samples; ++it) {
    CellRange B;
    const int cube = draw_size(rng, G);
    for (int a = 0; a < n; ++a) {
      const int s = family.kind == BasisKind::AxisCubes ? cube : draw_size(rng, G);
      B.lo[a] = draw_start(rng, G, s);
      B.hi[a] = B.lo[a] + s;
    }
    ++rep.sample_count;
    const double vol = static_cast<double>(B.count()) * w.cell_volume();
    const long double wb = w.box_mass(B);
    double value;
    if (infinite.sum(B) > 0.5L || wb <= 0) {
      ++rep.infinite_samples;
      value = std::numeric_limits<double>::infinity();
    } else {
      const double aw = static_cast<double>(wb) / vol;
      const double ad = static_cast<double>(dual.box_mass(B)) / vol;
      value = aw * std::pow(ad, p - 1);
    }
    if (value > rep.estimate || rep.witness.dim() == 0) {
      rep.estimate = std::max(rep.estimate, value);
      rep.witness = w.cell_box(B);
    }
  }
  return rep;
}

}  // namespace geomax
