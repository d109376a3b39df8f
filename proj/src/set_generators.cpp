#include <algorithm>
#include <cmath>

#include "geomax/error.hpp"
#include "geomax/tauberian.hpp"

namespace geomax {

namespace {

int log_uniform(std::mt19937_64& rng, int top) {
  top = std::max(1, top);
  std::uniform_real_distribution<double> u(0.0, std::log(static_cast<double>(top) + 1.0));
  return std::clamp(static_cast<int>(std::exp(u(rng))), 1, top);
}

CellRange random_box(std::mt19937_64& rng, const GridShape& g, int max_side) {
  CellRange r;
  for (int a = 0; a < g.dim; ++a) {
    const int s = log_uniform(rng, std::min(max_side, g.res));
    r.lo[a] = std::uniform_int_distribution<int>(0, g.res - s)(rng);
    r.hi[a] = r.lo[a] + s;
  }
  return r;
}

// One box, up to a quarter of the window per axis.
CellSet single_v1(const GridShape& g, std::mt19937_64& rng) {
  return CellSet::from_range(g, random_box(rng, g, std::max(1, g.res / 4)));
}

// 2-8 boxes with independently drawn sides (mixed eccentricities).
CellSet scattered_v1(const GridShape& g, std::mt19937_64& rng) {
  CellSet s(g);
  const int count = std::uniform_int_distribution<int>(2, 8)(rng);
  for (int i = 0; i < count; ++i) s.fill(random_box(rng, g, std::max(1, g.res / 8)));
  return s;
}

// Random union of dyadic boxes of one generation.
CellSet dyadic_v1(const GridShape& g, std::mt19937_64& rng) {
  const int top = std::min(log2_exact(g.res), 6);
  const int d = std::uniform_int_distribution<int>(1, std::max(1, top))(rng);
  const int per = g.res >> d;
  const double p = std::uniform_real_distribution<double>(0.05, 0.3)(rng);
  const GridShape level{g.dim, 1 << d};
  CellSet s(g);
  std::bernoulli_distribution keep(p);
  for (std::size_t e = 0; e < level.size(); ++e) {
    if (!keep(rng)) continue;
    const auto c = level.coords(e);
    CellRange r;
    for (int a = 0; a < g.dim; ++a) {
      r.lo[a] = c[a] * per;
      r.hi[a] = r.lo[a] + per;
    }
    s.fill(r);
  }
  if (s.empty()) {
    const auto c = level.coords(std::uniform_int_distribution<std::size_t>(0, level.size() - 1)(rng));
    CellRange r;
    for (int a = 0; a < g.dim; ++a) {
      r.lo[a] = c[a] * per;
      r.hi[a] = r.lo[a] + per;
    }
    s.fill(r);
  }
  return s;
}

}  // namespace

std::vector<std::string> set_generator_names() { return {"dyadic/v1", "scattered/v1", "single/v1"}; }

CellSet generate_set(const std::string& generator, const GridShape& shape, std::mt19937_64& rng) {
  if (generator == "single/v1") return single_v1(shape, rng);
  if (generator == "scattered/v1") return scattered_v1(shape, rng);
  if (generator == "dyadic/v1") return dyadic_v1(shape, rng);
  fail(ErrorKind::InvalidArgument, "unknown set generator '" + generator + "'");
}

}  // namespace geomax
