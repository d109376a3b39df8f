#include <algorithm>
#include <cmath>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"

namespace geomax {

AnnulusResult annulus_measure(const GridMeasure& mu, const ConvexBody& K, const RectBox& Q, double eps,
                              double delta) {
  require(K.dim() == mu.dim() && Q.dim() == mu.dim(), "annulus_measure: dimension mismatch");
  require(eps > 0, "annulus_measure: eps must be positive");
  require(delta >= 1, "annulus_measure: doubling constant must be >= 1");
  double cell = std::numeric_limits<double>::infinity();
  for (int a = 0; a < mu.dim(); ++a) cell = std::min(cell, mu.cell_side(a));
  if (eps < cell * (1 - 1e-12)) fail(ErrorKind::Resolution, "resolution insufficient for eps");

  AnnulusResult out;
  long double mass = 0;
  for (std::size_t i = 0; i < mu.shape().size(); ++i) {
    const Vec x = mu.cell_center(i);
    if (K.contains(x, 1e-12)) continue;
    if (K.distance(x) < eps) mass += mu.mass(i);
  }
  out.mass = static_cast<double>(mass);
  const int n = mu.dim();
  const double expo = 4.0 + std::ceil(std::log2(34.0 * std::sqrt(static_cast<double>(n))));
  const double muQ = integrate(mu, Q).value;
  out.bound = 9.0 * std::pow(delta, expo) / std::log2(1.0 / eps) * muQ;
  return out;
}

XiResult xi_constant(const GridMeasure& mu, const std::optional<ConvexBody>& K, const RectBox& Q, int m) {
  require(m >= 1, "xi_constant: m must be >= 1");
  require(Q.dim() == mu.dim(), "xi_constant: dimension mismatch");
  if (!mu.window().contains(Q, 1e-12) || !mu.grid_aligned(Q))
    fail(ErrorKind::Resolution, "xi_constant: Q is not grid-aligned");
  const DyadicMesh mesh(Q, m);
  check_mesh_on_grid(mu, mesh);

  XiResult out;
  const long double muQ = mu.box_mass(mu.cells_in(Q));
  require(muQ > 0, "xi_constant: μ(Q) = 0");
  long double kept = 0;
  const GridShape level{mu.dim(), 1 << m};
  for (std::size_t e = 0; e < level.size(); ++e) {
    MeshIndex idx;
    idx.depth = m;
    const auto c = level.coords(e);
    for (int a = 0; a < mu.dim(); ++a) idx.idx[a] = c[a];
    const RectBox box = mesh.element(idx);
    if (K && distance(box, *K) <= 0) continue;
    out.cubes.push_back(box);
    kept += mu.box_mass(element_cells(mu, mesh, idx));
  }
  long double inK = 0;
  if (K) {
    const CellSet ks = mu.cells_in(*K);
    inK = integrate(mu, ks).value;
  }
  out.xi = static_cast<double>((kept + inK) / muQ);
  if (K) {
    double s = 0;
    for (int a = 0; a < Q.dim(); ++a) s = std::max(s, Q.side(a));
    const double eps = std::sqrt(static_cast<double>(mu.dim())) * std::ldexp(s, -m);
    const double v = annulus_measure(mu, *K, Q, eps, 1.0).mass / static_cast<double>(muQ);
    out.annulus_floor = 1.0 - v;
  }
  return out;
}

}  // namespace geomax
