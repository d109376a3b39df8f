// Disjoint homothetic copies of K packed into Q: K_{t+1} = K ∪ ⋃_j φ_j(K_t), where
// φ_j maps Q onto the j-th depth-m subcube avoiding K.
#include <cmath>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"

namespace geomax {

namespace {

struct Copy {
  Vec offset;    // image of Q.lo
  double scale;  // 2^{-m t}
  int depth;     // m t
};

}  // namespace

CopiesResult homothetic_copies(const GridMeasure& mu, const ConvexBody& K, const RectBox& Q, int m, int N,
                               double rho) {
  require(m >= 1 && N >= 0, "homothetic_copies: need m >= 1 and N >= 0");
  require(rho > 0 && rho <= 1, "homothetic_copies: rho must lie in (0,1]");
  require(K.dim() == mu.dim(), "homothetic_copies: dimension mismatch");
  if (!mu.window().contains(Q, 1e-12) || !mu.grid_aligned(Q))
    fail(ErrorKind::Resolution, "homothetic_copies: Q is not grid-aligned");
  const CellRange qc = mu.cells_in(Q);
  for (int a = 0; a < mu.dim(); ++a)
    if ((qc.hi[a] - qc.lo[a]) < (1L << (m * std::max(N, 1))))
      fail(ErrorKind::Resolution, "grid too coarse for depth mN = " + std::to_string(m * N));

  const XiResult xi = xi_constant(mu, K, Q, m);
  CopiesResult out;
  out.rho = rho;
  out.xi = xi.xi;
  out.psi = xi.xi - rho;
  if (!(out.psi > 0)) fail(ErrorKind::InvalidArgument, "homothetic_copies: needs xi_m > rho");

  const double shrink = std::ldexp(1.0, -m);
  std::vector<Copy> all{{Q.lo, 1.0, 0}};
  std::vector<Copy> frontier = all;
  for (int t = 1; t <= N; ++t) {
    std::vector<Copy> next;
    for (const auto& cube : xi.cubes)
      for (const auto& c : frontier) next.push_back({cube.lo + shrink * (c.offset - Q.lo), shrink * c.scale, c.depth + m});
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }

  out.cells = CellSet(mu.shape());
  const RectBox kb = K.bounding_box();
  const int n = mu.dim();
  for (const auto& c : all) {
    const RectBox bb{c.offset + c.scale * (kb.lo - Q.lo), c.offset + c.scale * (kb.hi - Q.lo)};
    const CellRange r = mu.cells_in(bb);
    for (int k = r.lo[2]; k < r.hi[2]; ++k)
      for (int j = r.lo[1]; j < r.hi[1]; ++j)
        for (int i = r.lo[0]; i < r.hi[0]; ++i) {
          const std::size_t idx = mu.shape().index(i, j, k);
          const Vec x = Q.lo + (mu.cell_center(idx) - c.offset) / c.scale;
          if (!K.contains(x, 1e-12)) continue;
          if (out.cells.test(idx)) out.disjoint = false;
          out.cells.set(idx);
        }
    out.max_depth = std::max(out.max_depth, c.depth);
    if (c.depth == m) {
      Vec hi = c.offset;
      for (int a = 0; a < n; ++a) hi[a] += c.scale * Q.side(a);
      out.frames.push_back(RectBox{c.offset, hi});
    }
  }
  out.copies = all.size();
  out.measure = integrate(mu, out.cells).value;
  const double muQ = static_cast<double>(mu.box_mass(qc));
  const double psi = out.psi;
  out.lower_bound = rho * (1 - std::pow(psi, N + 1)) / (1 - psi) * muQ;
  return out;
}

}  // namespace geomax
