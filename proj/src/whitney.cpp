#include <algorithm>
#include <cmath>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"

namespace geomax {

WhitneyResult whitney_cubes(const ConvexBody& K, const RectBox& box, int mesh_depth) {
  require(K.dim() == box.dim(), "whitney_cubes: dimension mismatch");
  require(mesh_depth >= 1, "whitney_cubes: mesh_depth must be >= 1");
  const DyadicMesh mesh(box, mesh_depth);
  const RectBox kb = K.bounding_box();
  const double cell = std::ldexp(1.0, -mesh_depth);
  for (int a = 0; a < box.dim(); ++a) {
    const double h = box.side(a) * cell;
    if (kb.lo[a] - box.lo[a] < h * (1 - 1e-9) || box.hi[a] - kb.hi[a] < h * (1 - 1e-9))
      fail(ErrorKind::Resolution, "whitney_cubes: margin between K and the box is below one cell");
  }

  WhitneyResult out;
  std::vector<MeshIndex> stack{MeshIndex{}};
  while (!stack.empty()) {
    const MeshIndex m = stack.back();
    stack.pop_back();
    const RectBox S = mesh.element(m);
    const double dist = distance(S, K);
    const double diam = S.diameter();
    if (m.depth >= 1 && dist >= diam * (1 - 1e-12)) {
      out.cubes.push_back(S);
      continue;
    }
    // Entirely inside K: nothing to cover.
    if (dist == 0) {
      bool inside = true;
      for (int mask = 0; mask < (1 << box.dim()) && inside; ++mask) {
        Vec v(box.dim());
        for (int a = 0; a < box.dim(); ++a) v[a] = (mask >> a) & 1 ? S.hi[a] : S.lo[a];
        inside = K.contains(v, 1e-12 * diam);
      }
      if (inside) continue;
    }
    if (m.depth == mesh_depth) {
      out.residual.push_back(S);
      continue;
    }
    auto kids = mesh.children(m);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

}  // namespace geomax
