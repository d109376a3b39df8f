#include <algorithm>
#include <cmath>

#include "geomax/error.hpp"
#include "geomax/maximal.hpp"
#include "kernels.hpp"

namespace geomax {

MaximalField dyadic_maximal(const GridMeasure& mu, const DyadicMesh& mesh, std::span<const double> f) {
  require(f.size() == mu.shape().size(), "dyadic_maximal: function does not match the grid");
  check_mesh_on_grid(mu, mesh);
  const PrefixSum num = detail::weighted_prefix(mu, f);
  const int n = mu.dim();
  MaximalField out;
  out.shape = mu.shape();
  out.values.assign(mu.shape().size(), 0.0);
  out.basis = "dyadic(depth " + std::to_string(mesh.max_depth()) + ")";
  out.measure_id = mu.id();
  out.window = mu.window();
  out.truncation = mu.cells_in(mesh.root());
  for (int d = 0; d <= mesh.max_depth(); ++d) {
    const GridShape level{n, 1 << d};
    for (std::size_t e = 0; e < level.size(); ++e) {
      MeshIndex m;
      m.depth = d;
      const auto c = level.coords(e);
      for (int a = 0; a < n; ++a) m.idx[a] = c[a];
      const CellRange r = element_cells(mu, mesh, m);
      const long double den = mu.box_mass(r);
      if (den <= 0) continue;
      const double avg = static_cast<double>(num.sum(r) / den);
      for (int k = r.lo[2]; k < r.hi[2]; ++k)
        for (int j = r.lo[1]; j < r.hi[1]; ++j)
          for (int i = r.lo[0]; i < r.hi[0]; ++i) {
            double& v = out.values[mu.shape().index(i, j, k)];
            v = std::max(v, avg);
          }
    }
  }
  return out;
}

}  // namespace geomax
