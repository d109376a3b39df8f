#include <algorithm>
#include <cmath>
#include <numeric>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"
#include "geomax/maximal.hpp"
#include "kernels.hpp"

namespace geomax {

namespace {

// Same tie rule as superlevel(..., strict = true).
bool above(double v, double level) { return v > level + kTieTol * std::max(1.0, std::abs(level)); }

}  // namespace

CZSelection cz_decompose(const GridMeasure& mu, const DyadicMesh& mesh, const CellSet& E, double beta) {
  require(beta > 0 && beta < 1, "cz_decompose: beta must lie in (0,1)");
  require(E.shape() == mu.shape(), "cz_decompose: set does not match the grid");
  check_mesh_on_grid(mu, mesh);
  const PrefixSum inE = detail::weighted_prefix(mu, E.indicator());

  CZSelection sel;
  sel.root = mesh.root();
  sel.beta = beta;
  const CellRange root = element_cells(mu, mesh, MeshIndex{});
  const long double root_mass = mu.box_mass(root);
  const long double root_e = inE.sum(root);
  if (root_mass <= 0 || !(static_cast<double>(root_e / root_mass) < beta))
    fail(ErrorKind::InvalidArgument, "root violates CZ precondition");

  long double covered = 0;
  std::vector<MeshIndex> stack;
  if (mesh.max_depth() >= 1) {
    auto kids = mesh.children(MeshIndex{});
    stack.assign(kids.rbegin(), kids.rend());
  }
  while (!stack.empty()) {
    const MeshIndex m = stack.back();
    stack.pop_back();
    const CellRange r = element_cells(mu, mesh, m);
    const long double ms = mu.box_mass(r);
    if (ms <= 0) continue;
    const long double me = inE.sum(r);
    const double avg = static_cast<double>(me / ms);
    if (above(avg, beta)) {
      sel.selected.push_back(m);
      sel.boxes.push_back(mesh.element(m));
      sel.averages.push_back(avg);
      sel.masses.push_back(static_cast<double>(ms));
      covered += me;
      continue;
    }
    if (m.depth < mesh.max_depth() && me > 0) {
      auto kids = mesh.children(m);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  }
  sel.residual_mass = static_cast<double>(std::max(0.0L, root_e - covered));
  return sel;
}

CellSet selection_cells(const GridMeasure& mu, const DyadicMesh& mesh, const CZSelection& sel) {
  CellSet s(mu.shape());
  for (const auto& m : sel.selected) s.fill(element_cells(mu, mesh, m));
  return s;
}

DilateChain expanding_dilates(const GridMeasure& mu, const DyadicMesh& mesh, const RectBox& S,
                              double beta, int count) {
  require(beta > 0 && beta < 1, "expanding_dilates: beta must lie in (0,1)");
  require(count >= 0, "expanding_dilates: count must be >= 0");
  check_mesh_on_grid(mu, mesh);
  const MeshIndex m = mesh.locate(S);
  const CellRange base = element_cells(mu, mesh, m);
  // c*S is grid-aligned iff c s_a is an integer on every axis: c = k/g with g = gcd(s_a).
  int g = 0;
  for (int a = 0; a < mu.dim(); ++a) g = std::gcd(g, base.hi[a] - base.lo[a]);

  DilateChain out;
  long double prev = mu.box_mass(base);
  require(prev > 0, "expanding_dilates: element has zero mass");
  const double target = 1.0 / beta;
  int k = g;
  for (int step = 0; step < count; ++step) {
    bool found = false;
    while (true) {
      ++k;
      const double c = static_cast<double>(k) / g;
      const RectBox box = corner_dilate(mesh, S, c);
      if (!mu.window().contains(box, 1e-9 * box.diameter())) break;
      const long double mass = mu.box_mass(mu.cells_in(box));
      const double ratio = static_cast<double>(mass / prev);
      if (ratio >= target * (1 - kTieTol)) {
        out.dilates.push_back(box);
        out.factors.push_back(c);
        out.ratios.push_back(ratio);
        prev = mass;
        found = true;
        break;
      }
    }
    if (!found) {
      out.truncated = true;
      break;
    }
  }
  return out;
}

}  // namespace geomax
