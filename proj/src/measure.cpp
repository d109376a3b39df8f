#include "geomax/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "geomax/error.hpp"

namespace geomax {

int max_resolution(int dim) {
  switch (dim) {
    case 1:
      return 4096;
    case 2:
      return 512;
    case 3:
      return 64;
    default:
      return 0;
  }
}

void validate_resolution(int dim, int resolution) {
  if (dim < 1 || dim > kMaxDim) fail(ErrorKind::InvalidArgument, "dimension must be 1..3");
  if (!is_power_of_two(resolution))
    fail(ErrorKind::Resolution, "resolution " + std::to_string(resolution) + " is not a power of two");
  if (resolution > max_resolution(dim))
    fail(ErrorKind::Resolution, "resolution " + std::to_string(resolution) + " exceeds the " +
                                    std::to_string(dim) + "D limit " +
                                    std::to_string(max_resolution(dim)));
}

GridMeasure::GridMeasure(RectBox window, int resolution, std::vector<double> mass, std::string id)
    : window_(std::move(window)), shape_{window_.dim(), resolution}, mass_(std::move(mass)),
      id_(std::move(id)) {
  validate_resolution(shape_.dim, resolution);
  require(mass_.size() == shape_.size(), "GridMeasure: mass count does not match the grid");
  // Infinite cells (non-integrable duals) are kept but excluded from the prefix table.
  std::vector<double> finite(mass_.size());
  long double total = 0;
  for (std::size_t i = 0; i < mass_.size(); ++i) {
    const double m = mass_[i];
    require(!std::isnan(m) && m >= 0.0, "GridMeasure: masses must be nonnegative");
    finite[i] = std::isfinite(m) ? m : 0.0;
    total += finite[i];
  }
  total_ = static_cast<double>(total);
  prefix_ = std::make_shared<const PrefixSum>(shape_, finite);
}

double GridMeasure::cell_volume() const {
  double v = 1;
  for (int a = 0; a < dim(); ++a) v *= cell_side(a);
  return v;
}

Vec GridMeasure::cell_center(std::size_t idx) const {
  const auto c = shape_.coords(idx);
  Vec p(dim());
  for (int a = 0; a < dim(); ++a) p[a] = center(a, c[a]);
  return p;
}

RectBox GridMeasure::cell_box(const CellRange& r) const {
  Vec lo(dim()), hi(dim());
  for (int a = 0; a < dim(); ++a) {
    lo[a] = window_.lo[a] + r.lo[a] * cell_side(a);
    hi[a] = window_.lo[a] + r.hi[a] * cell_side(a);
  }
  return RectBox{lo, hi};
}

CellRange GridMeasure::cells_in(const RectBox& box) const {
  require(box.dim() == dim(), "cells_in: dimension mismatch");
  CellRange r;
  for (int a = 0; a < dim(); ++a) {
    const double h = cell_side(a);
    const double lo = std::ceil((box.lo[a] - window_.lo[a]) / h - 0.5 - 1e-9);
    const double hi = std::floor((box.hi[a] - window_.lo[a]) / h - 0.5 + 1e-9);
    r.lo[a] = static_cast<int>(std::clamp(lo, 0.0, static_cast<double>(resolution())));
    r.hi[a] = static_cast<int>(std::clamp(hi + 1, 0.0, static_cast<double>(resolution())));
  }
  return r;
}

CellSet GridMeasure::cells_in(const ConvexBody& body) const {
  require(body.dim() == dim(), "cells_in: dimension mismatch");
  CellSet s(shape_);
  const CellRange r = cells_in(body.bounding_box());
  for (int k = r.lo[2]; k < r.hi[2]; ++k)
    for (int j = r.lo[1]; j < r.hi[1]; ++j)
      for (int i = r.lo[0]; i < r.hi[0]; ++i) {
        const std::size_t idx = shape_.index(i, j, k);
        if (body.contains(cell_center(idx), 1e-12)) s.set(idx);
      }
  return s;
}

bool GridMeasure::grid_aligned(const RectBox& box, double tol) const {
  for (int a = 0; a < dim(); ++a) {
    for (double x : {box.lo[a], box.hi[a]}) {
      const double q = (x - window_.lo[a]) / cell_side(a);
      if (std::abs(q - std::round(q)) > tol) return false;
    }
  }
  return true;
}

Integral integrate(const GridMeasure& mu, const RectBox& region) {
  Integral out;
  out.truncated = !mu.window().contains(region, 1e-12);
  if (!mu.window().intersects(region)) return out;
  out.value = static_cast<double>(mu.box_mass(mu.cells_in(region)));
  return out;
}

Integral integrate(const GridMeasure& mu, const ConvexBody& region) {
  Integral out;
  const RectBox bb = region.bounding_box();
  out.truncated = !mu.window().contains(bb, 1e-12);
  if (!mu.window().intersects(bb)) return out;
  out.value = integrate(mu, mu.cells_in(region)).value;
  return out;
}

Integral integrate(const GridMeasure& mu, const CellSet& region) {
  require(region.shape() == mu.shape(), "integrate: cell set does not match the grid");
  long double s = 0;
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region.test(i)) s += mu.mass(i);
  return Integral{static_cast<double>(s), false};
}

double integrate(const GridMeasure& mu, std::span<const double> f, const CellSet& region) {
  require(f.size() == mu.shape().size(), "integrate: function does not match the grid");
  long double s = 0;
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region.test(i)) s += static_cast<long double>(f[i]) * mu.mass(i);
  return static_cast<double>(s);
}

void check_mesh_on_grid(const GridMeasure& mu, const DyadicMesh& mesh) {
  require(mesh.dim() == mu.dim(), "mesh/measure dimension mismatch");
  if (!mu.window().contains(mesh.root(), 1e-12) || !mu.grid_aligned(mesh.root()))
    fail(ErrorKind::Resolution, "mesh root " + mesh.root().to_string() + " is not grid-aligned");
  const CellRange r = mu.cells_in(mesh.root());
  for (int a = 0; a < mu.dim(); ++a) {
    const int cells = r.hi[a] - r.lo[a];
    if (cells % (1 << mesh.max_depth()) != 0)
      fail(ErrorKind::Resolution, "mesh depth " + std::to_string(mesh.max_depth()) +
                                      " is finer than the grid (" + std::to_string(cells) +
                                      " cells on axis " + std::to_string(a) + ")");
  }
}

CellRange element_cells(const GridMeasure& mu, const DyadicMesh& mesh, const MeshIndex& m) {
  const CellRange root = mu.cells_in(mesh.root());
  CellRange r;
  for (int a = 0; a < mu.dim(); ++a) {
    const int per = (root.hi[a] - root.lo[a]) >> m.depth;
    if (per < 1) fail(ErrorKind::Resolution, "mesh element below grid resolution");
    r.lo[a] = root.lo[a] + static_cast<int>(m.idx[a]) * per;
    r.hi[a] = r.lo[a] + per;
  }
  return r;
}

GrowthReport growth_constant(const GridMeasure& mu, const DyadicMesh& mesh, double delta) {
  require(delta >= 1.0, "growth_constant: doubling estimate must be >= 1");
  check_mesh_on_grid(mu, mesh);
  GrowthReport rep;
  const int n = mu.dim();
  rep.gamma = 1.0 + (std::ldexp(1.0, n) - 1.0) / delta;
  for (int d = 1; d <= mesh.max_depth(); ++d) {
    const GridShape level{n, 1 << d};
    for (std::size_t e = 0; e < level.size(); ++e) {
      MeshIndex m;
      m.depth = d;
      const auto c = level.coords(e);
      for (int a = 0; a < n; ++a) m.idx[a] = c[a];
      const double mass = static_cast<double>(mu.box_mass(element_cells(mu, mesh, m)));
      MeshIndex anc = m;
      for (int g = 1; g <= d; ++g) {
        anc = mesh.parent(anc);
        const double big = static_cast<double>(mu.box_mass(element_cells(mu, mesh, anc)));
        ++rep.checked;
        if (big <= 0) continue;
        const double allowed = std::pow(rep.gamma, -g);
        const double ratio = mass / big;
        if (ratio > allowed * (1 + 1e-12)) rep.violations.push_back({m, g, ratio, allowed});
      }
    }
  }
  return rep;
}

GridMeasure pushforward_affine(const GridMeasure& mu, const AffineMap& map) {
  const int n = mu.dim();
  require(map.linear.rows() == n && map.linear.cols() == n && map.offset.size() == n,
          "pushforward_affine: map dimension mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && map.linear(i, j) != 0.0)
        fail(ErrorKind::InvalidArgument, "pushforward_affine: non-axis-aligned map");
  Vec lo(n), hi(n);
  std::array<bool, 3> flip{false, false, false};
  for (int a = 0; a < n; ++a) {
    const double s = map.linear(a, a);
    require(s != 0.0, "pushforward_affine: singular map");
    const double x0 = s * mu.window().lo[a] + map.offset[a];
    const double x1 = s * mu.window().hi[a] + map.offset[a];
    lo[a] = std::min(x0, x1);
    hi[a] = std::max(x0, x1);
    flip[a] = s < 0;
  }
  const GridShape& g = mu.shape();
  std::vector<double> mass(g.size());
  for (std::size_t i = 0; i < mass.size(); ++i) {
    auto c = g.coords(i);
    for (int a = 0; a < n; ++a)
      if (flip[a]) c[a] = g.res - 1 - c[a];
    mass[g.index(c[0], c[1], c[2])] = mu.mass(i);
  }
  return GridMeasure(RectBox::make(lo, hi), g.res, std::move(mass), mu.id() + "#pushforward");
}

namespace {

constexpr char kMagic[4] = {'G', 'M', 'S', 'R'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail(ErrorKind::InvalidArgument, "load_measure: truncated stream");
  return v;
}

}  // namespace

void dump(const GridMeasure& mu, std::ostream& os) {
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(mu.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(mu.resolution()));
  for (int a = 0; a < mu.dim(); ++a) put<double>(os, mu.window().lo[a]);
  for (int a = 0; a < mu.dim(); ++a) put<double>(os, mu.window().hi[a]);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(mu.id().size()));
  os.write(mu.id().data(), static_cast<std::streamsize>(mu.id().size()));
  os.write(reinterpret_cast<const char*>(mu.masses().data()),
           static_cast<std::streamsize>(mu.masses().size() * sizeof(double)));
}

GridMeasure load_measure(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    fail(ErrorKind::InvalidArgument, "load_measure: bad magic");
  if (get<std::uint32_t>(is) != kVersion) fail(ErrorKind::InvalidArgument, "load_measure: bad version");
  const int dim = static_cast<int>(get<std::uint32_t>(is));
  const int res = static_cast<int>(get<std::uint32_t>(is));
  validate_resolution(dim, res);
  Vec lo(dim), hi(dim);
  for (int a = 0; a < dim; ++a) lo[a] = get<double>(is);
  for (int a = 0; a < dim; ++a) hi[a] = get<double>(is);
  const auto id_len = get<std::uint32_t>(is);
  std::string id(id_len, '\0');
  is.read(id.data(), id_len);
  std::vector<double> mass(GridShape{dim, res}.size());
  is.read(reinterpret_cast<char*>(mass.data()), static_cast<std::streamsize>(mass.size() * sizeof(double)));
  if (!is) fail(ErrorKind::InvalidArgument, "load_measure: truncated stream");
  return GridMeasure(RectBox::make(lo, hi), res, std::move(mass), std::move(id));
}

}  // namespace geomax
