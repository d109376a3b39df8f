#include <algorithm>
#include <cmath>

#include "geomax/error.hpp"
#include "geomax/geometry.hpp"

namespace geomax {

DyadicMesh::DyadicMesh(RectBox root, int max_depth) : root_(std::move(root)), max_depth_(max_depth) {
  require(max_depth >= 0 && max_depth <= 30, "DyadicMesh: max_depth must be in [0, 30]");
}

RectBox DyadicMesh::element(const MeshIndex& m) const {
  require(m.depth >= 0 && m.depth <= max_depth_, "DyadicMesh: depth out of range");
  const double scale = std::ldexp(1.0, -m.depth);
  Vec lo(dim()), hi(dim());
  for (int i = 0; i < dim(); ++i) {
    require(m.idx[i] >= 0 && m.idx[i] < (1L << m.depth), "DyadicMesh: index out of range");
    const double side = root_.side(i) * scale;
    lo[i] = root_.lo[i] + static_cast<double>(m.idx[i]) * side;
    hi[i] = lo[i] + side;
  }
  return RectBox{lo, hi};
}

MeshIndex DyadicMesh::locate(const RectBox& box) const {
  require(box.dim() == dim(), "DyadicMesh: dimension mismatch");
  for (int d = 0; d <= max_depth_; ++d) {
    const double scale = std::ldexp(1.0, -d);
    bool ok = true;
    MeshIndex m;
    m.depth = d;
    for (int i = 0; i < dim() && ok; ++i) {
      const double side = root_.side(i) * scale;
      const double tol = 1e-9 * side;
      if (std::abs(box.side(i) - side) > tol) {
        ok = false;
        break;
      }
      const double q = (box.lo[i] - root_.lo[i]) / side;
      const long k = std::lround(q);
      if (std::abs(q - static_cast<double>(k)) > 1e-9 || k < 0 || k >= (1L << d)) ok = false;
      m.idx[i] = k;
    }
    if (ok) return m;
  }
  fail(ErrorKind::InvalidArgument, "element not in mesh: " + box.to_string());
}

bool DyadicMesh::contains_element(const RectBox& box) const {
  try {
    locate(box);
    return true;
  } catch (const Error&) {
    return false;
  }
}

MeshIndex DyadicMesh::parent(const MeshIndex& m) const {
  require(m.depth >= 1, "DyadicMesh: root has no parent");
  MeshIndex p = m;
  p.depth -= 1;
  for (int i = 0; i < dim(); ++i) p.idx[i] >>= 1;
  return p;
}

std::vector<MeshIndex> DyadicMesh::children(const MeshIndex& m) const {
  require(m.depth < max_depth_, "DyadicMesh: element at max depth has no children");
  std::vector<MeshIndex> out;
  for (int mask = 0; mask < (1 << dim()); ++mask) {
    MeshIndex c;
    c.depth = m.depth + 1;
    for (int i = 0; i < dim(); ++i) c.idx[i] = 2 * m.idx[i] + ((mask >> i) & 1);
    out.push_back(c);
  }
  return out;
}

MeshIndex DyadicMesh::element_at(const Vec& p, int depth) const {
  require(depth >= 0 && depth <= max_depth_, "DyadicMesh: depth out of range");
  MeshIndex m;
  m.depth = depth;
  const long count = 1L << depth;
  for (int i = 0; i < dim(); ++i) {
    const double side = root_.side(i) / static_cast<double>(count);
    const long k = static_cast<long>(std::floor((p[i] - root_.lo[i]) / side));
    m.idx[i] = std::clamp(k, 0L, count - 1);
  }
  return m;
}

RectBox ancestor(const DyadicMesh& mesh, const RectBox& element, int j) {
  require(j >= 0, "ancestor: j must be non-negative");
  MeshIndex m = mesh.locate(element);
  if (j > m.depth)
    fail(ErrorKind::InvalidArgument, "ancestor: j exceeds the element's depth " +
                                         std::to_string(m.depth));
  for (int s = 0; s < j; ++s) m = mesh.parent(m);
  return mesh.element(m);
}

RectBox corner_dilate(const DyadicMesh& mesh, const RectBox& element, double c) {
  require(c >= 1.0, "corner_dilate: c must be >= 1");
  const MeshIndex m = mesh.locate(element);
  require(m.depth >= 1, "corner_dilate: the root has no parent corner");
  Vec lo = element.lo, hi = element.hi;
  for (int i = 0; i < mesh.dim(); ++i) {
    const double side = c * element.side(i);
    if (m.idx[i] % 2 == 0)
      hi[i] = lo[i] + side;
    else
      lo[i] = hi[i] - side;
  }
  return RectBox{lo, hi};
}

}  // namespace geomax
