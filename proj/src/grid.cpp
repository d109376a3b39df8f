#include "geomax/grid.hpp"

#include <algorithm>

#include "geomax/error.hpp"

namespace geomax {

std::size_t GridShape::size() const {
  std::size_t n = 1;
  for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(res);
  return n;
}

std::array<int, 3> GridShape::coords(std::size_t idx) const {
  std::array<int, 3> c{0, 0, 0};
  for (int i = 0; i < dim; ++i) {
    c[i] = static_cast<int>(idx % static_cast<std::size_t>(res));
    idx /= static_cast<std::size_t>(res);
  }
  return c;
}

bool is_power_of_two(long v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(long v) {
  require(is_power_of_two(v), "expected a power of two");
  int k = 0;
  while ((1L << k) < v) ++k;
  return k;
}

bool CellRange::empty() const {
  for (int i = 0; i < 3; ++i)
    if (hi[i] <= lo[i]) return true;
  return false;
}

std::size_t CellRange::count() const {
  if (empty()) return 0;
  std::size_t n = 1;
  for (int i = 0; i < 3; ++i) n *= static_cast<std::size_t>(hi[i] - lo[i]);
  return n;
}

bool CellRange::contains(const std::array<int, 3>& c) const {
  for (int i = 0; i < 3; ++i)
    if (c[i] < lo[i] || c[i] >= hi[i]) return false;
  return true;
}

PrefixSum::PrefixSum(const GridShape& shape, std::span<const double> values) : shape_(shape) {
  require(values.size() == shape.size(), "PrefixSum: value count mismatch");
  const int r = shape.res;
  const int ny = shape.dim >= 2 ? r : 1;
  const int nz = shape.dim >= 3 ? r : 1;
  std::size_t s = static_cast<std::size_t>(r) + 1;
  table_.assign(s * (shape.dim >= 2 ? s : 1) * (shape.dim >= 3 ? s : 1), 0.0L);
  // Inclusion-exclusion over the populated axes.
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < r; ++i) {
        const int kk = shape.dim >= 3 ? k + 1 : 0;
        const int jj = shape.dim >= 2 ? j + 1 : 0;
        long double v = values[shape.index(i, j, k)];
        v += table_[at(i, jj, kk)];
        if (shape.dim >= 2) v += table_[at(i + 1, jj - 1, kk)] - table_[at(i, jj - 1, kk)];
        if (shape.dim >= 3) {
          v += table_[at(i + 1, jj, kk - 1)] - table_[at(i, jj, kk - 1)];
          if (shape.dim >= 2)
            v += -table_[at(i + 1, jj - 1, kk - 1)] + table_[at(i, jj - 1, kk - 1)];
        }
        table_[at(i + 1, jj, kk)] = v;
      }
}

long double PrefixSum::sum(const CellRange& r) const {
  if (r.empty()) return 0.0L;
  const auto& lo = r.lo;
  const auto& hi = r.hi;
  switch (shape_.dim) {
    case 1:
      return table_[at(hi[0], 0, 0)] - table_[at(lo[0], 0, 0)];
    case 2:
      return table_[at(hi[0], hi[1], 0)] - table_[at(lo[0], hi[1], 0)] -
             table_[at(hi[0], lo[1], 0)] + table_[at(lo[0], lo[1], 0)];
    default:
      return table_[at(hi[0], hi[1], hi[2])] - table_[at(lo[0], hi[1], hi[2])] -
             table_[at(hi[0], lo[1], hi[2])] - table_[at(hi[0], hi[1], lo[2])] +
             table_[at(lo[0], lo[1], hi[2])] + table_[at(lo[0], hi[1], lo[2])] +
             table_[at(hi[0], lo[1], lo[2])] - table_[at(lo[0], lo[1], lo[2])];
  }
}

CellSet CellSet::full(const GridShape& shape) {
  CellSet s(shape);
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  return s;
}

CellSet CellSet::from_range(const GridShape& shape, const CellRange& r) {
  CellSet s(shape);
  s.fill(r);
  return s;
}

void CellSet::fill(const CellRange& r, bool v) {
  if (r.empty()) return;
  for (int k = r.lo[2]; k < r.hi[2]; ++k)
    for (int j = r.lo[1]; j < r.hi[1]; ++j)
      for (int i = r.lo[0]; i < r.hi[0]; ++i) bits_[shape_.index(i, j, k)] = v ? 1 : 0;
}

std::size_t CellSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool CellSet::subset_of(const CellSet& o) const {
  require(shape_ == o.shape_, "CellSet: shape mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !o.bits_[i]) return false;
  return true;
}

bool CellSet::touches_boundary() const {
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (!bits_[i]) continue;
    const auto c = shape_.coords(i);
    for (int a = 0; a < shape_.dim; ++a)
      if (c[a] == 0 || c[a] == shape_.res - 1) return true;
  }
  return false;
}

std::vector<double> CellSet::indicator() const {
  std::vector<double> v(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) v[i] = bits_[i] ? 1.0 : 0.0;
  return v;
}

CellSet& CellSet::operator|=(const CellSet& o) {
  require(shape_ == o.shape_, "CellSet: shape mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  require(shape_ == o.shape_, "CellSet: shape mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
  return *this;
}

}  // namespace geomax
