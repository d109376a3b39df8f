#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geomax {

/// res^dim cells, axis 0 fastest.
struct GridShape {
  int dim = 1;
  int res = 1;

  std::size_t size() const;
  std::size_t index(int i, int j = 0, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(res) * (static_cast<std::size_t>(j) +
                                            static_cast<std::size_t>(res) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> coords(std::size_t idx) const;
  bool operator==(const GridShape&) const = default;
};

bool is_power_of_two(long v);
int log2_exact(long v);

/// Half-open index box [lo, hi) per axis; axes >= dim are [0, 1).
struct CellRange {
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{1, 1, 1};

  bool empty() const;
  std::size_t count() const;
  bool contains(const std::array<int, 3>& c) const;
  bool operator==(const CellRange&) const = default;
};

/// Summed-area table over a grid, accumulated in extended precision.
class PrefixSum {
 public:
  PrefixSum() = default;
  PrefixSum(const GridShape& shape, std::span<const double> values);

  long double sum(const CellRange& r) const;
  const GridShape& shape() const { return shape_; }

 private:
  std::size_t at(int i, int j, int k) const {
    const std::size_t s = static_cast<std::size_t>(shape_.res) + 1;
    return static_cast<std::size_t>(i) + s * (static_cast<std::size_t>(j) + s * static_cast<std::size_t>(k));
  }

  GridShape shape_;
  std::vector<long double> table_;
};

/// Bitmask of cells over a window grid.
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(const GridShape& shape) : shape_(shape), bits_(shape.size(), 0) {}
  static CellSet full(const GridShape& shape);
  static CellSet from_range(const GridShape& shape, const CellRange& r);

  const GridShape& shape() const { return shape_; }
  std::size_t size() const { return bits_.size(); }
  bool test(std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v = true) { bits_[i] = v ? 1 : 0; }
  void fill(const CellRange& r, bool v = true);
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool subset_of(const CellSet& other) const;
  bool touches_boundary() const;
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<double> indicator() const;

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  bool operator==(const CellSet& o) const = default;

 private:
  GridShape shape_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace geomax
