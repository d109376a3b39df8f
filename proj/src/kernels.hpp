#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "geomax/geometry.hpp"
#include "geomax/grid.hpp"
#include "geomax/measure.hpp"

namespace geomax::detail {

struct KernelResult {
  std::vector<double> sup;  // -inf where no admissible element covers the cell
  double eccentricity = 1;
};

/// Numerator table for averages of f against mu (infinite cells contribute nothing).
PrefixSum weighted_prefix(const GridMeasure& mu, std::span<const double> f);

KernelResult rect_sup(const GridMeasure& mu, const BasisFamily& family, std::span<const double> f,
                      const CellRange& region, const std::array<int, 3>& max_side, int threads);

KernelResult shape_sup(const GridMeasure& mu, const BasisFamily& family, std::span<const double> f,
                       const CellRange& region, int threads);

/// One row of a rasterized body: cells [a, b) of row `row`, as offsets from an anchor.
struct RowSpan {
  int row;  // offset along axis 1 (0 in 1D)
  int a;
  int b;
};

/// Offsets o with anchor + (o + 1/2) h inside the body, one span per row, rows ascending.
std::vector<RowSpan> raster_mask(const ConvexBody& body, const Vec& anchor, const GridMeasure& mu);

int resolve_threads(int requested);

/// Runs body(task, worker) for task in [0, tasks) on `threads` workers.
void parallel_tasks(std::size_t tasks, int threads, const std::function<void(std::size_t, int)>& body);

/// out[c] = max{in[p] : p in [c-s+1, c] ∩ [0, P)} for c in [0, P+s-1).
void sliding_max(const double* in, std::ptrdiff_t in_stride, int P, int s, double* out,
                 std::ptrdiff_t out_stride, std::vector<int>& dq);

}  // namespace geomax::detail
