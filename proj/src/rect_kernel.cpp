// Exact maximal averages over grid-aligned boxes: for each side tuple, all
// placement averages from the prefix tables, then one monotone-deque sliding
// max per axis spreads each average to the cells its box covers.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "geomax/error.hpp"
#include "kernels.hpp"

namespace geomax::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kFullEnumerationLimit = 128;

std::vector<int> side_options(int extent, int cap, SideLengths sides) {
  const int top = cap > 0 ? std::min(extent, cap) : extent;
  std::vector<int> out;
  if (sides == SideLengths::All) {
    for (int s = 1; s <= top; ++s) out.push_back(s);
  } else {
    for (int s = 1; s <= top; s *= 2) out.push_back(s);
  }
  return out;
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GEOMAX_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_tasks(std::size_t tasks, int threads, const std::function<void(std::size_t, int)>& body) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(tasks, 1))));
  if (threads == 1) {
    for (std::size_t t = 0; t < tasks; ++t) body(t, 0);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t t = static_cast<std::size_t>(w); t < tasks; t += static_cast<std::size_t>(threads))
        body(t, w);
    });
  for (auto& th : pool) th.join();
}

void sliding_max(const double* in, std::ptrdiff_t in_stride, int P, int s, double* out,
                 std::ptrdiff_t out_stride, std::vector<int>& dq) {
  const int G = P + s - 1;
  dq.resize(static_cast<std::size_t>(P));
  int head = 0, tail = 0;
  for (int c = 0; c < G; ++c) {
    if (c < P) {
      const double v = in[c * in_stride];
      while (tail > head && in[dq[tail - 1] * in_stride] <= v) --tail;
      dq[tail++] = c;
    }
    while (dq[head] < c - s + 1) ++head;
    out[c * out_stride] = in[dq[head] * in_stride];
  }
}

PrefixSum weighted_prefix(const GridMeasure& mu, std::span<const double> f) {
  require(f.size() == mu.shape().size(), "function does not match the grid");
  std::vector<double> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double m = mu.mass(i);
    v[i] = std::isfinite(m) ? f[i] * m : 0.0;
  }
  return PrefixSum(mu.shape(), v);
}

KernelResult rect_sup(const GridMeasure& mu, const BasisFamily& family, std::span<const double> f,
                      const CellRange& region, const std::array<int, 3>& max_side, int threads) {
  const int n = mu.dim();
  std::array<int, 3> G{1, 1, 1};
  for (int a = 0; a < n; ++a) G[a] = region.hi[a] - region.lo[a];

  std::array<std::vector<int>, 3> opts;
  for (int a = 0; a < 3; ++a) opts[a] = a < n ? side_options(G[a], max_side[a], family.sides) : std::vector<int>{1};
  if (n >= 2 && family.sides == SideLengths::All) {
    for (int a = 0; a < n; ++a)
      if (opts[a].back() > kFullEnumerationLimit)
        fail(ErrorKind::Resolution, "full rectangle enumeration is limited to " +
                                        std::to_string(kFullEnumerationLimit) +
                                        " cells per side; use dyadic side lengths");
  }

  std::vector<std::array<int, 3>> tuples;
  if (family.kind == BasisKind::AxisCubes) {
    int top = std::numeric_limits<int>::max();
    for (int a = 0; a < n; ++a) top = std::min(top, opts[a].back());
    for (int s : opts[0])
      if (s <= top) tuples.push_back({s, n >= 2 ? s : 1, n >= 3 ? s : 1});
  } else {
    for (int s2 : opts[2])
      for (int s1 : opts[1])
        for (int s0 : opts[0]) tuples.push_back({s0, s1, s2});
  }

  const PrefixSum num = weighted_prefix(mu, f);
  const PrefixSum& den = mu.prefix();
  const std::size_t cells = static_cast<std::size_t>(G[0]) * G[1] * G[2];

  threads = resolve_threads(threads);
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tuples.size())));
  std::vector<std::vector<double>> local(static_cast<std::size_t>(workers), std::vector<double>(cells, kNegInf));
  std::vector<double> ecc(static_cast<std::size_t>(workers), 1.0);

  parallel_tasks(tuples.size(), workers, [&](std::size_t t, int w) {
    const auto s = tuples[t];
    std::array<int, 3> P{};
    for (int a = 0; a < 3; ++a) P[a] = G[a] - s[a] + 1;
    std::vector<double> avg(static_cast<std::size_t>(P[0]) * P[1] * P[2]);
    CellRange box;
    std::size_t q = 0;
    for (int k = 0; k < P[2]; ++k)
      for (int j = 0; j < P[1]; ++j)
        for (int i = 0; i < P[0]; ++i, ++q) {
          box.lo = {region.lo[0] + i, region.lo[1] + j, region.lo[2] + k};
          box.hi = {box.lo[0] + s[0], box.lo[1] + s[1], box.lo[2] + s[2]};
          const long double d = den.sum(box);
          avg[q] = d > 0 ? static_cast<double>(num.sum(box) / d) : kNegInf;
        }
    // Spread along each axis in turn.
    std::vector<int> dq;
    std::vector<double> a0(static_cast<std::size_t>(G[0]) * P[1] * P[2]);
    for (int r = 0; r < P[1] * P[2]; ++r)
      sliding_max(avg.data() + static_cast<std::ptrdiff_t>(r) * P[0], 1, P[0], s[0],
                  a0.data() + static_cast<std::ptrdiff_t>(r) * G[0], 1, dq);
    std::vector<double> a1(static_cast<std::size_t>(G[0]) * G[1] * P[2]);
    for (int k = 0; k < P[2]; ++k)
      for (int i = 0; i < G[0]; ++i)
        sliding_max(a0.data() + static_cast<std::ptrdiff_t>(k) * G[0] * P[1] + i, G[0], P[1], s[1],
                    a1.data() + static_cast<std::ptrdiff_t>(k) * G[0] * G[1] + i, G[0], dq);
    std::vector<double>* fin = &a1;
    std::vector<double> a2;
    if (n >= 3) {
      a2.resize(cells);
      const std::ptrdiff_t plane = static_cast<std::ptrdiff_t>(G[0]) * G[1];
      for (std::ptrdiff_t c = 0; c < plane; ++c)
        sliding_max(a1.data() + c, plane, P[2], s[2], a2.data() + c, plane, dq);
      fin = &a2;
    }
    auto& out = local[static_cast<std::size_t>(w)];
    for (std::size_t c = 0; c < cells; ++c) out[c] = std::max(out[c], (*fin)[c]);

    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (int a = 0; a < n; ++a) {
      const double len = s[a] * mu.cell_side(a);
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
    ecc[static_cast<std::size_t>(w)] = std::max(ecc[static_cast<std::size_t>(w)], hi / lo);
  });

  KernelResult res;
  res.sup.assign(mu.shape().size(), kNegInf);
  for (int k = 0; k < G[2]; ++k)
    for (int j = 0; j < G[1]; ++j)
      for (int i = 0; i < G[0]; ++i) {
        const std::size_t c = static_cast<std::size_t>(i) + static_cast<std::size_t>(G[0]) * (j + static_cast<std::size_t>(G[1]) * k);
        double v = kNegInf;
        for (const auto& l : local) v = std::max(v, l[c]);
        res.sup[mu.shape().index(region.lo[0] + i, region.lo[1] + j, region.lo[2] + k)] = v;
      }
  for (double e : ecc) res.eccentricity = std::max(res.eccentricity, e);
  return res;
}

}  // namespace geomax::detail
