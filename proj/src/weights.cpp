#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "geomax/error.hpp"
#include "geomax/measure.hpp"

namespace geomax {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

double gaussian_integral(double a, double b) {
  if (a >= 0) return 0.5 * (std::erfc(a * kInvSqrt2) - std::erfc(b * kInvSqrt2));
  if (b <= 0) return 0.5 * (std::erfc(-b * kInvSqrt2) - std::erfc(-a * kInvSqrt2));
  return 0.5 * (std::erf(b * kInvSqrt2) - std::erf(a * kInvSqrt2));
}

// ∫_a^b x^e dx for 0 <= a < b.
double positive_power_integral(double a, double b, double e) {
  if (e > -1.0) {
    const double k = e + 1.0;
    return (std::pow(b, k) - std::pow(a, k)) / k;
  }
  if (a <= 0.0) return std::numeric_limits<double>::infinity();
  if (e == -1.0) return std::log(b / a);
  const double k = e + 1.0;
  return (std::pow(b, k) - std::pow(a, k)) / k;
}

}  // namespace

double Factor1D::density(double x) const {
  switch (kind) {
    case Kind::Lebesgue:
      return 1.0;
    case Kind::Power:
      return std::pow(std::abs(x), exponent);
    case Kind::Gaussian:
      return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  }
  return 0.0;
}

double Factor1D::integral(double a, double b) const {
  if (b <= a) return 0.0;
  switch (kind) {
    case Kind::Lebesgue:
      return b - a;
    case Kind::Gaussian:
      return gaussian_integral(a, b);
    case Kind::Power:
      if (a >= 0) return positive_power_integral(a, b, exponent);
      if (b <= 0) return positive_power_integral(-b, -a, exponent);
      return positive_power_integral(0.0, -a, exponent) + positive_power_integral(0.0, b, exponent);
  }
  return 0.0;
}

std::optional<Factor1D> Factor1D::power(double q) const {
  switch (kind) {
    case Kind::Lebesgue:
      return *this;
    case Kind::Power:
      return Factor1D{Kind::Power, exponent * q};
    case Kind::Gaussian:
      return std::nullopt;
  }
  return std::nullopt;
}

WeightSpec WeightSpec::lebesgue() { return WeightSpec{}; }

WeightSpec WeightSpec::power(std::vector<double> exponents) {
  require(!exponents.empty(), "Power weight needs at least one exponent");
  WeightSpec w;
  w.kind = Kind::Power;
  w.exponents = std::move(exponents);
  return w;
}

WeightSpec WeightSpec::product(std::vector<Factor1D> factors) {
  require(!factors.empty(), "Product weight needs at least one factor");
  WeightSpec w;
  w.kind = Kind::Product;
  w.factors = std::move(factors);
  return w;
}

WeightSpec WeightSpec::gaussian() {
  WeightSpec w;
  w.kind = Kind::Gaussian;
  return w;
}

WeightSpec WeightSpec::dyadic_random(std::uint64_t seed, double lo, double hi) {
  require(lo > 0 && hi < 1 && lo <= hi, "DyadicRandom multipliers must satisfy 0 < lo <= hi < 1");
  WeightSpec w;
  w.kind = Kind::DyadicRandom;
  w.seed = seed;
  w.multiplier_lo = lo;
  w.multiplier_hi = hi;
  return w;
}

std::optional<Factor1D> WeightSpec::factor(int axis) const {
  switch (kind) {
    case Kind::Lebesgue:
      return Factor1D{};
    case Kind::Gaussian:
      return Factor1D{Factor1D::Kind::Gaussian, 0.0};
    case Kind::Power: {
      const double a = exponents.size() == 1 ? exponents[0] : exponents.at(axis);
      return Factor1D{Factor1D::Kind::Power, a};
    }
    case Kind::Product:
      return factors.size() == 1 ? factors[0] : factors.at(axis);
    case Kind::DyadicRandom:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string WeightSpec::descriptor() const {
  std::ostringstream os;
  auto factor_name = [](const Factor1D& f) {
    std::ostringstream s;
    switch (f.kind) {
      case Factor1D::Kind::Lebesgue:
        s << "lebesgue";
        break;
      case Factor1D::Kind::Power:
        s << "|x|^" << f.exponent;
        break;
      case Factor1D::Kind::Gaussian:
        s << "gaussian";
        break;
    }
    return s.str();
  };
  switch (kind) {
    case Kind::Lebesgue:
      os << "lebesgue";
      break;
    case Kind::Gaussian:
      os << "gaussian";
      break;
    case Kind::Power:
      os << "power(";
      for (std::size_t i = 0; i < exponents.size(); ++i) os << (i ? "," : "") << exponents[i];
      os << ")";
      break;
    case Kind::Product:
      os << "product(";
      for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factor_name(factors[i]);
      os << ")";
      break;
    case Kind::DyadicRandom:
      os << "dyadic_random(seed=" << seed << ",[" << multiplier_lo << "," << multiplier_hi << "])";
      break;
  }
  return os.str();
}

namespace {

std::vector<double> outer_product(const GridShape& shape, const std::vector<std::vector<double>>& axes) {
  std::vector<double> mass(shape.size());
  for (std::size_t idx = 0; idx < mass.size(); ++idx) {
    const auto c = shape.coords(idx);
    double m = 1.0;
    for (int a = 0; a < shape.dim; ++a) m *= axes[a][c[a]];
    mass[idx] = m;
  }
  return mass;
}

std::vector<double> dyadic_random_masses(const WeightSpec& spec, const RectBox& window, int res) {
  const int n = window.dim();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> split(spec.multiplier_lo, spec.multiplier_hi);
  std::vector<double> level{window.volume()};
  for (int side = 1; side < res; side *= 2) {
    const GridShape parent{n, side};
    const GridShape child{n, 2 * side};
    std::vector<double> next(child.size());
    for (std::size_t p = 0; p < level.size(); ++p) {
      std::vector<double> parts{level[p]};
      for (int a = 0; a < n; ++a) {
        std::vector<double> refined(parts.size() * 2);
        for (std::size_t q = 0; q < parts.size(); ++q) {
          const double t = split(rng);
          refined[q] = parts[q] * t;                     // lower half along axis a
          refined[q + parts.size()] = parts[q] * (1 - t);  // upper half
        }
        parts = std::move(refined);
      }
      const auto pc = parent.coords(p);
      for (std::size_t q = 0; q < parts.size(); ++q) {
        std::array<int, 3> cc{0, 0, 0};
        for (int a = 0; a < n; ++a) cc[a] = 2 * pc[a] + static_cast<int>((q >> a) & 1U);
        next[child.index(cc[0], cc[1], cc[2])] = parts[q];
      }
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace

GridMeasure realize(const WeightSpec& spec, const RectBox& window, int resolution) {
  validate_resolution(window.dim(), resolution);
  const GridShape shape{window.dim(), resolution};
  if (spec.kind == WeightSpec::Kind::DyadicRandom)
    return GridMeasure(window, resolution, dyadic_random_masses(spec, window, resolution),
                       spec.descriptor());
  std::vector<std::vector<double>> axes(shape.dim);
  for (int a = 0; a < shape.dim; ++a) {
    const Factor1D f = *spec.factor(a);
    if (f.kind == Factor1D::Kind::Power && f.exponent <= -1.0 && window.lo[a] <= 0.0 &&
        window.hi[a] >= 0.0)
      fail(ErrorKind::InvalidArgument, "non-integrable exponent " + std::to_string(f.exponent) +
                                           " on axis " + std::to_string(a));
    const double h = window.side(a) / resolution;
    axes[a].resize(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double lo = window.lo[a] + i * h;
      axes[a][i] = f.integral(lo, i + 1 == resolution ? window.hi[a] : lo + h);
    }
  }
  return GridMeasure(window, resolution, outer_product(shape, axes), spec.descriptor());
}

GridMeasure realize_power(const WeightSpec& spec, const RectBox& window, int resolution, double q) {
  validate_resolution(window.dim(), resolution);
  const GridShape shape{window.dim(), resolution};
  std::ostringstream id;
  id << spec.descriptor() << "^" << q;
  if (spec.kind == WeightSpec::Kind::DyadicRandom) {
    const GridMeasure mu = realize(spec, window, resolution);
    const double vol = mu.cell_volume();
    std::vector<double> m(shape.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::pow(mu.mass(i) / vol, q) * vol;
    return GridMeasure(window, resolution, std::move(m), id.str());
  }
  std::vector<std::vector<double>> axes(shape.dim);
  for (int a = 0; a < shape.dim; ++a) {
    const Factor1D f = *spec.factor(a);
    const auto fq = f.power(q);
    const double h = window.side(a) / resolution;
    axes[a].resize(resolution);
    for (int i = 0; i < resolution; ++i) {
      const double lo = window.lo[a] + i * h;
      const double hi = i + 1 == resolution ? window.hi[a] : lo + h;
      axes[a][i] = fq ? fq->integral(lo, hi) : std::pow(f.density(0.5 * (lo + hi)), q) * (hi - lo);
    }
  }
  return GridMeasure(window, resolution, outer_product(shape, axes), id.str());
}

}  // namespace geomax
