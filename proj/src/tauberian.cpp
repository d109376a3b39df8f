#include "geomax/tauberian.hpp"

#include <algorithm>
#include <cmath>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"

namespace geomax {

TauberianReport tauberian_constant(const GridMeasure& mu, const GridMeasure& nu, const BasisFamily& family,
                                   double gamma, const std::string& generator, std::size_t trials,
                                   std::uint64_t seed, const MaximalOptions& opts) {
  require(gamma > 0 && gamma <= 1, "tauberian_constant: gamma must lie in (0,1]");
  require(mu.shape() == nu.shape(), "tauberian_constant: mu and nu grids differ");
  std::mt19937_64 rng(seed);
  TauberianReport rep;
  rep.gamma = gamma;
  rep.generator = generator;
  rep.seed = seed;
  rep.window = mu.window();
  for (std::size_t t = 0; t < trials; ++t) {
    const CellSet E = generate_set(generator, mu.shape(), rng);
    ++rep.trials;
    const double nuE = integrate(nu, E).value;
    if (!(nuE > 0)) {
      ++rep.skipped;
      continue;
    }
    const CellSet S = superlevel(maximal_indicator(mu, family, E, opts), gamma, true);
    rep.truncated = rep.truncated || S.touches_boundary();
    const double ratio = integrate(nu, S).value / nuE;
    rep.ratios.push_back(ratio);
    if (ratio > rep.constant_lower || rep.witness.size() == 0) {
      rep.constant_lower = std::max(rep.constant_lower, ratio);
      rep.witness = E;
      rep.witness_trial = t;
    }
  }
  if (rep.skipped == rep.trials) fail(ErrorKind::Degenerate, "every generated set has zero nu-mass");
  return rep;
}

PoResult p_o_from_tauberian(double c, double gamma, double Delta) {
  require(c >= 1, "p_o_from_tauberian: c must be >= 1");
  require(gamma > 0 && gamma < 1, "p_o_from_tauberian: gamma must lie in (0,1)");
  PoResult r;
  r.beta = 0.5 * (gamma + 1);
  r.N = choose_N(r.beta, Delta);
  r.eta = 2.0 * (r.N + 2);
  r.p_o = r.eta * std::log(std::max(c, 2.0)) / std::log(1 / r.beta);
  return r;
}

WeakTypeReport restricted_weak_type_check(const GridMeasure& mu, const GridMeasure& nu,
                                          const BasisFamily& family, double p_o, double C,
                                          const std::vector<double>& lambdas, const std::string& generator,
                                          std::size_t trials, std::uint64_t seed,
                                          const MaximalOptions& opts) {
  require(p_o > 0 && C > 0, "restricted_weak_type_check: need p_o > 0 and C > 0");
  for (double l : lambdas) require(l > 0 && l < 1, "restricted_weak_type_check: lambdas must lie in (0,1)");
  require(mu.shape() == nu.shape(), "restricted_weak_type_check: mu and nu grids differ");
  WeakTypeReport rep;
  rep.p_o = p_o;
  rep.C = C;
  rep.lambdas = lambdas;
  rep.max_ratio.assign(lambdas.size(), 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const CellSet E = generate_set(generator, mu.shape(), rng);
    const double nuE = integrate(nu, E).value;
    if (!(nuE > 0)) continue;
    ++rep.sets;
    const MaximalField field = maximal_indicator(mu, family, E, opts);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double ratio = integrate(nu, superlevel(field, lambdas[i], true)).value / nuE;
      rep.max_ratio[i] = std::max(rep.max_ratio[i], ratio);
      const double allowed = C * std::pow(lambdas[i], -p_o);
      if (ratio > allowed * (1 + 1e-12)) rep.violations.push_back({lambdas[i], t, ratio, allowed});
    }
  }
  return rep;
}

TransferResult convex_to_rect_transfer(double c_convex, double gamma, double alpha, double Delta, int m,
                                       int N, int n) {
  require(c_convex >= 1 && Delta >= 1, "convex_to_rect_transfer: need c >= 1 and Delta >= 1");
  require(m >= 1 && N >= 0 && n >= 1, "convex_to_rect_transfer: bad m, N or n");
  if (!(gamma < alpha && alpha < 1))
    fail(ErrorKind::InvalidArgument, "convex_to_rect_transfer: requires gamma < alpha < 1");
  TransferResult r;
  r.beta = 0.5 * (gamma + alpha);
  const double a = std::ceil(std::log(Delta) / std::log(1 / r.beta) - 1e-12);
  const double b = std::ceil(N * m + 1 + 1.5 * std::log2(static_cast<double>(n)) - 1e-12);
  r.k = 1 + static_cast<long>(a * b);
  r.bound = std::pow(c_convex, static_cast<double>(r.k));
  return r;
}

DifferentiationReport differentiation_check(const GridMeasure& mu, const GridMeasure& nu,
                                            const BasisFamily& family, std::span<const double> f,
                                            const std::vector<int>& depths, double tol_fraction,
                                            const MaximalOptions& opts) {
  require(f.size() == mu.shape().size(), "differentiation_check: function does not match the grid");
  require(mu.shape() == nu.shape(), "differentiation_check: mu and nu grids differ");
  require(!depths.empty(), "differentiation_check: empty depth schedule");
  for (double v : f) require(std::isfinite(v), "differentiation_check: f must be bounded");
  const auto [fmin, fmax] = std::minmax_element(f.begin(), f.end());
  DifferentiationReport rep;
  rep.tolerance = tol_fraction * (*fmax - *fmin);
  const double slack = 1e-12 * std::max({1.0, std::abs(*fmin), std::abs(*fmax)});
  rep.nu_total = nu.total();
  const int n = mu.dim();
  for (int d : depths) {
    DifferentiationLevel lvl;
    lvl.depth = d;
    bool fits = true;
    for (int a = 0; a < n; ++a) {
      lvl.max_side[a] = static_cast<int>(std::ldexp(static_cast<double>(mu.resolution()), -d) + 1e-9);
      if (lvl.max_side[a] < 1) fits = false;
    }
    if (!fits) {
      lvl.truncated = true;
      rep.levels.push_back(lvl);
      continue;
    }
    BasisFamily fam = family;
    MaximalOptions o = opts;
    if (fam.kind == BasisKind::ConvexShape) {
      // Keep the scales whose copies have every side within the limit.
      const RectBox bb = fam.generator->bounding_box();
      std::vector<double> kept;
      for (double s : fam.scales) {
        bool ok = true;
        for (int a = 0; a < n; ++a) ok = ok && s * bb.side(a) <= lvl.max_side[a] * mu.cell_side(a) * (1 + 1e-9);
        if (ok) kept.push_back(s);
      }
      if (kept.empty()) {
        lvl.truncated = true;
        rep.levels.push_back(lvl);
        continue;
      }
      fam.scales = std::move(kept);
    } else {
      o.max_side = lvl.max_side;
    }
    const AverageEnvelope env = average_envelope(mu, fam, f, o);
    long double mass = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      double dev = 0;
      if (std::isfinite(env.sup[i])) dev = std::max(dev, env.sup[i] - f[i]);
      if (std::isfinite(env.inf[i])) dev = std::max(dev, f[i] - env.inf[i]);
      if (dev > rep.tolerance + slack) mass += std::isfinite(nu.mass(i)) ? nu.mass(i) : 0.0;
    }
    lvl.exceptional_mass = static_cast<double>(mass);
    rep.levels.push_back(lvl);
  }
  const DifferentiationLevel* prev = nullptr;
  const DifferentiationLevel* last = nullptr;
  for (const auto& l : rep.levels) {
    if (l.truncated) continue;
    if (prev && l.exceptional_mass > prev->exceptional_mass * (1 + 1e-12) + 1e-300) rep.monotone = false;
    prev = &l;
    last = &l;
  }
  rep.pass = last && rep.monotone && last->exceptional_mass < 0.01 * rep.nu_total;
  return rep;
}

}  // namespace geomax
