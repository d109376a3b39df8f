#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "geomax/geometry.hpp"
#include "geomax/grid.hpp"
#include "geomax/maximal.hpp"
#include "geomax/measure.hpp"

namespace geomax {

/// Versioned random-set families: "single/v1", "scattered/v1", "dyadic/v1".
std::vector<std::string> set_generator_names();
/// Draws one set; throws InvalidArgument for an unknown generator.
CellSet generate_set(const std::string& generator, const GridShape& shape, std::mt19937_64& rng);

struct TauberianReport {
  double gamma = 0;
  double constant_lower = 1;  // max ν({M 1_E > γ}) / ν(E) over the trials
  CellSet witness;
  std::size_t witness_trial = 0;
  std::string generator;
  std::uint64_t seed = 0;
  RectBox window;
  std::size_t trials = 0;
  std::size_t skipped = 0;   // ν(E) = 0
  bool truncated = false;    // some superlevel set reached the window edge
  std::vector<double> ratios;  // per evaluated trial
};

TauberianReport tauberian_constant(const GridMeasure& mu, const GridMeasure& nu, const BasisFamily& family,
                                   double gamma, const std::string& generator, std::size_t trials,
                                   std::uint64_t seed, const MaximalOptions& opts = {});

struct PoResult {
  double beta = 0;  // (γ + 1)/2
  int N = 0;        // choose_N(β, Δ)
  double eta = 0;   // 2(N + 2)
  double p_o = 0;   // η log(max(c, 2)) / log(1/β)
};

PoResult p_o_from_tauberian(double c, double gamma, double Delta);

struct WeakTypeViolation {
  double lambda = 0;
  std::size_t trial = 0;
  double ratio = 0;    // ν({M 1_E > λ}) / ν(E)
  double allowed = 0;  // C λ^{-p_o}
};

struct WeakTypeReport {
  double p_o = 0;
  double C = 0;
  std::vector<double> lambdas;
  std::vector<double> max_ratio;  // per λ, over the tested sets
  std::size_t sets = 0;
  std::vector<WeakTypeViolation> violations;
  bool pass() const { return violations.empty(); }
};

WeakTypeReport restricted_weak_type_check(const GridMeasure& mu, const GridMeasure& nu,
                                          const BasisFamily& family, double p_o, double C,
                                          const std::vector<double>& lambdas, const std::string& generator,
                                          std::size_t trials, std::uint64_t seed,
                                          const MaximalOptions& opts = {});

struct TransferResult {
  double beta = 0;  // (γ + α)/2
  long k = 0;       // 1 + ⌈log Δ / log(1/β)⌉ ⌈N m + 1 + 1.5 log2 n⌉
  double bound = 1; // c^k (may overflow to +inf)
};

TransferResult convex_to_rect_transfer(double c_convex, double gamma, double alpha, double Delta, int m,
                                       int N, int n);

struct DifferentiationLevel {
  int depth = 0;
  std::array<int, 3> max_side{0, 0, 0};  // cells
  double exceptional_mass = 0;           // ν{deviation > t}
  bool truncated = false;                // depth finer than one cell; not evaluated
};

struct DifferentiationReport {
  double tolerance = 0;  // t = fraction · osc(f)
  double nu_total = 0;
  std::vector<DifferentiationLevel> levels;
  bool monotone = true;
  bool pass = false;     // monotone and final mass < 1% of ν(window)
};

/// For each depth d: ν-mass of cells where some element of side ≤ 2^{-d}·window side
/// containing the cell has |avg_μ f - f(x)| > t.
DifferentiationReport differentiation_check(const GridMeasure& mu, const GridMeasure& nu,
                                            const BasisFamily& family, std::span<const double> f,
                                            const std::vector<int>& depths, double tol_fraction = 0.05,
                                            const MaximalOptions& opts = {});

}  // namespace geomax
