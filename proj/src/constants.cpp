#include <cmath>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"
#include "geomax/maximal.hpp"

namespace geomax {

namespace {

// Ceiling that does not round exact integers up through floating-point noise.
int safe_ceil(double x) { return static_cast<int>(std::ceil(x - 1e-12 * std::max(1.0, std::abs(x)))); }

}  // namespace

int choose_N(double beta, double Delta) {
  require(beta > 0 && beta < 1, "choose_N: beta must lie in (0,1)");
  require(Delta >= 1, "choose_N: Delta must be >= 1");
  const double num = std::max(0.0, std::log(beta * Delta));
  return std::max(0, safe_ceil(num / std::log(1 / beta)));
}

int choose_jo(double alpha, double beta) {
  require(alpha > 0 && alpha < beta && beta < 1, "choose_jo: need 0 < alpha < beta < 1");
  return std::max(1, safe_ceil(std::log(beta / alpha) / std::log(1 / beta)));
}

int k_alpha_beta(double alpha, double beta, double Delta) {
  if (!(alpha < beta)) fail(ErrorKind::InvalidArgument, "k_alpha_beta: requires alpha < beta");
  return choose_jo(alpha, beta) * (choose_N(beta, Delta) + 2) + 1;
}

double growth_gamma(int n, double delta) {
  require(n >= 1 && delta >= 1, "growth_gamma: need n >= 1 and delta >= 1");
  return 1.0 + (std::ldexp(1.0, n) - 1.0) / delta;
}

double rho_constant(double Delta, int n) { return 1.0 / comparability_constant(Delta, n); }

MNChoice choose_mN(double rho, double alpha, double eta, const std::map<int, double>& xi_table) {
  require(rho > 0 && rho <= 1, "choose_mN: rho must lie in (0,1]");
  require(eta > 0 && eta < alpha && alpha < 1, "choose_mN: need 0 < eta < alpha < 1");
  MNChoice out;
  out.threshold = 1 - rho * (alpha - eta) / (2 - alpha - eta);
  out.target = (1 - alpha) / (1 - eta);
  for (const auto& [m, xi] : xi_table) {
    if (!(xi > out.threshold)) continue;
    out.m = m;
    out.psi = xi - rho;
    if (!(out.psi > 0 && out.psi < 1)) continue;
    const double N = std::log((2 - alpha - eta) / (alpha - eta)) / std::log(1 / out.psi);
    out.N = std::max(1, safe_ceil(N));
    out.achieved = rho * (1 - std::pow(out.psi, out.N + 1)) / (1 - out.psi);
    return out;
  }
  fail(ErrorKind::Resolution, "measure's xi insufficient at this resolution");
}

}  // namespace geomax
