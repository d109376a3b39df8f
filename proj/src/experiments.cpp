#include "geomax/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include "geomax/decomposition.hpp"
#include "geomax/error.hpp"
#include "geomax/maximal.hpp"
#include "geomax/tauberian.hpp"

#ifndef GEOMAX_VERSION
#define GEOMAX_VERSION "0.0.0"
#endif

namespace geomax {

std::string version() { return GEOMAX_VERSION; }

namespace {

using json = nlohmann::json;

// every experiment accepts these
const std::set<std::string> kCommon{"doubling_samples"};

std::set<std::string> keys(std::initializer_list<const char*> ks) {
  std::set<std::string> s(kCommon);
  for (const char* k : ks) s.insert(k);
  return s;
}

const std::set<std::string> kSetKeys{"set_lo", "set_hi", "generator"};
const std::set<std::string> kBodyKeys{"body", "body_vertices", "body_center", "body_radius", "body_sides"};
const std::set<std::string> kFuncKeys{"function", "checker_depth", "set_lo", "set_hi"};

std::set<std::string> with(std::set<std::string> s, const std::set<std::string>& more) {
  s.insert(more.begin(), more.end());
  return s;
}

std::vector<ExperimentInfo> build_registry() {
  std::vector<ExperimentInfo> r{
      {"annulus", "§7 Lemma 7.3", "mass of the eps-collar around K against the doubling bound",
       with(keys({"eps", "delta"}), kBodyKeys)},
      {"ap_constant", "§3 Definition 3.2", "sampled lower bound on the A_p constant of mu", keys({"p", "samples"})},
      {"comparability", "§5 Lemma 5.2(ii)", "convex-shape vs associated-rectangle maximal functions, two-sided",
       with(keys({"delta", "margin"}), kFuncKeys)},
      {"constants", "§6 Lemma 6.3, §7 Lemmas 7.2/7.5", "closed-form constants N, j_o, k, p_o, (m, N)",
       keys({"alpha", "beta", "gamma", "delta", "c", "rho", "eta", "xi", "xi_m", "m", "N", "dim"})},
      {"copies", "§7 Lemma 7.4", "disjoint homothetic copies of K and their mass lower bound",
       with(keys({"m", "N", "rho", "delta"}), kBodyKeys)},
      {"cz", "§6 Lemma 6.5", "Calderon-Zygmund selection vs the dyadic maximal superlevel set",
       with(keys({"beta", "trials"}), kSetKeys)},
      {"differentiation", "§1 Corollary, §4 Theorem 4.2", "exceptional nu-mass of shrinking-average deviations",
       with(keys({"depths", "tolerance"}), kFuncKeys)},
      {"doubling", "§5.1 Definition", "sampled lower bound on the doubling constant of mu", keys({"samples"})},
      {"halo", "§6 proof of Theorem 6.2", "halo iterates H_beta^k(E) and their sizes", with(keys({"beta", "k"}), kSetKeys)},
      {"tauberian", "§4, Theorem 6.2(i)", "Tauberian constant over a random set family",
       keys({"gamma", "generator", "trials"})},
      {"weak_type", "Theorems 6.2/7.1", "restricted weak type (p_o, p_o) from the measured Tauberian constant",
       keys({"gamma", "generator", "trials", "lambdas", "C", "p"})},
  };
  std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return r;
}

json box_json(const RectBox& b) { return to_json(b); }

json raw_json(const ExperimentConfig& cfg) {
  json j = json::object();
  for (const auto& [sec, kv] : cfg.raw) {
    json s = json::object();
    for (const auto& [k, v] : kv) s[k] = v;
    j[sec] = s;
  }
  return j;
}

CellSet set_from_params(const ExperimentConfig& cfg, const GridMeasure& mu, std::mt19937_64& rng) {
  if (cfg.has("set_lo") || cfg.has("set_hi")) {
    const auto lo = cfg.get_list("set_lo", {});
    const auto hi = cfg.get_list("set_hi", {});
    if (static_cast<int>(lo.size()) != mu.dim() || static_cast<int>(hi.size()) != mu.dim())
      fail(ErrorKind::Config, "set_lo/set_hi must have one entry per axis");
    for (int a = 0; a < mu.dim(); ++a)
      if (!(lo[a] < hi[a])) fail(ErrorKind::Config, "set_lo must be below set_hi");
    const RectBox box = RectBox::make(Vec::Map(lo.data(), mu.dim()), Vec::Map(hi.data(), mu.dim()));
    return CellSet::from_range(mu.shape(), mu.cells_in(box));
  }
  return generate_set(cfg.get_str("generator", "scattered/v1"), mu.shape(), rng);
}

std::vector<double> function_from_params(const ExperimentConfig& cfg, const GridMeasure& mu,
                                         std::mt19937_64& rng) {
  const std::string kind = cfg.get_str("function", "checkerboard");
  const GridShape& g = mu.shape();
  std::vector<double> f(g.size());
  if (kind == "indicator") return set_from_params(cfg, mu, rng).indicator();
  if (kind == "random") {
    std::uniform_real_distribution<double> u(0, 1);
    for (auto& v : f) v = u(rng);
    return f;
  }
  if (kind == "checkerboard") {
    const int d = cfg.get_int("checker_depth", 3);
    if (d < 0 || (1L << d) > g.res) fail(ErrorKind::Resolution, "checker_depth finer than the grid");
    const int block = g.res >> d;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto c = g.coords(i);
      int parity = 0;
      for (int a = 0; a < g.dim; ++a) parity += c[a] / block;
      f[i] = parity % 2;
    }
    return f;
  }
  fail(ErrorKind::Config, "function must be indicator, random or checkerboard");
}

ConvexBody body_from_params(const ExperimentConfig& cfg) {
  if (!cfg.has("body")) fail(ErrorKind::Config, "experiment needs 'body'");
  return parse_body(cfg.params, "body").build(cfg.window);
}

double measured_delta(const ExperimentConfig& cfg, const json& report) {
  return cfg.has("delta") ? cfg.get("delta") : report["doubling"]["mu"]["estimate"].get<double>();
}

struct Context {
  const ExperimentConfig& cfg;
  const GridMeasure& mu;
  const GridMeasure& nu;
  const BasisFamily& family;
  RunOutput& out;
  json& result;
};

void run_constants(Context& c) {
  const auto& cfg = c.cfg;
  json& r = c.result;
  const double delta = measured_delta(cfg, c.out.report);
  const int n = cfg.get_int("dim", c.mu.dim());
  if (cfg.has("beta")) {
    const double beta = cfg.get("beta");
    r["N"] = choose_N(beta, delta);
    if (cfg.has("alpha")) {
      const double alpha = cfg.get("alpha");
      r["j_o"] = choose_jo(alpha, beta);
      r["k_alpha_beta"] = k_alpha_beta(alpha, beta, delta);
    }
  }
  r["delta"] = delta;
  r["gamma_mu"] = growth_gamma(n, delta);
  r["c_n"] = comparability_constant(delta, n);
  r["rho"] = rho_constant(delta, n);
  if (cfg.has("gamma")) {
    const double gamma = cfg.get("gamma");
    if (gamma < 1) {
      const PoResult p = p_o_from_tauberian(cfg.get("c", 1.0), gamma, delta);
      r["p_o"] = {{"beta", p.beta}, {"N", p.N}, {"eta", p.eta}, {"p_o", p.p_o}};
    }
    if (cfg.has("alpha") && cfg.has("m") && cfg.has("N")) {
      const TransferResult t =
          convex_to_rect_transfer(cfg.get("c", 1.0), gamma, cfg.get("alpha"), delta, cfg.get_int("m", 1),
                                  cfg.get_int("N", 0), n);
      r["transfer"] = {{"beta", t.beta}, {"k", t.k}, {"bound", t.bound}};
    }
  }
  if (cfg.has("xi") && cfg.has("alpha") && cfg.has("eta")) {
    std::map<int, double> table;
    const auto xi = cfg.get_list("xi", {});
    const int m0 = cfg.get_int("xi_m", 1);
    for (std::size_t i = 0; i < xi.size(); ++i) table[m0 + static_cast<int>(i)] = xi[i];
    const MNChoice ch = choose_mN(cfg.get("rho", rho_constant(delta, n)), cfg.get("alpha"), cfg.get("eta"), table);
    r["mN"] = {{"m", ch.m}, {"N", ch.N}, {"threshold", ch.threshold}, {"psi", ch.psi},
               {"achieved", ch.achieved}, {"target", ch.target}};
    c.out.pass = ch.achieved >= ch.target * (1 - 1e-12);
  }
}

void run_doubling(Context& c) {
  // the measured estimate is already in the report; add the mesh growth check
  const double delta = c.out.report["doubling"]["mu"]["estimate"].get<double>();
  const DyadicMesh mesh(c.mu.window(), log2_exact(c.mu.resolution()));
  const GrowthReport g = growth_constant(c.mu, mesh, delta);
  c.result["estimate"] = delta;
  c.result["growth_gamma"] = g.gamma;
  c.result["growth_checked"] = g.checked;
  c.result["growth_violations"] = g.violations.size();
  Table t{{"generations", "ratio", "allowed"}, {}};
  for (std::size_t i = 0; i < std::min<std::size_t>(g.violations.size(), 1000); ++i)
    t.add({std::to_string(g.violations[i].generations), fmt(g.violations[i].ratio), fmt(g.violations[i].allowed)});
  c.out.tables["growth_violations"] = std::move(t);
}

void run_ap(Context& c) {
  const double p = c.cfg.get("p", 2.0);
  if (!(p > 1)) fail(ErrorKind::Config, "p must exceed 1");
  const double q = 1.0 - p / (p - 1);  // 1 - p'
  const GridMeasure dual = realize_power(c.cfg.mu, c.cfg.window, c.cfg.resolution, q);
  const ApReport a = ap_constant_estimate(c.mu, dual, p, c.family,
                                          static_cast<std::size_t>(c.cfg.get_int("samples", 20000)), c.cfg.seed);
  c.result["p"] = p;
  c.result["estimate"] = std::isfinite(a.estimate) ? json(a.estimate) : json("inf");
  c.result["infinite"] = !std::isfinite(a.estimate);
  c.result["witness"] = box_json(a.witness);
  c.result["samples"] = a.sample_count;
  c.result["infinite_samples"] = a.infinite_samples;
}

void run_halo(Context& c) {
  std::mt19937_64 rng(c.cfg.seed);
  const CellSet E = set_from_params(c.cfg, c.mu, rng);
  const double beta = c.cfg.get("beta", 0.5);
  const int k = c.cfg.get_int("k", 3);
  if (!(beta > 0 && beta < 1) || k < 0) fail(ErrorKind::Config, "halo needs beta in (0,1) and k >= 0");
  const HaloResult h = halo_iterate(c.mu, c.family, E, beta, k);
  Table t{{"k", "cells", "volume", "mu_mass", "touches_boundary"}, {}};
  const double vol = c.mu.cell_volume();
  bool nested = true;
  for (std::size_t i = 0; i < h.iterates.size(); ++i) {
    const auto& H = h.iterates[i];
    if (i && !h.iterates[i - 1].subset_of(H)) nested = false;
    t.add({std::to_string(i), std::to_string(H.count()), fmt(static_cast<double>(H.count()) * vol),
           fmt(integrate(c.mu, H).value), H.touches_boundary() ? "1" : "0"});
  }
  c.out.tables["halo"] = std::move(t);
  c.result["beta"] = beta;
  c.result["k"] = k;
  c.result["nested"] = nested;
  c.result["truncated_from"] = h.truncated_from;
  c.out.report["truncated"] = h.truncated;
  c.out.pass = nested;
}

void run_cz(Context& c) {
  const double beta = c.cfg.get("beta", 0.5);
  const DyadicMesh mesh(c.mu.window(), log2_exact(c.mu.resolution()));
  std::mt19937_64 rng(c.cfg.seed);
  const int trials = (c.cfg.has("set_lo") || c.cfg.has("set_hi")) ? 1 : c.cfg.get_int("trials", 1);
  Table t{{"trial", "selected", "selected_cells", "matches_dyadic_superlevel", "residual_mass"}, {}};
  int run = 0, mismatches = 0;
  json first;
  for (int i = 0; i < trials; ++i) {
    const CellSet E = set_from_params(c.cfg, c.mu, rng);
    if (integrate(c.mu, E).value >= beta * c.mu.total()) continue;  // root must satisfy the precondition
    const CZSelection sel = cz_decompose(c.mu, mesh, E, beta);
    const CellSet cells = selection_cells(c.mu, mesh, sel);
    const auto ind = E.indicator();
    const CellSet sup = superlevel(dyadic_maximal(c.mu, mesh, ind), beta, true);
    const bool match = cells == sup;
    mismatches += !match;
    if (run == 0) first = cz_to_json(c.mu, sel);
    ++run;
    t.add({std::to_string(i), std::to_string(sel.selected.size()), std::to_string(cells.count()), match ? "1" : "0",
           fmt(sel.residual_mass)});
  }
  if (run == 0) fail(ErrorKind::InvalidArgument, "root violates CZ precondition");
  c.out.tables["cz"] = std::move(t);
  c.result["beta"] = beta;
  c.result["instances"] = run;
  c.result["mismatches"] = mismatches;
  c.result["selection"] = first;
  c.out.pass = mismatches == 0;
}

void run_annulus(Context& c) {
  const ConvexBody K = body_from_params(c.cfg);
  const double delta = measured_delta(c.cfg, c.out.report);
  const auto eps = c.cfg.get_list("eps", {1.0 / 256, 1.0 / 512, 1.0 / 1024});
  Table t{{"eps", "mass", "bound", "holds"}, {}};
  bool all = true;
  for (double e : eps) {
    const AnnulusResult a = annulus_measure(c.mu, K, c.mu.window(), e, delta);
    all = all && a.holds();
    t.add({fmt(e), fmt(a.mass), fmt(a.bound), a.holds() ? "1" : "0"});
  }
  c.out.tables["annulus"] = std::move(t);
  c.result["delta"] = delta;
  c.result["holds"] = all;
  c.out.pass = all;
}

void run_copies(Context& c) {
  const ConvexBody K = body_from_params(c.cfg);
  const double delta = measured_delta(c.cfg, c.out.report);
  const int m = c.cfg.get_int("m", 4);
  const int N = c.cfg.get_int("N", 2);
  const double rho = c.cfg.get("rho", rho_constant(delta, c.mu.dim()));
  const CopiesResult r = homothetic_copies(c.mu, K, c.mu.window(), m, N, rho);
  c.result = copies_to_json(c.mu, r);
  c.result["m"] = m;
  c.result["N"] = N;
  c.result["holds"] = r.holds();
  c.result["depth_bound_ok"] = r.max_depth <= m * N;
  c.out.pass = r.holds() && r.max_depth <= m * N;
}

void run_comparability(Context& c) {
  if (c.family.kind != BasisKind::ConvexShape) fail(ErrorKind::Config, "comparability needs a shape basis");
  std::mt19937_64 rng(c.cfg.seed);
  const auto f = function_from_params(c.cfg, c.mu, rng);
  const double delta = measured_delta(c.cfg, c.out.report);
  const BasisFamily rect = associated_family(c.family);
  const ComparabilityReport r =
      comparability_check(c.mu, c.family, rect, f, delta, c.cfg.get_int("margin", 0));
  c.result["delta"] = delta;
  c.result["constant"] = r.constant;
  c.result["max_ratio_convex"] = r.max_ratio_convex;
  c.result["max_ratio_rect"] = r.max_ratio_rect;
  c.result["checked"] = r.checked;
  c.result["violations"] = r.violations;
  c.out.pass = r.pass();
}

void run_differentiation(Context& c) {
  std::mt19937_64 rng(c.cfg.seed);
  const auto f = function_from_params(c.cfg, c.mu, rng);
  std::vector<int> depths;
  for (double d : c.cfg.get_list("depths", {1, 2, 3, 4, 5, 6})) depths.push_back(static_cast<int>(d));
  const DifferentiationReport r = differentiation_check(c.mu, c.nu, c.family, f, depths, c.cfg.get("tolerance", 0.05));
  Table t{{"depth", "exceptional_mass", "fraction", "truncated"}, {}};
  bool trunc = false;
  for (const auto& l : r.levels) {
    trunc = trunc || l.truncated;
    t.add({std::to_string(l.depth), fmt(l.exceptional_mass), fmt(l.exceptional_mass / r.nu_total),
           l.truncated ? "1" : "0"});
  }
  c.out.tables["levels"] = std::move(t);
  c.result["tolerance"] = r.tolerance;
  c.result["nu_total"] = r.nu_total;
  c.result["monotone"] = r.monotone;
  c.out.report["truncated"] = trunc;
  c.out.pass = r.pass;
}

void run_tauberian(Context& c) {
  const double gamma = c.cfg.get("gamma", 0.5);
  const TauberianReport r =
      tauberian_constant(c.mu, c.nu, c.family, gamma, c.cfg.get_str("generator", "scattered/v1"),
                         static_cast<std::size_t>(c.cfg.get_int("trials", 50)), c.cfg.seed);
  Table t{{"trial", "ratio"}, {}};
  for (std::size_t i = 0; i < r.ratios.size(); ++i) t.add({std::to_string(i), fmt(r.ratios[i])});
  c.out.tables["ratios"] = std::move(t);
  c.result["gamma"] = gamma;
  c.result["constant_lower"] = r.constant_lower;
  c.result["generator"] = r.generator;
  c.result["trials"] = r.trials;
  c.result["skipped"] = r.skipped;
  c.result["witness_trial"] = r.witness_trial;
  c.result["witness_rle"] = encode_rle(r.witness);
  if (gamma < 1) {
    const PoResult p = p_o_from_tauberian(std::max(1.0, r.constant_lower), gamma,
                                          c.out.report["doubling"]["mu"]["estimate"].get<double>());
    c.result["p_o"] = p.p_o;
  }
  c.out.report["truncated"] = r.truncated;
}

void run_weak_type(Context& c) {
  const double gamma = c.cfg.get("gamma", 0.5);
  const std::string gen = c.cfg.get_str("generator", "scattered/v1");
  const auto trials = static_cast<std::size_t>(c.cfg.get_int("trials", 50));
  const TauberianReport tr = tauberian_constant(c.mu, c.nu, c.family, gamma, gen, trials, c.cfg.seed);
  const double delta = c.out.report["doubling"]["mu"]["estimate"].get<double>();
  const double cm = std::max(1.0, tr.constant_lower);
  const double p_o = c.cfg.get("p", p_o_from_tauberian(cm, gamma, delta).p_o);
  const double C = c.cfg.get("C", cm);
  const auto lambdas = c.cfg.get_list("lambdas", {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625});
  const WeakTypeReport w =
      restricted_weak_type_check(c.mu, c.nu, c.family, p_o, C, lambdas, gen, trials, c.cfg.seed + 1);
  Table t{{"lambda", "max_ratio", "allowed"}, {}};
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    t.add({fmt(lambdas[i]), fmt(w.max_ratio[i]), fmt(C * std::pow(lambdas[i], -p_o))});
  c.out.tables["lambda"] = std::move(t);
  c.result["gamma"] = gamma;
  c.result["tauberian_constant"] = tr.constant_lower;
  c.result["p_o"] = p_o;
  c.result["C"] = C;
  c.result["sets"] = w.sets;
  json v = json::array();
  for (const auto& x : w.violations)
    v.push_back({{"lambda", x.lambda}, {"trial", x.trial}, {"ratio", x.ratio}, {"allowed", x.allowed}});
  c.result["violations"] = v;
  c.out.report["truncated"] = tr.truncated;
  c.out.pass = w.pass();
}

const std::map<std::string, std::function<void(Context&)>>& runners() {
  static const std::map<std::string, std::function<void(Context&)>> m{
      {"annulus", run_annulus},       {"ap_constant", run_ap},   {"comparability", run_comparability},
      {"constants", run_constants},   {"copies", run_copies},    {"cz", run_cz},
      {"differentiation", run_differentiation}, {"doubling", run_doubling}, {"halo", run_halo},
      {"tauberian", run_tauberian},   {"weak_type", run_weak_type}};
  return m;
}

json doubling_json(const GridMeasure& m, const BasisFamily& fam, std::size_t samples, std::uint64_t seed) {
  try {
    const DoublingReport d = doubling_constant_estimate(m, fam, samples, seed);
    return {{"estimate", d.estimate}, {"samples", d.sample_count}, {"skipped", d.skipped},
            {"witness_small", box_json(d.witness_small)}, {"witness_big", box_json(d.witness_big)}};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Degenerate) throw;
    return {{"estimate", nullptr}, {"error", e.what()}};
  }
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_registry() {
  static const std::vector<ExperimentInfo> r = build_registry();
  return r;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : experiment_registry())
    if (e.name == name) return &e;
  return nullptr;
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
  const auto it = runners().find(cfg.experiment);
  if (it == runners().end()) fail(ErrorKind::Config, "unknown experiment '" + cfg.experiment + "'");
  const GridMeasure mu = realize(cfg.mu, cfg.window, cfg.resolution);
  const GridMeasure nu = cfg.nu_given ? realize(cfg.nu, cfg.window, cfg.resolution) : mu;
  const BasisFamily family = cfg.basis.build(cfg.window, cfg.resolution);

  RunOutput out;
  json& rep = out.report;
  rep["version"] = version();
  rep["experiment"] = cfg.experiment;
  rep["config"] = raw_json(cfg);
  rep["seed"] = cfg.seed;
  rep["window"] = box_json(cfg.window);
  rep["resolution"] = cfg.resolution;
  rep["basis"] = family.descriptor();
  rep["truncated"] = false;

  const int def_samples = family.kind == BasisKind::ConvexShape ? 300 : 4000;
  const auto samples = static_cast<std::size_t>(
      cfg.get_int("doubling_samples", cfg.experiment == "doubling" ? cfg.get_int("samples", def_samples) : def_samples));
  rep["doubling"]["mu"] = doubling_json(mu, family, samples, cfg.seed);
  if (cfg.nu_given) rep["doubling"]["nu"] = doubling_json(nu, family, samples, cfg.seed);
  if (rep["doubling"]["mu"]["estimate"].is_null() && cfg.experiment != "constants" && !cfg.has("delta"))
    rep["doubling"]["mu"]["estimate"] = std::numeric_limits<double>::infinity();

  json result = json::object();
  Context ctx{cfg, mu, nu, family, out, result};
  it->second(ctx);
  rep["result"] = result;
  rep["pass"] = out.pass;
  return out;
}

void write_outputs(const std::string& prefix, const RunOutput& out) {
  const std::filesystem::path p(prefix);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  {
    std::ofstream os(prefix + ".report.json");
    if (!os) fail(ErrorKind::Config, "cannot write '" + prefix + ".report.json'");
    os << out.report.dump(2) << '\n';
  }
  for (const auto& [name, table] : out.tables) {
    std::ofstream os(prefix + "." + name + ".csv");
    if (!os) fail(ErrorKind::Config, "cannot write '" + prefix + "." + name + ".csv'");
    table.write(os);
  }
}

}  // namespace geomax
