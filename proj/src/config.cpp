#include "geomax/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "geomax/error.hpp"
#include "geomax/experiments.hpp"

namespace geomax {

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    config_error("'" + key + "': expected a number, got '" + v + "'");
  }
  if (trim(v.substr(used)).size()) config_error("'" + key + "': expected a number, got '" + v + "'");
  return out;
}

void check_keys(const std::string& section, const Section& s, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : s)
    if (!allowed.count(k)) config_error("unknown key '" + k + "' in [" + section + "]");
}

WeightSpec parse_weight(const std::string& name, const Section& s) {
  check_keys(name, s, {"kind", "exponents", "factors", "seed", "lo", "hi"});
  const auto it = s.find("kind");
  if (it == s.end()) config_error("[" + name + "] needs 'kind'");
  const std::string kind = it->second;
  auto get = [&](const std::string& k) -> const std::string* {
    const auto f = s.find(k);
    return f == s.end() ? nullptr : &f->second;
  };
  if (kind == "lebesgue") return WeightSpec::lebesgue();
  if (kind == "gaussian") return WeightSpec::gaussian();
  if (kind == "power") {
    if (!get("exponents")) config_error("[" + name + "] power weight needs 'exponents'");
    const auto e = parse_list(*get("exponents"));
    for (double a : e)
      if (!(a > -1)) config_error("[" + name + "] exponents must exceed -1");
    return WeightSpec::power(e);
  }
  if (kind == "product") {
    if (!get("factors")) config_error("[" + name + "] product weight needs 'factors'");
    std::vector<Factor1D> fs;
    std::stringstream ss(*get("factors"));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok == "lebesgue") {
        fs.push_back(Factor1D{});
      } else if (tok == "gaussian") {
        fs.push_back(Factor1D{Factor1D::Kind::Gaussian, 0.0});
      } else if (tok.rfind("power:", 0) == 0) {
        const double a = to_double("factors", tok.substr(6));
        if (!(a > -1)) config_error("[" + name + "] power factor exponent must exceed -1");
        fs.push_back(Factor1D{Factor1D::Kind::Power, a});
      } else {
        config_error("[" + name + "] unknown factor '" + tok + "'");
      }
    }
    if (fs.empty()) config_error("[" + name + "] empty factor list");
    return WeightSpec::product(fs);
  }
  if (kind == "dyadic_random") {
    const double lo = get("lo") ? to_double("lo", *get("lo")) : 0.3;
    const double hi = get("hi") ? to_double("hi", *get("hi")) : 0.7;
    if (!(lo > 0 && hi < 1 && lo <= hi)) config_error("[" + name + "] need 0 < lo <= hi < 1");
    const std::uint64_t seed = get("seed") ? std::stoull(*get("seed")) : 0;
    return WeightSpec::dyadic_random(seed, lo, hi);
  }
  config_error("[" + name + "] unknown weight kind '" + kind + "'");
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) config_error("empty entry in list '" + text + "'");
    out.push_back(to_double("list", tok));
  }
  return out;
}

BodySpec parse_body(const Section& s, const std::string& prefix) {
  auto key = [&](const std::string& n) { return prefix.empty() ? n : prefix + "_" + n; };
  auto get = [&](const std::string& k) -> const std::string* {
    const auto f = s.find(k);
    return f == s.end() ? nullptr : &f->second;
  };
  BodySpec b;
  const std::string kind_key = prefix.empty() ? "shape" : prefix;
  if (!get(kind_key)) config_error("missing '" + kind_key + "'");
  b.kind = *get(kind_key);
  if (b.kind == "disk") {
    if (get(key("center"))) {
      const auto c = parse_list(*get(key("center")));
      b.center = Vec::Map(c.data(), static_cast<Eigen::Index>(c.size()));
    }
    if (get(key("radius"))) b.radius = to_double(key("radius"), *get(key("radius")));
    if (get(key("sides"))) b.sides = static_cast<int>(to_double(key("sides"), *get(key("sides"))));
    if (b.sides < 8) config_error("'" + key("sides") + "' must be >= 8");
  } else if (b.kind == "polygon") {
    if (!get(key("vertices"))) config_error("polygon needs '" + key("vertices") + "'");
    std::stringstream ss(*get(key("vertices")));
    std::string pt;
    while (std::getline(ss, pt, ';')) {
      std::stringstream ps(pt);
      std::vector<double> xs;
      double v;
      while (ps >> v) xs.push_back(v);
      if (xs.empty()) continue;
      b.vertices.push_back(Vec::Map(xs.data(), static_cast<Eigen::Index>(xs.size())));
    }
    if (b.vertices.size() < 2) config_error("polygon needs at least two vertices");
  } else {
    config_error("unknown body kind '" + b.kind + "'");
  }
  return b;
}

ConvexBody BodySpec::build(const RectBox& window) const {
  const int n = window.dim();
  if (kind == "disk") {
    if (n != 2) config_error("disk bodies need a 2D window");
    const Vec c = center.size() ? center : window.center();
    if (c.size() != 2) config_error("disk center must have two coordinates");
    const double r = radius > 0 ? radius : 0.25 * std::min(window.side(0), window.side(1));
    return ConvexBody::disk(c, r, sides);
  }
  for (const auto& v : vertices)
    if (v.size() != n) config_error("polygon vertex dimension does not match the window");
  return ConvexBody::from_points(n, vertices);
}

BasisFamily BasisSpec::build(const RectBox& window, int resolution) const {
  switch (kind) {
    case BasisKind::AxisRectangles:
      return BasisFamily::rectangles(sides);
    case BasisKind::AxisCubes:
      return BasisFamily::cubes(sides);
    case BasisKind::ConvexShape: {
      ConvexBody g = shape->build(window);
      g = g.with_john(john_ellipsoid(g));
      auto scales = BasisFamily::default_scales(g, window, resolution, per_octave);
      return BasisFamily::shape(g, std::move(scales), translation_step);
    }
  }
  return BasisFamily::rectangles();
}

double ExperimentConfig::get(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : to_double(key, it->second);
}

double ExperimentConfig::get(const std::string& key) const {
  const auto it = params.find(key);
  if (it == params.end()) config_error("[experiment] needs '" + key + "'");
  return to_double(key, it->second);
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
  const double v = get(key, static_cast<double>(fallback));
  if (v != std::floor(v)) config_error("'" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::string ExperimentConfig::get_str(const std::string& key, const std::string& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::vector<double> ExperimentConfig::get_list(const std::string& key, std::vector<double> fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : parse_list(it->second);
}

ExperimentConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream is(text);
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [name, sec] : tree) {
    if (sec.empty() && !sec.data().empty()) config_error("key '" + name + "' outside any section");
    Section s;
    for (const auto& [k, v] : sec) s[k] = trim(v.data());
    cfg.raw[name] = s;
  }
  static const std::set<std::string> sections{"mu", "nu", "basis", "grid", "experiment", "run"};
  for (const auto& [name, s] : cfg.raw)
    if (!sections.count(name)) config_error("unknown section [" + name + "]");
  for (const char* req : {"mu", "grid", "experiment", "run"})
    if (!cfg.raw.count(req)) config_error(std::string("missing section [") + req + "]");

  cfg.mu = parse_weight("mu", cfg.raw["mu"]);
  if (cfg.raw.count("nu")) {
    cfg.nu = parse_weight("nu", cfg.raw["nu"]);
    cfg.nu_given = true;
  } else {
    cfg.nu = cfg.mu;
  }

  const Section& grid = cfg.raw["grid"];
  check_keys("grid", grid, {"lo", "hi", "resolution"});
  for (const char* k : {"lo", "hi", "resolution"})
    if (!grid.count(k)) config_error(std::string("[grid] needs '") + k + "'");
  const auto lo = parse_list(grid.at("lo"));
  const auto hi = parse_list(grid.at("hi"));
  if (lo.size() != hi.size() || lo.empty() || lo.size() > 3) config_error("[grid] lo/hi must have 1-3 matching entries");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) config_error("[grid] lo must be below hi on every axis");
  cfg.window = RectBox::make(Vec::Map(lo.data(), static_cast<Eigen::Index>(lo.size())),
                             Vec::Map(hi.data(), static_cast<Eigen::Index>(hi.size())));
  const double res = to_double("resolution", grid.at("resolution"));
  if (res != std::floor(res) || res < 1) config_error("[grid] resolution must be a positive integer");
  cfg.resolution = static_cast<int>(res);

  if (cfg.raw.count("basis")) {
    const Section& b = cfg.raw["basis"];
    check_keys("basis", b, {"kind", "sides", "shape", "vertices", "center", "radius", "polygon_sides",
                            "per_octave", "translation_step"});
    const std::string kind = b.count("kind") ? b.at("kind") : "rectangles";
    if (kind == "rectangles") {
      cfg.basis.kind = BasisKind::AxisRectangles;
    } else if (kind == "cubes") {
      cfg.basis.kind = BasisKind::AxisCubes;
    } else if (kind == "shape") {
      cfg.basis.kind = BasisKind::ConvexShape;
      Section body = b;
      if (b.count("polygon_sides")) body["sides"] = b.at("polygon_sides");
      cfg.basis.shape = parse_body(body, "");
    } else {
      config_error("[basis] unknown kind '" + kind + "'");
    }
    const std::string sides = b.count("sides") ? b.at("sides") : "all";
    if (sides == "all") {
      cfg.basis.sides = SideLengths::All;
    } else if (sides == "dyadic") {
      cfg.basis.sides = SideLengths::Dyadic;
    } else {
      config_error("[basis] sides must be 'all' or 'dyadic'");
    }
    if (b.count("per_octave")) cfg.basis.per_octave = static_cast<int>(to_double("per_octave", b.at("per_octave")));
    if (b.count("translation_step"))
      cfg.basis.translation_step = static_cast<int>(to_double("translation_step", b.at("translation_step")));
    if (cfg.basis.per_octave < 1 || cfg.basis.translation_step < 1)
      config_error("[basis] per_octave and translation_step must be >= 1");
  }

  Section ex = cfg.raw["experiment"];
  if (!ex.count("name")) config_error("[experiment] needs 'name'");
  cfg.experiment = ex.at("name");
  ex.erase("name");
  cfg.params = ex;

  const Section& run = cfg.raw["run"];
  check_keys("run", run, {"seed", "output"});
  if (!run.count("seed")) config_error("[run] needs 'seed'");
  try {
    std::size_t used = 0;
    cfg.seed = std::stoull(run.at("seed"), &used);
    if (used != run.at("seed").size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    config_error("[run] seed must be an unsigned 64-bit integer");
  }
  cfg.output = run.count("output") ? run.at("output") : "geomax";
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void finalize_config(ExperimentConfig& cfg, const Overrides& o) {
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.raw["run"]["seed"] = std::to_string(*o.seed);
  }
  if (o.resolution) {
    cfg.resolution = *o.resolution;
    cfg.raw["grid"]["resolution"] = std::to_string(*o.resolution);
  }
  if (o.out_dir) cfg.output = (std::filesystem::path(*o.out_dir) / std::filesystem::path(cfg.output).filename()).string();
  if (!is_power_of_two(cfg.resolution))
    config_error("resolution " + std::to_string(cfg.resolution) + " is not a power of two");
  validate_resolution(cfg.window.dim(), cfg.resolution);  // Resolution error past the per-dimension limit

  const ExperimentInfo* info = find_experiment(cfg.experiment);
  if (!info) config_error("unknown experiment '" + cfg.experiment + "'");
  for (const auto& [k, v] : cfg.params)
    if (!info->params.count(k)) config_error("experiment '" + cfg.experiment + "' has no parameter '" + k + "'");
  if (cfg.basis.kind == BasisKind::ConvexShape && cfg.window.dim() > 2)
    config_error("convex-shape bases are supported in 1D and 2D only");
}

}  // namespace geomax
