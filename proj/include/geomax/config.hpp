#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geomax/geometry.hpp"
#include "geomax/measure.hpp"

namespace geomax {

using Section = std::map<std::string, std::string>;

/// Generator shape for a convex-shape basis or a test body K.
struct BodySpec {
  std::string kind;  // "disk" | "polygon" | "box"
  std::vector<Vec> vertices;
  Vec center;
  double radius = 0;
  int sides = 256;

  ConvexBody build(const RectBox& window) const;
};

struct BasisSpec {
  BasisKind kind = BasisKind::AxisRectangles;
  SideLengths sides = SideLengths::All;
  std::optional<BodySpec> shape;
  int per_octave = 4;
  int translation_step = 1;

  BasisFamily build(const RectBox& window, int resolution) const;
};

/// One experiment run: measures, basis, grid, experiment parameters, seed and output prefix.
struct ExperimentConfig {
  WeightSpec mu;
  WeightSpec nu;
  bool nu_given = false;
  BasisSpec basis;
  RectBox window;
  int resolution = 0;
  std::string experiment;
  Section params;
  std::uint64_t seed = 0;
  std::string output;
  /// Every parsed key, for the report echo.
  std::map<std::string, Section> raw;

  double get(const std::string& key, double fallback) const;
  double get(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;
  bool has(const std::string& key) const { return params.count(key) > 0; }
};

/// Parses INI text; throws Error(Config) on malformed input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<std::string> out_dir;
};

/// Applies CLI overrides and checks cross-field constraints (Config / Resolution errors).
void finalize_config(ExperimentConfig& cfg, const Overrides& o);

std::vector<double> parse_list(const std::string& text);
BodySpec parse_body(const Section& s, const std::string& prefix);

}  // namespace geomax
