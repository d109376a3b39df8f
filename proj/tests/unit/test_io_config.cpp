#include <doctest.h>

#include <sstream>

#include "geomax/config.hpp"
#include "geomax/error.hpp"
#include "geomax/experiments.hpp"
#include "geomax/io.hpp"
#include "geomax/tauberian.hpp"

using namespace geomax;

namespace {

const char* kHalo = R"(
[mu]
kind = lebesgue

[grid]
lo = -20
hi = 21
resolution = 4096

[experiment]
name = halo
beta = 0.5
k = 3
set_lo = 0
set_hi = 1

[run]
seed = 42
output = out/halo
)";

}  // namespace

TEST_CASE("rle round trip") {
  std::mt19937_64 rng(1);
  for (const auto& name : set_generator_names()) {
    const CellSet s = generate_set(name, GridShape{2, 32}, rng);
    CHECK(decode_rle(encode_rle(s)) == s);
  }
  CellSet full = CellSet::full(GridShape{1, 8});
  CHECK(encode_rle(full) == "1 8:0,8");
}

TEST_CASE("binary field round trip") {
  const GridMeasure mu = realize(WeightSpec::lebesgue(), RectBox::make({0, 0}, {1, 1}), 8);
  std::mt19937_64 rng(2);
  const MaximalField f = maximal_indicator(mu, BasisFamily::rectangles(), generate_set("single/v1", mu.shape(), rng));
  std::stringstream ss;
  write_field_binary(f, ss);
  const MaximalField g = read_field_binary(ss);
  CHECK(g.values == f.values);
  std::ostringstream csv;
  write_field_csv(f, csv);
  CHECK(csv.str().rfind("x,y,value\n0.0625,0.0625,", 0) == 0);
}

TEST_CASE("config parsing") {
  ExperimentConfig cfg = parse_config(kHalo);
  CHECK(cfg.experiment == "halo");
  CHECK(cfg.seed == 42);
  CHECK(cfg.resolution == 4096);
  CHECK(cfg.get("beta") == 0.5);
  finalize_config(cfg, {std::nullopt, std::nullopt, std::string("elsewhere")});
  CHECK(cfg.output == "elsewhere/halo");
}

TEST_CASE("config errors") {
  auto kind_of = [](const std::string& text) {
    try {
      ExperimentConfig cfg = parse_config(text);
      finalize_config(cfg, {});
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Numerical;  // sentinel: no error
  };
  std::string s = kHalo;
  CHECK(kind_of(s) == ErrorKind::Numerical);
  auto replace = [&](const std::string& from, const std::string& to) {
    std::string t = s;
    t.replace(t.find(from), from.size(), to);
    return t;
  };
  CHECK(kind_of(replace("resolution = 4096", "resolution = 100")) == ErrorKind::Config);
  CHECK(kind_of(replace("resolution = 4096", "resolution = 8192")) == ErrorKind::Resolution);
  CHECK(kind_of(replace("seed = 42", "")) == ErrorKind::Config);
  CHECK(kind_of(replace("name = halo", "name = nope")) == ErrorKind::Config);
  CHECK(kind_of(replace("k = 3", "kk = 3")) == ErrorKind::Config);
  CHECK(kind_of(replace("kind = lebesgue", "kind = power\nexponents = -2")) == ErrorKind::Config);
}

TEST_CASE("registry") {
  const auto& r = experiment_registry();
  CHECK(r.size() >= 11);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i - 1].name < r[i].name);
  for (const auto& e : r) CHECK(!e.section.empty());
}

TEST_CASE("constants experiment") {
  ExperimentConfig cfg = parse_config(R"(
[mu]
kind = lebesgue
[grid]
lo = 0
hi = 1
resolution = 64
[experiment]
name = constants
alpha = 0.25
beta = 0.5
delta = 2
[run]
seed = 1
)");
  finalize_config(cfg, {});
  const RunOutput out = run_experiment(cfg);
  CHECK(out.report["result"]["k_alpha_beta"].get<int>() == 3);
  CHECK(out.pass);
}
