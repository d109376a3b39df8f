#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "geomax/config.hpp"
#include "geomax/error.hpp"
#include "geomax/experiments.hpp"

namespace {

int exit_code(const geomax::Error& e) {
  switch (e.kind()) {
    case geomax::ErrorKind::Resolution:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geomax: numerical checks for weighted geometric maximal operators"};
  app.set_version_flag("--version", geomax::version());
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<std::string> out_dir;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed", seed, "override [run] seed");
  run->add_option("--resolution", resolution, "override [grid] resolution");
  run->add_option("--out", out_dir, "directory for report files");

  auto* list = app.add_subcommand("list", "list registered experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (list->parsed()) {
    for (const auto& e : geomax::experiment_registry()) {
      std::cout << e.name << "  [" << e.section << "]  " << e.description << "\n    params:";
      for (const auto& p : e.params) std::cout << ' ' << p;
      std::cout << '\n';
    }
    return 0;
  }

  try {
    geomax::ExperimentConfig cfg = geomax::load_config(config_path);
    geomax::finalize_config(cfg, geomax::Overrides{seed, resolution, out_dir});
    const geomax::RunOutput out = geomax::run_experiment(cfg);
    geomax::write_outputs(cfg.output, out);
    std::cout << cfg.experiment << ": " << (out.pass ? "pass" : "violation") << " -> " << cfg.output
              << ".report.json\n";
    return out.pass ? 0 : 1;
  } catch (const geomax::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
