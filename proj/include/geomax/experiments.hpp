#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "geomax/config.hpp"
#include "geomax/io.hpp"

namespace geomax {

std::string version();

struct ExperimentInfo {
  std::string name;
  std::string section;  // section pointer for the checked statement
  std::string description;
  std::set<std::string> params;
};

/// Registered experiments, sorted by name.
const std::vector<ExperimentInfo>& experiment_registry();
const ExperimentInfo* find_experiment(const std::string& name);

struct RunOutput {
  nlohmann::json report;
  std::map<std::string, Table> tables;
  bool pass = true;
};

/// Runs a finalized config. Library errors propagate.
RunOutput run_experiment(const ExperimentConfig& cfg);

/// `<prefix>.report.json` plus `<prefix>.<table>.csv`.
void write_outputs(const std::string& prefix, const RunOutput& out);

}  // namespace geomax
