#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rcheat/experiments.hpp"
#include "rcheat/hamiltonian.hpp"
#include "rcheat/redfield.hpp"

namespace rcheat {

/// Invalid configuration; `field()` is the dotted path of the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentBlock {
  SweepAxis axis = SweepAxis::Lambda;
  std::vector<double> grid;
  std::optional<std::pair<double, double>> fit_window;
  std::vector<int> levels{5, 6, 7};  // truncation grid for `converge`
  Contact bath = Contact::L;         // operator shown by `coupling-map`
};

/// Fully resolved configuration. Defaults: spin-boson Delta = 0.1,
/// theta = pi/2, lambda = 0.1, Omega = 10, M = 4 (M = 7 for Omega sweeps);
/// ladder eps = (0, 0.5, 1), lambda = 0.1, Omega = 10, M = 5; baths
/// T_h = 1, T_c = 0.5, gamma = 0.0071/pi, cutoff = 1000.
struct RunConfig {
  ModelSpec model;
  BathParams baths;
  SolverOptions solver;
  int workers = 1;
  ExperimentBlock experiment;

  SweepConfig sweep_config() const;
};

RunConfig parse_config(const nlohmann::json& doc);
/// Throws ConfigError (field "document") on malformed JSON.
RunConfig parse_config_text(std::string_view text);
/// "-" reads standard input.
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace rcheat
