#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "adnoise/boundstates.hpp"
#include "adnoise/config.hpp"
#include "adnoise/dipoles.hpp"
#include "adnoise/phonons.hpp"
#include "adnoise/spectrum.hpp"
#include "adnoise/table.hpp"

namespace adnoise::pipeline {

enum class Command { states, dipoles, rates, spectrum, tempsweep, mc_scaling, heat, validate };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);
std::vector<std::string> command_names();

/// Everything that does not depend on temperature.
struct Model {
  potential::SurfacePotentialParams params;  // mass model applied
  potential::BulkMaterial material;
  boundstates::BoundStateSet states;
  dipoles::DipoleLadder ladder;
  Eigen::MatrixXd couplings;
  double nu10 = 0.0;             // (E1 - E0)/hbar, rad/s
  double gamma0 = 0.0;           // exact 1 -> 0 rate at T = 0, 1/s
  double gamma0_harmonic = 0.0;  // harmonic formula at nu10
};

Model build_model(const config::RunConfig& cfg);

double resolve_temperature(const config::Temperature& t, double nu10);

struct ThermalState {
  double temperature = 0.0;
  phonons::RateMatrix rates;
  Eigen::VectorXd populations;
  spectrum::DipoleSpectrum spectrum;
};

ThermalState thermal_state(const Model& m, double temperature, bool debye_cutoff);

struct RunResult {
  std::vector<table::Table> tables;
  std::vector<std::string> summary;  // human-readable lines for stdout
  bool ok = true;                    // false when `validate` finds a failing check
};

RunResult run_pipeline(const config::RunConfig& cfg, Command command);

/// Comment lines heading every output file: tool version, command, seed,
/// and the fully resolved configuration.
std::vector<std::string> output_header(const config::RunConfig& cfg, Command command);

/// Writes every table to <cfg.output>/<name>.csv; returns the paths.
std::vector<std::string> write_outputs(const RunResult& r, const config::RunConfig& cfg,
                                       Command command);

/// Runs fn(0..n-1) on a thread pool.  If any call throws, the exception from
/// the lowest index is rethrown, so failures do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace adnoise::pipeline
