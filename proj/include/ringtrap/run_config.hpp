#ifndef RINGTRAP_RUN_CONFIG_HPP
#define RINGTRAP_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ringtrap/md_engine.hpp"
#include "ringtrap/shift_budget.hpp"

namespace ringtrap {

enum class RunMode { potential_scan, statics, md, budget, sweep };

const char* to_string(RunMode m);

// Full description of a run, parsed from the line-oriented key = value config.
// Dimensioned values carry mandatory units in the file; everything here is SI
// (angular frequencies in rad/s).
struct RunConfig {
  RunMode mode = RunMode::budget;
  uint64_t seed = 0;
  std::string output_dir = "out";

  TrapConfig trap;
  IonSpecies species;
  bool species_from_registry = true;
  int n_ions = 0;

  // budget scenario
  ClockScenario scenario; // trap/species/n_ions mirrored in build()

  // md
  int steps_per_rf_period = 100;
  double cooling_detuning_gamma = -0.5; // units of gamma
  double cooling_rabi_gamma = 0.5;      // units of gamma
  std::string cooling_beams = "xyz";    // xyz | xy | z
  SequenceSchedule sequence;
  double initial_temperature = 0.005;   // K

  // potential scan
  double scan_r_max = 0;  // m; 0 = 1.6 * r_min
  int scan_points = 400;

  // sweep
  std::string sweep_target;     // "statics" | "budget"
  std::string sweep_parameter;
  std::vector<double> sweep_values; // SI
  std::string sweep_parameter2;
  std::vector<double> sweep_values2;

  // budget CI thresholds (NaN = unset)
  double max_total_shift_hz;
  double max_total_broadening_hz;
  double max_long_term;

  // optional stability report inputs (NaN = unset)
  double stability_q;
  double stability_cycle_time;
  double stability_tau;

  RunConfig();

  ClockScenario build_scenario() const;
  CoolingConfig build_cooling() const;
  IntegratorConfig build_integrator() const;
};

// Strict parser: unknown keys, missing units and malformed values are
// rejected with the offending line number.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Deterministic canonical rendering (SI units, shortest round-trip numbers).
// parse(canonical_config(cfg)) reproduces cfg exactly.
std::string canonical_config(const RunConfig& cfg);

uint64_t config_hash(const RunConfig& cfg);

// Apply one sweep-parameter assignment ("trap.rf_amplitude", SI value).
void apply_parameter(RunConfig& cfg, const std::string& name, double value);
// Dimension token of a sweep parameter; throws on unknown names.
std::string parameter_dimension(const std::string& name);

} // namespace ringtrap

#endif
