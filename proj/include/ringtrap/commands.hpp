#ifndef RINGTRAP_COMMANDS_HPP
#define RINGTRAP_COMMANDS_HPP

#include <string>
#include <vector>

#include "ringtrap/run_config.hpp"

namespace ringtrap {

inline constexpr const char* version_string = "ringtrap 0.1.0";

// Plain-text position/velocity snapshot, one row per ion, SI units,
// config hash and simulation time in the header.
void write_snapshot(const std::string& path, const IonEnsemble& ens,
                    const std::string& config_hash_hex);
IonEnsemble read_snapshot(const std::string& path, const IonSpecies& species);

struct CommandOutcome {
  int exit_code = 0;
  std::vector<std::string> files;
  std::string summary;
};

CommandOutcome cmd_potential_scan(const RunConfig& cfg, const std::string& out_dir);
CommandOutcome cmd_statics(const RunConfig& cfg, const std::string& out_dir);
CommandOutcome cmd_md(const RunConfig& cfg, const std::string& out_dir);
CommandOutcome cmd_budget(const RunConfig& cfg, const std::string& out_dir);
CommandOutcome cmd_sweep(const RunConfig& cfg, const std::string& out_dir,
                         int threads);
// Re-checks the config hash embedded in every output file of a directory.
CommandOutcome cmd_verify(const RunConfig& cfg, const std::string& out_dir);

// Relax + classify helper shared by cmd_statics and the sweep worker.
struct StaticsResult {
  RelaxedEnsemble relaxed;
  StructureClass structure;
  double r_min = 0;       // m
  double r_stability = 0; // m, double-ring limit (NaN for odd N)
  double epsilon = 0;     // m
  double eta_ring = 0;
  double micromotion = 0; // m, at the relaxed mean radius
};
StaticsResult run_statics(const TrapConfig& trap, const IonSpecies& species,
                          int n_ions, uint64_t seed);

} // namespace ringtrap

#endif
