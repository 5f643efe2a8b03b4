#ifndef RINGTRAP_MD_ENGINE_HPP
#define RINGTRAP_MD_ENGINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ringtrap/ring_statics.hpp"
#include "ringtrap/trap.hpp"

namespace ringtrap {

struct IonEnsemble {
  std::vector<Vec3> positions;  // m
  std::vector<Vec3> velocities; // m/s
  double time = 0;              // s
  IonSpecies species;

  int n() const { return static_cast<int>(positions.size()); }
};

// Stochastic photon-scattering cooling: pairs of counter-propagating beams,
// saturation shared equally between beams, Lorentzian scattering rate with
// Doppler shift, hbar*k absorption kick plus an isotropic re-emission recoil.
struct CoolingConfig {
  bool enabled = true;       // false: no scattering at all
  double detuning = 0;       // rad/s; 0 means "use default -gamma/2"
  double rabi = 0;           // rad/s; 0 means "use default gamma/2"
  std::vector<Vec3> beams;   // unit vectors; empty means +-x, +-y, +-z
  // cooling-on windows (s); empty means always on
  std::vector<std::pair<double, double>> on_intervals;

  double detuning_or_default(const IonSpecies& s) const;
  double rabi_or_default(const IonSpecies& s) const;
  std::vector<Vec3> beams_or_default() const;
  double saturation_total(const IonSpecies& s) const; // 2 Omega_L^2 / gamma^2
  bool is_on(double t) const;
  void validate() const;
};

// Per-beam scattering rate for effective detuning (delta - k.v).
double scattering_rate(double gamma, double s_beam, double detuning,
                       double doppler_shift);

struct IntegratorConfig {
  double timestep = 0;          // s; 0 means rf period / steps_per_rf_period
  int steps_per_rf_period = 100;
  uint64_t seed = 0;

  double resolved_timestep(const TrapConfig& trap) const;
  void validate(const TrapConfig& trap) const; // needs >= 50 steps per rf period
};

enum class ForceMode {
  full_rf,          // time-dependent multipole field + static + Coulomb
  pseudopotential,  // secular field + static + Coulomb (conservative)
  coulomb_only,     // free Coulomb cluster, no trap
};

struct TemperatureRecord {
  double t = 0;        // s, centre of the averaging window
  double t_axial = 0;  // K
  double t_radial = 0; // K
  double t_angular = 0;// K
};

// Exact pairwise Coulomb forces; Newton's third law holds term by term.
// Throws IntegrationError on coincident ions.
void coulomb_forces(const IonSpecies& s, const std::vector<Vec3>& pos,
                    std::vector<Vec3>& force);

// Windowed thermometer. Micromotion is removed from the in-plane components
// by a sliding mean over one rf period before the variance is taken; the
// axial component is used raw (the rf field has no axial component).
// Windows shorter than one rf period are rejected; callers should average
// over at least ten secular periods for meaningful temperatures.
class TemperatureAccumulator {
 public:
  TemperatureAccumulator(int n_ions, int rf_period_steps);
  void add_sample(const std::vector<Vec3>& pos, const std::vector<Vec3>& vel,
                  double mass, double t);
  bool has_window() const { return samples_ > 0; }
  // Throws std::invalid_argument if fewer samples than one rf period were seen.
  TemperatureRecord finalize(double mass) const;
  void reset();

 private:
  int n_;
  int period_;
  int filled_ = 0;
  int head_ = 0;
  long samples_ = 0;
  double t_first_ = 0, t_last_ = 0;
  std::vector<Vec3> ring_;  // n * period velocity history
  std::vector<Vec3> vsum_;  // running per-ion sum over the buffer
  double acc_ax_ = 0, acc_rad_ = 0, acc_ang_ = 0;
};

// Second-order symplectic drift-kick-drift stepper; the time-dependent force
// is evaluated once per step at the midpoint.
class MdIntegrator {
 public:
  MdIntegrator(TrapConfig trap, CoolingConfig cooling, IntegratorConfig integ,
               ForceMode mode, const IonSpecies& species);

  void step(IonEnsemble& ens);
  void run_steps(IonEnsemble& ens, long n_steps,
                 TemperatureAccumulator* acc = nullptr);

  // run_sequence toggles this; unset means "follow cooling.on_intervals".
  void set_cooling_override(std::optional<bool> on) { cooling_override_ = on; }

  double timestep() const { return dt_; }
  const TrapConfig& trap() const { return trap_; }
  std::mt19937_64& rng() { return rng_; }
  static const char* rng_name() { return "mt19937_64"; }

 private:
  void forces_at(const std::vector<Vec3>& pos, double t, std::vector<Vec3>& f);
  void apply_cooling(IonEnsemble& ens);
  void check_finite(const IonEnsemble& ens) const;

  TrapConfig trap_;
  CoolingConfig cooling_;
  ForceMode mode_;
  IonSpecies species_;
  double dt_;
  double s_beam_;
  double detuning_;
  std::vector<Vec3> beams_;
  std::mt19937_64 rng_;
  std::optional<bool> cooling_override_;
  std::vector<Vec3> force_;
};

// One temperature record per dark/cool segment of the schedule.
struct SequenceRecord {
  TemperatureRecord temps;
  int cycle = -1;      // -1 for the settle segment
  bool dark = false;
};

struct SequenceSchedule {
  double settle_time = 0; // cooling on before the cycles start, s
  double dark_time = 0;   // s
  double cool_time = 0;   // s
  int cycles = 0;

  void validate() const;
};

struct SequenceResult {
  std::vector<SequenceRecord> records;
  double dark_mean_t_axial = 0; // K, mean over dark segments
  double dark_fwhm_t_axial = 0; // K, 2.3548 * std over dark segments
};

// Alternating dark (cooling off) / cool segments; segment lengths are rounded
// to whole steps so the schedule is exact and seed-reproducible.
SequenceResult run_sequence(
    IonEnsemble& ens, MdIntegrator& integ, const SequenceSchedule& sched,
    const std::function<void(const IonEnsemble&, const SequenceRecord&)>&
        on_segment = {});

// Diagnostics used by conservation tests and the CLI.
double kinetic_energy(const IonEnsemble& ens);
double total_energy_pseudopotential(const TrapConfig& cfg, const IonEnsemble& ens);
Vec3 total_momentum(const IonEnsemble& ens);

// Start ions on the driven rf orbit for their position (zero transient):
// shifts each ion by the instantaneous micromotion displacement at t = 0.
void seed_micromotion_phase(const TrapConfig& cfg, IonEnsemble& ens);

// Maxwellian velocities at temperature T (deterministic Box-Muller draws).
void thermalize(IonEnsemble& ens, double temperature, std::mt19937_64& rng);

std::string dump_state(const IonEnsemble& ens); // diagnostic text dump

} // namespace ringtrap

#endif
