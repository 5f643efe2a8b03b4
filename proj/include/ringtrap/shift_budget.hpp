#ifndef RINGTRAP_SHIFT_BUDGET_HPP
#define RINGTRAP_SHIFT_BUDGET_HPP

#include <string>
#include <vector>

#include "ringtrap/ring_statics.hpp"
#include "ringtrap/trap.hpp"

namespace ringtrap {

// Operating point of the clock: trap, ring, temperatures, fields.
struct ClockScenario {
  TrapConfig trap;
  IonSpecies species;
  int n_ions = 0;
  double ring_radius = -1;         // m; negative means r_min + epsilon(N)
  bool ring_radius_override = false; // allow R inconsistent with the trap
  double t_axial = 0;              // K
  double t_radial = 0;             // K
  double zeeman_mj = 0.5;          // |M_J| of the D5/2 sublevel
  double magnetic_field = 0;       // T
  double magnetic_field_fluct = 0; // T
  Vec3 b_direction = {0, 0, 1};    // unit vector; z is the trap axis
  double bbr_temperature = 300;    // K
  double bbr_temperature_unc = 0;  // K
  double laser_waist = 0;          // m
  double misalignment = 0;         // m
  double extra_dc_uncertainty_hz = 0.04; // day-to-day quadrupole target, Hz

  double resolved_radius() const;  // applies the r_min + epsilon default
  void validate() const;           // R-vs-trap consistency unless overridden
};

// One row of the uncertainty budget. `shift` keeps the physical sign;
// `tabulated_shift` is the budget-table convention (magnitude with the
// table's "+" sign for the rf rows).
struct ShiftEntry {
  std::string effect;
  std::string conditions;
  double shift = 0;            // Hz, physical signed value
  double tabulated_shift = 0;  // Hz, table sign convention
  double broadening = 0;       // Hz, half width
  double long_term = 0;        // fractional
  bool in_shift_total = true;
  bool in_broadening_total = true; // only definite thermal half-widths count
  std::string notes;
};

// rf field amplitude seen by an ion parked at radius R of this scenario:
// E_rf = m wz Omega R / (q sqrt(k-1)). Shared by the scalar and tensor
// Stark entries.
double rf_field_amplitude(const ClockScenario& sc);

// Ion-loss sensitivity: epsilon(N) - epsilon(N-1) at the scenario radius.
double ion_loss_radius_change(const ClockScenario& sc);

// Tensor-shift sublevel factor f(+-1/2) = -4/5, f(+-3/2) = -1/5, f(+-5/2) = 1.
double tensor_mj_factor(double mj);

// Second-order Doppler shift from the driven micromotion at radius R.
ShiftEntry doppler2_shift(const ClockScenario& sc);

// Space-charge limited second-order Doppler shift of a large cloud,
// per unit line density; fractional.
double doppler2_large_cloud(const IonSpecies& s, double ions_per_meter, int k);

// Scalar Stark shift of the rf field at the ring radius.
ShiftEntry stark_scalar_rf(const ClockScenario& sc);

// dc-to-rf scalar Stark ratio (k-1) wz^2 / (2 Omega^2) = eta(R)^2 / 8.
double stark_scalar_dc_ratio(const TrapConfig& cfg);

// Tensor Stark shift for angle theta between the rf field and B.
ShiftEntry stark_tensor_rf(const ClockScenario& sc, double theta);

// Spread (+/- half width) of the tensor shift around the ring for an
// arbitrary B direction; zero when B lies along the trap axis.
double stark_tensor_dispersion(const ClockScenario& sc, const Vec3& b_direction);

// Zeeman bookkeeping of the summed +-1/2 line pair.
ShiftEntry zeeman_entry(const ClockScenario& sc);

// Bias field needed to split neighbouring Zeeman components by 1 kHz, T.
double zeeman_min_bias_field();

// Blackbody radiation shift, 0.38 Hz x (T/300 K)^4 with 3% model uncertainty.
ShiftEntry bbr_entry(const ClockScenario& sc);
double bbr_temperature_uncertainty_hz(const ClockScenario& sc);

// Quadrupole shift of the D5/2 state in the dc trapping gradient.
ShiftEntry quadrupole_trap_entry(const ClockScenario& sc);
ShiftEntry quadrupole_extra_dc_entry(const ClockScenario& sc);
double quadrupole_mj_polynomial(double mj); // 3 MJ^2 - 35/4

// Excitation-probability dispersion from clock-beam misalignment,
// 0.36 * 4 R dr / w^2, and whether it is negligible.
struct MisalignmentReport {
  double delta_pe = 0;
  double projection_noise = 0; // 1 / (2 sqrt N)
  bool negligible = false;     // delta_pe < 0.1 and below projection noise
};
MisalignmentReport misalignment_noise(const ClockScenario& sc);

// Allan deviation sigma_y(tau) = 1/(pi Q SNR) sqrt(Tc/tau).
double allan_deviation(double q_factor, double snr, double cycle_time, double tau);
double projection_noise_snr(int n_ions); // sqrt(N)

struct BudgetTable {
  std::vector<ShiftEntry> entries;
  double total_shift = 0;          // Hz, table convention
  double total_shift_physical = 0; // Hz, signed
  double total_broadening = 0;     // Hz
  double total_long_term = 0;      // fractional, max entry
  MisalignmentReport misalignment;
};

// All entries in budget-table order plus totals. The tensor Stark row is
// reported but kept out of the totals, which cover the standard table rows.
BudgetTable assemble_budget(const ClockScenario& sc);

// Fixed-width text rendering of the table.
std::string render_budget_text(const BudgetTable& table, const ClockScenario& sc);

} // namespace ringtrap

#endif
