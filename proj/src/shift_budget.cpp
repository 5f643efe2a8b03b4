#include "ringtrap/shift_budget.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ringtrap/constants.hpp"

namespace ringtrap {

namespace c = constants;

double ClockScenario::resolved_radius() const {
  if (ring_radius >= 0) return ring_radius;
  return equilibrium_ring_radius(trap, species, n_ions);
}

void ClockScenario::validate() const {
  trap.validate();
  species.validate();
  if (n_ions < 2) throw std::invalid_argument("scenario: need at least 2 ions");
  const double amj = std::abs(zeeman_mj);
  if (amj != 0.5 && amj != 1.5 && amj != 2.5)
    throw std::invalid_argument("scenario: M_J must be +-1/2, +-3/2 or +-5/2");
  if (ring_radius >= 0 && !ring_radius_override) {
    const double rmin = effective_potential_minimum_rmin(trap, species);
    const double eps = coulomb_radius_shift_epsilon(trap, species, n_ions);
    if (std::abs(ring_radius - rmin) > 2.0 * eps)
      throw std::invalid_argument(
          "scenario: ring radius deviates from the trap equilibrium by more "
          "than 2 epsilon; set the override flag to keep it");
  }
}

double rf_field_amplitude(const ClockScenario& sc) {
  const double k = sc.trap.k();
  return sc.species.mass * sc.trap.axial_omega * sc.trap.rf_omega *
         sc.resolved_radius() / (sc.species.charge * std::sqrt(k - 1.0));
}

double ion_loss_radius_change(const ClockScenario& sc) {
  const double r = sc.resolved_radius();
  return coulomb_shift_epsilon_at(sc.species, sc.trap.k(), sc.n_ions, r,
                                  sc.trap.axial_omega) -
         coulomb_shift_epsilon_at(sc.species, sc.trap.k(), sc.n_ions - 1, r,
                                  sc.trap.axial_omega);
}

double tensor_mj_factor(double mj) {
  const double amj = std::abs(mj);
  if (amj == 0.5) return -0.8;
  if (amj == 1.5) return -0.2;
  if (amj == 2.5) return 1.0;
  throw std::invalid_argument("tensor factor: M_J must be +-1/2, +-3/2 or +-5/2");
}

static std::string radius_label(const ClockScenario& sc) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "R=%.3g um", sc.resolved_radius() * 1e6);
  return buf;
}

// thermal broadening and ion-loss instability shared by the R^2 shifts
static void add_radial_sensitivities(const ClockScenario& sc, ShiftEntry& e) {
  const double r = sc.resolved_radius();
  if (r <= 0 || e.shift == 0) return; // degenerate on-axis scenario
  const double delta_r = thermal_radial_amplitude(sc.trap, sc.species, sc.t_radial);
  e.broadening = std::abs(e.shift) * 2.0 * delta_r / r;
  e.long_term = std::abs(e.shift) / sc.species.clock_frequency() * 2.0 *
                ion_loss_radius_change(sc) / r;
}

ShiftEntry doppler2_shift(const ClockScenario& sc) {
  const double f0 = sc.species.clock_frequency();
  const double r = sc.resolved_radius();
  const double wz = sc.trap.axial_omega;
  const double k = sc.trap.k();
  ShiftEntry e;
  e.effect = "Doppler(2nd)";
  e.conditions = radius_label(sc);
  e.shift = -f0 * wz * wz * r * r /
            (4.0 * (k - 1.0) * c::speed_of_light * c::speed_of_light);
  e.tabulated_shift = std::abs(e.shift); // table lists the magnitude with "+"
  add_radial_sensitivities(sc, e);
  e.notes = "micromotion time dilation";
  return e;
}

double doppler2_large_cloud(const IonSpecies& s, double ions_per_meter, int k) {
  if (k < 2) throw std::invalid_argument("large cloud shift: need k >= 2");
  if (ions_per_meter < 0)
    throw std::invalid_argument("large cloud shift: N_L must be >= 0");
  return -s.charge * s.charge * ions_per_meter /
         (8.0 * c::pi * c::vacuum_permittivity * s.mass * (k - 1.0) *
          c::speed_of_light * c::speed_of_light);
}

ShiftEntry stark_scalar_rf(const ClockScenario& sc) {
  const double e_rf = rf_field_amplitude(sc);
  ShiftEntry e;
  e.effect = "Stark(scalar,rf)";
  e.conditions = radius_label(sc);
  e.shift = -0.5 * sc.species.dalpha_scalar * 0.5 * e_rf * e_rf;
  e.tabulated_shift = std::abs(e.shift);
  add_radial_sensitivities(sc, e);
  e.notes = "time-averaged rf field; dc part smaller by eta^2/8";
  return e;
}

double stark_scalar_dc_ratio(const TrapConfig& cfg) {
  if (cfg.k() < 3) throw std::invalid_argument("dc Stark ratio: need 2k >= 6");
  return (cfg.k() - 1.0) * cfg.axial_omega * cfg.axial_omega /
         (2.0 * cfg.rf_omega * cfg.rf_omega);
}

ShiftEntry stark_tensor_rf(const ClockScenario& sc, double theta) {
  const double e_rf = rf_field_amplitude(sc);
  const double ct = std::cos(theta);
  ShiftEntry e;
  e.effect = "Stark(tensor,rf)";
  e.conditions = radius_label(sc);
  e.shift = -0.5 * sc.species.dalpha_tensor * tensor_mj_factor(sc.zeeman_mj) *
            0.5 * (3.0 * ct * ct - 1.0) * 0.5 * e_rf * e_rf;
  e.tabulated_shift = e.shift;
  add_radial_sensitivities(sc, e);
  e.in_shift_total = false; // reported alongside, not a standard table row
  e.in_broadening_total = false;
  e.notes = "depends on M_J; uniform over the ring for B along the trap axis";
  return e;
}

double stark_tensor_dispersion(const ClockScenario& sc, const Vec3& b_direction) {
  const double norm = std::sqrt(b_direction[0] * b_direction[0] +
                                b_direction[1] * b_direction[1] +
                                b_direction[2] * b_direction[2]);
  if (!(norm > 0)) throw std::invalid_argument("dispersion: zero B direction");
  const double e_rf = rf_field_amplitude(sc);
  const double pref = -0.5 * sc.species.dalpha_tensor *
                      tensor_mj_factor(sc.zeeman_mj) * 0.5 * e_rf * e_rf;
  const int k = sc.trap.k();
  double lo = 0, hi = 0;
  for (int i = 0; i < sc.n_ions; ++i) {
    const double a = c::two_pi * i / sc.n_ions;
    // rf field direction rotates (k-1) times faster than the ion azimuth
    const double ex = std::cos((k - 1.0) * a);
    const double ey = std::sin((k - 1.0) * a);
    const double ct = (ex * b_direction[0] + ey * b_direction[1]) / norm;
    const double shift = pref * 0.5 * (3.0 * ct * ct - 1.0);
    if (i == 0) { lo = hi = shift; }
    lo = std::min(lo, shift);
    hi = std::max(hi, shift);
  }
  return 0.5 * (hi - lo);
}

double zeeman_min_bias_field() {
  return units::gauss_to_tesla(1e3 / zeeman_d52_splitting_hz_per_gauss);
}

ShiftEntry zeeman_entry(const ClockScenario& sc) {
  const double db_gauss = units::tesla_to_gauss(sc.magnetic_field_fluct);
  const double b_gauss = units::tesla_to_gauss(sc.magnetic_field);
  const double raw = zeeman_summed_pair_hz_per_gauss * db_gauss;
  // what survives the summed-pair cancellation: locating each component
  // against the neighbouring-sublevel splitting
  const double fluct_abs = zeeman_d52_splitting_hz_per_gauss * db_gauss;
  const double b_min_gauss = units::tesla_to_gauss(zeeman_min_bias_field());
  const double fluct_rel =
      b_gauss > 0 ? fluct_abs * b_min_gauss / b_gauss : fluct_abs;
  const double f0 = sc.species.clock_frequency();

  ShiftEntry e;
  e.effect = "Zeeman(summed pair)";
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "dB<=%.2g G", db_gauss);
    e.conditions = buf;
  }
  e.shift = 0; // first order cancels in the summed scheme
  e.tabulated_shift = 0;
  e.broadening = fluct_abs;
  e.in_broadening_total = false; // tabulated as a bound, not a thermal width
  e.long_term = fluct_abs / f0;
  {
    std::ostringstream os;
    os << "line pair sensitivity " << zeeman_summed_pair_hz_per_gauss / 1e6
       << " MHz/G (raw fluctuation " << raw << " Hz); min bias "
       << b_min_gauss << " G; relative-grade regime " << fluct_rel << " Hz ("
       << fluct_rel / f0 << " fractional)";
    e.notes = os.str();
  }
  return e;
}

double bbr_temperature_uncertainty_hz(const ClockScenario& sc) {
  const double t = sc.bbr_temperature;
  if (!(t > 0)) return 0;
  const double shift = 0.38 * std::pow(t / 300.0, 4);
  return 4.0 * (sc.bbr_temperature_unc / t) * shift;
}

ShiftEntry bbr_entry(const ClockScenario& sc) {
  const double t = sc.bbr_temperature;
  ShiftEntry e;
  e.effect = "BBR";
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "T=%.0f+-%.0f K", t, sc.bbr_temperature_unc);
    e.conditions = buf;
  }
  e.shift = t > 0 ? 0.38 * std::pow(t / 300.0, 4) : 0.0;
  e.tabulated_shift = e.shift;
  e.broadening = 0;
  e.in_broadening_total = false;
  const double dt_unc = bbr_temperature_uncertainty_hz(sc);
  e.long_term = dt_unc / sc.species.clock_frequency();
  {
    std::ostringstream os;
    os << "model uncertainty 3% (" << 0.03 * e.shift << " Hz); temperature term "
       << dt_unc << " Hz";
    e.notes = os.str();
  }
  return e;
}

double quadrupole_mj_polynomial(double mj) { return 3.0 * mj * mj - 35.0 / 4.0; }

// 1.0 Hz for Ca+ at wz/2pi = 1 MHz; scales with the dc gradient
// 2A = -m wz^2/(2q) and the D5/2 quadrupole moment.
static double quadrupole_coefficient(const ClockScenario& sc) {
  const IonSpecies ref = builtin_ca40();
  const double wz_ref = units::mhz_to_rad_s(1.0);
  const double grad = sc.species.mass * sc.trap.axial_omega * sc.trap.axial_omega /
                      sc.species.charge;
  const double grad_ref = ref.mass * wz_ref * wz_ref / ref.charge;
  return 1.0 * (grad / grad_ref) *
         (sc.species.quad_moment_d52 / ref.quad_moment_d52);
}

ShiftEntry quadrupole_trap_entry(const ClockScenario& sc) {
  ShiftEntry e;
  e.effect = "quadrupole";
  e.conditions = "trapping field";
  e.shift = quadrupole_coefficient(sc) * quadrupole_mj_polynomial(sc.zeeman_mj);
  e.tabulated_shift = std::abs(e.shift);
  e.broadening = 0;
  e.in_broadening_total = false;
  e.long_term = 0;
  e.notes = "position independent; <0.1 Hz width, <=1e-17 for a stable axial voltage";
  return e;
}

ShiftEntry quadrupole_extra_dc_entry(const ClockScenario& sc) {
  ShiftEntry e;
  e.effect = "quadrupole";
  e.conditions = "extra dc";
  e.shift = 0;
  e.tabulated_shift = 0;
  e.broadening = sc.extra_dc_uncertainty_hz;
  e.in_broadening_total = false; // day-to-day uncertainty, not a line width
  e.long_term = sc.extra_dc_uncertainty_hz / sc.species.clock_frequency();
  e.notes = "patch-field target; compensate or keep below this level";
  return e;
}

MisalignmentReport misalignment_noise(const ClockScenario& sc) {
  if (!(sc.laser_waist > 0))
    throw std::invalid_argument("misalignment: laser waist must be > 0");
  MisalignmentReport rep;
  rep.delta_pe = 0.36 * 4.0 * sc.resolved_radius() * sc.misalignment /
                 (sc.laser_waist * sc.laser_waist);
  rep.projection_noise = 1.0 / (2.0 * std::sqrt(static_cast<double>(sc.n_ions)));
  rep.negligible = rep.delta_pe < 0.1 && rep.delta_pe < rep.projection_noise;
  return rep;
}

double allan_deviation(double q_factor, double snr, double cycle_time, double tau) {
  if (!(q_factor > 0) || !(snr > 0) || !(cycle_time > 0) || !(tau > 0))
    throw std::invalid_argument("allan deviation: all arguments must be > 0");
  return std::sqrt(cycle_time / tau) / (c::pi * q_factor * snr);
}

double projection_noise_snr(int n_ions) {
  return std::sqrt(static_cast<double>(n_ions));
}

BudgetTable assemble_budget(const ClockScenario& sc) {
  sc.validate();
  BudgetTable table;
  table.entries.push_back(doppler2_shift(sc));
  table.entries.push_back(stark_scalar_rf(sc));
  table.entries.push_back(zeeman_entry(sc));
  table.entries.push_back(bbr_entry(sc));
  table.entries.push_back(quadrupole_trap_entry(sc));
  table.entries.push_back(quadrupole_extra_dc_entry(sc));
  // supplementary: tensor Stark for the configured M_J, B along the axis
  table.entries.push_back(stark_tensor_rf(sc, 0.5 * c::pi));

  for (const auto& e : table.entries) {
    if (e.in_shift_total) {
      table.total_shift += e.tabulated_shift;
      table.total_shift_physical += e.shift;
    }
    if (e.in_broadening_total) table.total_broadening += e.broadening;
    table.total_long_term = std::max(table.total_long_term, e.long_term);
  }
  if (sc.laser_waist > 0) table.misalignment = misalignment_noise(sc);
  return table;
}

std::string render_budget_text(const BudgetTable& table, const ClockScenario& sc) {
  std::ostringstream os;
  char buf[256];
  os << "# systematic shift budget, N=" << sc.n_ions << ", "
     << sc.species.name << "\n";
  std::snprintf(buf, sizeof buf, "%-20s %-16s %12s %12s %12s\n", "effect",
                "conditions", "shift(Hz)", "broad.(Hz)", "long-term");
  os << buf;
  for (const auto& e : table.entries) {
    std::snprintf(buf, sizeof buf, "%-20s %-16s %+12.3f %12.3f %12.3e%s\n",
                  e.effect.c_str(), e.conditions.c_str(), e.tabulated_shift,
                  e.broadening, e.long_term, e.in_shift_total ? "" : "  (aux)");
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "%-20s %-16s %+12.3f %12.3f %12.3e\n", "total",
                radius_label(sc).c_str(), table.total_shift,
                table.total_broadening, table.total_long_term);
  os << buf;
  if (sc.laser_waist > 0) {
    std::snprintf(buf, sizeof buf,
                  "# misalignment: dPe=%.3f, projection noise=%.3f -> %s\n",
                  table.misalignment.delta_pe, table.misalignment.projection_noise,
                  table.misalignment.negligible ? "negligible" : "NOT negligible");
    os << buf;
  }
  return os.str();
}

} // namespace ringtrap
