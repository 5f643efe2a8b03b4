#ifndef RINGTRAP_SPECIES_HPP
#define RINGTRAP_SPECIES_HPP

#include <string>

namespace ringtrap {

// One clock ion species. SI throughout; polarizabilities are the
// differential (upper minus lower clock state) values in Hz/(V/m)^2,
// the quadrupole moment is in units of e*a0^2.
struct IonSpecies {
  std::string name;
  double mass = 0;                   // kg
  double charge = 0;                 // C
  double gamma = 0;                  // cooling transition decay rate, 1/s
  double cooling_wavelength = 0;     // m
  double clock_wavelength = 0;       // m
  double dalpha_scalar = 0;          // Hz/(V/m)^2
  double dalpha_tensor = 0;          // Hz/(V/m)^2
  double quad_moment_d52 = 0;        // e*a0^2

  double clock_frequency() const;    // Hz
  double clock_wavevector() const;   // rad/m
  double cooling_wavevector() const; // rad/m

  void validate() const; // throws std::invalid_argument
};

// 40Ca+ registry entry, the species every built-in scenario uses.
IonSpecies builtin_ca40();

// Look up a registry species by name ("Ca40"); throws on unknown names.
IonSpecies species_by_name(const std::string& name);

// Doppler cooling limit hbar*gamma/(2 kB), in K.
double doppler_limit_temperature(const IonSpecies& s);

// First-order Zeeman sensitivity (Hz per gauss) of the summed
// (S1/2, +-1/2 -> D5/2, -+1/2) line pair.
double zeeman_sensitivity_hz_per_gauss(double mj, double mj_prime);
inline constexpr double zeeman_summed_pair_hz_per_gauss = 2.2e6;

// Splitting between adjacent D5/2 Zeeman components (g_J = 6/5), Hz/G.
// Sets the minimum bias field that resolves neighbouring lines and the
// residual sensitivity left after the summed-pair cancellation.
inline constexpr double zeeman_d52_splitting_hz_per_gauss = 1.68e6;

} // namespace ringtrap

#endif
