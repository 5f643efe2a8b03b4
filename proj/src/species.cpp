#include "ringtrap/species.hpp"

#include <cmath>
#include <stdexcept>

#include "ringtrap/constants.hpp"

namespace ringtrap {

namespace c = constants;

double IonSpecies::clock_frequency() const {
  return c::speed_of_light / clock_wavelength;
}

double IonSpecies::clock_wavevector() const { return c::two_pi / clock_wavelength; }

double IonSpecies::cooling_wavevector() const {
  return c::two_pi / cooling_wavelength;
}

void IonSpecies::validate() const {
  if (!(mass > 0)) throw std::invalid_argument("species: mass must be > 0");
  if (!(charge > 0)) throw std::invalid_argument("species: charge must be > 0");
  if (!(gamma > 0)) throw std::invalid_argument("species: cooling linewidth must be > 0");
  if (!(cooling_wavelength > 0) || !(clock_wavelength > 0))
    throw std::invalid_argument("species: wavelengths must be > 0");
}

IonSpecies builtin_ca40() {
  IonSpecies s;
  s.name = "Ca40";
  s.mass = 40.0 * c::atomic_mass_unit;
  s.charge = c::elementary_charge;
  // 4s S1/2 -> 4p P1/2 decay rate, lifetime ~7.2 ns
  s.gamma = 1.395e8;
  s.cooling_wavelength = 397e-9;
  s.clock_wavelength = 729e-9;
  // differential polarizabilities of the 729 nm quadrupole transition
  s.dalpha_scalar = -1.156e-6;
  s.dalpha_tensor = -6.1e-7;
  s.quad_moment_d52 = 1.83;
  return s;
}

IonSpecies species_by_name(const std::string& name) {
  if (name == "Ca40" || name == "ca40" || name == "40Ca+")
    return builtin_ca40();
  throw std::invalid_argument("unknown species '" + name + "' (registry: Ca40)");
}

double doppler_limit_temperature(const IonSpecies& s) {
  return c::reduced_planck * s.gamma / (2.0 * c::boltzmann);
}

double zeeman_sensitivity_hz_per_gauss(double mj, double mj_prime) {
  // Only the summed (+-1/2 -> -+1/2) scheme is modelled; it cancels the
  // first-order shift and leaves the quoted fluctuation sensitivity.
  if (std::abs(mj) == 0.5 && std::abs(mj_prime) == 0.5 && mj_prime == -mj)
    return zeeman_summed_pair_hz_per_gauss;
  throw std::invalid_argument("unsupported Zeeman transition pair: only the summed "
                              "(MJ=+-1/2 -> MJ'=-+1/2) scheme is available");
}

} // namespace ringtrap
