#ifndef RINGTRAP_CONSTANTS_HPP
#define RINGTRAP_CONSTANTS_HPP

// Physical constants (CODATA 2018) and unit conversions.
// Everything downstream works in strict SI; angular frequencies are rad/s.
// Cyclic frequencies (MHz etc.) exist only at the config/CLI boundary.

#include <numbers>

namespace ringtrap::constants {

inline constexpr double pi = std::numbers::pi_v<double>;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double boltzmann = 1.380649e-23;               // J/K
inline constexpr double reduced_planck = 1.054571817e-34;       // J*s
inline constexpr double speed_of_light = 299792458.0;           // m/s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;   // kg
inline constexpr double bohr_radius = 5.29177210903e-11;        // m

// q^2 / (4 pi eps0), the Coulomb pair-energy prefactor in J*m
inline constexpr double coulomb_prefactor =
    elementary_charge * elementary_charge / (4.0 * pi * vacuum_permittivity);

struct PhysicalConstants {
  double elementary_charge;
  double vacuum_permittivity;
  double boltzmann;
  double reduced_planck;
  double speed_of_light;
  double atomic_mass_unit;
  double bohr_radius;
};

// Struct access path; must be bit-identical to the namespace constants.
constexpr PhysicalConstants values() {
  return PhysicalConstants{elementary_charge, vacuum_permittivity, boltzmann,
                           reduced_planck,    speed_of_light,      atomic_mass_unit,
                           bohr_radius};
}

} // namespace ringtrap::constants

namespace ringtrap::units {

// All conversion pairs are plain multiply/divide by one constant, so
// to(from(x)) is exact to 1 ulp.

inline constexpr double um_to_m(double um) { return um * 1e-6; }
inline constexpr double m_to_um(double m) { return m / 1e-6; }

inline constexpr double nm_to_m(double nm) { return nm * 1e-9; }
inline constexpr double m_to_nm(double m) { return m / 1e-9; }

// cyclic MHz <-> angular rad/s
inline constexpr double mhz_to_rad_s(double mhz) {
  return mhz * (constants::two_pi * 1e6);
}
inline constexpr double rad_s_to_mhz(double w) {
  return w / (constants::two_pi * 1e6);
}

inline constexpr double hz_to_rad_s(double hz) { return hz * constants::two_pi; }
inline constexpr double rad_s_to_hz(double w) { return w / constants::two_pi; }

inline constexpr double gauss_to_tesla(double g) { return g * 1e-4; }
inline constexpr double tesla_to_gauss(double t) { return t / 1e-4; }

inline constexpr double mk_to_k(double mk) { return mk * 1e-3; }
inline constexpr double k_to_mk(double k) { return k / 1e-3; }

inline constexpr double joule_to_ev(double j) {
  return j / constants::elementary_charge;
}
inline constexpr double ev_to_joule(double ev) {
  return ev * constants::elementary_charge;
}

} // namespace ringtrap::units

#endif
