#ifndef RINGTRAP_TRAP_HPP
#define RINGTRAP_TRAP_HPP

#include <array>

#include "ringtrap/species.hpp"

namespace ringtrap {

// Ideal linear 2k-pole rf trap plus harmonic end-cap confinement.
struct TrapConfig {
  int pole_count = 8;        // number of electrodes, 2k (even, >= 4)
  double rf_amplitude = 0;   // V0, V
  double rf_omega = 0;       // Omega, rad/s
  double inner_radius = 0;   // r0, m
  double axial_omega = 0;    // omega_z, rad/s

  int k() const { return pole_count / 2; }
  void validate() const; // throws std::invalid_argument
};

// Time-averaged (secular) radial potential energy of an ion at distance r
// from the axis: k^2 q^2 V0^2 / (16 m Omega^2 r0^2) * (r/r0)^(2k-2).
double pseudopotential(const TrapConfig& cfg, const IonSpecies& s, double r);

// Static end-cap potential energy 1/2 m wz^2 (z^2 - r^2/2); harmonic along z,
// deconfining in the radial plane.
double static_potential(const TrapConfig& cfg, const IonSpecies& s, double r, double z);

// Radius of the off-axis minimum of pseudopotential + static potential.
// Requires k >= 3; a quadrupole has no off-axis minimum.
double effective_potential_minimum_rmin(const TrapConfig& cfg, const IonSpecies& s);

// Curvature frequency of the radial well around r_min: sqrt(k-2) * wz.
double effective_radial_frequency(const TrapConfig& cfg);

// Adiabaticity parameter eta(r) = k(k-1) qV0/(m Omega^2 r0^2) (r/r0)^(k-2).
double adiabaticity_local(const TrapConfig& cfg, const IonSpecies& s, double r);

// eta evaluated at the ring radius r_min: 2 sqrt(k-1) wz/Omega.
// Independent of V0 and r0 (r_min absorbs them).
double adiabaticity_at_ring(const TrapConfig& cfg);

// Driven micromotion amplitude for an ion parked at radius R:
// R * eta(R) / (2(k-1)).
double micromotion_amplitude(const TrapConfig& cfg, double R);

// Instantaneous rf potential Phi_k = V0/2 cos(Omega t) (r/r0)^k cos(k alpha), V.
double rf_potential_full(const TrapConfig& cfg, double x, double y, double t);

// -q grad Phi_k, closed form via (r/r0)^k cos(k a) = Re[(x+iy)^k]/r0^k.
// Finite everywhere including the axis for k >= 2.
std::array<double, 2> rf_force_full(const TrapConfig& cfg, const IonSpecies& s,
                                    double x, double y, double t);

// Force of the static end-cap field: (+ m wz^2 x/2, + m wz^2 y/2, - m wz^2 z).
std::array<double, 3> static_force(const TrapConfig& cfg, const IonSpecies& s,
                                   double x, double y, double z);

// Radial force of the pseudopotential alone, as a 2-vector in the plane.
std::array<double, 2> pseudopotential_force(const TrapConfig& cfg, const IonSpecies& s,
                                            double x, double y);

} // namespace ringtrap

#endif
