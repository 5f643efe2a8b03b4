#include "ringtrap/trap.hpp"

#include <cmath>
#include <stdexcept>

#include "ringtrap/constants.hpp"

namespace ringtrap {

namespace c = constants;

void TrapConfig::validate() const {
  if (pole_count < 4 || pole_count % 2 != 0)
    throw std::invalid_argument("trap: pole count must be even and >= 4");
  if (!(rf_amplitude > 0)) throw std::invalid_argument("trap: rf amplitude must be > 0");
  if (!(rf_omega > 0)) throw std::invalid_argument("trap: rf frequency must be > 0");
  if (!(inner_radius > 0)) throw std::invalid_argument("trap: inner radius must be > 0");
  if (!(axial_omega > 0)) throw std::invalid_argument("trap: axial frequency must be > 0");
}

static void require_ring_order(const TrapConfig& cfg, const char* what) {
  if (cfg.k() < 3)
    throw std::invalid_argument(std::string(what) +
                                ": quadrupole has no off-axis minimum (need 2k >= 6)");
}

double pseudopotential(const TrapConfig& cfg, const IonSpecies& s, double r) {
  const double k = cfg.k();
  const double q = s.charge;
  const double pref = k * k * q * q * cfg.rf_amplitude * cfg.rf_amplitude /
                      (16.0 * s.mass * cfg.rf_omega * cfg.rf_omega *
                       cfg.inner_radius * cfg.inner_radius);
  return pref * std::pow(r / cfg.inner_radius, 2.0 * k - 2.0);
}

double static_potential(const TrapConfig& cfg, const IonSpecies& s, double r, double z) {
  return 0.5 * s.mass * cfg.axial_omega * cfg.axial_omega * (z * z - 0.5 * r * r);
}

double effective_potential_minimum_rmin(const TrapConfig& cfg, const IonSpecies& s) {
  require_ring_order(cfg, "r_min");
  const double k = cfg.k();
  const double ratio = 2.0 * s.mass * cfg.rf_omega * cfg.axial_omega *
                       std::pow(cfg.inner_radius, k) / (k * s.charge * cfg.rf_amplitude);
  const double rhs = ratio * ratio / (k - 1.0);
  return std::pow(rhs, 1.0 / (2.0 * k - 4.0));
}

double effective_radial_frequency(const TrapConfig& cfg) {
  require_ring_order(cfg, "effective radial frequency");
  return std::sqrt(cfg.k() - 2.0) * cfg.axial_omega;
}

double adiabaticity_local(const TrapConfig& cfg, const IonSpecies& s, double r) {
  const double k = cfg.k();
  const double pref = k * (k - 1.0) * s.charge * cfg.rf_amplitude /
                      (s.mass * cfg.rf_omega * cfg.rf_omega *
                       cfg.inner_radius * cfg.inner_radius);
  return pref * std::pow(r / cfg.inner_radius, k - 2.0);
}

double adiabaticity_at_ring(const TrapConfig& cfg) {
  require_ring_order(cfg, "eta(R)");
  return 2.0 * std::sqrt(cfg.k() - 1.0) * cfg.axial_omega / cfg.rf_omega;
}

double micromotion_amplitude(const TrapConfig& cfg, double R) {
  require_ring_order(cfg, "micromotion amplitude");
  return R * adiabaticity_at_ring(cfg) / (2.0 * (cfg.k() - 1.0));
}

// Re and Im of (x+iy)^n by repeated multiplication.
static std::array<double, 2> complex_pow(double x, double y, int n) {
  double re = 1.0, im = 0.0;
  for (int i = 0; i < n; ++i) {
    const double nre = re * x - im * y;
    im = re * y + im * x;
    re = nre;
  }
  return {re, im};
}

double rf_potential_full(const TrapConfig& cfg, double x, double y, double t) {
  const int k = cfg.k();
  const auto zk = complex_pow(x, y, k); // r^k (cos ka, sin ka)
  return 0.5 * cfg.rf_amplitude * std::cos(cfg.rf_omega * t) * zk[0] /
         std::pow(cfg.inner_radius, k);
}

std::array<double, 2> rf_force_full(const TrapConfig& cfg, const IonSpecies& s,
                                    double x, double y, double t) {
  // grad Re[(x+iy)^k] = k (Re[(x+iy)^(k-1)], -Im[(x+iy)^(k-1)])
  const int k = cfg.k();
  const auto zk1 = complex_pow(x, y, k - 1);
  const double pref = -s.charge * 0.5 * cfg.rf_amplitude * std::cos(cfg.rf_omega * t) *
                      k / std::pow(cfg.inner_radius, k);
  return {pref * zk1[0], -pref * zk1[1]};
}

std::array<double, 3> static_force(const TrapConfig& cfg, const IonSpecies& s,
                                   double x, double y, double z) {
  const double mw2 = s.mass * cfg.axial_omega * cfg.axial_omega;
  return {0.5 * mw2 * x, 0.5 * mw2 * y, -mw2 * z};
}

std::array<double, 2> pseudopotential_force(const TrapConfig& cfg, const IonSpecies& s,
                                            double x, double y) {
  // -dV*/dr r_hat; polynomial in r^2, no singularity on the axis.
  const double k = cfg.k();
  const double q = s.charge;
  const double r0 = cfg.inner_radius;
  const double pref = k * k * q * q * cfg.rf_amplitude * cfg.rf_amplitude /
                      (16.0 * s.mass * cfg.rf_omega * cfg.rf_omega * r0 * r0);
  const double r2 = x * x + y * y;
  // dV*/dr / r = pref (2k-2) r^(2k-4) / r0^(2k-2)
  const double slope = pref * (2.0 * k - 2.0) *
                       std::pow(r2, k - 2.0) / std::pow(r0, 2.0 * k - 2.0);
  return {-slope * x, -slope * y};
}

} // namespace ringtrap
