#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "ringtrap/constants.hpp"
#include "ringtrap/species.hpp"

using namespace ringtrap;
namespace c = constants;

TEST_CASE("constants are positive and reachable through both paths bit-identically") {
  const auto v = c::values();
  CHECK(v.elementary_charge > 0);
  CHECK(v.vacuum_permittivity > 0);
  CHECK(v.boltzmann > 0);
  CHECK(v.reduced_planck > 0);
  CHECK(v.speed_of_light > 0);
  CHECK(v.atomic_mass_unit > 0);
  CHECK(v.bohr_radius > 0);
  // struct accessor and namespace constants must be the same bits
  CHECK(v.elementary_charge == c::elementary_charge);
  CHECK(v.vacuum_permittivity == c::vacuum_permittivity);
  CHECK(v.boltzmann == c::boltzmann);
  CHECK(v.reduced_planck == c::reduced_planck);
  CHECK(v.speed_of_light == c::speed_of_light);
  CHECK(v.atomic_mass_unit == c::atomic_mass_unit);
  CHECK(v.bohr_radius == c::bohr_radius);
}

TEST_CASE("unit conversions are involutive to 1 ulp") {
  std::mt19937_64 rng(7);
  auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  auto same_to_ulp = [](double a, double b) {
    return a == b || std::nextafter(a, b) == b || std::nextafter(b, a) == a;
  };
  for (int i = 0; i < 2000; ++i) {
    const double x = std::exp(40.0 * (uniform() - 0.5)); // wide magnitude range
    CHECK(same_to_ulp(units::m_to_um(units::um_to_m(x)), x));
    CHECK(same_to_ulp(units::um_to_m(units::m_to_um(x)), x));
    CHECK(same_to_ulp(units::rad_s_to_mhz(units::mhz_to_rad_s(x)), x));
    CHECK(same_to_ulp(units::mhz_to_rad_s(units::rad_s_to_mhz(x)), x));
    CHECK(same_to_ulp(units::tesla_to_gauss(units::gauss_to_tesla(x)), x));
    CHECK(same_to_ulp(units::gauss_to_tesla(units::tesla_to_gauss(x)), x));
    CHECK(same_to_ulp(units::k_to_mk(units::mk_to_k(x)), x));
    CHECK(same_to_ulp(units::ev_to_joule(units::joule_to_ev(x)), x));
  }
}

TEST_CASE("builtin Ca40 record") {
  const auto ca = builtin_ca40();
  CHECK(ca.mass == 40.0 * c::atomic_mass_unit);
  CHECK(ca.charge == c::elementary_charge);
  CHECK(ca.cooling_wavelength == doctest::Approx(397e-9));
  CHECK(ca.clock_wavelength == doctest::Approx(729e-9));
  // c / 729 nm
  CHECK(ca.clock_frequency() == doctest::Approx(4.1124e14).epsilon(1e-3));
  CHECK(ca.dalpha_scalar < 0);
  CHECK(ca.dalpha_tensor < 0);
  CHECK(ca.quad_moment_d52 == doctest::Approx(1.83));
  CHECK_NOTHROW(ca.validate());
  CHECK(species_by_name("Ca40").mass == ca.mass);
  CHECK_THROWS(species_by_name("Yb171"));
}

TEST_CASE("Doppler limit temperature") {
  const auto ca = builtin_ca40();
  const double td = doppler_limit_temperature(ca);
  // 0.54 mK within 2%
  CHECK(td == doctest::Approx(0.54e-3).epsilon(0.02));
  // direct substitution oracle
  CHECK(td == doctest::Approx(c::reduced_planck * ca.gamma / (2.0 * c::boltzmann))
                  .epsilon(1e-15));
  // linear in gamma
  IonSpecies twice = ca;
  twice.gamma *= 2.0;
  CHECK(doppler_limit_temperature(twice) == doctest::Approx(2.0 * td).epsilon(1e-12));
}

TEST_CASE("Zeeman sensitivity of the summed line pair") {
  CHECK(zeeman_sensitivity_hz_per_gauss(0.5, -0.5) == doctest::Approx(2.2e6));
  CHECK(zeeman_sensitivity_hz_per_gauss(-0.5, 0.5) == doctest::Approx(2.2e6));
  CHECK_THROWS(zeeman_sensitivity_hz_per_gauss(0.5, 0.5));
  CHECK_THROWS(zeeman_sensitivity_hz_per_gauss(0.5, 2.5));

  // product oracle: dB = 6e-7 G before common-mode bookkeeping
  const double fluct = zeeman_sensitivity_hz_per_gauss(0.5, -0.5) * 6e-7;
  CHECK(fluct == doctest::Approx(1.32).epsilon(1e-9));
  CHECK(zeeman_sensitivity_hz_per_gauss(0.5, -0.5) * 0.0 == 0.0);
}
