#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ringtrap/constants.hpp"
#include "ringtrap/shift_budget.hpp"

using namespace ringtrap;
namespace c = constants;

// the two reference operating points: 10 ions at 20 um, 20 ions at 40 um
static ClockScenario ring_scenario(int which) {
  ClockScenario sc;
  sc.trap.pole_count = 8;
  sc.trap.rf_omega = units::mhz_to_rad_s(20.0);
  sc.trap.axial_omega = units::mhz_to_rad_s(1.0);
  sc.trap.rf_amplitude = which == 0 ? 394.4 : 1578.0;
  sc.trap.inner_radius = units::um_to_m(which == 0 ? 200.0 : 400.0);
  sc.species = builtin_ca40();
  sc.n_ions = which == 0 ? 10 : 20;
  sc.ring_radius = units::um_to_m(which == 0 ? 20.0 : 40.0);
  sc.ring_radius_override = which == 1; // 40 um sits slightly outside 2 epsilon
  sc.t_axial = 0.54e-3;
  sc.t_radial = 10e-3;
  sc.zeeman_mj = 0.5;
  sc.magnetic_field = units::gauss_to_tesla(0.05);
  sc.magnetic_field_fluct = units::gauss_to_tesla(6e-7);
  sc.bbr_temperature = 300;
  sc.bbr_temperature_unc = 10;
  sc.laser_waist = 2.0 * sc.ring_radius;
  sc.misalignment = 0.27 * sc.ring_radius;
  return sc;
}

TEST_CASE("second-order Doppler shift") {
  const auto sc10 = ring_scenario(0);
  const auto sc20 = ring_scenario(1);
  const auto d10 = doppler2_shift(sc10);
  const auto d20 = doppler2_shift(sc20);

  CHECK(d10.shift < 0); // physical sign
  CHECK(d10.tabulated_shift == doctest::Approx(6.0).epsilon(0.017));
  CHECK(d20.tabulated_shift == doctest::Approx(24.1).epsilon(0.005));
  CHECK(std::abs(d10.shift) / sc10.species.clock_frequency() ==
        doctest::Approx(1.46e-14).epsilon(0.01));
  CHECK(std::abs(d20.shift) / sc20.species.clock_frequency() ==
        doctest::Approx(5.85e-14).epsilon(0.01));

  CHECK(d10.broadening == doctest::Approx(0.14).epsilon(0.05));
  CHECK(d20.broadening == doctest::Approx(0.28).epsilon(0.05));
  CHECK(d10.long_term == doctest::Approx(8.5e-17).epsilon(0.05));
  CHECK(d20.long_term == doctest::Approx(5.1e-17).epsilon(0.05));

  SUBCASE("zero radius gives zero shift") {
    auto sc = sc10;
    sc.ring_radius = 0;
    sc.ring_radius_override = true;
    const auto d = doppler2_shift(sc);
    CHECK(d.shift == 0.0);
    CHECK(d.broadening == 0.0);
  }

  SUBCASE("scaling: wz^2 R^2 / (k-1)") {
    auto sc = sc10;
    sc.ring_radius_override = true;
    sc.trap.axial_omega *= 2.0;
    CHECK(doppler2_shift(sc).shift == doctest::Approx(4.0 * d10.shift).epsilon(1e-12));
    sc = sc10;
    sc.ring_radius_override = true;
    sc.ring_radius *= 3.0;
    CHECK(doppler2_shift(sc).shift == doctest::Approx(9.0 * d10.shift).epsilon(1e-12));
    sc = ring_scenario(0);
    sc.ring_radius_override = true;
    sc.trap.pole_count = 14; // k: 4 -> 7, shift scales with 1/(k-1)
    CHECK(doppler2_shift(sc).shift ==
          doctest::Approx(d10.shift * 3.0 / 6.0).epsilon(1e-12));
  }
}

TEST_CASE("large-cloud Doppler limit") {
  const auto ca = builtin_ca40();
  CHECK(doppler2_large_cloud(ca, 0.0, 4) == 0.0);
  // 1/(k-1) scaling: 16-pole vs octupole
  CHECK(doppler2_large_cloud(ca, 1e6, 8) / doppler2_large_cloud(ca, 1e6, 4) ==
        doctest::Approx(3.0 / 7.0).epsilon(1e-12));
  // hand-evaluated: -q^2 NL / (8 pi eps0 m (k-1) c^2)
  CHECK(doppler2_large_cloud(ca, 1e6, 4) == doctest::Approx(-6.441e-15).epsilon(1e-3));
}

TEST_CASE("scalar Stark shift of the rf field") {
  const auto sc10 = ring_scenario(0);
  const auto sc20 = ring_scenario(1);
  const auto s10 = stark_scalar_rf(sc10);
  const auto s20 = stark_scalar_rf(sc20);

  CHECK(s10.shift > 0); // negative polarizability and negative -1/2 prefactor
  CHECK(s10.tabulated_shift == doctest::Approx(4.1).epsilon(0.025));
  CHECK(s20.tabulated_shift == doctest::Approx(16.5).epsilon(0.01));
  CHECK(s10.broadening == doctest::Approx(0.09).epsilon(0.08));
  CHECK(s20.broadening == doctest::Approx(0.19).epsilon(0.05));
  CHECK(s10.long_term == doctest::Approx(5.9e-17).epsilon(0.05));
  CHECK(s20.long_term == doctest::Approx(3.6e-17).epsilon(0.05));

  SUBCASE("vanishes for zero polarizability") {
    auto sc = sc10;
    sc.species.dalpha_scalar = 0;
    CHECK(stark_scalar_rf(sc).shift == 0.0);
  }

  SUBCASE("scaling: m^2 wz^2 Omega^2 R^2/(k-1)") {
    auto sc = sc10;
    sc.ring_radius_override = true;
    sc.trap.rf_omega *= 2.0;
    CHECK(stark_scalar_rf(sc).shift == doctest::Approx(4.0 * s10.shift).epsilon(1e-12));
    sc = ring_scenario(0);
    sc.species.mass *= 2.0;
    sc.ring_radius_override = true;
    CHECK(stark_scalar_rf(sc).shift == doctest::Approx(4.0 * s10.shift).epsilon(1e-12));
  }

  SUBCASE("rf field amplitude matches the direct multipole gradient at R") {
    // E = (V0/2)(k/r0)(R/r0)^(k-1) evaluated at the trap's own r_min
    auto sc = sc10;
    sc.ring_radius = effective_potential_minimum_rmin(sc.trap, sc.species);
    const double k = sc.trap.k();
    const double direct = 0.5 * sc.trap.rf_amplitude * k / sc.trap.inner_radius *
                          std::pow(sc.ring_radius / sc.trap.inner_radius, k - 1.0);
    CHECK(rf_field_amplitude(sc) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("dc-to-rf Stark ratio") {
  const auto sc = ring_scenario(0);
  CHECK(stark_scalar_dc_ratio(sc.trap) == doctest::Approx(3.75e-3).epsilon(1e-9));

  // eta = 0.2 -> 0.005
  TrapConfig t = sc.trap;
  t.rf_omega = 2.0 * std::sqrt(3.0) * t.axial_omega / 0.2;
  CHECK(stark_scalar_dc_ratio(t) == doctest::Approx(0.005).epsilon(1e-9));

  // algebraic identity with eta^2/8
  const double eta = adiabaticity_at_ring(sc.trap);
  CHECK(stark_scalar_dc_ratio(sc.trap) ==
        doctest::Approx(eta * eta / 8.0).epsilon(1e-12));
}

TEST_CASE("tensor Stark shift") {
  const auto sc10 = ring_scenario(0);
  const auto sc20 = ring_scenario(1);

  // B along the trap axis: theta = pi/2 for every ion
  const auto t10 = stark_tensor_rf(sc10, 0.5 * c::pi);
  const auto t20 = stark_tensor_rf(sc20, 0.5 * c::pi);
  const double f_half = tensor_mj_factor(0.5);
  CHECK(f_half == doctest::Approx(-0.8));
  CHECK(tensor_mj_factor(1.5) == doctest::Approx(-0.2));
  CHECK(tensor_mj_factor(2.5) == doctest::Approx(1.0));

  // reference values of shift/f(M_J): -1.1 and -4.6 Hz, order-of agreement
  CHECK(t10.shift / f_half == doctest::Approx(-1.1).epsilon(0.25));
  CHECK(t20.shift / f_half == doctest::Approx(-4.6).epsilon(0.25));

  // magic angle: 3 cos^2 theta = 1
  const double magic = std::acos(std::sqrt(1.0 / 3.0));
  CHECK(std::abs(stark_tensor_rf(sc10, magic).shift) < 1e-12);

  SUBCASE("scalar and tensor share the same rf field intermediate") {
    const auto s10 = stark_scalar_rf(sc10);
    const double expect_ratio = sc10.species.dalpha_tensor * f_half * (-0.5) /
                                sc10.species.dalpha_scalar;
    CHECK(t10.shift / s10.shift == doctest::Approx(expect_ratio).epsilon(1e-12));
  }
}

TEST_CASE("tensor Stark dispersion around the ring") {
  const auto sc10 = ring_scenario(0);
  const auto sc20 = ring_scenario(1);

  // B along the trap axis: no dispersion
  CHECK(stark_tensor_dispersion(sc10, {0, 0, 1}) == 0.0);

  // B in the radial plane: order 1 Hz (20 um) and 4 Hz (40 um)
  const double d10 = stark_tensor_dispersion(sc10, {1, 0, 0});
  const double d20 = stark_tensor_dispersion(sc20, {1, 0, 0});
  CHECK(d10 > 1.0 / 1.5);
  CHECK(d10 < 1.0 * 1.5);
  CHECK(d20 > 4.0 / 1.5);
  CHECK(d20 < 4.0 * 1.5);
}

TEST_CASE("Zeeman bookkeeping") {
  auto sc = ring_scenario(0);
  const auto z = zeeman_entry(sc);
  CHECK(z.shift == 0.0); // summed pair cancels first order
  // absolute-grade regime: ~1.0 Hz and 2.5e-15
  CHECK(z.broadening == doctest::Approx(1.0).epsilon(0.03));
  CHECK(z.long_term == doctest::Approx(2.5e-15).epsilon(0.04));
  // minimum bias field resolving 1 kHz between components
  CHECK(units::tesla_to_gauss(zeeman_min_bias_field()) ==
        doctest::Approx(6e-4).epsilon(0.01));

  SUBCASE("relative-grade regime lands near 0.013 Hz / 3e-17") {
    // transferred from the demonstrated dB/B at 0.05 G down to the bias field
    const double db_gauss = units::tesla_to_gauss(sc.magnetic_field_fluct);
    const double rel = zeeman_d52_splitting_hz_per_gauss * db_gauss *
                       units::tesla_to_gauss(zeeman_min_bias_field()) /
                       units::tesla_to_gauss(sc.magnetic_field);
    CHECK(rel == doctest::Approx(0.013).epsilon(0.15));
    CHECK(rel / sc.species.clock_frequency() == doctest::Approx(3e-17).epsilon(0.15));
  }

  SUBCASE("zero fluctuation gives zero broadening") {
    sc.magnetic_field_fluct = 0;
    const auto z0 = zeeman_entry(sc);
    CHECK(z0.broadening == 0.0);
    CHECK(z0.long_term == 0.0);
  }
}

TEST_CASE("blackbody radiation shift") {
  auto sc = ring_scenario(0);
  const auto b = bbr_entry(sc);
  CHECK(b.shift == doctest::Approx(0.38).epsilon(1e-9));
  CHECK(bbr_temperature_uncertainty_hz(sc) == doctest::Approx(0.05).epsilon(0.02));

  sc.bbr_temperature = 150;
  CHECK(bbr_entry(sc).shift == doctest::Approx(0.38 / 16.0).epsilon(1e-9)); // T^4

  sc.bbr_temperature = 0;
  CHECK(bbr_entry(sc).shift == 0.0);
}

TEST_CASE("quadrupole shift") {
  auto sc = ring_scenario(0);
  const auto q = quadrupole_trap_entry(sc);
  CHECK(q.tabulated_shift == doctest::Approx(8.0).epsilon(1e-9));
  CHECK(q.shift == doctest::Approx(-8.0).epsilon(1e-9)); // 3/4 - 35/4 < 0

  // polynomial node at MJ^2 = 35/12 (no physical sublevel)
  CHECK(quadrupole_mj_polynomial(std::sqrt(35.0 / 12.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // wz^2 scaling of the dc gradient: 2 MHz -> 32 Hz
  sc.trap.axial_omega = units::mhz_to_rad_s(2.0);
  sc.ring_radius_override = true;
  CHECK(quadrupole_trap_entry(sc).tabulated_shift ==
        doctest::Approx(32.0).epsilon(1e-9));

  const auto extra = quadrupole_extra_dc_entry(ring_scenario(0));
  CHECK(extra.broadening == doctest::Approx(0.04));
  CHECK(extra.long_term < 1e-16);
}

TEST_CASE("misalignment noise") {
  auto sc = ring_scenario(0); // waist 2R, offset 0.27R
  const auto rep = misalignment_noise(sc);
  CHECK(rep.delta_pe == doctest::Approx(0.0972).epsilon(0.01));
  CHECK(rep.delta_pe < 0.1);
  CHECK(rep.projection_noise == doctest::Approx(1.0 / (2.0 * std::sqrt(10.0))));
  CHECK(rep.negligible);

  sc.misalignment = 0;
  CHECK(misalignment_noise(sc).delta_pe == 0.0);
}

TEST_CASE("Allan deviation") {
  const double q = 4e14, tc = 4e-3, tau = 1.0;
  // quadrupling N halves sigma
  CHECK(allan_deviation(q, projection_noise_snr(40), tc, tau) ==
        doctest::Approx(0.5 * allan_deviation(q, projection_noise_snr(10), tc, tau))
            .epsilon(1e-12));
  // time to a target sigma scales as 1/SNR^2: N=10 is 10x faster than N=1
  const double sigma_target = allan_deviation(q, 1.0, tc, 1.0); // N=1 needs 1 s
  const double s10_at_1s = allan_deviation(q, std::sqrt(10.0), tc, 1.0);
  const double tau_needed = (s10_at_1s / sigma_target) * (s10_at_1s / sigma_target);
  CHECK(tau_needed == doctest::Approx(0.1).epsilon(1e-9));
  // spot value
  CHECK(allan_deviation(4e14, std::sqrt(10.0), 4e-3, 1.0) ==
        doctest::Approx(1.5915e-17).epsilon(1e-3));
  CHECK_THROWS(allan_deviation(0, 1, 1, 1));
}

TEST_CASE("assembled budget reproduces the table totals") {
  const auto t10 = assemble_budget(ring_scenario(0));
  const auto t20 = assemble_budget(ring_scenario(1));

  CHECK(t10.total_shift == doctest::Approx(18.5).epsilon(0.0055));
  CHECK(t20.total_shift == doctest::Approx(49.0).epsilon(0.0021));
  CHECK(t10.total_broadening == doctest::Approx(0.2).epsilon(0.5));
  CHECK(t20.total_broadening == doctest::Approx(0.4).epsilon(0.25));
  CHECK(t10.total_long_term == doctest::Approx(2.5e-15).epsilon(0.04));
  CHECK(t20.total_long_term == doctest::Approx(2.5e-15).epsilon(0.04));

  SUBCASE("closure: totals equal the sums over included entries") {
    double shift = 0, broad = 0, lt = 0;
    for (const auto& e : t10.entries) {
      if (e.in_shift_total) shift += e.tabulated_shift;
      if (e.in_broadening_total) broad += e.broadening;
      lt = std::max(lt, e.long_term);
    }
    CHECK(shift == t10.total_shift);
    CHECK(broad == t10.total_broadening);
    CHECK(lt == t10.total_long_term);
  }

  SUBCASE("sign convention: physical Doppler is negative, tabulated positive") {
    const auto& doppler = t10.entries.at(0);
    CHECK(doppler.shift < 0);
    CHECK(doppler.tabulated_shift == -doppler.shift);
  }

  SUBCASE("degenerate scenario: all field entries vanish") {
    auto sc = ring_scenario(0);
    sc.ring_radius = 0;
    sc.ring_radius_override = true;
    sc.magnetic_field_fluct = 0;
    sc.bbr_temperature = 0;
    const auto t = assemble_budget(sc);
    for (const auto& e : t.entries) {
      if (e.effect == "quadrupole" && e.conditions == "trapping field") {
        CHECK(e.tabulated_shift == doctest::Approx(8.0));
      } else {
        CHECK(std::abs(e.shift) < 1e-12);
      }
    }
  }

  SUBCASE("scenario validation") {
    auto sc = ring_scenario(0);
    sc.zeeman_mj = 1.0;
    CHECK_THROWS(assemble_budget(sc));
    sc = ring_scenario(0);
    sc.ring_radius = units::um_to_m(30.0); // far from the trap equilibrium
    CHECK_THROWS(assemble_budget(sc));
    sc.ring_radius_override = true;
    CHECK_NOTHROW(assemble_budget(sc));
  }
}

TEST_CASE("ion-loss radius change follows the local 1/N^2 law") {
  // with the ring radius tracking N (as the stability limit does), the step
  // ratio of epsilon differences matches the 1/N^2 prediction to 5%
  auto sc_for = [](int n) {
    auto sc = ring_scenario(0);
    sc.ring_radius_override = true;
    sc.n_ions = n;
    sc.ring_radius = units::um_to_m(2.0 * n);
    return sc;
  };
  for (int n = 10; n < 40; ++n) {
    const double d1 = ion_loss_radius_change(sc_for(n));
    const double d2 = ion_loss_radius_change(sc_for(n + 1));
    const double law = (double(n) / (n + 1)) * (double(n) / (n + 1));
    CHECK(d2 / d1 / law == doctest::Approx(1.0).epsilon(0.05));
  }
}
