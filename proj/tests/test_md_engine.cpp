#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/md_engine.hpp"
#include "support/spectral.hpp"

using namespace ringtrap;
namespace c = constants;

static TrapConfig reference_trap() {
  TrapConfig t;
  t.pole_count = 8;
  t.rf_amplitude = 394.4;
  t.rf_omega = units::mhz_to_rad_s(20.0);
  t.inner_radius = units::um_to_m(200.0);
  t.axial_omega = units::mhz_to_rad_s(1.0);
  return t;
}

static CoolingConfig no_cooling() {
  CoolingConfig cc;
  cc.enabled = false;
  return cc;
}

static IonEnsemble ring_ensemble(const TrapConfig& trap, int n, uint64_t seed) {
  const auto rel = minimize_energy(trap, builtin_ca40(), n, seed);
  IonEnsemble ens;
  ens.species = builtin_ca40();
  ens.positions = rel.positions;
  ens.velocities.assign(rel.positions.size(), Vec3{0, 0, 0});
  return ens;
}

TEST_CASE("pairwise Coulomb forces") {
  const auto ca = builtin_ca40();
  std::vector<Vec3> force;

  SUBCASE("two-ion Coulomb law") {
    const double d = units::um_to_m(9.0);
    coulomb_forces(ca, {{0, 0, 0}, {d, 0, 0}}, force);
    const double expect = c::coulomb_prefactor / (d * d);
    CHECK(force[0][0] == doctest::Approx(-expect).epsilon(1e-13));
    CHECK(force[1][0] == doctest::Approx(expect).epsilon(1e-13));
    CHECK(force[0][1] == 0.0);
  }

  SUBCASE("momentum conservation and ring force vs the S1 closed form") {
    const int n = 10;
    const double R = units::um_to_m(20.0);
    std::vector<Vec3> pos(n);
    for (int i = 0; i < n; ++i) {
      const double a = c::two_pi * i / n;
      pos[i] = {R * std::cos(a), R * std::sin(a), 0.0};
    }
    coulomb_forces(ca, pos, force);

    Vec3 sum{0, 0, 0};
    double typical = 0;
    for (const auto& f : force)
      for (int d = 0; d < 3; ++d) {
        sum[d] += f[d];
        typical = std::max(typical, std::abs(f[d]));
      }
    for (int d = 0; d < 3; ++d) CHECK(std::abs(sum[d]) < 1e-12 * typical);

    // per-ion outward radial force = pref * S1(N) / (4 R^2), from dE/dR of the
    // ring energy
    const double expect = c::coulomb_prefactor * ring_sum_s1(n) / (4.0 * R * R);
    for (int i = 0; i < n; ++i) {
      const double a = c::two_pi * i / n;
      const double fr = force[i][0] * std::cos(a) + force[i][1] * std::sin(a);
      CHECK(fr == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("coincident ions abort") {
    CHECK_THROWS_AS(coulomb_forces(ca, {{0, 0, 0}, {0, 0, 0}}, force),
                    IntegrationError);
  }
}

TEST_CASE("energy conservation in pseudopotential mode") {
  const auto trap = reference_trap();
  auto ens = ring_ensemble(trap, 10, 13);
  IntegratorConfig ic;
  ic.seed = 5;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::pseudopotential, ens.species);
  thermalize(ens, 10e-3, mi.rng());

  const double e0 = total_energy_pseudopotential(trap, ens);
  double dev = 0;
  for (int k = 0; k < 100; ++k) {
    mi.run_steps(ens, 1000); // 1e5 steps total
    dev = std::max(dev, std::abs(total_energy_pseudopotential(trap, ens) - e0));
  }
  CHECK(dev / std::abs(e0) < 1e-5);
}

TEST_CASE("long-run energy error stays oscillatory (no secular drift)") {
  const auto trap = reference_trap();
  auto ens = ring_ensemble(trap, 2, 3);
  IntegratorConfig ic;
  ic.seed = 8;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::pseudopotential, ens.species);
  thermalize(ens, 10e-3, mi.rng());

  const double e0 = total_energy_pseudopotential(trap, ens);
  const int blocks = 1000;
  std::vector<double> err(blocks);
  for (int k = 0; k < blocks; ++k) {
    mi.run_steps(ens, 1000); // 1e6 steps total
    err[k] = total_energy_pseudopotential(trap, ens) - e0;
  }
  double lo = err[0], hi = err[0], sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < blocks; ++k) {
    lo = std::min(lo, err[k]);
    hi = std::max(hi, err[k]);
    sx += k;
    sy += err[k];
    sxx += double(k) * k;
    sxy += k * err[k];
  }
  const double slope = (blocks * sxy - sx * sy) / (blocks * sxx - sx * sx);
  // secular drift over the whole run must stay below the oscillation band
  CHECK(std::abs(slope * blocks) < 0.5 * (hi - lo));
  CHECK((hi - lo) / std::abs(e0) < 1e-5);
}

TEST_CASE("single-ion spectra: secular frequencies and micromotion amplitude") {
  const auto trap = reference_trap();
  const auto ca = builtin_ca40();
  const double rmin = effective_potential_minimum_rmin(trap, ca);

  IonEnsemble ens;
  ens.species = ca;
  ens.positions = {{rmin + 0.5e-6, 0.0, 0.5e-6}};
  ens.velocities = {{0, 0, 0}};
  seed_micromotion_phase(trap, ens);

  IntegratorConfig ic;
  ic.seed = 1;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::full_rf, ens.species);

  const long nsteps = 1 << 17;
  std::vector<double> r(nsteps), z(nsteps);
  double rbar = 0;
  for (long k = 0; k < nsteps; ++k) {
    mi.step(ens);
    r[k] = std::hypot(ens.positions[0][0], ens.positions[0][1]);
    z[k] = ens.positions[0][2];
    rbar += r[k];
  }
  rbar /= static_cast<double>(nsteps);
  const double dt = mi.timestep();

  // axial oscillation at wz to 0.5%
  const double fz = units::rad_s_to_hz(trap.axial_omega);
  const auto zpeak = spectral::find_peak(z, dt, 0.5 * fz, 1.5 * fz);
  CHECK(zpeak.frequency == doctest::Approx(fz).epsilon(0.005));

  // radial secular oscillation at sqrt(2) wz to 2%
  const double feff = units::rad_s_to_hz(effective_radial_frequency(trap));
  const auto rpeak = spectral::find_peak(r, dt, 0.5 * feff, 1.5 * feff);
  CHECK(rpeak.frequency == doctest::Approx(feff).epsilon(0.02));

  // micromotion line at the rf frequency, amplitude = R eta/(2(k-1)) to 10%
  const double frf = units::rad_s_to_hz(trap.rf_omega);
  const auto mpeak = spectral::find_peak(r, dt, 0.9 * frf, 1.1 * frf);
  CHECK(mpeak.frequency == doctest::Approx(frf).epsilon(0.01));
  CHECK(mpeak.amplitude / rbar ==
        doctest::Approx(adiabaticity_at_ring(trap) / (2.0 * (trap.k() - 1)))
            .epsilon(0.10));
  CHECK(mpeak.amplitude == doctest::Approx(micromotion_amplitude(trap, rbar))
                               .epsilon(0.10));
}

TEST_CASE("on-axis ion oscillates at exactly the axial frequency") {
  const auto trap = reference_trap();
  IonEnsemble ens;
  ens.species = builtin_ca40();
  ens.positions = {{0.0, 0.0, 1e-6}};
  ens.velocities = {{0, 0, 0}};
  IntegratorConfig ic;
  ic.seed = 1;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::full_rf, ens.species);

  const long nsteps = 1 << 16;
  std::vector<double> z(nsteps);
  for (long k = 0; k < nsteps; ++k) {
    mi.step(ens);
    z[k] = ens.positions[0][2];
    // the octupole rf field vanishes on the axis, so the ion stays there
    CHECK(std::abs(ens.positions[0][0]) < 1e-18);
  }
  const double fz = units::rad_s_to_hz(trap.axial_omega);
  const auto peak = spectral::find_peak(z, mi.timestep(), 0.5 * fz, 1.5 * fz);
  CHECK(peak.frequency == doctest::Approx(fz).epsilon(0.005));
  CHECK(peak.amplitude == doctest::Approx(1e-6).epsilon(0.01));
}

TEST_CASE("cooled 10-ion ring sits at the expected temperature scales") {
  const auto trap = reference_trap();
  auto ens = ring_ensemble(trap, 10, 13);
  seed_micromotion_phase(trap, ens);
  CoolingConfig cool; // defaults: 6 beams, -gamma/2, gamma/2
  IntegratorConfig ic;
  ic.seed = 21;
  MdIntegrator mi(trap, cool, ic, ForceMode::full_rf, ens.species);
  thermalize(ens, 5e-3, mi.rng());

  const double dt = mi.timestep();
  mi.run_steps(ens, std::lround(0.3e-3 / dt));
  TemperatureAccumulator acc(ens.n(), ic.steps_per_rf_period);
  mi.run_steps(ens, std::lround(0.3e-3 / dt), &acc);
  const auto rec = acc.finalize(ens.species.mass);

  // axial near the Doppler limit, radial plane an order of magnitude hotter
  CHECK(rec.t_axial > 0.2e-3);
  CHECK(rec.t_axial < 1.5e-3);
  CHECK(rec.t_radial > 2e-3);
  CHECK(rec.t_radial < 30e-3);
  CHECK(rec.t_angular > 1e-3);
  CHECK(rec.t_angular < 50e-3);
}

TEST_CASE("time reversal (conservative mode)") {
  const auto trap = reference_trap();
  auto ens = ring_ensemble(trap, 6, 21);
  IntegratorConfig ic;
  ic.seed = 9;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::pseudopotential, ens.species);
  thermalize(ens, 5e-3, mi.rng());
  const auto start = ens;

  mi.run_steps(ens, 500);
  for (auto& v : ens.velocities)
    for (int d = 0; d < 3; ++d) v[d] = -v[d];
  mi.run_steps(ens, 500);

  for (int i = 0; i < ens.n(); ++i)
    for (int d = 0; d < 3; ++d)
      CHECK(ens.positions[i][d] ==
            doctest::Approx(start.positions[i][d]).epsilon(1e-9));
}

TEST_CASE("momentum conservation for a free Coulomb cluster") {
  const auto trap = reference_trap();
  auto ens = ring_ensemble(trap, 8, 31);
  IntegratorConfig ic;
  ic.seed = 17;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::coulomb_only, ens.species);
  thermalize(ens, 20e-3, mi.rng());

  const Vec3 p0 = total_momentum(ens);
  double pscale = 0;
  for (const auto& v : ens.velocities)
    pscale += ens.species.mass * std::hypot(v[0], v[1], v[2]);
  mi.run_steps(ens, 20000);
  const Vec3 p1 = total_momentum(ens);
  for (int d = 0; d < 3; ++d) CHECK(std::abs(p1[d] - p0[d]) < 1e-10 * pscale);
}

TEST_CASE("determinism: identical seed gives bit-identical trajectories") {
  const auto trap = reference_trap();
  auto run_once = [&]() {
    auto ens = ring_ensemble(trap, 5, 2);
    seed_micromotion_phase(trap, ens);
    CoolingConfig cool; // default 6 beams, -gamma/2, gamma/2
    IntegratorConfig ic;
    ic.seed = 1234;
    MdIntegrator mi(trap, cool, ic, ForceMode::full_rf, ens.species);
    thermalize(ens, 5e-3, mi.rng());
    mi.run_steps(ens, 20000);
    return ens;
  };
  const auto a = run_once();
  const auto b = run_once();
  for (int i = 0; i < a.n(); ++i)
    for (int d = 0; d < 3; ++d) {
      CHECK(a.positions[i][d] == b.positions[i][d]);
      CHECK(a.velocities[i][d] == b.velocities[i][d]);
    }
}

TEST_CASE("scattering rate formula") {
  const double gamma = builtin_ca40().gamma;
  // v = 0, detuning -gamma/2, s = 1/2: gamma/2 * (1/2) / (1 + 1/2 + 1) = gamma/10
  CHECK(scattering_rate(gamma, 0.5, -0.5 * gamma, 0.0) ==
        doctest::Approx(gamma / 10.0).epsilon(1e-12));
  // far detuned limit vanishes
  CHECK(scattering_rate(gamma, 0.5, -0.5 * gamma, 300.0 * gamma) <
        1e-5 * gamma);
}

TEST_CASE("cooling gating leaves velocities untouched when off") {
  const auto trap = reference_trap();
  auto run_with = [&](CoolingConfig cool) {
    auto ens = ring_ensemble(trap, 3, 77);
    seed_micromotion_phase(trap, ens);
    IntegratorConfig ic;
    ic.seed = 55;
    MdIntegrator mi(trap, cool, ic, ForceMode::full_rf, ens.species);
    thermalize(ens, 5e-3, mi.rng());
    mi.run_steps(ens, 5000);
    return ens;
  };
  CoolingConfig off;
  off.enabled = false;
  CoolingConfig scheduled_far; // on only long after the run window
  scheduled_far.on_intervals = {{1.0, 2.0}};
  const auto a = run_with(off);
  const auto b = run_with(scheduled_far);
  for (int i = 0; i < a.n(); ++i)
    for (int d = 0; d < 3; ++d) CHECK(a.velocities[i][d] == b.velocities[i][d]);
}

TEST_CASE("too coarse cooling step aborts with guidance") {
  const auto trap = reference_trap();
  auto ca = builtin_ca40();
  ca.gamma *= 4.0; // scattering probability per step now exceeds the 0.1 cap
  IonEnsemble ens;
  ens.species = ca;
  ens.positions = {{effective_potential_minimum_rmin(trap, ca), 0, 0}};
  ens.velocities = {{0, 0, 0}};
  CoolingConfig cool;
  cool.rabi = 10.0 * ca.gamma; // deep saturation
  IntegratorConfig ic;
  ic.seed = 3;
  ic.steps_per_rf_period = 50;
  MdIntegrator mi(trap, cool, ic, ForceMode::full_rf, ca);
  CHECK_THROWS_WITH_AS(mi.run_steps(ens, 100), doctest::Contains("timestep"),
                       IntegrationError);
}

TEST_CASE("non-finite state aborts with a dump") {
  const auto trap = reference_trap();
  IonEnsemble ens;
  ens.species = builtin_ca40();
  ens.positions = {{units::um_to_m(20.0), 0, 0}};
  ens.velocities = {{std::numeric_limits<double>::quiet_NaN(), 0, 0}};
  IntegratorConfig ic;
  ic.seed = 3;
  MdIntegrator mi(trap, no_cooling(), ic, ForceMode::full_rf, ens.species);
  CHECK_THROWS_AS(mi.step(ens), IntegrationError);
}

TEST_CASE("temperature estimator") {
  const auto ca = builtin_ca40();

  SUBCASE("zero velocities give zero temperatures") {
    TemperatureAccumulator acc(4, 10);
    std::vector<Vec3> pos(4, Vec3{1e-5, 0, 0}), vel(4, Vec3{0, 0, 0});
    for (int k = 0; k < 30; ++k) acc.add_sample(pos, vel, ca.mass, k * 1e-9);
    const auto rec = acc.finalize(ca.mass);
    CHECK(rec.t_axial == 0.0);
    CHECK(rec.t_radial == 0.0);
    CHECK(rec.t_angular == 0.0);
  }

  SUBCASE("window shorter than one rf period is rejected") {
    TemperatureAccumulator acc(2, 100);
    std::vector<Vec3> pos(2, Vec3{1e-5, 0, 0}), vel(2, Vec3{1, 1, 1});
    for (int k = 0; k < 40; ++k) acc.add_sample(pos, vel, ca.mass, k * 1e-9);
    CHECK_THROWS_AS(acc.finalize(ca.mass), std::invalid_argument);
  }

  SUBCASE("synthetic Maxwellian at 10 mK is recovered") {
    const int n = 3000;
    const double t_true = 10e-3;
    std::mt19937_64 rng(4);
    IonEnsemble ens;
    ens.species = ca;
    ens.positions.resize(n);
    ens.velocities.assign(n, Vec3{0, 0, 0});
    for (int i = 0; i < n; ++i) {
      const double a = c::two_pi * i / n;
      ens.positions[i] = {2e-5 * std::cos(a), 2e-5 * std::sin(a), 0};
    }
    thermalize(ens, t_true, rng);
    TemperatureAccumulator acc(n, 10);
    for (int k = 0; k < 25; ++k)
      acc.add_sample(ens.positions, ens.velocities, ca.mass, k * 1e-9);
    const auto rec = acc.finalize(ca.mass);
    CHECK(rec.t_axial == doctest::Approx(t_true).epsilon(0.05));
    CHECK(rec.t_radial == doctest::Approx(t_true).epsilon(0.05));
    CHECK(rec.t_angular == doctest::Approx(t_true).epsilon(0.05));
  }
}

TEST_CASE("single ion reaches the Doppler-limit scale under axial beams") {
  const auto trap = reference_trap();
  const auto ca = builtin_ca40();
  IonEnsemble ens;
  ens.species = ca;
  ens.positions = {{effective_potential_minimum_rmin(trap, ca), 0, 0}};
  ens.velocities = {{0, 0, 0}};
  seed_micromotion_phase(trap, ens);

  CoolingConfig cool;
  cool.beams = {{0, 0, 1}, {0, 0, -1}};
  IntegratorConfig ic;
  ic.seed = 77;
  MdIntegrator mi(trap, cool, ic, ForceMode::full_rf, ca);
  thermalize(ens, 5e-3, mi.rng());

  const double dt = mi.timestep();
  mi.run_steps(ens, std::lround(0.3e-3 / dt));
  TemperatureAccumulator acc(1, ic.steps_per_rf_period);
  mi.run_steps(ens, std::lround(2e-3 / dt), &acc);
  const auto rec = acc.finalize(ca.mass);

  const double td = 0.54e-3;
  CHECK(rec.t_axial > td / 1.5);
  CHECK(rec.t_axial < td * 1.5);
}

TEST_CASE("zero-length dark periods reproduce the continuous cooling run") {
  const auto trap = reference_trap();
  auto make = [&]() {
    auto ens = ring_ensemble(trap, 4, 5);
    seed_micromotion_phase(trap, ens);
    return ens;
  };
  IntegratorConfig ic;
  ic.seed = 31;

  auto seq_ens = make();
  MdIntegrator seq_mi(trap, CoolingConfig{}, ic, ForceMode::full_rf, seq_ens.species);
  thermalize(seq_ens, 5e-3, seq_mi.rng());
  SequenceSchedule sched;
  sched.settle_time = 0;
  sched.dark_time = 0;
  sched.cool_time = 0.05e-3;
  sched.cycles = 4;
  run_sequence(seq_ens, seq_mi, sched);

  auto cont_ens = make();
  MdIntegrator cont_mi(trap, CoolingConfig{}, ic, ForceMode::full_rf,
                       cont_ens.species);
  thermalize(cont_ens, 5e-3, cont_mi.rng());
  cont_mi.set_cooling_override(true);
  cont_mi.run_steps(cont_ens, std::lround(4 * 0.05e-3 / cont_mi.timestep()));

  for (int i = 0; i < seq_ens.n(); ++i)
    for (int d = 0; d < 3; ++d) {
      CHECK(seq_ens.positions[i][d] == cont_ens.positions[i][d]);
      CHECK(seq_ens.velocities[i][d] == cont_ens.velocities[i][d]);
    }
}
