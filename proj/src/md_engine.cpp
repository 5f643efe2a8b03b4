#include "ringtrap/md_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"

namespace ringtrap {

namespace c = constants;

// ---- cooling config --------------------------------------------------------

double CoolingConfig::detuning_or_default(const IonSpecies& s) const {
  return detuning != 0 ? detuning : -0.5 * s.gamma;
}

double CoolingConfig::rabi_or_default(const IonSpecies& s) const {
  return rabi != 0 ? rabi : 0.5 * s.gamma;
}

std::vector<Vec3> CoolingConfig::beams_or_default() const {
  if (!beams.empty()) return beams;
  return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

double CoolingConfig::saturation_total(const IonSpecies& s) const {
  const double om = rabi_or_default(s);
  return 2.0 * om * om / (s.gamma * s.gamma);
}

bool CoolingConfig::is_on(double t) const {
  if (on_intervals.empty()) return true;
  for (const auto& iv : on_intervals) {
    if (t >= iv.first && t < iv.second) return true;
    if (t < iv.first) break; // sorted
  }
  return false;
}

void CoolingConfig::validate() const {
  double prev_end = -1;
  for (const auto& iv : on_intervals) {
    if (iv.second < iv.first)
      throw std::invalid_argument("cooling schedule: interval end before start");
    if (iv.first < prev_end)
      throw std::invalid_argument("cooling schedule: intervals overlap or unsorted");
    prev_end = iv.second;
  }
  for (const auto& b : beams) {
    const double n2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    if (std::abs(n2 - 1.0) > 1e-9)
      throw std::invalid_argument("cooling beams must be unit vectors");
  }
}

double scattering_rate(double gamma, double s_beam, double detuning,
                       double doppler_shift) {
  const double dd = 2.0 * (detuning - doppler_shift) / gamma;
  return 0.5 * gamma * s_beam / (1.0 + s_beam + dd * dd);
}

// ---- integrator config -----------------------------------------------------

double IntegratorConfig::resolved_timestep(const TrapConfig& trap) const {
  if (timestep > 0) return timestep;
  if (!(trap.rf_omega > 0))
    throw std::invalid_argument("integrator: no timestep and no rf period to derive it");
  return c::two_pi / trap.rf_omega / steps_per_rf_period;
}

void IntegratorConfig::validate(const TrapConfig& trap) const {
  const double dt = resolved_timestep(trap);
  if (!(dt > 0)) throw std::invalid_argument("integrator: timestep must be > 0");
  if (dt * trap.rf_omega / c::two_pi > 1.0 / 50.0)
    throw std::invalid_argument("integrator: need at least 50 steps per rf period");
}

// ---- forces ----------------------------------------------------------------

void coulomb_forces(const IonSpecies& s, const std::vector<Vec3>& pos,
                    std::vector<Vec3>& force) {
  const size_t n = pos.size();
  force.assign(n, Vec3{0, 0, 0});
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = pos[i][0] - pos[j][0];
      const double dy = pos[i][1] - pos[j][1];
      const double dz = pos[i][2] - pos[j][2];
      const double r2 = dx * dx + dy * dy + dz * dz;
      if (r2 == 0)
        throw IntegrationError("coincident ions in Coulomb force", "");
      const double inv = pref / (r2 * std::sqrt(r2));
      force[i][0] += inv * dx;
      force[i][1] += inv * dy;
      force[i][2] += inv * dz;
      force[j][0] -= inv * dx;
      force[j][1] -= inv * dy;
      force[j][2] -= inv * dz;
    }
}

// ---- thermometry -----------------------------------------------------------

TemperatureAccumulator::TemperatureAccumulator(int n_ions, int rf_period_steps)
    : n_(n_ions), period_(rf_period_steps),
      ring_(static_cast<size_t>(n_ions) * rf_period_steps, Vec3{0, 0, 0}),
      vsum_(n_ions, Vec3{0, 0, 0}) {}

void TemperatureAccumulator::reset() {
  filled_ = 0;
  head_ = 0;
  samples_ = 0;
  acc_ax_ = acc_rad_ = acc_ang_ = 0;
  std::fill(ring_.begin(), ring_.end(), Vec3{0, 0, 0});
  std::fill(vsum_.begin(), vsum_.end(), Vec3{0, 0, 0});
}

void TemperatureAccumulator::add_sample(const std::vector<Vec3>& pos,
                                        const std::vector<Vec3>& vel, double /*mass*/,
                                        double t) {
  for (int i = 0; i < n_; ++i) {
    auto& slot = ring_[static_cast<size_t>(i) * period_ + head_];
    for (int d = 0; d < 3; ++d) {
      vsum_[i][d] += vel[i][d] - slot[d];
      slot[d] = vel[i][d];
    }
  }
  head_ = (head_ + 1) % period_;
  if (filled_ < period_) {
    ++filled_;
    return; // wait until the sliding rf-period mean is defined
  }
  if (samples_ == 0) t_first_ = t;
  t_last_ = t;
  ++samples_;
  for (int i = 0; i < n_; ++i) {
    const double r = std::hypot(pos[i][0], pos[i][1]);
    double rx = 1, ry = 0;
    if (r > 0) { rx = pos[i][0] / r; ry = pos[i][1] / r; }
    const double vr = (vsum_[i][0] * rx + vsum_[i][1] * ry) / period_;
    const double va = (-vsum_[i][0] * ry + vsum_[i][1] * rx) / period_;
    acc_ax_ += vel[i][2] * vel[i][2];
    acc_rad_ += vr * vr;
    acc_ang_ += va * va;
  }
}

TemperatureRecord TemperatureAccumulator::finalize(double mass) const {
  if (samples_ == 0)
    throw std::invalid_argument("temperature window shorter than one rf period");
  const double norm = static_cast<double>(samples_) * n_;
  TemperatureRecord rec;
  rec.t = 0.5 * (t_first_ + t_last_);
  rec.t_axial = mass * (acc_ax_ / norm) / c::boltzmann;
  rec.t_radial = mass * (acc_rad_ / norm) / c::boltzmann;
  rec.t_angular = mass * (acc_ang_ / norm) / c::boltzmann;
  return rec;
}

// ---- stepper ----------------------------------------------------------------

MdIntegrator::MdIntegrator(TrapConfig trap, CoolingConfig cooling,
                           IntegratorConfig integ, ForceMode mode,
                           const IonSpecies& species)
    : trap_(std::move(trap)), cooling_(std::move(cooling)), mode_(mode),
      species_(species) {
  if (mode_ != ForceMode::coulomb_only) {
    trap_.validate();
    integ.validate(trap_);
  }
  cooling_.validate();
  dt_ = integ.resolved_timestep(trap_);
  beams_ = cooling_.beams_or_default();
  s_beam_ = cooling_.enabled ? cooling_.saturation_total(species_) / beams_.size() : 0.0;
  detuning_ = cooling_.detuning_or_default(species_);
  rng_.seed(integ.seed);
}

void MdIntegrator::forces_at(const std::vector<Vec3>& pos, double t,
                             std::vector<Vec3>& f) {
  coulomb_forces(species_, pos, f);
  if (mode_ == ForceMode::coulomb_only) return;
  for (size_t i = 0; i < pos.size(); ++i) {
    const auto fs = static_force(trap_, species_, pos[i][0], pos[i][1], pos[i][2]);
    f[i][0] += fs[0];
    f[i][1] += fs[1];
    f[i][2] += fs[2];
    if (mode_ == ForceMode::full_rf) {
      const auto frf = rf_force_full(trap_, species_, pos[i][0], pos[i][1], t);
      f[i][0] += frf[0];
      f[i][1] += frf[1];
    } else {
      const auto fp = pseudopotential_force(trap_, species_, pos[i][0], pos[i][1]);
      f[i][0] += fp[0];
      f[i][1] += fp[1];
    }
  }
}

void MdIntegrator::apply_cooling(IonEnsemble& ens) {
  const bool on = cooling_override_ ? *cooling_override_ : cooling_.is_on(ens.time);
  if (!on || s_beam_ <= 0) return;
  const double gamma = species_.gamma;
  const double kmag = species_.cooling_wavevector();
  const double vkick = c::reduced_planck * kmag / species_.mass;
  auto uniform = [this]() { return (rng_() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < ens.n(); ++i) {
    auto& v = ens.velocities[i];
    for (const auto& b : beams_) {
      const double kv = kmag * (b[0] * v[0] + b[1] * v[1] + b[2] * v[2]);
      const double p = scattering_rate(gamma, s_beam_, detuning_, kv) * dt_;
      if (p > 0.1)
        throw IntegrationError(
            "cooling scattering probability per step exceeds 0.1; "
            "reduce the timestep or the beam intensity",
            dump_state(ens));
      if (uniform() < p) {
        const double cost = 2.0 * uniform() - 1.0;
        const double sint = std::sqrt(std::max(0.0, 1.0 - cost * cost));
        const double phi = c::two_pi * uniform();
        v[0] += vkick * (b[0] + sint * std::cos(phi));
        v[1] += vkick * (b[1] + sint * std::sin(phi));
        v[2] += vkick * (b[2] + cost);
      }
    }
  }
}

void MdIntegrator::check_finite(const IonEnsemble& ens) const {
  for (int i = 0; i < ens.n(); ++i)
    for (int d = 0; d < 3; ++d)
      if (!std::isfinite(ens.positions[i][d]) || !std::isfinite(ens.velocities[i][d]))
        throw IntegrationError("non-finite coordinate at t = " +
                                   std::to_string(ens.time),
                               dump_state(ens));
}

void MdIntegrator::step(IonEnsemble& ens) {
  const double half = 0.5 * dt_;
  const double tmid = ens.time + half;
  for (int i = 0; i < ens.n(); ++i)
    for (int d = 0; d < 3; ++d) ens.positions[i][d] += half * ens.velocities[i][d];
  forces_at(ens.positions, tmid, force_);
  const double inv_m = 1.0 / species_.mass;
  for (int i = 0; i < ens.n(); ++i)
    for (int d = 0; d < 3; ++d) ens.velocities[i][d] += dt_ * force_[i][d] * inv_m;
  for (int i = 0; i < ens.n(); ++i)
    for (int d = 0; d < 3; ++d) ens.positions[i][d] += half * ens.velocities[i][d];
  apply_cooling(ens);
  ens.time += dt_;
  check_finite(ens);
}

void MdIntegrator::run_steps(IonEnsemble& ens, long n_steps,
                             TemperatureAccumulator* acc) {
  for (long k = 0; k < n_steps; ++k) {
    step(ens);
    if (acc) acc->add_sample(ens.positions, ens.velocities, species_.mass, ens.time);
  }
}

// ---- sequences ---------------------------------------------------------------

void SequenceSchedule::validate() const {
  if (settle_time < 0 || dark_time < 0 || cool_time < 0 || cycles < 0)
    throw std::invalid_argument("sequence schedule: negative time or cycle count");
}

SequenceResult run_sequence(
    IonEnsemble& ens, MdIntegrator& integ, const SequenceSchedule& sched,
    const std::function<void(const IonEnsemble&, const SequenceRecord&)>& on_segment) {
  sched.validate();
  const double dt = integ.timestep();
  const int rf_steps =
      std::max(1, static_cast<int>(std::lround(c::two_pi / integ.trap().rf_omega / dt)));
  TemperatureAccumulator acc(ens.n(), rf_steps);

  SequenceResult out;
  auto run_segment = [&](double duration, bool cooling_on, int cycle, bool dark) {
    const long n_steps = std::lround(duration / dt);
    if (n_steps <= 0) return;
    integ.set_cooling_override(cooling_on);
    acc.reset();
    integ.run_steps(ens, n_steps, &acc);
    SequenceRecord rec;
    rec.temps = acc.finalize(ens.species.mass);
    rec.cycle = cycle;
    rec.dark = dark;
    out.records.push_back(rec);
    if (on_segment) on_segment(ens, rec);
  };

  run_segment(sched.settle_time, true, -1, false);
  for (int cyc = 0; cyc < sched.cycles; ++cyc) {
    run_segment(sched.dark_time, false, cyc, true);
    run_segment(sched.cool_time, true, cyc, false);
  }
  integ.set_cooling_override(std::nullopt);

  double sum = 0, sum2 = 0;
  int ndark = 0;
  for (const auto& r : out.records)
    if (r.dark) {
      sum += r.temps.t_axial;
      sum2 += r.temps.t_axial * r.temps.t_axial;
      ++ndark;
    }
  if (ndark > 0) {
    out.dark_mean_t_axial = sum / ndark;
    const double var = std::max(0.0, sum2 / ndark - out.dark_mean_t_axial *
                                                        out.dark_mean_t_axial);
    out.dark_fwhm_t_axial = 2.3548 * std::sqrt(var);
  }
  return out;
}

// ---- diagnostics -------------------------------------------------------------

double kinetic_energy(const IonEnsemble& ens) {
  double e = 0;
  for (const auto& v : ens.velocities)
    e += 0.5 * ens.species.mass * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return e;
}

double total_energy_pseudopotential(const TrapConfig& cfg, const IonEnsemble& ens) {
  return kinetic_energy(ens) + total_potential_energy(cfg, ens.species, ens.positions);
}

Vec3 total_momentum(const IonEnsemble& ens) {
  Vec3 p{0, 0, 0};
  for (const auto& v : ens.velocities)
    for (int d = 0; d < 3; ++d) p[d] += ens.species.mass * v[d];
  return p;
}

void seed_micromotion_phase(const TrapConfig& cfg, IonEnsemble& ens) {
  // driven displacement xi(0) = -F_rf(x, 0) / (m Omega^2) at phase cos = 1
  const double inv = 1.0 / (ens.species.mass * cfg.rf_omega * cfg.rf_omega);
  for (int i = 0; i < ens.n(); ++i) {
    const auto f = rf_force_full(cfg, ens.species, ens.positions[i][0],
                                 ens.positions[i][1], 0.0);
    ens.positions[i][0] -= f[0] * inv;
    ens.positions[i][1] -= f[1] * inv;
  }
}

void thermalize(IonEnsemble& ens, double temperature, std::mt19937_64& rng) {
  const double sigma = std::sqrt(c::boltzmann * temperature / ens.species.mass);
  auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  auto gauss = [&]() {
    // Box-Muller; explicit so streams are identical across platforms
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(c::two_pi * u2);
  };
  for (auto& v : ens.velocities)
    for (int d = 0; d < 3; ++d) v[d] += sigma * gauss();
}

std::string dump_state(const IonEnsemble& ens) {
  std::ostringstream os;
  os << "# state dump t=" << ens.time << " n=" << ens.n() << "\n";
  for (int i = 0; i < ens.n(); ++i) {
    os << i;
    for (int d = 0; d < 3; ++d) os << " " << ens.positions[i][d];
    for (int d = 0; d < 3; ++d) os << " " << ens.velocities[i][d];
    os << "\n";
  }
  return os.str();
}

} // namespace ringtrap
