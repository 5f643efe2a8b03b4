#include "ringtrap/ring_statics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"

namespace ringtrap {

namespace c = constants;

double ring_sum_s1(int n) {
  if (n < 2) throw std::invalid_argument("S1(N) needs N >= 2");
  double sum = 0;
  for (int j = 1; j < n; ++j) sum += 1.0 / std::sin(c::pi * j / n);
  return sum;
}

double coulomb_ring_energy(const IonSpecies& s, int n, double R) {
  if (R <= 0) throw std::invalid_argument("ring energy needs R > 0");
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity);
  return pref * (n / 2.0) * ring_sum_s1(n) / (2.0 * R);
}

double coulomb_shift_epsilon_at(const IonSpecies& s, int k, int n, double R,
                                double omega_z) {
  if (k < 3) throw std::invalid_argument("epsilon: need 2k >= 6");
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity);
  return pref * ring_sum_s1(n) /
         (4.0 * (k - 2.0) * R * R * s.mass * omega_z * omega_z);
}

double coulomb_radius_shift_epsilon(const TrapConfig& cfg, const IonSpecies& s, int n) {
  const double rmin = effective_potential_minimum_rmin(cfg, s);
  return coulomb_shift_epsilon_at(s, cfg.k(), n, rmin, cfg.axial_omega);
}

double equilibrium_ring_radius(const TrapConfig& cfg, const IonSpecies& s, int n) {
  return effective_potential_minimum_rmin(cfg, s) +
         coulomb_radius_shift_epsilon(cfg, s, n);
}

double double_ring_limit(const IonSpecies& s, double omega_z, int n) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("double-ring limit needs an even N >= 4");
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity) /
                      (4.0 * s.mass * omega_z * omega_z);
  double sum = 0;
  for (int j = 1; j <= n / 2; ++j) {
    const double sn = std::sin((2.0 * j - 1.0) * c::pi / n);
    sum += 1.0 / (sn * sn * sn);
  }
  return std::cbrt(pref) * std::cbrt(sum);
}

double double_ring_limit_approx(const IonSpecies& s, double omega_z, int n) {
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity) /
                      (2.0 * s.mass * omega_z * omega_z);
  return std::cbrt(pref) * n / c::pi;
}

double thermal_radial_amplitude(const TrapConfig& cfg, const IonSpecies& s, double t_r) {
  if (cfg.k() < 3) throw std::invalid_argument("thermal amplitude: need 2k >= 6");
  if (t_r < 0) throw std::invalid_argument("thermal amplitude: T_r >= 0");
  return std::sqrt(2.0 * c::boltzmann * t_r /
                   (s.mass * (cfg.k() - 2.0) * cfg.axial_omega * cfg.axial_omega));
}

double axial_modulation_index(const IonSpecies& s, double omega_z, double t_z) {
  const double vz = std::sqrt(2.0 * c::boltzmann * t_z / s.mass);
  return s.clock_wavevector() * vz / omega_z;
}

double axial_modulation_index_doppler(const IonSpecies& s, double omega_z) {
  return s.clock_wavevector() * std::sqrt(c::reduced_planck * s.gamma / s.mass) /
         omega_z;
}

bool in_lamb_dicke_regime(const IonSpecies& s, double omega_z, double t_z) {
  return axial_modulation_index(s, omega_z, t_z) < 1.0;
}

const char* to_string(StructureTag tag) {
  switch (tag) {
    case StructureTag::SingleRing: return "SingleRing";
    case StructureTag::DoubleRingZigzag: return "DoubleRingZigzag";
    default: return "Other";
  }
}

// ---- energy, gradient ------------------------------------------------------

double total_potential_energy(const TrapConfig& cfg, const IonSpecies& s,
                              const std::vector<Vec3>& pos) {
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity);
  double e = 0;
  for (const auto& p : pos) {
    const double r = std::hypot(p[0], p[1]);
    e += pseudopotential(cfg, s, r) + static_potential(cfg, s, r, p[2]);
  }
  const size_t n = pos.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = pos[i][0] - pos[j][0];
      const double dy = pos[i][1] - pos[j][1];
      const double dz = pos[i][2] - pos[j][2];
      e += pref / std::sqrt(dx * dx + dy * dy + dz * dz);
    }
  return e;
}

void potential_gradient(const TrapConfig& cfg, const IonSpecies& s,
                        const std::vector<Vec3>& pos, std::vector<Vec3>& grad) {
  const size_t n = pos.size();
  grad.assign(n, Vec3{0, 0, 0});
  for (size_t i = 0; i < n; ++i) {
    const auto fp = pseudopotential_force(cfg, s, pos[i][0], pos[i][1]);
    const auto fs = static_force(cfg, s, pos[i][0], pos[i][1], pos[i][2]);
    grad[i][0] -= fp[0] + fs[0];
    grad[i][1] -= fp[1] + fs[1];
    grad[i][2] -= fs[2];
  }
  const double pref = s.charge * s.charge / (4.0 * c::pi * c::vacuum_permittivity);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double dx = pos[i][0] - pos[j][0];
      const double dy = pos[i][1] - pos[j][1];
      const double dz = pos[i][2] - pos[j][2];
      const double r2 = dx * dx + dy * dy + dz * dz;
      const double inv = pref / (r2 * std::sqrt(r2)); // dU/dr * (1/r)
      grad[i][0] -= inv * dx;
      grad[i][1] -= inv * dy;
      grad[i][2] -= inv * dz;
      grad[j][0] += inv * dx;
      grad[j][1] += inv * dy;
      grad[j][2] += inv * dz;
    }
}

static double max_force_norm(const std::vector<Vec3>& grad) {
  double m = 0;
  for (const auto& g : grad)
    m = std::max(m, std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]));
  return m;
}

// ---- FIRE minimizer --------------------------------------------------------

RelaxedEnsemble minimize_energy(const TrapConfig& cfg, const IonSpecies& s, int n,
                                uint64_t seed, const MinimizeOptions& opt) {
  if (n < 2) throw std::invalid_argument("minimize_energy needs N >= 2");
  cfg.validate();
  const double rmin = effective_potential_minimum_rmin(cfg, s);

  // ideal ring at r_min, randomized to break the planar saddle
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  std::vector<Vec3> pos(n);
  for (int i = 0; i < n; ++i) {
    const double a = c::two_pi * i / n;
    for (int d = 0; d < 3; ++d) {
      const double off = opt.start_perturbation * (2.0 * uniform() - 1.0);
      pos[i][d] = off + (d == 0 ? rmin * std::cos(a) : d == 1 ? rmin * std::sin(a) : 0.0);
    }
  }

  // FIRE with an energy-revert guard so the energy never increases
  const double dt_init = 0.02 / effective_radial_frequency(cfg);
  const double dt_max = 10.0 * dt_init;
  double dt = dt_init;
  double alpha = 0.1;
  int steps_since_reset = 0;

  std::vector<Vec3> vel(n, Vec3{0, 0, 0});
  std::vector<Vec3> grad, prev_pos;
  potential_gradient(cfg, s, pos, grad);
  double energy = total_potential_energy(cfg, s, pos);
  double fmax = max_force_norm(grad);
  double best_fmax = fmax;

  RelaxedEnsemble out;
  int it = 0;
  for (; it < opt.max_iterations && fmax > opt.force_tolerance; ++it) {
    double power = 0, vnorm2 = 0, fnorm2 = 0;
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 3; ++d) {
        const double f = -grad[i][d];
        power += vel[i][d] * f;
        vnorm2 += vel[i][d] * vel[i][d];
        fnorm2 += f * f;
      }

    if (power > 0) {
      if (++steps_since_reset > 5) {
        dt = std::min(dt * 1.1, dt_max);
        alpha *= 0.99;
      }
      const double mix = alpha * std::sqrt(vnorm2 / std::max(fnorm2, 1e-300));
      for (int i = 0; i < n; ++i)
        for (int d = 0; d < 3; ++d)
          vel[i][d] = (1.0 - alpha) * vel[i][d] + mix * (-grad[i][d]);
    } else {
      steps_since_reset = 0;
      dt = std::max(dt * 0.5, 1e-4 * dt_init);
      alpha = 0.1;
      for (auto& v : vel) v = {0, 0, 0};
    }

    prev_pos = pos;
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 3; ++d) {
        vel[i][d] += dt * (-grad[i][d]) / s.mass;
        pos[i][d] += dt * vel[i][d];
      }

    const double new_energy = total_potential_energy(cfg, s, pos);
    if (new_energy > energy) {
      // uphill move: revert, damp, retry with smaller step
      pos = prev_pos;
      for (auto& v : vel) v = {0, 0, 0};
      dt = std::max(dt * 0.5, 1e-4 * dt_init);
      steps_since_reset = 0;
      potential_gradient(cfg, s, pos, grad);
      fmax = max_force_norm(grad);
      continue;
    }
    energy = new_energy;
    potential_gradient(cfg, s, pos, grad);
    fmax = max_force_norm(grad);
    best_fmax = std::min(best_fmax, fmax);
  }

  if (fmax > opt.force_tolerance)
    throw ConvergenceError("energy minimization did not converge (best max|F| = " +
                               std::to_string(best_fmax) + " N)",
                           best_fmax);

  out.positions = std::move(pos);
  out.energy = energy;
  out.residual_force = fmax;
  out.iterations = it;
  out.seed = seed;
  return out;
}

// ---- classification --------------------------------------------------------

RingGeometry extract_ring_geometry(const std::vector<Vec3>& positions) {
  RingGeometry g;
  g.n_ions = static_cast<int>(positions.size());
  std::vector<size_t> order(positions.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&positions](size_t a, size_t b) {
    return std::atan2(positions[a][1], positions[a][0]) <
           std::atan2(positions[b][1], positions[b][0]);
  });
  for (size_t idx : order) {
    const auto& p = positions[idx];
    g.radius += std::hypot(p[0], p[1]);
    g.angles.push_back(std::atan2(p[1], p[0]));
    g.axial_offsets.push_back(p[2]);
  }
  if (g.n_ions > 0) g.radius /= g.n_ions;
  return g;
}

StructureClass classify_structure(const TrapConfig& cfg, const IonSpecies& s,
                                  const RelaxedEnsemble& relaxed,
                                  const ClassifyOptions& opt) {
  const auto& pos = relaxed.positions;
  if (pos.size() < 2) throw std::invalid_argument("classification needs >= 2 ions");

  std::vector<Vec3> grad;
  potential_gradient(cfg, s, pos, grad);
  const double fmax = max_force_norm(grad);
  if (fmax > opt.force_tolerance)
    throw std::invalid_argument("classification input not force-converged (max|F| = " +
                                std::to_string(fmax) + " N)");

  StructureClass sc;
  double zmin = pos[0][2], zmax = pos[0][2];
  for (const auto& p : pos) {
    sc.mean_radius += std::hypot(p[0], p[1]);
    zmin = std::min(zmin, p[2]);
    zmax = std::max(zmax, p[2]);
  }
  sc.mean_radius /= pos.size();

  if (zmax - zmin < opt.z_tolerance) {
    sc.tag = StructureTag::SingleRing;
    return sc;
  }

  // two-means split of the z values, deterministic (init at min/max)
  double lo = zmin, hi = zmax;
  std::vector<int> label(pos.size(), 0);
  for (int pass = 0; pass < 64; ++pass) {
    double slo = 0, shi = 0;
    int nlo = 0, nhi = 0;
    for (size_t i = 0; i < pos.size(); ++i) {
      label[i] = (std::abs(pos[i][2] - lo) <= std::abs(pos[i][2] - hi)) ? 0 : 1;
      if (label[i] == 0) { slo += pos[i][2]; ++nlo; } else { shi += pos[i][2]; ++nhi; }
    }
    if (nlo == 0 || nhi == 0) { sc.tag = StructureTag::Other; return sc; }
    const double nlo_mean = slo / nlo, nhi_mean = shi / nhi;
    if (nlo_mean == lo && nhi_mean == hi) break;
    lo = nlo_mean;
    hi = nhi_mean;
  }

  // zig-zag: membership alternates around the ring
  std::vector<size_t> order(pos.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&pos](size_t a, size_t b) {
    return std::atan2(pos[a][1], pos[a][0]) < std::atan2(pos[b][1], pos[b][0]);
  });
  bool alternates = pos.size() % 2 == 0;
  for (size_t i = 0; alternates && i < order.size(); ++i)
    alternates = label[order[i]] != label[order[(i + 1) % order.size()]];

  if (alternates) {
    sc.tag = StructureTag::DoubleRingZigzag;
    sc.plane_separation = hi - lo;
  } else {
    sc.tag = StructureTag::Other;
  }
  return sc;
}

} // namespace ringtrap
