#include "ringtrap/commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/textio.hpp"

namespace fs = std::filesystem;

namespace ringtrap {

namespace c = constants;
using textio::fmt_double;

namespace {

std::string hash_hex_of(const RunConfig& cfg) {
  return textio::hash_hex(config_hash(cfg));
}

std::ofstream open_out(const std::string& dir, const std::string& name,
                       std::vector<std::string>& files) {
  fs::create_directories(dir);
  const std::string path = dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  files.push_back(path);
  return out;
}

void write_header(std::ofstream& out, const RunConfig& cfg) {
  out << "# " << version_string << "\n";
  out << "# config_hash = " << hash_hex_of(cfg) << "\n";
  out << "# seed = " << cfg.seed << ", rng = " << MdIntegrator::rng_name() << "\n";
}

} // namespace

void write_snapshot(const std::string& path, const IonEnsemble& ens,
                    const std::string& config_hash_hex) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "# " << version_string << " snapshot\n";
  out << "# config_hash = " << config_hash_hex << "\n";
  out << "# time = " << fmt_double(ens.time) << " s\n";
  out << "# species = " << ens.species.name << "\n";
  out << "# columns: ion x(m) y(m) z(m) vx(m/s) vy(m/s) vz(m/s)\n";
  for (int i = 0; i < ens.n(); ++i) {
    out << i;
    for (int d = 0; d < 3; ++d) out << " " << fmt_double(ens.positions[i][d]);
    for (int d = 0; d < 3; ++d) out << " " << fmt_double(ens.velocities[i][d]);
    out << "\n";
  }
}

IonEnsemble read_snapshot(const std::string& path, const IonSpecies& species) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  IonEnsemble ens;
  ens.species = species;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("time = ");
      if (pos != std::string::npos) ens.time = std::stod(line.substr(pos + 7));
      continue;
    }
    std::istringstream is(line);
    int idx;
    Vec3 p, v;
    if (!(is >> idx >> p[0] >> p[1] >> p[2] >> v[0] >> v[1] >> v[2]))
      throw std::runtime_error("malformed snapshot row in '" + path + "'");
    ens.positions.push_back(p);
    ens.velocities.push_back(v);
  }
  return ens;
}

// ---- potential scan ----------------------------------------------------------

CommandOutcome cmd_potential_scan(const RunConfig& cfg, const std::string& out_dir) {
  CommandOutcome oc;
  const auto& trap = cfg.trap;
  const auto& sp = cfg.species;
  const double rmin = effective_potential_minimum_rmin(trap, sp);
  const double rmax = cfg.scan_r_max > 0 ? cfg.scan_r_max : 1.6 * rmin;
  const double weff = effective_radial_frequency(trap);
  const double vmin = pseudopotential(trap, sp, rmin) + static_potential(trap, sp, rmin, 0);

  auto out = open_out(out_dir, "potential_scan.csv", oc.files);
  write_header(out, cfg);
  out << "# columns: r(m), total potential (eV), harmonic model (eV)\n";
  for (int i = 0; i <= cfg.scan_points; ++i) {
    const double r = rmax * i / cfg.scan_points;
    const double v = pseudopotential(trap, sp, r) + static_potential(trap, sp, r, 0);
    const double h = vmin + 0.5 * sp.mass * weff * weff * (r - rmin) * (r - rmin);
    out << fmt_double(r) << "," << fmt_double(units::joule_to_ev(v)) << ","
        << fmt_double(units::joule_to_ev(h)) << "\n";
  }
  oc.summary = "potential scan to r = " + fmt_double(rmax) + " m (r_min = " +
               fmt_double(rmin) + " m)";
  return oc;
}

// ---- statics -------------------------------------------------------------------

StaticsResult run_statics(const TrapConfig& trap, const IonSpecies& species,
                          int n_ions, uint64_t seed) {
  StaticsResult res;
  res.relaxed = minimize_energy(trap, species, n_ions, seed);
  res.structure = classify_structure(trap, species, res.relaxed);
  res.r_min = effective_potential_minimum_rmin(trap, species);
  res.epsilon = coulomb_radius_shift_epsilon(trap, species, n_ions);
  res.eta_ring = adiabaticity_at_ring(trap);
  res.micromotion = micromotion_amplitude(trap, res.structure.mean_radius);
  res.r_stability = n_ions % 2 == 0
                        ? double_ring_limit(species, trap.axial_omega, n_ions)
                        : std::numeric_limits<double>::quiet_NaN();
  return res;
}

CommandOutcome cmd_statics(const RunConfig& cfg, const std::string& out_dir) {
  CommandOutcome oc;
  const auto res = run_statics(cfg.trap, cfg.species, cfg.n_ions, cfg.seed);

  IonEnsemble ens;
  ens.species = cfg.species;
  ens.positions = res.relaxed.positions;
  ens.velocities.assign(res.relaxed.positions.size(), Vec3{0, 0, 0});
  fs::create_directories(out_dir);
  const std::string snap = out_dir + "/relaxed_snapshot.txt";
  write_snapshot(snap, ens, hash_hex_of(cfg));
  oc.files.push_back(snap);

  auto out = open_out(out_dir, "statics_report.txt", oc.files);
  write_header(out, cfg);
  out << "n_ions = " << cfg.n_ions << "\n";
  out << "structure = " << to_string(res.structure.tag) << "\n";
  out << "mean_radius = " << fmt_double(res.structure.mean_radius) << " m\n";
  out << "plane_separation = " << fmt_double(res.structure.plane_separation) << " m\n";
  out << "r_min = " << fmt_double(res.r_min) << " m\n";
  out << "double_ring_limit = " << fmt_double(res.r_stability) << " m\n";
  out << "coulomb_shift_epsilon = " << fmt_double(res.epsilon) << " m\n";
  out << "eta_at_ring = " << fmt_double(res.eta_ring) << "\n";
  out << "micromotion_amplitude = " << fmt_double(res.micromotion) << " m\n";
  out << "residual_force = " << fmt_double(res.relaxed.residual_force) << " N\n";
  out << "energy = " << fmt_double(res.relaxed.energy) << " J\n";
  out << "iterations = " << res.relaxed.iterations << "\n";

  std::ostringstream sum;
  sum << to_string(res.structure.tag) << ", R = " << res.structure.mean_radius * 1e6
      << " um";
  if (res.structure.tag == StructureTag::DoubleRingZigzag)
    sum << ", plane separation = " << res.structure.plane_separation * 1e6 << " um";
  oc.summary = sum.str();
  return oc;
}

// ---- md -------------------------------------------------------------------------

CommandOutcome cmd_md(const RunConfig& cfg, const std::string& out_dir) {
  CommandOutcome oc;
  const std::string hash = hash_hex_of(cfg);

  // relaxed ring, proper micromotion phase, thermal start
  auto relaxed = minimize_energy(cfg.trap, cfg.species, cfg.n_ions, cfg.seed);
  IonEnsemble ens;
  ens.species = cfg.species;
  ens.positions = relaxed.positions;
  ens.velocities.assign(relaxed.positions.size(), Vec3{0, 0, 0});
  seed_micromotion_phase(cfg.trap, ens);

  MdIntegrator integ(cfg.trap, cfg.build_cooling(), cfg.build_integrator(),
                     ForceMode::full_rf, cfg.species);
  thermalize(ens, cfg.initial_temperature, integ.rng());

  fs::create_directories(out_dir);
  auto csv = open_out(out_dir, "temperatures.csv", oc.files);
  write_header(csv, cfg);
  csv << "# columns: t(s), T_axial(K), T_radial(K), T_angular(K), dark(0/1), cycle\n";

  int snap_index = 0;
  auto on_segment = [&](const IonEnsemble& state, const SequenceRecord& rec) {
    csv << fmt_double(rec.temps.t) << "," << fmt_double(rec.temps.t_axial) << ","
        << fmt_double(rec.temps.t_radial) << "," << fmt_double(rec.temps.t_angular)
        << "," << (rec.dark ? 1 : 0) << "," << rec.cycle << "\n";
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%03d.txt", snap_index++);
    const std::string path = out_dir + "/" + name;
    write_snapshot(path, state, hash);
    oc.files.push_back(path);
  };

  SequenceResult seq;
  try {
    seq = run_sequence(ens, integ, cfg.sequence, on_segment);
  } catch (const IntegrationError& err) {
    const std::string dump_path = out_dir + "/abort_dump.txt";
    std::ofstream dump(dump_path);
    dump << "# " << err.what() << "\n" << err.dump;
    oc.files.push_back(dump_path);
    oc.exit_code = 3;
    oc.summary = std::string("integrator abort: ") + err.what();
    return oc;
  }

  auto sum = open_out(out_dir, "md_summary.txt", oc.files);
  write_header(sum, cfg);
  sum << "segments = " << seq.records.size() << "\n";
  sum << "dark_mean_t_axial = " << fmt_double(seq.dark_mean_t_axial) << " K\n";
  sum << "dark_fwhm_t_axial = " << fmt_double(seq.dark_fwhm_t_axial) << " K\n";
  if (!seq.records.empty()) {
    const auto& last = seq.records.back().temps;
    sum << "final_t_axial = " << fmt_double(last.t_axial) << " K\n";
    sum << "final_t_radial = " << fmt_double(last.t_radial) << " K\n";
    sum << "final_t_angular = " << fmt_double(last.t_angular) << " K\n";
  }

  std::ostringstream s;
  s << "dark-time mean T_axial = " << seq.dark_mean_t_axial * 1e3 << " mK (FWHM "
    << seq.dark_fwhm_t_axial * 1e3 << " mK)";
  oc.summary = s.str();
  return oc;
}

// ---- budget -----------------------------------------------------------------------

CommandOutcome cmd_budget(const RunConfig& cfg, const std::string& out_dir) {
  CommandOutcome oc;
  const ClockScenario sc = cfg.build_scenario();
  const BudgetTable table = assemble_budget(sc);

  auto txt = open_out(out_dir, "budget.txt", oc.files);
  write_header(txt, cfg);
  txt << render_budget_text(table, sc);

  auto kv = open_out(out_dir, "budget.kv", oc.files);
  write_header(kv, cfg);
  for (size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    const std::string p = "entry." + std::to_string(i) + ".";
    kv << p << "effect = " << e.effect << "\n";
    kv << p << "conditions = " << e.conditions << "\n";
    kv << p << "shift_hz = " << fmt_double(e.shift) << "\n";
    kv << p << "tabulated_shift_hz = " << fmt_double(e.tabulated_shift) << "\n";
    kv << p << "broadening_hz = " << fmt_double(e.broadening) << "\n";
    kv << p << "long_term_fractional = " << fmt_double(e.long_term) << "\n";
    kv << p << "in_totals = " << (e.in_shift_total ? "true" : "false") << "\n";
    kv << p << "notes = " << e.notes << "\n";
  }
  kv << "total.shift_hz = " << fmt_double(table.total_shift) << "\n";
  kv << "total.shift_physical_hz = " << fmt_double(table.total_shift_physical) << "\n";
  kv << "total.broadening_hz = " << fmt_double(table.total_broadening) << "\n";
  kv << "total.long_term_fractional = " << fmt_double(table.total_long_term) << "\n";

  if (!std::isnan(cfg.stability_q) && !std::isnan(cfg.stability_cycle_time) &&
      !std::isnan(cfg.stability_tau)) {
    const double snr = projection_noise_snr(sc.n_ions);
    const double sigma = allan_deviation(cfg.stability_q, snr,
                                         cfg.stability_cycle_time, cfg.stability_tau);
    kv << "stability.snr = " << fmt_double(snr) << "\n";
    kv << "stability.allan_deviation = " << fmt_double(sigma) << "\n";
    txt << "# sigma_y(" << fmt_double(cfg.stability_tau) << " s) = "
        << fmt_double(sigma) << " (projection-noise SNR = " << fmt_double(snr)
        << ")\n";
  }

  // CI gate
  std::ostringstream why;
  if (!std::isnan(cfg.max_total_shift_hz) &&
      std::abs(table.total_shift) > cfg.max_total_shift_hz) {
    oc.exit_code = 2;
    why << "total shift " << table.total_shift << " Hz exceeds threshold; ";
  }
  if (!std::isnan(cfg.max_total_broadening_hz) &&
      table.total_broadening > cfg.max_total_broadening_hz) {
    oc.exit_code = 2;
    why << "total broadening " << table.total_broadening << " Hz exceeds threshold; ";
  }
  if (!std::isnan(cfg.max_long_term) && table.total_long_term > cfg.max_long_term) {
    oc.exit_code = 2;
    why << "long-term " << table.total_long_term << " exceeds threshold; ";
  }
  std::ostringstream s;
  s << "total " << table.total_shift << " Hz, +-" << table.total_broadening
    << " Hz, long-term " << table.total_long_term;
  if (oc.exit_code != 0) s << " [THRESHOLD EXCEEDED: " << why.str() << "]";
  oc.summary = s.str();
  return oc;
}

// ---- sweep ------------------------------------------------------------------------

CommandOutcome cmd_sweep(const RunConfig& cfg, const std::string& out_dir,
                         int threads) {
  CommandOutcome oc;
  struct Point {
    double v1 = 0, v2 = 0;
  };
  std::vector<Point> grid;
  if (cfg.sweep_values2.empty()) {
    for (double v : cfg.sweep_values) grid.push_back({v, 0});
  } else {
    for (double v1 : cfg.sweep_values)
      for (double v2 : cfg.sweep_values2) grid.push_back({v1, v2});
  }

  const bool statics = cfg.sweep_target == "statics";
  std::vector<std::string> rows(grid.size());

  auto worker_row = [&](size_t idx) {
    RunConfig point = cfg;
    apply_parameter(point, cfg.sweep_parameter, grid[idx].v1);
    if (!cfg.sweep_parameter2.empty())
      apply_parameter(point, cfg.sweep_parameter2, grid[idx].v2);
    std::ostringstream row;
    row << fmt_double(grid[idx].v1);
    if (!cfg.sweep_parameter2.empty()) row << "," << fmt_double(grid[idx].v2);
    try {
      if (statics) {
        const auto res = run_statics(point.trap, point.species, point.n_ions,
                                     point.seed + idx);
        row << "," << to_string(res.structure.tag) << ","
            << fmt_double(res.structure.mean_radius) << ","
            << fmt_double(res.structure.plane_separation) << ","
            << fmt_double(res.r_min) << "," << fmt_double(res.r_stability) << ","
            << fmt_double(res.eta_ring) << ",";
      } else {
        const auto table = assemble_budget(point.build_scenario());
        row << "," << fmt_double(table.total_shift) << ","
            << fmt_double(table.total_broadening) << ","
            << fmt_double(table.total_long_term) << ","
            << fmt_double(table.entries.at(0).tabulated_shift) << ","
            << fmt_double(table.entries.at(1).tabulated_shift) << ",";
      }
    } catch (const std::exception& err) {
      if (statics) row << ",,,,,,," << err.what();
      else row << ",,,,,," << err.what();
      rows[idx] = row.str();
      return;
    }
    rows[idx] = row.str();
  };

  if (threads <= 1) {
    for (size_t i = 0; i < grid.size(); ++i) worker_row(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(grid.size()));
    for (int t = 0; t < n; ++t)
      pool.emplace_back([&]() {
        for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
          worker_row(i);
      });
    for (auto& th : pool) th.join();
  }

  auto out = open_out(out_dir, "sweep.csv", oc.files);
  write_header(out, cfg);
  out << "# columns: " << cfg.sweep_parameter;
  if (!cfg.sweep_parameter2.empty()) out << ", " << cfg.sweep_parameter2;
  if (statics)
    out << ", structure, mean_radius(m), plane_separation(m), r_min(m), "
           "double_ring_limit(m), eta, error\n";
  else
    out << ", total_shift(Hz), total_broadening(Hz), long_term, doppler2(Hz), "
           "stark(Hz), error\n";
  for (const auto& r : rows) out << r << "\n";

  oc.summary = std::to_string(grid.size()) + " sweep points (" + cfg.sweep_target + ")";
  return oc;
}

// ---- verify -----------------------------------------------------------------------

CommandOutcome cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
  CommandOutcome oc;
  const std::string expect = hash_hex_of(cfg);
  int checked = 0, mismatched = 0, missing = 0;
  std::ostringstream log;
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext != ".csv" && ext != ".txt" && ext != ".kv") continue;
    std::ifstream in(entry.path());
    std::string line, found;
    for (int i = 0; i < 32 && std::getline(in, line); ++i) {
      const auto pos = line.find("config_hash = ");
      if (pos != std::string::npos) {
        found = textio::trim(line.substr(pos + 14));
        break;
      }
    }
    ++checked;
    if (found.empty()) {
      ++missing;
      log << entry.path().filename().string() << ": no config hash\n";
    } else if (found != expect) {
      ++mismatched;
      log << entry.path().filename().string() << ": hash " << found
          << " != " << expect << "\n";
    }
  }
  oc.exit_code = (mismatched + missing) > 0 ? 1 : 0;
  std::ostringstream s;
  s << checked << " files checked, " << mismatched << " mismatched, " << missing
    << " without hash";
  if (!log.str().empty()) s << "\n" << log.str();
  oc.summary = s.str();
  return oc;
}

} // namespace ringtrap
