#include "ringtrap/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ringtrap/constants.hpp"
#include "ringtrap/errors.hpp"
#include "ringtrap/textio.hpp"

namespace ringtrap {

namespace c = constants;
using textio::fmt_double;
using textio::fmt_int;
using textio::trim;

const char* to_string(RunMode m) {
  switch (m) {
    case RunMode::potential_scan: return "potential-scan";
    case RunMode::statics: return "statics";
    case RunMode::md: return "md";
    case RunMode::budget: return "budget";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

RunConfig::RunConfig() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  species = builtin_ca40();
  max_total_shift_hz = nan;
  max_total_broadening_hz = nan;
  max_long_term = nan;
  stability_q = nan;
  stability_cycle_time = nan;
  stability_tau = nan;
}

// ---- units -----------------------------------------------------------------

namespace {

struct Unit {
  const char* token;
  double factor;
};

const std::map<std::string, std::vector<Unit>>& unit_table() {
  static const std::map<std::string, std::vector<Unit>> table = {
      {"length", {{"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
      {"voltage", {{"V", 1.0}, {"kV", 1e3}}},
      // cyclic frequencies converted to angular rad/s at the boundary
      {"angular_frequency",
       {{"rad/s", 1.0},
        {"Hz", c::two_pi},
        {"kHz", c::two_pi * 1e3},
        {"MHz", c::two_pi * 1e6},
        {"GHz", c::two_pi * 1e9}}},
      {"hertz", {{"Hz", 1.0}, {"mHz", 1e-3}, {"kHz", 1e3}, {"MHz", 1e6}}},
      {"time", {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}}},
      {"temperature", {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}}},
      {"bfield", {{"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}, {"G", 1e-4}, {"mG", 1e-7}}},
      {"mass", {{"kg", 1.0}, {"amu", c::atomic_mass_unit}}},
      {"charge", {{"C", 1.0}, {"e", c::elementary_charge}}},
      {"rate", {{"1/s", 1.0}}},
      {"per_length", {{"1/m", 1.0}}},
      {"gamma", {{"gamma", 1.0}}},
      {"polarizability", {{"Hz/(V/m)^2", 1.0}}},
      {"quadmoment", {{"e*a0^2", 1.0}}},
  };
  return table;
}

double parse_number(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigParseError(line, key, "expected a plain number, got '" + t + "'");
  return v;
}

double parse_quantity(const std::string& text, const std::string& dimension,
                      int line, const std::string& key) {
  const std::string t = trim(text);
  double v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc())
    throw ConfigParseError(line, key, "expected '<number> <unit>', got '" + t + "'");
  const std::string unit = trim(std::string(res.ptr, t.data() + t.size()));
  const auto& units = unit_table().at(dimension);
  if (unit.empty()) {
    std::string expected;
    for (const auto& u : units) expected += std::string(u.token) + " ";
    throw ConfigParseError(line, key, "missing unit (expected one of: " + expected + ")");
  }
  for (const auto& u : units)
    if (unit == u.token) return v * u.factor;
  throw ConfigParseError(line, key, "unknown unit '" + unit + "' for " + dimension);
}

long parse_integer(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  long v = 0;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigParseError(line, key, "expected an integer, got '" + t + "'");
  return v;
}

bool parse_bool(const std::string& text, int line, const std::string& key) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigParseError(line, key, "expected true/false, got '" + t + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, ',')) out.push_back(trim(cur));
  return out;
}

} // namespace

// ---- parser ------------------------------------------------------------------

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  bool mode_set = false, seed_set = false;
  bool species_inline = false, species_named = false;
  std::set<std::string> sections_seen;
  std::string raw_sweep_values, raw_sweep_values2;
  int sweep_values_line = 0, sweep_values2_line = 0;

  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;

  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigParseError(line_no, "", "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      static const std::set<std::string> known = {
          "trap", "species", "ions", "scenario", "thresholds", "stability",
          "integrator", "cooling", "sequence", "scan", "sweep"};
      if (!known.count(section))
        throw ConfigParseError(line_no, "", "unknown section [" + section + "]");
      sections_seen.insert(section);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigParseError(line_no, "", "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigParseError(line_no, key, "empty key or value");

    auto quantity = [&](const char* dim) {
      return parse_quantity(value, dim, line_no, key);
    };

    if (section.empty()) {
      if (key == "mode") {
        if (value == "potential-scan") cfg.mode = RunMode::potential_scan;
        else if (value == "statics") cfg.mode = RunMode::statics;
        else if (value == "md") cfg.mode = RunMode::md;
        else if (value == "budget") cfg.mode = RunMode::budget;
        else if (value == "sweep") cfg.mode = RunMode::sweep;
        else throw ConfigParseError(line_no, key, "unknown mode '" + value + "'");
        mode_set = true;
      } else if (key == "seed") {
        cfg.seed = static_cast<uint64_t>(parse_integer(value, line_no, key));
        seed_set = true;
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else {
        throw ConfigParseError(line_no, key, "unknown top-level key");
      }
    } else if (section == "trap") {
      if (key == "pole_count")
        cfg.trap.pole_count = static_cast<int>(parse_integer(value, line_no, key));
      else if (key == "rf_amplitude") cfg.trap.rf_amplitude = quantity("voltage");
      else if (key == "rf_frequency") cfg.trap.rf_omega = quantity("angular_frequency");
      else if (key == "inner_radius") cfg.trap.inner_radius = quantity("length");
      else if (key == "axial_frequency")
        cfg.trap.axial_omega = quantity("angular_frequency");
      else throw ConfigParseError(line_no, key, "unknown [trap] key");
    } else if (section == "species") {
      if (key == "name") {
        cfg.species.name = value;
        species_named = true;
      } else if (key == "mass") {
        cfg.species.mass = quantity("mass");
        species_inline = true;
      } else if (key == "charge") {
        cfg.species.charge = quantity("charge");
        species_inline = true;
      } else if (key == "cooling_linewidth") {
        cfg.species.gamma = quantity("rate");
        species_inline = true;
      } else if (key == "cooling_wavelength") {
        cfg.species.cooling_wavelength = quantity("length");
        species_inline = true;
      } else if (key == "clock_wavelength") {
        cfg.species.clock_wavelength = quantity("length");
        species_inline = true;
      } else if (key == "scalar_diff_polarizability") {
        cfg.species.dalpha_scalar = quantity("polarizability");
        species_inline = true;
      } else if (key == "tensor_diff_polarizability") {
        cfg.species.dalpha_tensor = quantity("polarizability");
        species_inline = true;
      } else if (key == "d52_quadrupole_moment") {
        cfg.species.quad_moment_d52 = quantity("quadmoment");
        species_inline = true;
      } else {
        throw ConfigParseError(line_no, key, "unknown [species] key");
      }
    } else if (section == "ions") {
      if (key == "count")
        cfg.n_ions = static_cast<int>(parse_integer(value, line_no, key));
      else throw ConfigParseError(line_no, key, "unknown [ions] key");
    } else if (section == "scenario") {
      if (key == "ring_radius") cfg.scenario.ring_radius = quantity("length");
      else if (key == "ring_radius_override")
        cfg.scenario.ring_radius_override = parse_bool(value, line_no, key);
      else if (key == "temperature_axial") cfg.scenario.t_axial = quantity("temperature");
      else if (key == "temperature_radial")
        cfg.scenario.t_radial = quantity("temperature");
      else if (key == "zeeman_sublevel")
        cfg.scenario.zeeman_mj = parse_number(value, line_no, key);
      else if (key == "magnetic_field") cfg.scenario.magnetic_field = quantity("bfield");
      else if (key == "magnetic_field_fluctuation")
        cfg.scenario.magnetic_field_fluct = quantity("bfield");
      else if (key == "b_direction") {
        const auto parts = split_list(value);
        if (parts.size() != 3)
          throw ConfigParseError(line_no, key, "expected three comma-separated numbers");
        for (int d = 0; d < 3; ++d)
          cfg.scenario.b_direction[d] = parse_number(parts[d], line_no, key);
      } else if (key == "bbr_temperature")
        cfg.scenario.bbr_temperature = quantity("temperature");
      else if (key == "bbr_temperature_uncertainty")
        cfg.scenario.bbr_temperature_unc = quantity("temperature");
      else if (key == "laser_waist") cfg.scenario.laser_waist = quantity("length");
      else if (key == "misalignment") cfg.scenario.misalignment = quantity("length");
      else if (key == "extra_dc_uncertainty")
        cfg.scenario.extra_dc_uncertainty_hz = quantity("hertz");
      else throw ConfigParseError(line_no, key, "unknown [scenario] key");
    } else if (section == "thresholds") {
      if (key == "max_total_shift") cfg.max_total_shift_hz = quantity("hertz");
      else if (key == "max_total_broadening")
        cfg.max_total_broadening_hz = quantity("hertz");
      else if (key == "max_long_term")
        cfg.max_long_term = parse_number(value, line_no, key);
      else throw ConfigParseError(line_no, key, "unknown [thresholds] key");
    } else if (section == "stability") {
      if (key == "quality_factor") cfg.stability_q = parse_number(value, line_no, key);
      else if (key == "cycle_time") cfg.stability_cycle_time = quantity("time");
      else if (key == "tau") cfg.stability_tau = quantity("time");
      else throw ConfigParseError(line_no, key, "unknown [stability] key");
    } else if (section == "integrator") {
      if (key == "steps_per_rf_period")
        cfg.steps_per_rf_period = static_cast<int>(parse_integer(value, line_no, key));
      else throw ConfigParseError(line_no, key, "unknown [integrator] key");
    } else if (section == "cooling") {
      if (key == "detuning") cfg.cooling_detuning_gamma = quantity("gamma");
      else if (key == "rabi_frequency") cfg.cooling_rabi_gamma = quantity("gamma");
      else if (key == "beams") {
        if (value != "xyz" && value != "xy" && value != "z")
          throw ConfigParseError(line_no, key, "beams must be xyz, xy or z");
        cfg.cooling_beams = value;
      } else throw ConfigParseError(line_no, key, "unknown [cooling] key");
    } else if (section == "sequence") {
      if (key == "settle_time") cfg.sequence.settle_time = quantity("time");
      else if (key == "dark_time") cfg.sequence.dark_time = quantity("time");
      else if (key == "cool_time") cfg.sequence.cool_time = quantity("time");
      else if (key == "cycles")
        cfg.sequence.cycles = static_cast<int>(parse_integer(value, line_no, key));
      else if (key == "initial_temperature")
        cfg.initial_temperature = quantity("temperature");
      else throw ConfigParseError(line_no, key, "unknown [sequence] key");
    } else if (section == "scan") {
      if (key == "r_max") cfg.scan_r_max = quantity("length");
      else if (key == "points")
        cfg.scan_points = static_cast<int>(parse_integer(value, line_no, key));
      else throw ConfigParseError(line_no, key, "unknown [scan] key");
    } else if (section == "sweep") {
      if (key == "target") {
        if (value != "statics" && value != "budget")
          throw ConfigParseError(line_no, key, "sweep target must be statics or budget");
        cfg.sweep_target = value;
      } else if (key == "parameter") cfg.sweep_parameter = value;
      else if (key == "values") {
        raw_sweep_values = value;
        sweep_values_line = line_no;
      } else if (key == "parameter2") cfg.sweep_parameter2 = value;
      else if (key == "values2") {
        raw_sweep_values2 = value;
        sweep_values2_line = line_no;
      } else throw ConfigParseError(line_no, key, "unknown [sweep] key");
    }
  }

  if (!mode_set) throw ConfigParseError(line_no, "mode", "mode missing");
  if (!seed_set) throw ConfigParseError(line_no, "seed", "seed is required (no default)");

  if (species_named && !species_inline) {
    cfg.species = species_by_name(cfg.species.name);
    cfg.species_from_registry = true;
  } else if (species_inline) {
    if (!species_named) cfg.species.name = "custom";
    cfg.species_from_registry = false;
    cfg.species.validate();
  }

  auto resolve_values = [&](const std::string& param, const std::string& rawv,
                            int vline, std::vector<double>& out) {
    if (rawv.empty()) return;
    if (param.empty())
      throw ConfigParseError(vline, "values", "sweep values given without a parameter");
    const std::string dim = parameter_dimension(param);
    for (const auto& tok : split_list(rawv))
      out.push_back(dim == "dimensionless" ? parse_number(tok, vline, "values")
                                           : parse_quantity(tok, dim, vline, "values"));
  };
  resolve_values(cfg.sweep_parameter, raw_sweep_values, sweep_values_line,
                 cfg.sweep_values);
  resolve_values(cfg.sweep_parameter2, raw_sweep_values2, sweep_values2_line,
                 cfg.sweep_values2);

  // mode/section consistency
  static const std::map<std::string, std::set<RunMode>> allowed = {
      {"trap", {RunMode::potential_scan, RunMode::statics, RunMode::md,
                RunMode::budget, RunMode::sweep}},
      {"species", {RunMode::potential_scan, RunMode::statics, RunMode::md,
                   RunMode::budget, RunMode::sweep}},
      {"ions", {RunMode::statics, RunMode::md, RunMode::budget, RunMode::sweep}},
      {"scenario", {RunMode::budget, RunMode::sweep}},
      {"thresholds", {RunMode::budget, RunMode::sweep}},
      {"stability", {RunMode::budget}},
      {"integrator", {RunMode::md, RunMode::statics, RunMode::sweep}},
      {"cooling", {RunMode::md}},
      {"sequence", {RunMode::md}},
      {"scan", {RunMode::potential_scan}},
      {"sweep", {RunMode::sweep}},
  };
  for (const auto& s : sections_seen)
    if (!allowed.at(s).count(cfg.mode))
      throw ConfigParseError(0, s, "section [" + s + "] does not belong to mode " +
                                       std::string(to_string(cfg.mode)));

  if (cfg.mode != RunMode::potential_scan && cfg.n_ions <= 0)
    throw ConfigParseError(0, "count", "mode " + std::string(to_string(cfg.mode)) +
                                           " needs [ions] count > 0");
  if (cfg.mode == RunMode::sweep) {
    if (cfg.sweep_target.empty())
      throw ConfigParseError(0, "target", "sweep needs a target (statics or budget)");
    if (cfg.sweep_parameter.empty() || cfg.sweep_values.empty())
      throw ConfigParseError(0, "parameter", "sweep needs a parameter and values");
    if (!cfg.sweep_parameter2.empty() && cfg.sweep_values2.empty())
      throw ConfigParseError(0, "values2", "parameter2 given without values2");
  }
  cfg.trap.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

// ---- canonical form ----------------------------------------------------------

std::string canonical_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode = " << to_string(cfg.mode) << "\n";
  os << "seed = " << fmt_int(static_cast<long long>(cfg.seed)) << "\n";
  os << "output_dir = " << cfg.output_dir << "\n";

  os << "\n[trap]\n";
  os << "pole_count = " << cfg.trap.pole_count << "\n";
  os << "rf_amplitude = " << fmt_double(cfg.trap.rf_amplitude) << " V\n";
  os << "rf_frequency = " << fmt_double(cfg.trap.rf_omega) << " rad/s\n";
  os << "inner_radius = " << fmt_double(cfg.trap.inner_radius) << " m\n";
  os << "axial_frequency = " << fmt_double(cfg.trap.axial_omega) << " rad/s\n";

  os << "\n[species]\n";
  if (cfg.species_from_registry) {
    os << "name = " << cfg.species.name << "\n";
  } else {
    os << "name = " << cfg.species.name << "\n";
    os << "mass = " << fmt_double(cfg.species.mass) << " kg\n";
    os << "charge = " << fmt_double(cfg.species.charge) << " C\n";
    os << "cooling_linewidth = " << fmt_double(cfg.species.gamma) << " 1/s\n";
    os << "cooling_wavelength = " << fmt_double(cfg.species.cooling_wavelength)
       << " m\n";
    os << "clock_wavelength = " << fmt_double(cfg.species.clock_wavelength) << " m\n";
    os << "scalar_diff_polarizability = " << fmt_double(cfg.species.dalpha_scalar)
       << " Hz/(V/m)^2\n";
    os << "tensor_diff_polarizability = " << fmt_double(cfg.species.dalpha_tensor)
       << " Hz/(V/m)^2\n";
    os << "d52_quadrupole_moment = " << fmt_double(cfg.species.quad_moment_d52)
       << " e*a0^2\n";
  }

  if (cfg.mode != RunMode::potential_scan) {
    os << "\n[ions]\n";
    os << "count = " << cfg.n_ions << "\n";
  }

  const bool budget_like =
      cfg.mode == RunMode::budget ||
      (cfg.mode == RunMode::sweep && cfg.sweep_target == "budget");
  if (budget_like) {
    const auto& sc = cfg.scenario;
    os << "\n[scenario]\n";
    os << "ring_radius = " << fmt_double(sc.ring_radius) << " m\n";
    os << "ring_radius_override = " << (sc.ring_radius_override ? "true" : "false")
       << "\n";
    os << "temperature_axial = " << fmt_double(sc.t_axial) << " K\n";
    os << "temperature_radial = " << fmt_double(sc.t_radial) << " K\n";
    os << "zeeman_sublevel = " << fmt_double(sc.zeeman_mj) << "\n";
    os << "magnetic_field = " << fmt_double(sc.magnetic_field) << " T\n";
    os << "magnetic_field_fluctuation = " << fmt_double(sc.magnetic_field_fluct)
       << " T\n";
    os << "b_direction = " << fmt_double(sc.b_direction[0]) << ","
       << fmt_double(sc.b_direction[1]) << "," << fmt_double(sc.b_direction[2])
       << "\n";
    os << "bbr_temperature = " << fmt_double(sc.bbr_temperature) << " K\n";
    os << "bbr_temperature_uncertainty = " << fmt_double(sc.bbr_temperature_unc)
       << " K\n";
    os << "laser_waist = " << fmt_double(sc.laser_waist) << " m\n";
    os << "misalignment = " << fmt_double(sc.misalignment) << " m\n";
    os << "extra_dc_uncertainty = " << fmt_double(sc.extra_dc_uncertainty_hz)
       << " Hz\n";

    const bool any_threshold = !std::isnan(cfg.max_total_shift_hz) ||
                               !std::isnan(cfg.max_total_broadening_hz) ||
                               !std::isnan(cfg.max_long_term);
    if (any_threshold) {
      os << "\n[thresholds]\n";
      if (!std::isnan(cfg.max_total_shift_hz))
        os << "max_total_shift = " << fmt_double(cfg.max_total_shift_hz) << " Hz\n";
      if (!std::isnan(cfg.max_total_broadening_hz))
        os << "max_total_broadening = " << fmt_double(cfg.max_total_broadening_hz)
           << " Hz\n";
      if (!std::isnan(cfg.max_long_term))
        os << "max_long_term = " << fmt_double(cfg.max_long_term) << "\n";
    }
  }
  if (cfg.mode == RunMode::budget) {
    const bool any_stab = !std::isnan(cfg.stability_q) ||
                          !std::isnan(cfg.stability_cycle_time) ||
                          !std::isnan(cfg.stability_tau);
    if (any_stab) {
      os << "\n[stability]\n";
      if (!std::isnan(cfg.stability_q))
        os << "quality_factor = " << fmt_double(cfg.stability_q) << "\n";
      if (!std::isnan(cfg.stability_cycle_time))
        os << "cycle_time = " << fmt_double(cfg.stability_cycle_time) << " s\n";
      if (!std::isnan(cfg.stability_tau))
        os << "tau = " << fmt_double(cfg.stability_tau) << " s\n";
    }
  }

  if (cfg.mode == RunMode::md || cfg.mode == RunMode::statics ||
      cfg.mode == RunMode::sweep) {
    os << "\n[integrator]\n";
    os << "steps_per_rf_period = " << cfg.steps_per_rf_period << "\n";
  }
  if (cfg.mode == RunMode::md) {
    os << "\n[cooling]\n";
    os << "detuning = " << fmt_double(cfg.cooling_detuning_gamma) << " gamma\n";
    os << "rabi_frequency = " << fmt_double(cfg.cooling_rabi_gamma) << " gamma\n";
    os << "beams = " << cfg.cooling_beams << "\n";
    os << "\n[sequence]\n";
    os << "settle_time = " << fmt_double(cfg.sequence.settle_time) << " s\n";
    os << "dark_time = " << fmt_double(cfg.sequence.dark_time) << " s\n";
    os << "cool_time = " << fmt_double(cfg.sequence.cool_time) << " s\n";
    os << "cycles = " << cfg.sequence.cycles << "\n";
    os << "initial_temperature = " << fmt_double(cfg.initial_temperature) << " K\n";
  }
  if (cfg.mode == RunMode::potential_scan) {
    os << "\n[scan]\n";
    os << "r_max = " << fmt_double(cfg.scan_r_max) << " m\n";
    os << "points = " << cfg.scan_points << "\n";
  }
  if (cfg.mode == RunMode::sweep) {
    os << "\n[sweep]\n";
    os << "target = " << cfg.sweep_target << "\n";
    os << "parameter = " << cfg.sweep_parameter << "\n";
    os << "values = ";
    const std::string dim = parameter_dimension(cfg.sweep_parameter);
    const std::string unit = dim == "dimensionless" ? ""
                             : dim == "voltage"     ? " V"
                             : dim == "length"      ? " m"
                             : dim == "temperature" ? " K"
                             : dim == "bfield"      ? " T"
                                                     : " rad/s";
    for (size_t i = 0; i < cfg.sweep_values.size(); ++i)
      os << (i ? "," : "") << fmt_double(cfg.sweep_values[i]) << unit;
    os << "\n";
    if (!cfg.sweep_parameter2.empty()) {
      os << "parameter2 = " << cfg.sweep_parameter2 << "\n";
      os << "values2 = ";
      const std::string dim2 = parameter_dimension(cfg.sweep_parameter2);
      const std::string unit2 = dim2 == "dimensionless" ? ""
                                : dim2 == "voltage"     ? " V"
                                : dim2 == "length"      ? " m"
                                : dim2 == "temperature" ? " K"
                                : dim2 == "bfield"      ? " T"
                                                        : " rad/s";
      for (size_t i = 0; i < cfg.sweep_values2.size(); ++i)
        os << (i ? "," : "") << fmt_double(cfg.sweep_values2[i]) << unit2;
      os << "\n";
    }
  }
  return os.str();
}

uint64_t config_hash(const RunConfig& cfg) {
  return textio::fnv1a64(canonical_config(cfg));
}

// ---- scenario/md builders ------------------------------------------------------

ClockScenario RunConfig::build_scenario() const {
  ClockScenario sc = scenario;
  sc.trap = trap;
  sc.species = species;
  sc.n_ions = n_ions;
  return sc;
}

CoolingConfig RunConfig::build_cooling() const {
  CoolingConfig cc;
  cc.enabled = cooling_rabi_gamma != 0;
  cc.detuning = cooling_detuning_gamma * species.gamma;
  cc.rabi = cooling_rabi_gamma * species.gamma;
  if (cooling_beams == "z")
    cc.beams = {{0, 0, 1}, {0, 0, -1}};
  else if (cooling_beams == "xy")
    cc.beams = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
  // "xyz" keeps the six-beam default
  return cc;
}

IntegratorConfig RunConfig::build_integrator() const {
  IntegratorConfig ic;
  ic.steps_per_rf_period = steps_per_rf_period;
  ic.seed = seed;
  return ic;
}

// ---- sweep parameters -----------------------------------------------------------

std::string parameter_dimension(const std::string& name) {
  if (name == "trap.rf_amplitude") return "voltage";
  if (name == "trap.rf_frequency" || name == "trap.axial_frequency")
    return "angular_frequency";
  if (name == "trap.inner_radius" || name == "scenario.ring_radius") return "length";
  if (name == "trap.pole_count" || name == "ions.count") return "dimensionless";
  if (name == "scenario.temperature_axial" || name == "scenario.temperature_radial" ||
      name == "scenario.bbr_temperature")
    return "temperature";
  if (name == "scenario.magnetic_field" ||
      name == "scenario.magnetic_field_fluctuation")
    return "bfield";
  throw std::invalid_argument("unknown sweep parameter '" + name + "'");
}

void apply_parameter(RunConfig& cfg, const std::string& name, double value) {
  if (name == "trap.rf_amplitude") cfg.trap.rf_amplitude = value;
  else if (name == "trap.rf_frequency") cfg.trap.rf_omega = value;
  else if (name == "trap.axial_frequency") cfg.trap.axial_omega = value;
  else if (name == "trap.inner_radius") cfg.trap.inner_radius = value;
  else if (name == "trap.pole_count") cfg.trap.pole_count = static_cast<int>(value);
  else if (name == "ions.count") cfg.n_ions = static_cast<int>(value);
  else if (name == "scenario.ring_radius") cfg.scenario.ring_radius = value;
  else if (name == "scenario.temperature_axial") cfg.scenario.t_axial = value;
  else if (name == "scenario.temperature_radial") cfg.scenario.t_radial = value;
  else if (name == "scenario.bbr_temperature") cfg.scenario.bbr_temperature = value;
  else if (name == "scenario.magnetic_field") cfg.scenario.magnetic_field = value;
  else if (name == "scenario.magnetic_field_fluctuation")
    cfg.scenario.magnetic_field_fluct = value;
  else throw std::invalid_argument("unknown sweep parameter '" + name + "'");
}

} // namespace ringtrap
