#include "longctrl/config_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace longctrl {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ConfigError(source + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const IniFile& ini, const std::string& key, const IniFile::Entry& e) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(ini.source, e.line, "value for '" + key + "' is not a number: '" + e.value + "'");
  }
}

int to_int(const IniFile& ini, const std::string& key, const IniFile::Entry& e) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail(ini.source, e.line, "value for '" + key + "' is not an integer: '" + e.value + "'");
  }
}

bool to_bool(const IniFile& ini, const std::string& key, const IniFile::Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail(ini.source, e.line, "value for '" + key + "' is not a boolean: '" + e.value + "'");
}

std::vector<double> to_double_list(const IniFile& ini, const std::string& key,
                                   const IniFile::Entry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(ini.source, e.line, "empty element in list for '" + key + "'");
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(ini.source, e.line, "list element for '" + key + "' is not a number: '" + item + "'");
    }
  }
  if (out.empty()) fail(ini.source, e.line, "empty list for '" + key + "'");
  return out;
}

using Section = std::map<std::string, IniFile::Entry>;

// Walks a section with a per-key handler; the handler returns false for keys
// it does not recognize, which is a config error here.
template <typename Fn>
void apply_section(const IniFile& ini, const std::string& name, const Section& sec, Fn&& handle) {
  for (const auto& [key, entry] : sec) {
    if (!handle(key, entry)) {
      fail(ini.source, entry.line, "unknown key '" + key + "' in [" + name + "]");
    }
  }
}

}  // namespace

IniFile parse_ini(const std::string& text, const std::string& source_name) {
  IniFile ini;
  ini.source = source_name;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::size_t comment = raw.find_first_of("#;");
    std::string line = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(source_name, line_no, "malformed section header: '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      ini.sections[section];  // remember even if empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(source_name, line_no, "expected 'key = value': '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(source_name, line_no, "empty key");
    if (section.empty()) fail(source_name, line_no, "key '" + key + "' outside any [section]");
    if (ini.sections[section].count(key) != 0) {
      fail(source_name, line_no, "duplicate key '" + key + "' in [" + section + "]");
    }
    ini.sections[section][key] = {value, line_no};
  }
  return ini;
}

IniFile load_ini_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str(), path);
}

Table1D load_table1d_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path);
  Table1D t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::stringstream ss(line);
    std::string xs;
    std::string ys;
    if (!std::getline(ss, xs, ',') || !std::getline(ss, ys, ',')) {
      fail(path, line_no, "expected two comma-separated columns");
    }
    try {
      t.x.push_back(std::stod(trim(xs)));
      t.y.push_back(std::stod(trim(ys)));
    } catch (const std::exception&) {
      if (line_no == 1) {  // tolerate a header row
        continue;
      }
      fail(path, line_no, "non-numeric table entry: '" + line + "'");
    }
  }
  t.validate(path);
  return t;
}

void apply_stack_overrides(StackConfig& stack, const IniFile& ini) {
  for (const auto& [section, entries] : ini.sections) {
    if (section == "scenario" || section == "rates") continue;  // handled by the scenario loader
    if (section == "vehicle") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        VehicleParams& p = stack.params;
        if (k == "m") p.m = to_double(ini, k, e);
        else if (k == "j_drivetrain") p.J_drivetrain = to_double(ini, k, e);
        else if (k == "r_wheel_front") p.r_wheel_front = to_double(ini, k, e);
        else if (k == "r_wheel_rear") p.r_wheel_rear = to_double(ini, k, e);
        else if (k == "gear_ratios") p.gear_ratios = to_double_list(ini, k, e);
        else if (k == "tau_final_drive") p.tau_final_drive = to_double(ini, k, e);
        else if (k == "eta_drivetrain") p.eta_drivetrain = to_double(ini, k, e);
        else if (k == "d_bore") p.d_bore = to_double(ini, k, e);
        else if (k == "mu_brake") p.mu_brake = to_double(ini, k, e);
        else if (k == "r_lever") p.r_lever = to_double(ini, k, e);
        else if (k == "brake_bias_front") p.brake_bias_front = to_double(ini, k, e);
        else if (k == "c_d_a") p.c_d_A = to_double(ini, k, e);
        else if (k == "rho_air") p.rho_air = to_double(ini, k, e);
        else if (k == "c_rr") p.c_rr = to_double(ini, k, e);
        else if (k == "c_l_a") p.c_l_A = to_double(ini, k, e);
        else if (k == "wheelbase") p.wheelbase = to_double(ini, k, e);
        else if (k == "track_front") p.track_front = to_double(ini, k, e);
        else if (k == "track_rear") p.track_rear = to_double(ini, k, e);
        else if (k == "cog_to_front") p.cog_to_front = to_double(ini, k, e);
        else if (k == "rev_limit") p.rev_limit = to_double(ini, k, e);
        else if (k == "idle_speed") p.idle_speed = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else if (section == "accel") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        AccelCtrlConfig& c = stack.accel;
        if (k == "kp") c.pid.kp = to_double(ini, k, e);
        else if (k == "ki") c.pid.ki = to_double(ini, k, e);
        else if (k == "kd") c.pid.kd = to_double(ini, k, e);
        else if (k == "out_min") c.pid.out_min = to_double(ini, k, e);
        else if (k == "out_max") c.pid.out_max = to_double(ini, k, e);
        else if (k == "v_roll_threshold") c.v_roll_threshold = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else if (section == "force") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        ForceCtrlConfig& c = stack.force;
        if (k == "coast_band") c.coast_band = to_double(ini, k, e);
        else if (k == "stall_guard_rpm") c.stall_guard_rpm = to_double(ini, k, e);
        else if (k == "idle_torque_min") c.idle_torque_min = to_double(ini, k, e);
        else if (k == "throttle_kp") c.throttle_pid.kp = to_double(ini, k, e);
        else if (k == "throttle_ki") c.throttle_pid.ki = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else if (section == "gear") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        GearShiftConfig& c = stack.gear;
        if (k == "t_lookahead") c.t_lookahead = to_double(ini, k, e);
        else if (k == "horizon_length") c.horizon_length = to_double(ini, k, e);
        else if (k == "min_shift_interval") c.min_shift_interval = to_double(ini, k, e);
        else if (k == "downshift_rpm") c.downshift_rpm = to_double(ini, k, e);
        else if (k == "upshift_rpm") c.upshift_rpm = to_double(ini, k, e);
        else if (k == "overrev_block_rpm") c.overrev_block_rpm = to_double(ini, k, e);
        else if (k == "ay_limit") {
          c.ay_limit_table.x = {0.0};
          c.ay_limit_table.y = {to_double(ini, k, e)};
        } else if (k == "ay_limit_file") {
          c.ay_limit_table = load_table1d_csv(e.value);
        } else if (k == "predictive") {
          c.predictive = to_bool(ini, k, e);
        } else {
          return false;
        }
        return true;
      });
    } else if (section == "warmup") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        WarmupConfig& c = stack.warmup;
        if (k == "p_warmup") c.p_warmup = to_double(ini, k, e);
        else if (k == "ay_disable_threshold") c.ay_disable_threshold = to_double(ini, k, e);
        else if (k == "max_laps") c.max_laps = to_int(ini, k, e);
        else if (k == "temp_target") c.temp_target = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else if (section == "slip") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        SlipConfig& c = stack.slip;
        if (k == "p_norm") c.p_norm = to_double(ini, k, e);
        else if (k == "a_offset") c.a_offset = to_double(ini, k, e);
        else if (k == "k_lowpass_tau") c.k_lowpass_tau = to_double(ini, k, e);
        else if (k == "a_x_filter_tau") c.a_x_filter_tau = to_double(ini, k, e);
        else if (k == "v_min_denominator") c.v_min_denominator = to_double(ini, k, e);
        else if (k == "r_e_front_file") c.r_e_curve_front = load_table1d_csv(e.value);
        else if (k == "r_e_rear_file") c.r_e_curve_rear = load_table1d_csv(e.value);
        else return false;
        return true;
      });
    } else if (section == "abs") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        AbsConfig& c = stack.abs;
        if (k == "kappa_threshold") c.kappa_threshold = to_double(ini, k, e);
        else if (k == "rho_initial") c.rho_initial = to_double(ini, k, e);
        else if (k == "k_decrease") c.k_decrease = to_double(ini, k, e);
        else if (k == "k_increase") c.k_increase = to_double(ini, k, e);
        else if (k == "max_decay_rate") c.max_decay_rate = to_double(ini, k, e);
        else if (k == "decay_mode") {
          if (e.value == "time") c.decay_mode = AbsDecayMode::kTimeBased;
          else if (e.value == "speed") c.decay_mode = AbsDecayMode::kSpeedBased;
          else fail(ini.source, e.line, "decay_mode must be 'time' or 'speed'");
        } else if (k == "decay_v_ref") {
          c.decay_v_ref = to_double(ini, k, e);
        } else if (k == "pause_force_threshold") {
          c.pause_force_threshold = to_double(ini, k, e);
        } else if (k == "pause_time") {
          c.pause_time = to_double(ini, k, e);
        } else {
          return false;
        }
        return true;
      });
    } else if (section == "tc") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        TcConfig& c = stack.tc;
        if (k == "kappa_threshold") c.kappa_threshold = to_double(ini, k, e);
        else if (k == "kappa_cut_upper") c.kappa_cut_upper = to_double(ini, k, e);
        else if (k == "rho_initial") c.rho_initial = to_double(ini, k, e);
        else if (k == "k_decrease") c.k_decrease = to_double(ini, k, e);
        else if (k == "k_increase") c.k_increase = to_double(ini, k, e);
        else if (k == "p_tc_scale") c.p_tc_scale = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else if (section == "brake_pressure_controller") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        BpcConfig& c = stack.bpc;
        if (k == "plant_model_gain") c.plant_model_gain = to_double(ini, k, e);
        else if (k == "plant_model_tau") c.plant_model_tau = to_double(ini, k, e);
        else if (k == "plant_model_deadtime") c.plant_model_deadtime = to_double(ini, k, e);
        else if (k == "gradient_threshold") c.gradient_threshold = to_double(ini, k, e);
        else if (k == "p_command_max") c.p_command_max = to_double(ini, k, e);
        else if (k == "outer_kp_transient") c.gains_transient.outer_kp = to_double(ini, k, e);
        else if (k == "outer_ki_transient") c.gains_transient.outer_ki = to_double(ini, k, e);
        else if (k == "inner_kp_transient") c.gains_transient.inner_kp = to_double(ini, k, e);
        else if (k == "inner_ki_transient") c.gains_transient.inner_ki = to_double(ini, k, e);
        else if (k == "outer_kp_steady") c.gains_steady.outer_kp = to_double(ini, k, e);
        else if (k == "outer_ki_steady") c.gains_steady.outer_ki = to_double(ini, k, e);
        else if (k == "inner_kp_steady") c.gains_steady.inner_kp = to_double(ini, k, e);
        else if (k == "inner_ki_steady") c.gains_steady.inner_ki = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else if (section == "plant") {
      apply_section(ini, section, entries, [&](const std::string& k, const IniFile::Entry& e) {
        PlantConfig& c = stack.plant;
        if (k == "mu_road_front") c.tire_front.mu_road = to_double(ini, k, e);
        else if (k == "mu_road_rear") c.tire_rear.mu_road = to_double(ini, k, e);
        else if (k == "tire_b") c.tire_front.B = c.tire_rear.B = to_double(ini, k, e);
        else if (k == "tire_c") c.tire_front.C = c.tire_rear.C = to_double(ini, k, e);
        else if (k == "f_z_static_front") c.F_z_static_front = to_double(ini, k, e);
        else if (k == "f_z_static_rear") c.F_z_static_rear = to_double(ini, k, e);
        else if (k == "aero_balance_front") c.aero_balance_front = to_double(ini, k, e);
        else if (k == "brake_tau") c.brake_tau = to_double(ini, k, e);
        else if (k == "brake_deadtime") c.brake_deadtime = to_double(ini, k, e);
        else if (k == "tau_turbo_rise") c.tau_turbo_rise = to_double(ini, k, e);
        else if (k == "tau_turbo_fall") c.tau_turbo_fall = to_double(ini, k, e);
        else if (k == "shift_cut_duration") c.shift_cut_duration = to_double(ini, k, e);
        else if (k == "disc_heat_coeff") c.disc_heat_coeff = to_double(ini, k, e);
        else if (k == "disc_cool_c0") c.disc_cool_c0 = to_double(ini, k, e);
        else if (k == "disc_cool_c1") c.disc_cool_c1 = to_double(ini, k, e);
        else if (k == "ambient_temp") c.ambient_temp = to_double(ini, k, e);
        else if (k == "disc_heat_capacity") c.disc_heat_capacity = to_double(ini, k, e);
        else if (k == "j_wheel") c.J_wheel = to_double(ini, k, e);
        else if (k == "j_driveline") c.J_driveline = to_double(ini, k, e);
        else if (k == "four_wheel_mode") c.four_wheel_mode = to_bool(ini, k, e);
        else if (k == "lap_length") c.lap_length = to_double(ini, k, e);
        else if (k == "noise_std_v") c.noise.std_v = to_double(ini, k, e);
        else if (k == "noise_std_a_x") c.noise.std_a_x = to_double(ini, k, e);
        else if (k == "noise_std_wheel_speed") c.noise.std_wheel_speed = to_double(ini, k, e);
        else if (k == "noise_std_pressure") c.noise.std_pressure = to_double(ini, k, e);
        else return false;
        return true;
      });
    } else {
      int line = entries.empty() ? 0 : entries.begin()->second.line;
      fail(ini.source, line, "unknown section [" + section + "]");
    }
  }
}

namespace {

Profile load_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file: " + path);
  Profile profile;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::stringstream ss(line);
    std::string cols[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ss, cols[i], ',')) {
        fail(path, line_no, "expected four columns t,v_target,a_x,a_y");
      }
    }
    try {
      ProfilePoint p;
      p.t = std::stod(trim(cols[0]));
      p.v = std::stod(trim(cols[1]));
      p.a_x = std::stod(trim(cols[2]));
      p.a_y = std::stod(trim(cols[3]));
      profile.push_back(p);
    } catch (const std::exception&) {
      if (line_no == 1) continue;  // tolerate a header row
      fail(path, line_no, "non-numeric trajectory entry: '" + line + "'");
    }
  }
  if (profile.empty()) fail(path, 1, "trajectory file has no data rows");
  return profile;
}

}  // namespace

ScenarioConfig load_scenario_file(const std::string& path, StackConfig& stack) {
  const IniFile ini = load_ini_file(path);
  ScenarioConfig scn;
  bool have_base = false;

  const auto scn_it = ini.sections.find("scenario");
  if (scn_it == ini.sections.end()) {
    throw ConfigError(path + ": missing [scenario] section");
  }
  // `base` must be applied before the other keys so overrides win.
  const auto base_it = scn_it->second.find("base");
  if (base_it != scn_it->second.end()) {
    scn = make_builtin_scenario(base_it->second.value, &stack);
    have_base = true;
  }
  apply_section(ini, "scenario", scn_it->second,
                [&](const std::string& k, const IniFile::Entry& e) {
                  if (k == "base") return true;  // handled above
                  if (k == "name") scn.name = e.value;
                  else if (k == "duration") scn.duration = to_double(ini, k, e);
                  else if (k == "seed") scn.seed = static_cast<std::uint32_t>(to_int(ini, k, e));
                  else if (k == "v0") scn.v0 = to_double(ini, k, e);
                  else if (k == "gear0") scn.gear0 = to_int(ini, k, e);
                  else if (k == "abs_enabled") scn.abs_enabled = to_bool(ini, k, e);
                  else if (k == "tc_enabled") scn.tc_enabled = to_bool(ini, k, e);
                  else if (k == "warmup_enabled") scn.warmup_enabled = to_bool(ini, k, e);
                  else if (k == "predictive_gear") scn.predictive_gear = to_bool(ini, k, e);
                  else if (k == "velocity_tracking_gain")
                    scn.velocity_tracking_gain = to_double(ini, k, e);
                  else if (k == "trajectory_file") {
                    scn.profile = load_trajectory_csv(e.value);
                    have_base = true;
                  } else {
                    return false;
                  }
                  return true;
                });
  if (!have_base) {
    throw ConfigError(path + ": [scenario] needs either 'base' or 'trajectory_file'");
  }

  const auto rates_it = ini.sections.find("rates");
  if (rates_it != ini.sections.end()) {
    apply_section(ini, "rates", rates_it->second,
                  [&](const std::string& k, const IniFile::Entry& e) {
                    if (k == "gear") scn.rates.gear = to_double(ini, k, e);
                    else if (k == "warmup") scn.rates.warmup = to_double(ini, k, e);
                    else if (k == "longitudinal") scn.rates.longitudinal = to_double(ini, k, e);
                    else if (k == "bpc") scn.rates.bpc = to_double(ini, k, e);
                    else if (k == "plant") scn.rates.plant = to_double(ini, k, e);
                    else return false;
                    return true;
                  });
  }

  apply_stack_overrides(stack, ini);
  scn.validate();
  return scn;
}

}  // namespace longctrl
