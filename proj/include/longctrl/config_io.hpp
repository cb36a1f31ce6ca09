#pragma once

#include <map>
#include <string>

#include "longctrl/presets.hpp"
#include "longctrl/scenarios.hpp"

namespace longctrl {

// Minimal INI subset: [section] headers, key = value pairs, '#'/';' comments.
// Every entry keeps its line number so later stages can report exact
// positions, and unknown keys are rejected when the file is applied.
struct IniFile {
  struct Entry {
    std::string value;
    int line{0};
  };
  std::string source;  // file name used in error messages
  std::map<std::string, std::map<std::string, Entry>> sections;
};

IniFile parse_ini(const std::string& text, const std::string& source_name);
IniFile load_ini_file(const std::string& path);

// Two-column CSV (x,y) with optional header line.
Table1D load_table1d_csv(const std::string& path);

// Overwrites stack fields from the recognized sections ([vehicle], [accel],
// [force], [gear], [warmup], [slip], [abs], [tc], [brake_pressure_controller],
// [plant]). Unknown sections or keys raise ConfigError with file:line.
void apply_stack_overrides(StackConfig& stack, const IniFile& ini);

// Loads a scenario file. [scenario] must name a built-in via `base = ...` or
// provide `trajectory_file = <csv>` (columns t,v_target,a_x,a_y); the
// remaining keys override the base. Stack sections in the same file are
// applied to `stack`, after the base scenario's own plant adjustments.
ScenarioConfig load_scenario_file(const std::string& path, StackConfig& stack);

}  // namespace longctrl
