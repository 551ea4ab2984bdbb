#pragma once

#include <map>
#include <string>

#include "omcorr/sweep.hpp"

namespace omcorr {

// Flat key = value configuration.  '#' starts a comment, blank lines are
// skipped, duplicate keys are errors.
struct ConfigDoc {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  void set(const std::string& key, const std::string& value) {
    values[key] = value;
  }
};

ConfigDoc parse_config_text(const std::string& text);
ConfigDoc load_config_file(const std::string& path);

// Resolve a document into a runnable job.  Applies the documented defaults,
// rejects unknown keys, contradictory keys (eta vs eta_list, n_th vs
// temperature), and fixed values for the swept axis.  temperature requires
// omega_m (rad/s) and is converted to n_th on the spot.
SweepConfig sweep_config_from(const ConfigDoc& doc);

}  // namespace omcorr
