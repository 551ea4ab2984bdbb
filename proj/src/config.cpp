#include "omcorr/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "omcorr/params.hpp"

namespace omcorr {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw std::invalid_argument("config key '" + key +
                                "': expected a number, got '" + value + "'");
  return d;
}

int to_int(const std::string& key, const std::string& value) {
  const double d = to_double(key, value);
  const int i = static_cast<int>(std::lround(d));
  if (std::abs(d - i) > 1e-9)
    throw std::invalid_argument("config key '" + key +
                                "': expected an integer, got '" + value + "'");
  return i;
}

std::vector<double> to_double_list(const std::string& key,
                                   const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) out.push_back(to_double(key, item));
  if (out.empty())
    throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

// Tracks which keys have been consumed so leftovers can be reported.
class KeyReader {
 public:
  explicit KeyReader(const ConfigDoc& doc) : remaining_(doc.values) {}

  std::optional<std::string> take(const std::string& key) {
    const auto it = remaining_.find(key);
    if (it == remaining_.end()) return std::nullopt;
    std::string v = it->second;
    remaining_.erase(it);
    return v;
  }

  bool provided(const std::string& key) const {
    return provided_.count(key) != 0;
  }

  std::optional<double> take_double(const std::string& key) {
    if (auto v = take(key)) {
      provided_.insert(key);
      return to_double(key, *v);
    }
    return std::nullopt;
  }

  std::optional<int> take_int(const std::string& key) {
    if (auto v = take(key)) {
      provided_.insert(key);
      return to_int(key, *v);
    }
    return std::nullopt;
  }

  void reject_leftovers() const {
    if (remaining_.empty()) return;
    std::string keys;
    for (const auto& [k, v] : remaining_) {
      if (!keys.empty()) keys += ", ";
      keys += '\'' + k + '\'';
    }
    throw std::invalid_argument("unknown config key(s): " + keys);
  }

 private:
  std::map<std::string, std::string> remaining_;
  std::set<std::string> provided_;
};

}  // namespace

ConfigDoc parse_config_text(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": empty key");
    if (doc.has(key))
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": duplicate key '" + key + "'");
    doc.set(key, value);
  }
  return doc;
}

ConfigDoc load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

SweepConfig sweep_config_from(const ConfigDoc& doc) {
  KeyReader keys(doc);
  SweepConfig cfg;

  const auto mode_str = keys.take("mode");
  if (!mode_str)
    throw std::invalid_argument("config: missing required key 'mode'");
  cfg.mode = mode_from_name(trim(*mode_str));

  // Fixed parameters with documented defaults.
  cfg.fixed.delta = keys.take_double("delta").value_or(0.5);
  cfg.fixed.kappa = keys.take_double("kappa").value_or(0.5);
  cfg.fixed.kappa_ex_frac = keys.take_double("kappa_ex_frac").value_or(1.0);
  cfg.fixed.gamma_m = keys.take_double("gamma_m").value_or(1e-5);
  cfg.fixed.g_eff = keys.take_double("g_eff").value_or(0.0);

  // Thermal occupation: either n_th directly, or temperature (K) + omega_m (rad/s).
  const auto n_th = keys.take_double("n_th");
  const auto temperature = keys.take_double("temperature");
  const auto omega_m = keys.take_double("omega_m");
  if (n_th && temperature)
    throw std::invalid_argument(
        "config: give either 'n_th' or 'temperature', not both");
  if (temperature && !omega_m)
    throw std::invalid_argument(
        "config: 'temperature' requires 'omega_m' to convert to n_th");
  if (omega_m && !temperature)
    throw std::invalid_argument("config: 'omega_m' without 'temperature'");
  if (temperature)
    cfg.fixed.n_th = mean_thermal_occupation(*temperature, *omega_m);
  else
    cfg.fixed.n_th = n_th.value_or(0.0);

  // eta: single value or list (sweep modes only).
  const auto eta = keys.take_double("eta");
  const auto eta_list = keys.take("eta_list");
  if (eta && eta_list)
    throw std::invalid_argument(
        "config: give either 'eta' or 'eta_list', not both");
  if (eta_list) cfg.eta_list = to_double_list("eta_list", *eta_list);
  else cfg.eta_list = {eta.value_or(0.0)};
  cfg.fixed.eta = cfg.eta_list.front();

  cfg.output_path = keys.take("output_path").value_or("");

  const auto axis_str = keys.take("axis");
  const auto axis_min = keys.take_double("axis_min");
  const auto axis_max = keys.take_double("axis_max");
  const auto axis_steps = keys.take_int("axis_steps");

  const auto forbid_fixed_axis = [&](const char* key, const char* why) {
    if (keys.provided(key))
      throw std::invalid_argument(std::string("config: '") + key +
                                  "' cannot be fixed while " + why);
  };

  switch (cfg.mode) {
    case SweepMode::point:
      if (axis_str || axis_min || axis_max || axis_steps)
        throw std::invalid_argument(
            "config: axis settings are meaningless in point mode");
      if (eta_list)
        throw std::invalid_argument("config: point mode takes a single eta");
      break;

    case SweepMode::stability_map: {
      if (eta_list)
        throw std::invalid_argument(
            "config: stability map takes a single eta");
      forbid_fixed_axis("delta", "the map scans it");
      forbid_fixed_axis("g_eff", "the map scans it");
      cfg.grid.delta_min = keys.take_double("delta_min").value_or(0.0);
      cfg.grid.delta_max = keys.take_double("delta_max").value_or(1.2);
      cfg.grid.delta_steps = keys.take_int("delta_steps").value_or(241);
      cfg.grid.g_min = keys.take_double("g_min").value_or(0.0);
      cfg.grid.g_max = keys.take_double("g_max").value_or(1.2);
      cfg.grid.g_steps = keys.take_int("g_steps").value_or(241);
      break;
    }

    case SweepMode::sweep_detuning:
      cfg.axis = SweepAxis::detuning;
      forbid_fixed_axis("delta", "it is the sweep axis");
      cfg.axis_min = axis_min.value_or(0.05);
      cfg.axis_max = axis_max.value_or(1.2);
      cfg.axis_steps = axis_steps.value_or(231);  // default step 0.005
      break;

    case SweepMode::sweep_coupling: {
      cfg.axis = SweepAxis::coupling;
      forbid_fixed_axis("g_eff", "it is the sweep axis");
      cfg.axis_min = axis_min.value_or(0.0);
      double hi;
      if (axis_max) {
        hi = *axis_max;
      } else {
        // Default upper end: stay a margin below the instability threshold
        // of the most softened curve, capped at 0.6.
        hi = 0.6;
        const double eta_max =
            *std::max_element(cfg.eta_list.begin(), cfg.eta_list.end());
        if (cfg.fixed.delta > 0.0 && eta_max < 1.0) {
          const double thres =
              threshold_coupling(cfg.fixed.delta, cfg.fixed.kappa, eta_max);
          hi = std::min(hi, thres - 0.01);
        }
      }
      cfg.axis_max = hi;
      cfg.axis_steps = axis_steps.value_or(
          static_cast<int>(std::lround((cfg.axis_max - cfg.axis_min) / 0.0025)) +
          1);  // default step 0.0025
      break;
    }

    case SweepMode::sweep_thermal:
      cfg.axis = SweepAxis::thermal;
      forbid_fixed_axis("n_th", "it is the sweep axis");
      forbid_fixed_axis("temperature", "n_th is the sweep axis");
      cfg.axis_min = axis_min.value_or(0.0);
      cfg.axis_max = axis_max.value_or(14000.0);
      cfg.axis_steps = axis_steps.value_or(281);  // default step 50
      break;
  }

  if (cfg.mode == SweepMode::sweep_detuning ||
      cfg.mode == SweepMode::sweep_coupling ||
      cfg.mode == SweepMode::sweep_thermal) {
    if (axis_str && axis_from_name(trim(*axis_str)) != cfg.axis)
      throw std::invalid_argument(std::string("config: mode ") +
                                  mode_name(cfg.mode) + " sweeps axis " +
                                  axis_name(cfg.axis));
  } else if (axis_str) {
    throw std::invalid_argument("config: 'axis' is not used by this mode");
  }

  keys.reject_leftovers();
  cfg.validate();
  return cfg;
}

}  // namespace omcorr
