#include "omcorr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace omcorr {

std::string format_sig9(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string csv_text(const std::vector<SweepRow>& rows) {
  std::string out = "axis,eta,stable,E_N,I_M,D_G,nu_tilde_minus,cond_flag\n";
  for (const auto& r : rows) {
    out += format_sig9(r.axis_value);
    out += ',';
    out += format_sig9(r.eta);
    out += ',';
    out += r.stable ? '1' : '0';
    out += ',';
    out += r.stable ? format_sig9(r.e_n) : "NA";
    out += ',';
    out += r.stable ? format_sig9(r.i_m) : "NA";
    out += ',';
    out += r.stable ? format_sig9(r.d_g) : "NA";
    out += ',';
    out += r.stable ? format_sig9(r.nu_tilde_minus) : "NA";
    out += ',';
    out += r.cond_flag ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string stability_csv_text(const StabilityMapResultd& map) {
  std::string out = "delta,g,stable,max_re_eig\n";
  const std::size_t ng = map.g_values.size();
  for (std::size_t di = 0; di < map.delta_values.size(); ++di) {
    for (std::size_t gi = 0; gi < ng; ++gi) {
      const std::size_t idx = di * ng + gi;
      out += format_sig9(map.delta_values[di]);
      out += ',';
      out += format_sig9(map.g_values[gi]);
      out += ',';
      out += map.stable[idx] ? '1' : '0';
      out += ',';
      out += format_sig9(map.max_re_eig[idx]);
      out += '\n';
    }
  }
  return out;
}

namespace {

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  write_text(csv_text(rows), path);
}

void emit_stability_csv(const StabilityMapResultd& map, const std::string& path) {
  write_text(stability_csv_text(map), path);
}

}  // namespace omcorr
