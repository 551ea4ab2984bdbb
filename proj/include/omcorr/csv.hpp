#pragma once

#include <string>
#include <vector>

#include "omcorr/dynamics.hpp"
#include "omcorr/sweep.hpp"

namespace omcorr {

// Shortest representation with 9 significant digits ("%.9g"); NaN becomes NA.
std::string format_sig9(double v);

// Sweep results under the fixed header
// axis,eta,stable,E_N,I_M,D_G,nu_tilde_minus,cond_flag with NA in the measure
// columns of unstable rows.
std::string csv_text(const std::vector<SweepRow>& rows);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

// Stability map: header delta,g,stable,max_re_eig, detuning-outer ordering.
std::string stability_csv_text(const StabilityMapResultd& map);
void emit_stability_csv(const StabilityMapResultd& map, const std::string& path);

}  // namespace omcorr
